use thiserror::Error;

/// Errors raised across the solver stack.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular system (pivot {pivot:.3e} below threshold {threshold:.3e})")]
    SingularSystem { pivot: f64, threshold: f64 },
    #[error("non-finite input in {0}")]
    NonFiniteInput(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("point outside the barrier domain at coordinate {index}")]
    OutOfDomain { index: usize },
    #[error("fixed-point iteration did not converge (residual {residual:.3e} after {steps} steps)")]
    NoConvergence { residual: f64, steps: usize },
    #[error("scaling drift {drift:.3e} exceeds the allowed {allowed:.3e}")]
    DriftTooLarge { drift: f64, allowed: f64 },
    #[error("sampling budget too small (rejection ratio {ratio:.3e})")]
    BudgetTooSmall { ratio: f64 },
    #[error("centering lost (|y|_inf = {yinf:.3e}, psi = {psi:.3e})")]
    CenteringLost { yinf: f64, psi: f64 },
    #[error("initial point failed the centering check (|y|_inf = {yinf:.3e})")]
    CenteringCheckFailed { yinf: f64 },
    #[error("instance is infeasible: {0}")]
    Infeasible(String),
    #[error("all {0} randomized attempts failed verification")]
    RetriesExhausted(usize),
    #[error("oracle size limit exceeded: {0}")]
    OracleLimit(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
