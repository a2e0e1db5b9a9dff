use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Theory,
    Practical,
}

/// Which valid sampling distribution produces `R`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerKind {
    /// Independent per-coordinate sampling (graph matrices).
    Independent,
    /// Mixture of l2 tree sampling and leverage sampling (general matrices).
    Mixture,
    /// `R = I`.
    Identity,
}

/// Step-size and accuracy parameters derived from `(C, m, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IpmParams {
    pub c: f64,
    pub m: usize,
    pub n: usize,
    pub alpha: f64,
    pub p: f64,
    pub eps: f64,
    pub lambda: f64,
    pub gamma: f64,
    pub c_norm: f64,
    pub r: f64,
    pub mode: Mode,
    pub seed: u64,
    /// Practical mode: `mu <- (1 - min(rho_max, r * step_scale)) mu`.
    pub step_scale: f64,
    pub rho_max: f64,
    pub max_backtracks: usize,
    /// Extra Newton recentering steps at fixed `mu` (practical mode).
    pub max_correctors: usize,
    pub sampler: SamplerKind,
    /// Use the exact `H`; otherwise leverage-score sparsified.
    pub exact_h: bool,
    pub c_valid: f64,
    pub c_sample: f64,
    pub c_start: f64,
    /// Stop after this many accepted steps.
    pub max_steps: usize,
}

impl IpmParams {
    pub fn new(c: f64, m: usize, n: usize, mode: Mode, seed: u64) -> Result<Self> {
        if !(c >= 2.0) || !c.is_finite() {
            return Err(Error::InvalidArgument(format!("constant C = {c} must be at least 2")));
        }
        if n == 0 || m < n {
            return Err(Error::Dimension(format!("need m >= n >= 1, got m = {m}, n = {n}")));
        }
        let (mf, nf) = (m as f64, n as f64);
        let alpha = 1.0 / (4.0 * (4.0 * mf / nf).ln());
        let eps = alpha / c;
        let lambda = c * (c * mf / (eps * eps)).ln() / eps;
        let gamma = eps / (c * lambda);
        let c_norm = c / alpha;
        let r = eps * gamma / (c_norm * nf.sqrt());
        Ok(IpmParams {
            c,
            m,
            n,
            alpha,
            p: 1.0 - alpha,
            eps,
            lambda,
            gamma,
            c_norm,
            r,
            mode,
            seed,
            step_scale: 1e12,
            rho_max: 0.05,
            max_backtracks: 40,
            max_correctors: 4,
            sampler: SamplerKind::Identity,
            exact_h: true,
            c_valid: 4.0,
            c_sample: 1.0,
            c_start: 2.0 * c,
            max_steps: 1_000_000,
        })
    }

    /// Largest relative decrease of `mu` per step.
    pub fn max_mu_step(&self) -> f64 {
        match self.mode {
            Mode::Theory => self.r,
            Mode::Practical => self.rho_max.min(self.r * self.step_scale),
        }
    }

    /// Refresh thresholds `(x, tau, s, mu)` for the maintained approximations.
    pub fn refresh_thresholds(&self) -> (f64, f64, f64, f64) {
        match self.mode {
            Mode::Theory => {
                let g = self.gamma;
                (g / 4096.0, g / 1024.0, g / 1024.0, g / 4096.0)
            }
            Mode::Practical => (0.0, 0.0, 0.0, 0.0),
        }
    }

    /// Bound on the weighted infeasibility `||A^T x - b||_{H^{-1}}`.
    pub fn feasibility_bound(&self) -> f64 {
        self.eps * self.gamma / self.c_norm
    }
}
