use crate::error::{Error, Result};
use crate::linalg::{jl_sketch, orthonormal_row_norms, DenseMatrix, DiagScaling, NormalSolver, SparseMatrix};

/// How leverage scores are computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScoreMode {
    Exact,
    /// JL-sketched squared row norms, accurate to `e^{±eps}` with high probability.
    Sketched { eps: f64, seed: u64 },
}

/// Exact scores use dense QR up to this many matrix entries, normal equations beyond.
pub const DENSE_QR_LIMIT: usize = 1 << 22;

/// Leverage scores of `G A`.
pub fn leverage_scores(a: &SparseMatrix, g: &DiagScaling, mode: ScoreMode) -> Result<Vec<f64>> {
    if g.len() != a.nrows() {
        return Err(Error::Dimension("leverage_scores scaling length".into()));
    }
    let gv = g.values();
    if mode == ScoreMode::Exact && a.nrows() * a.ncols() <= DENSE_QR_LIMIT {
        let mut b = DenseMatrix::zeros(a.nrows(), a.ncols());
        for (i, j, v) in a.triplets() {
            b[(i, j)] += gv[i] * v;
        }
        return orthonormal_row_norms(&b);
    }
    let d2: Vec<f64> = gv.iter().map(|v| v * v).collect();
    let solver = NormalSolver::new(a, &d2)?;
    match mode {
        ScoreMode::Exact => Ok(exact_scores_with(a, gv, &solver)),
        ScoreMode::Sketched { eps, seed } => {
            // Squared norms double the JL distortion, hence eps/2.
            let j = jl_sketch((eps / 2.0).min(0.99), a.nrows(), seed)?;
            let k = j.nrows();
            let m = a.nrows();
            let mut sigma = vec![0.0; m];
            let mut col = vec![0.0; m];
            for r in 0..k {
                let jr = j.row(r);
                for i in 0..m {
                    col[i] = gv[i] * jr[i];
                }
                let y = solver.solve(&a.tmul_vec(&col));
                for (i, s) in sigma.iter_mut().enumerate() {
                    let t = gv[i] * a.row_dot(i, &y);
                    *s += t * t;
                }
            }
            Ok(sigma)
        }
    }
}

/// Exact scores given a factorization of `A^T G^2 A`.
pub fn exact_scores_with(a: &SparseMatrix, g: &[f64], solver: &NormalSolver) -> Vec<f64> {
    let n = a.ncols();
    let mut hinv = vec![vec![0.0; n]; n];
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        hinv[j] = solver.solve(&e);
        e[j] = 0.0;
    }
    (0..a.nrows())
        .map(|i| {
            let (c, v) = a.row(i);
            let mut s = 0.0;
            for (&ja, &va) in c.iter().zip(v) {
                for (&jb, &vb) in c.iter().zip(v) {
                    s += va * vb * hinv[ja][jb];
                }
            }
            g[i] * g[i] * s
        })
        .collect()
}
