use nalgebra::DMatrix;

use super::{OracleMethod, OracleResult};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

fn scaled_dense(a: &SparseMatrix, g: &[f64]) -> DMatrix<f64> {
    let mut d = DMatrix::zeros(a.nrows(), a.ncols());
    for (i, j, v) in a.triplets() {
        d[(i, j)] += g[i] * v;
    }
    d
}

/// Leverage scores of `GA` as the diagonal of `B (B^T B)^+ B^T`.
pub fn dense_scores(a: &SparseMatrix, g: &[f64]) -> Result<OracleResult> {
    if g.len() != a.nrows() {
        return Err(Error::Dimension("dense_scores".into()));
    }
    let b = scaled_dense(a, g);
    let pinv = (b.transpose() * &b).pseudo_inverse(1e-12).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let proj = &b * pinv * b.transpose();
    let witness: Vec<f64> = (0..a.nrows()).map(|i| proj[(i, i)]).collect();
    Ok(OracleResult { value: witness.iter().sum(), witness, method: OracleMethod::DenseInverse })
}

/// 500 iterations of `w <- (w^{2/p-1} (sigma(W^{1/2-1/p} G A) + z))^{p/2}` from `w = 1`.
pub fn dense_lewis(a: &SparseMatrix, g: &[f64], z: &[f64], p: f64) -> Result<OracleResult> {
    let mut w = vec![1.0f64; a.nrows()];
    for _ in 0..500 {
        let scale: Vec<f64> = w.iter().zip(g).map(|(wi, gi)| wi.powf(0.5 - 1.0 / p) * gi).collect();
        let s = dense_scores(a, &scale)?.witness;
        w = s.iter().zip(z).zip(&w).map(|((s, z), wi)| (wi.powf(2.0 / p - 1.0) * (s + z)).powf(p / 2.0)).collect();
    }
    Ok(OracleResult { value: w.iter().sum(), witness: w, method: OracleMethod::DenseFixedPoint })
}

/// `max <g, h>` over `||h||_inf + c ||h||_tau <= 1`, as the dual norm
/// `min_{g = g1 + g2} max(||g1||_1, ||g2||_{1/tau} / c)` found by bisection.
pub fn flat_oracle_value(g: &[f64], tau: &[f64], c_norm: f64) -> Result<OracleResult> {
    if g.len() != tau.len() || tau.iter().any(|&t| !(t > 0.0)) || !(c_norm > 0.0) {
        return Err(Error::InvalidArgument("flat_oracle_value".into()));
    }
    // Smallest ||g - g1||_{1/tau} with ||g1||_1 <= theta: weighted soft threshold.
    let rest = |theta: f64| -> f64 {
        let g1 = |k: f64| -> Vec<f64> { g.iter().zip(tau).map(|(&x, &t)| x.signum() * (x.abs() - k * t).max(0.0)).collect() };
        let l1 = |v: &[f64]| v.iter().map(|x| x.abs()).sum::<f64>();
        let (mut lo, mut hi) = (0.0, g.iter().zip(tau).fold(0.0f64, |m, (x, t)| m.max(x.abs() / t)));
        if l1(&g1(0.0)) <= theta {
            return 0.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if l1(&g1(mid)) > theta {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let v = g1(hi);
        g.iter().zip(&v).zip(tau).map(|((x, y), t)| (x - y).powi(2) / t).sum::<f64>().sqrt()
    };
    let (mut lo, mut hi) = (0.0, g.iter().map(|x| x.abs()).sum::<f64>());
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if rest(mid) <= c_norm * mid {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(OracleResult { value: hi, witness: vec![], method: OracleMethod::DualBisection })
}
