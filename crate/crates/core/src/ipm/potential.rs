use super::barrier::barrier_grad_hess;
use crate::error::{Error, Result};

/// Centrality vector `y = (s + mu tau phi') / (mu tau sqrt(phi''))`.
pub fn centrality(x: &[f64], s: &[f64], mu: f64, tau: &[f64], l: &[f64], u: &[f64]) -> Result<Vec<f64>> {
    if !(mu > 0.0) {
        return Err(Error::InvalidArgument("mu must be positive".into()));
    }
    let (d1, d2) = barrier_grad_hess(x, l, u)?;
    Ok((0..x.len())
        .map(|i| (s[i] + mu * tau[i] * d1[i]) / (mu * tau[i] * d2[i].sqrt()))
        .collect())
}

/// `Psi = sum cosh(lambda y_i)` together with its logarithm and `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialReport {
    pub psi: f64,
    pub log_psi: f64,
    pub y: Vec<f64>,
}

/// Log-space above this value of `lambda |y|`.
const LOG_SPACE_CUTOFF: f64 = 500.0;

/// `log cosh(v)` without overflow.
fn log_cosh(v: f64) -> f64 {
    let a = v.abs();
    if a < LOG_SPACE_CUTOFF {
        a.cosh().ln()
    } else {
        a - std::f64::consts::LN_2 + (-2.0 * a).exp().ln_1p()
    }
}

/// Potential of a given centrality vector.
pub fn potential_of(y: &[f64], lambda: f64) -> (f64, f64) {
    let logs: Vec<f64> = y.iter().map(|&v| log_cosh(lambda * v)).collect();
    let mx = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let log_psi = if mx.is_finite() {
        mx + logs.iter().map(|l| (l - mx).exp()).sum::<f64>().ln()
    } else {
        f64::NEG_INFINITY
    };
    (log_psi.exp(), log_psi)
}

/// `Psi(x, s, mu)` for the given weights `tau`.
pub fn potential(
    x: &[f64],
    s: &[f64],
    mu: f64,
    tau: &[f64],
    l: &[f64],
    u: &[f64],
    lambda: f64,
) -> Result<PotentialReport> {
    let y = centrality(x, s, mu, tau, l, u)?;
    let (psi, log_psi) = potential_of(&y, lambda);
    Ok(PotentialReport { psi, log_psi, y })
}

/// `grad Psi(y)_i = lambda sinh(lambda y_i)`.
pub fn potential_gradient(y: &[f64], lambda: f64) -> Vec<f64> {
    y.iter().map(|&v| lambda * (lambda * v).sinh()).collect()
}
