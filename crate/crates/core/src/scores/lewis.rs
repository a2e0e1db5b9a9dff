use super::leverage::{leverage_scores, ScoreMode};
use crate::error::{Error, Result};
use crate::linalg::{DiagScaling, SparseMatrix};

/// Extra contraction steps beyond the analytic count.
pub const LEWIS_BUFFER_STEPS: usize = 5;
/// Hard cap on contraction steps.
pub const LEWIS_MAX_STEPS: usize = 500;

/// Regularizer `v` with `v_i >= n/m` and `||v||_1 <= 4n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularizerVector {
    v: Vec<f64>,
}

impl RegularizerVector {
    pub fn new(v: Vec<f64>, n: usize) -> Result<Self> {
        let m = v.len();
        if m == 0 {
            return Err(Error::InvalidArgument("empty regularizer".into()));
        }
        let floor = n as f64 / m as f64;
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFiniteInput("regularizer"));
        }
        if v.iter().any(|&x| x < floor * (1.0 - 1e-12)) {
            return Err(Error::InvalidArgument(format!("regularizer entries must be at least n/m = {floor}")));
        }
        if v.iter().sum::<f64>() > 4.0 * n as f64 * (1.0 + 1e-12) {
            return Err(Error::InvalidArgument("regularizer l1 norm exceeds 4n".into()));
        }
        Ok(RegularizerVector { v })
    }

    /// The uniform regularizer `n/m`.
    pub fn uniform(m: usize, n: usize) -> Self {
        RegularizerVector { v: vec![n as f64 / m as f64; m] }
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    pub fn norm1(&self) -> f64 {
        self.v.iter().sum()
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 2.0) {
        return Err(Error::InvalidArgument(format!("Lewis exponent p = {p} outside (0,2]")));
    }
    Ok(())
}

/// Row scaling `w^{1/2-1/p} g` used inside the fixed-point map.
fn inner_scaling(g: &DiagScaling, w: &[f64], p: f64) -> Result<DiagScaling> {
    let e = 0.5 - 1.0 / p;
    DiagScaling::new(g.values().iter().zip(w).map(|(gi, wi)| gi * wi.powf(e)).collect())
}

/// `sigma(W^{1/2-1/p} G A) + z`.
pub fn lewis_target(
    a: &SparseMatrix,
    g: &DiagScaling,
    z: &RegularizerVector,
    p: f64,
    w: &[f64],
    mode: ScoreMode,
) -> Result<Vec<f64>> {
    check_p(p)?;
    let sigma = leverage_scores(a, &inner_scaling(g, w, p)?, mode)?;
    Ok(sigma.iter().zip(z.values()).map(|(s, zi)| s + zi).collect())
}

/// `||log w - log(target)||_inf`.
pub fn log_distance(w: &[f64], target: &[f64]) -> f64 {
    w.iter().zip(target).fold(0.0, |m, (a, b)| m.max((a.ln() - b.ln()).abs()))
}

/// One step of the contraction `w <- (w^{2/p-1} target(w))^{p/2}`.
pub fn contraction_step(w: &[f64], target: &[f64], p: f64) -> Vec<f64> {
    let e = 2.0 / p - 1.0;
    w.iter().zip(target).map(|(wi, ti)| (wi.powf(e) * ti).powf(p / 2.0)).collect()
}

/// Fixed-point residual `||log w - log(sigma(W^{1/2-1/p} G A) + z)||_inf`.
pub fn lewis_residual(
    a: &SparseMatrix,
    g: &DiagScaling,
    z: &RegularizerVector,
    p: f64,
    w: &[f64],
) -> Result<f64> {
    Ok(log_distance(w, &lewis_target(a, g, z, p, w, ScoreMode::Exact)?))
}

/// Steps without improvement after which the iteration is considered stalled.
const STALL_STEPS: usize = 10;

/// Analytic step count for reaching `tol` from the all-ones start.
pub fn lewis_step_count(m: usize, p: f64, tol: f64) -> usize {
    let rate = (1.0 - p / 2.0).abs();
    if rate <= 0.0 {
        return 1 + LEWIS_BUFFER_STEPS;
    }
    let start = (m.max(3) as f64).ln().ln().max(1.0);
    let k = ((start / tol).ln() / (1.0 / rate).ln()).ceil().max(0.0) as usize;
    k + LEWIS_BUFFER_STEPS
}

/// Regularized Lewis weights of `G A`, iterating the contraction from `w = 1`.
pub fn lewis_fixed_point(
    a: &SparseMatrix,
    g: &DiagScaling,
    z: &RegularizerVector,
    p: f64,
    tol: f64,
) -> Result<Vec<f64>> {
    let w0 = vec![1.0; a.nrows()];
    lewis_fixed_point_from(a, g, z, p, tol, w0).map(|(w, _)| w)
}

/// Same as [`lewis_fixed_point`] from a warm start; also returns the step count.
pub fn lewis_fixed_point_from(
    a: &SparseMatrix,
    g: &DiagScaling,
    z: &RegularizerVector,
    p: f64,
    tol: f64,
    mut w: Vec<f64>,
) -> Result<(Vec<f64>, usize)> {
    check_p(p)?;
    if z.values().len() != a.nrows() || w.len() != a.nrows() {
        return Err(Error::Dimension("lewis_fixed_point".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let mut residual = f64::INFINITY;
    let mut best = (f64::INFINITY, w.clone(), 0);
    for step in 0..=LEWIS_MAX_STEPS {
        let target = lewis_target(a, g, z, p, &w, ScoreMode::Exact)?;
        residual = log_distance(&w, &target);
        if residual <= tol {
            return Ok((w, step));
        }
        if residual < best.0 {
            best = (residual, w.clone(), step);
        } else if step - best.2 >= STALL_STEPS {
            // Round-off in the scores sets a floor; accept it if it is still small.
            if best.0 <= tol.sqrt() {
                return Ok((best.1, best.2));
            }
            break;
        }
        w = contraction_step(&w, &target, p);
    }
    Err(Error::NoConvergence { residual, steps: LEWIS_MAX_STEPS })
}
