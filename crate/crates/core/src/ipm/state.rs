use super::barrier::{barrier_grad_hess, strictly_interior};
use super::instance::LpInstance;
use super::params::IpmParams;
use super::potential::{centrality, potential_of};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm_inf, DiagScaling, NormalSolver};
use crate::scores::{lewis_fixed_point_from, RegularizerVector};

/// Accuracy of the Lewis fixed point used as `tau(x)`.
pub const TAU_TOL: f64 = 1e-12;

/// Central path weights `tau(x) = w(phi''(x)^{-1/2} A)` with regularizer `n/m`,
/// warm-started from `warm` when given.
pub fn tau_weights(inst: &LpInstance, x: &[f64], p: f64, warm: Option<&[f64]>) -> Result<Vec<f64>> {
    let (_, d2) = barrier_grad_hess(x, &inst.l, &inst.u)?;
    let g = DiagScaling::new(d2.iter().map(|v| 1.0 / v.sqrt()).collect())?;
    let z = RegularizerVector::uniform(inst.m(), inst.n());
    let w0 = warm.map_or_else(|| vec![1.0; inst.m()], |w| w.to_vec());
    Ok(lewis_fixed_point_from(&inst.a, &g, &z, p, TAU_TOL, w0)?.0)
}

/// IPM iterate with its maintained approximations.
#[derive(Debug, Clone, PartialEq)]
pub struct CenteredTriple {
    pub x: Vec<f64>,
    pub s: Vec<f64>,
    /// Dual vector with `s = c + A z`.
    pub z: Vec<f64>,
    pub mu: f64,
    pub xbar: Vec<f64>,
    pub sbar: Vec<f64>,
    pub taubar: Vec<f64>,
    pub mubar: f64,
    /// `A^T x - b`.
    pub delta: Vec<f64>,
    /// `tau(x)` at the current `x`.
    pub tau: Vec<f64>,
    /// `tau(xbar)`, against which `taubar` is measured.
    pub tau_at_xbar: Vec<f64>,
}

impl CenteredTriple {
    /// Builds the triple `(x, c + A z, mu)` with exact approximations.
    pub fn new(inst: &LpInstance, x: Vec<f64>, z: Vec<f64>, mu: f64, params: &IpmParams) -> Result<Self> {
        if x.len() != inst.m() || z.len() != inst.n() {
            return Err(Error::Dimension("centered triple".into()));
        }
        if !strictly_interior(&x, &inst.l, &inst.u) {
            let i = (0..x.len()).find(|&i| !(x[i] > inst.l[i] && x[i] < inst.u[i])).unwrap_or(0);
            return Err(Error::OutOfDomain { index: i });
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidArgument("mu must be positive and finite".into()));
        }
        let az = inst.a.mul_vec(&z);
        let s: Vec<f64> = inst.c.iter().zip(&az).map(|(c, v)| c + v).collect();
        let tau = tau_weights(inst, &x, params.p, None)?;
        Ok(CenteredTriple {
            xbar: x.clone(),
            sbar: s.clone(),
            taubar: tau.clone(),
            mubar: mu,
            delta: inst.residual(&x),
            tau_at_xbar: tau.clone(),
            tau,
            x,
            s,
            z,
            mu,
        })
    }

    pub fn centrality(&self, inst: &LpInstance) -> Result<Vec<f64>> {
        centrality(&self.x, &self.s, self.mu, &self.tau, &inst.l, &inst.u)
    }
}

/// Measured centering conditions of a triple.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CenteringReport {
    pub yinf: f64,
    pub psi: f64,
    pub log_psi: f64,
    /// Relative least-squares residual of `s - c` against `range(A)`.
    pub dual_residual: f64,
    /// `||A^T x - b||_{(A^T T^{-1} Phi''^{-1} A)^{-1}}`.
    pub feas: f64,
    /// `||Phi''(x)^{1/2}(xbar - x)||_inf`.
    pub invariant_x: f64,
    /// `||T(xbar)^{-1}(taubar - tau(xbar))||_inf`.
    pub invariant_tau: f64,
    /// `|A^T x - b - delta|_inf`.
    pub delta_drift: f64,
    /// `feas` of the rounding error bound on evaluating `A^T x - b`.
    pub feas_floor: f64,
}

/// Componentwise bound on the rounding error of `A^T x - b`.
fn residual_rounding(inst: &LpInstance, x: &[f64]) -> Vec<f64> {
    let n = inst.n();
    let mut acc: Vec<f64> = inst.b.iter().map(|v| v.abs()).collect();
    let mut cnt = vec![1.0; n];
    for (i, xi) in x.iter().enumerate() {
        let (c, v) = inst.a.row(i);
        for (&j, &aij) in c.iter().zip(v) {
            acc[j] += (aij * xi).abs();
            cnt[j] += 1.0;
        }
    }
    acc.iter().zip(&cnt).map(|(a, k)| k * f64::EPSILON * a).collect()
}

/// Slack allowed on the weighted infeasibility for floating-point round-off.
pub fn feasibility_roundoff(inst: &LpInstance, x: &[f64], d2: &[f64], tau: &[f64]) -> f64 {
    // Perturbing each x_i by one ulp changes the weighted norm by about sqrt(tau phi'') ulp(x).
    let per: f64 = x
        .iter()
        .zip(d2.iter().zip(tau))
        .map(|(xi, (h, t))| {
            let v = (t * h).sqrt() * xi.abs().max(1.0) * f64::EPSILON;
            v * v
        })
        .sum::<f64>()
        .sqrt();
    4.0 * per * (inst.a.max_abs().max(1.0)).sqrt()
}

impl CenteringReport {
    pub fn measure(inst: &LpInstance, st: &CenteredTriple, params: &IpmParams) -> Result<Self> {
        let (_, d2) = barrier_grad_hess(&st.x, &inst.l, &inst.u)?;
        let y = centrality(&st.x, &st.s, st.mu, &st.tau, &inst.l, &inst.u)?;
        let (psi, log_psi) = potential_of(&y, params.lambda);
        // Dual residual via least squares on A^T A.
        let sc: Vec<f64> = st.s.iter().zip(&inst.c).map(|(s, c)| s - c).collect();
        let ls = NormalSolver::new(&inst.a, &vec![1.0; inst.m()])?;
        let zls = ls.solve(&inst.a.tmul_vec(&sc));
        let fit = inst.a.mul_vec(&zls);
        let scale = norm_inf(&st.s).max(norm_inf(&inst.c)).max(1.0);
        let dual_residual = sc.iter().zip(&fit).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / scale;
        // Weighted infeasibility.
        let w: Vec<f64> = d2.iter().zip(&st.tau).map(|(h, t)| 1.0 / (h * t)).collect();
        let delta = inst.residual(&st.x);
        let hs = NormalSolver::new(&inst.a, &w)?;
        let feas = dot(&delta, &hs.solve(&delta)).max(0.0).sqrt();
        let e = residual_rounding(inst, &st.x);
        let feas_floor = dot(&e, &hs.solve(&e)).max(0.0).sqrt();
        let invariant_x = st
            .x
            .iter()
            .zip(&st.xbar)
            .zip(&d2)
            .fold(0.0f64, |m, ((x, xb), h)| m.max((h.sqrt() * (xb - x)).abs()));
        let invariant_tau = st
            .taubar
            .iter()
            .zip(&st.tau_at_xbar)
            .fold(0.0f64, |m, (tb, t)| m.max(((tb - t) / t).abs()));
        let delta_drift = delta.iter().zip(&st.delta).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        Ok(CenteringReport {
            yinf: norm_inf(&y),
            psi,
            log_psi,
            dual_residual,
            feas,
            invariant_x,
            invariant_tau,
            delta_drift,
            feas_floor,
        })
    }

    /// Centering cap on `||y||_inf`: below both `eps` and the level keeping `Psi <= m^2`.
    pub fn y_cap(params: &IpmParams) -> f64 {
        params.eps.min((params.m as f64).acosh() / params.lambda)
    }

    /// Centrality targeted by initial points: `eps / c_start`, and low enough for `Psi <= m^2`.
    pub fn start_target(params: &IpmParams) -> f64 {
        (params.eps / params.c_start).min(Self::y_cap(params))
    }

    /// All three centering conditions, the approximation invariant and `Psi <= m^2`.
    pub fn all_hold(&self, inst: &LpInstance, st: &CenteredTriple, params: &IpmParams) -> bool {
        let m = params.m as f64;
        let roundoff = barrier_grad_hess(&st.x, &inst.l, &inst.u)
            .map(|(_, d2)| feasibility_roundoff(inst, &st.x, &d2, &st.tau))
            .unwrap_or(f64::INFINITY);
        self.yinf <= params.eps
            && self.log_psi <= 2.0 * m.ln()
            && self.dual_residual <= 1e-8
            && self.feas <= params.feasibility_bound() + roundoff.max(self.feas_floor)
            && self.invariant_x <= params.eps
            && self.invariant_tau <= params.eps
            && self.delta_drift <= 1e-10 * inst.b.iter().fold(1.0f64, |a, v| a.max(v.abs()))
    }
}
