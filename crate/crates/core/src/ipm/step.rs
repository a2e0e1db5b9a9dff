use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::barrier::{barrier_grad_hess, strictly_interior};
use super::instance::LpInstance;
use super::norm::flat_operator;
use super::params::{IpmParams, Mode, SamplerKind};
use super::potential::{centrality, potential_gradient};
use super::state::{tau_weights, CenteredTriple};
use crate::error::{Error, Result};
use crate::linalg::{DiagScaling, NormalSolver};
use crate::sketchtree::{sample_valid_independent, sample_valid_proportional, MixtureConstants, SampleMatrix, SketchTree};

/// Direction used by a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `g = -gamma grad Psi(ybar)^flat`.
    Potential,
    /// `g = -ybar`, a full Newton recentering step.
    Newton,
}

/// Randomness and caches shared across the steps of one solve.
#[derive(Debug, Clone)]
pub struct StepContext {
    rng: ChaCha8Rng,
    tree: Option<SketchTree>,
    /// Overrides the sampler with `R = I` (used by tests).
    pub force_identity: bool,
}

impl StepContext {
    pub fn new(seed: u64) -> Self {
        StepContext { rng: ChaCha8Rng::seed_from_u64(seed), tree: None, force_identity: false }
    }

    fn next_seed(&mut self) -> u64 {
        self.rng.random()
    }
}

/// Quantities of the last step, for diagnostics and tests.
#[derive(Debug, Clone, PartialEq)]
pub struct StepInternals {
    pub g: Vec<f64>,
    pub delta_r: Vec<f64>,
    pub r: Vec<f64>,
    pub h_prime: Vec<f64>,
}

fn sample_r(
    inst: &LpInstance,
    params: &IpmParams,
    ctx: &mut StepContext,
    gscale: &[f64],
    h2: &[f64],
    delta_r: &[f64],
    taubar: &[f64],
    solver: &NormalSolver,
    w: &[f64],
) -> Result<SampleMatrix> {
    let m = inst.m();
    if ctx.force_identity {
        return Ok(SampleMatrix::identity(m));
    }
    match params.sampler {
        SamplerKind::Identity => Ok(SampleMatrix::identity(m)),
        SamplerKind::Independent => {
            // Leverage scores of T^{-1/2} Phi''^{-1/2} A from the factorization of H.
            let sw: Vec<f64> = w.iter().map(|v| v.sqrt()).collect();
            let sigma = crate::scores::exact_scores_with(&inst.a, &sw, solver);
            let seed = ctx.next_seed();
            sample_valid_independent(delta_r, &sigma, params.gamma, params.c_valid, params.c_sample, seed)
        }
        SamplerKind::Mixture => {
            let g = DiagScaling::new(gscale.to_vec())?;
            match ctx.tree.as_mut() {
                Some(t) if t.nrows() == m => {
                    for (i, &gi) in gscale.iter().enumerate() {
                        if t.scaling()[i] != gi {
                            t.scale(i, gi)?;
                        }
                    }
                }
                _ => {
                    let seed = ctx.next_seed();
                    ctx.tree = Some(SketchTree::init(&inst.a, &g, seed)?);
                }
            }
            let mut k = MixtureConstants::practical();
            k.c_valid = params.c_valid;
            if params.mode == Mode::Theory {
                k.c0_cap = None;
            }
            let seed = ctx.next_seed();
            sample_valid_proportional(ctx.tree.as_ref().unwrap(), h2, taubar, params.gamma, &k, seed)
        }
    }
}

/// One short step from `st` towards `mu_new`, including the refresh of the maintained
/// approximations. The returned triple is not checked for centering.
pub fn short_step_with(
    inst: &LpInstance,
    st: &CenteredTriple,
    mu_new: f64,
    params: &IpmParams,
    dir: Direction,
    ctx: &mut StepContext,
) -> Result<(CenteredTriple, StepInternals)> {
    if !(mu_new > 0.0) {
        return Err(Error::InvalidArgument("mu_new must be positive".into()));
    }
    let m = inst.m();
    let (thr_x, thr_tau, thr_s, thr_mu) = params.refresh_thresholds();
    let mut mubar = st.mubar;
    if (mubar / mu_new).ln().abs() > thr_mu {
        mubar = mu_new;
    }
    let (_, d2bar) = barrier_grad_hess(&st.xbar, &inst.l, &inst.u)?;
    let ybar = centrality(&st.xbar, &st.sbar, mubar, &st.taubar, &inst.l, &inst.u)?;
    let g: Vec<f64> = match dir {
        Direction::Newton => ybar.iter().map(|v| -v).collect(),
        Direction::Potential => {
            let grad = potential_gradient(&ybar, params.lambda);
            flat_operator(&grad, &st.taubar, params.c_norm)?.iter().map(|v| -params.gamma * v).collect()
        }
    };
    let isq: Vec<f64> = d2bar.iter().map(|h| 1.0 / h.sqrt()).collect();
    let w: Vec<f64> = (0..m).map(|i| 1.0 / (st.taubar[i] * d2bar[i])).collect();
    let hw: Vec<f64> = if params.exact_h {
        w.clone()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.next_seed());
        let logn = (inst.n().max(2) as f64).ln();
        (0..m)
            .map(|i| {
                let p = (100.0 * st.taubar[i] * logn / (params.gamma * params.gamma)).min(1.0);
                if rng.random::<f64>() < p { w[i] / p } else { 0.0 }
            })
            .collect()
    };
    let solver = NormalSolver::new(&inst.a, &hw)?;
    let gs: Vec<f64> = g.iter().zip(&isq).map(|(a, b)| a * b).collect();
    let h_prime = inst.a.tmul_vec(&gs);
    let rhs: Vec<f64> = h_prime.iter().zip(&st.delta).map(|(a, b)| a + b).collect();
    let h2 = solver.solve(&rhs);
    let gscale: Vec<f64> = (0..m).map(|i| isq[i] / st.taubar[i]).collect();
    let ah2 = inst.a.mul_vec(&h2);
    let delta_r: Vec<f64> = (0..m).map(|i| gscale[i] * ah2[i]).collect();
    let r = sample_r(inst, params, ctx, &gscale, &h2, &delta_r, &st.taubar, &solver, &hw)?;
    let rd = r.apply(&delta_r);
    let x: Vec<f64> = (0..m).map(|i| st.x[i] + isq[i] * (g[i] - rd[i])).collect();
    if !strictly_interior(&x, &inst.l, &inst.u) {
        let i = (0..m).find(|&i| !(x[i] > inst.l[i] && x[i] < inst.u[i])).unwrap_or(0);
        return Err(Error::OutOfDomain { index: i });
    }
    let mu_s = match params.mode {
        Mode::Theory => st.mu,
        Mode::Practical => mu_new,
    };
    let dz: Vec<f64> = solver.solve(&h_prime).iter().map(|v| mu_s * v).collect();
    let ds = inst.a.mul_vec(&dz);
    let s: Vec<f64> = st.s.iter().zip(&ds).map(|(a, b)| a + b).collect();
    let z: Vec<f64> = st.z.iter().zip(&dz).map(|(a, b)| a + b).collect();
    let tau = tau_weights(inst, &x, params.p, Some(&st.tau))?;

    // Refresh the maintained approximations.
    let (_, d2new) = barrier_grad_hess(&x, &inst.l, &inst.u)?;
    let mut xbar = st.xbar.clone();
    let mut moved = false;
    for i in 0..m {
        if (d2new[i].sqrt() * (x[i] - xbar[i])).abs() > thr_x {
            xbar[i] = x[i];
            moved = true;
        }
    }
    let tau_at_xbar = if xbar == x {
        tau.clone()
    } else if moved {
        tau_weights(inst, &xbar, params.p, Some(&st.tau_at_xbar))?
    } else {
        st.tau_at_xbar.clone()
    };
    let mut taubar = st.taubar.clone();
    for i in 0..m {
        if (taubar[i] / tau_at_xbar[i]).ln().abs() > thr_tau {
            taubar[i] = tau_at_xbar[i];
        }
    }
    let (_, d2xb) = barrier_grad_hess(&xbar, &inst.l, &inst.u)?;
    let mut sbar = st.sbar.clone();
    for i in 0..m {
        let scale = mubar * taubar[i] * d2xb[i].sqrt();
        if ((s[i] - sbar[i]) / scale).abs() > thr_s {
            sbar[i] = s[i];
        }
    }
    let next = CenteredTriple {
        delta: inst.residual(&x),
        x,
        s,
        z,
        mu: mu_new,
        xbar,
        sbar,
        taubar,
        mubar,
        tau,
        tau_at_xbar,
    };
    Ok((next, StepInternals { g, delta_r, r: r.to_diagonal(m), h_prime }))
}

/// Short step with the direction prescribed by the parameter mode.
pub fn short_step(
    inst: &LpInstance,
    st: &CenteredTriple,
    mu_new: f64,
    params: &IpmParams,
    ctx: &mut StepContext,
) -> Result<CenteredTriple> {
    let dir = match params.mode {
        Mode::Theory => Direction::Potential,
        Mode::Practical => Direction::Newton,
    };
    short_step_with(inst, st, mu_new, params, dir, ctx).map(|r| r.0)
}
