use super::barrier::barrier_grad_hess;
use super::instance::LpInstance;
use super::params::{IpmParams, Mode};
use super::state::{CenteredTriple, CenteringReport};
use super::step::{short_step_with, Direction, StepContext};
use crate::error::{Error, Result};
use crate::linalg::NormalSolver;

/// One accepted step as reported to observers and traces.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct StepRecord {
    pub t: usize,
    pub mu: f64,
    pub psi: f64,
    pub yinf: f64,
    pub feas: f64,
    #[serde(skip)]
    pub report: CenteringReport,
    /// Whether all centering conditions, the invariant and `Psi <= m^2` held.
    #[serde(skip)]
    pub invariants_ok: bool,
}

/// Receives every accepted iterate; returning `false` stops the path early.
pub trait StepObserver {
    fn on_step(&mut self, inst: &LpInstance, rec: &StepRecord, st: &CenteredTriple) -> Result<bool>;
}

/// Observer that never stops and keeps nothing.
pub struct NoObserver;

impl StepObserver for NoObserver {
    fn on_step(&mut self, _: &LpInstance, _: &StepRecord, _: &CenteredTriple) -> Result<bool> {
        Ok(true)
    }
}

/// Collects every record.
#[derive(Debug, Default)]
pub struct RecordingObserver {
    pub records: Vec<StepRecord>,
}

impl StepObserver for RecordingObserver {
    fn on_step(&mut self, _: &LpInstance, rec: &StepRecord, _: &CenteredTriple) -> Result<bool> {
        self.records.push(rec.clone());
        Ok(true)
    }
}

fn record(inst: &LpInstance, st: &CenteredTriple, params: &IpmParams, t: usize) -> Result<StepRecord> {
    let report = CenteringReport::measure(inst, st, params)?;
    let invariants_ok = report.all_hold(inst, st, params);
    Ok(StepRecord { t, mu: st.mu, psi: report.psi, yinf: report.yinf, feas: report.feas, report, invariants_ok })
}

/// Practical acceptance: interior (guaranteed by the step) and all measured conditions.
fn acceptable(rec: &StepRecord) -> bool {
    rec.invariants_ok
}

/// Newton recentering at fixed `mu` until `||y||_inf` drops below a quarter of the cap.
fn recenter(
    inst: &LpInstance,
    mut st: CenteredTriple,
    params: &IpmParams,
    ctx: &mut StepContext,
    t: usize,
) -> Result<(CenteredTriple, StepRecord)> {
    let cap = CenteringReport::y_cap(params);
    let mut rec = record(inst, &st, params, t)?;
    for _ in 0..params.max_correctors {
        if rec.yinf <= cap / 4.0 && rec.invariants_ok {
            break;
        }
        let mu = st.mu;
        match short_step_with(inst, &st, mu, params, Direction::Newton, ctx) {
            Ok((next, _)) => {
                let r = record(inst, &next, params, t)?;
                if r.yinf > rec.yinf && rec.invariants_ok {
                    break;
                }
                st = next;
                rec = r;
            }
            Err(Error::OutOfDomain { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok((st, rec))
}

/// Follows the central path from `init` until `mu <= mu_final` or the observer stops.
pub fn path_following(
    inst: &LpInstance,
    init: CenteredTriple,
    mu_final: f64,
    params: &IpmParams,
    observer: &mut dyn StepObserver,
) -> Result<CenteredTriple> {
    let mut ctx = StepContext::new(params.seed);
    path_following_with(inst, init, mu_final, params, observer, &mut ctx)
}

pub fn path_following_with(
    inst: &LpInstance,
    init: CenteredTriple,
    mu_final: f64,
    params: &IpmParams,
    observer: &mut dyn StepObserver,
    ctx: &mut StepContext,
) -> Result<CenteredTriple> {
    if !(mu_final > 0.0) {
        return Err(Error::InvalidArgument("mu_final must be positive".into()));
    }
    let mut st = init;
    if st.mu <= mu_final {
        return Ok(st);
    }
    let mut t = 0;
    let rec0 = match params.mode {
        Mode::Practical => {
            let (s0, r0) = recenter(inst, st, params, ctx, t)?;
            st = s0;
            r0
        }
        Mode::Theory => record(inst, &st, params, t)?,
    };
    if rec0.yinf > params.eps {
        return Err(Error::CenteringCheckFailed { yinf: rec0.yinf });
    }
    if !observer.on_step(inst, &rec0, &st)? {
        return Ok(st);
    }
    let mut rho = params.max_mu_step();
    while st.mu > mu_final && t < params.max_steps {
        t += 1;
        let (next, rec) = match params.mode {
            Mode::Theory => {
                let mu_new = (st.mu * (1.0 - params.r)).max(mu_final);
                let (next, _) = short_step_with(inst, &st, mu_new, params, Direction::Potential, ctx)?;
                let rec = record(inst, &next, params, t)?;
                if rec.yinf > params.eps {
                    return Err(Error::CenteringLost { yinf: rec.yinf, psi: rec.psi });
                }
                (next, rec)
            }
            Mode::Practical => {
                let mut found = None;
                let mut last_y = f64::INFINITY;
                let mut try_rho = rho;
                for _ in 0..=params.max_backtracks {
                    let mu_new = (st.mu * (1.0 - try_rho)).max(mu_final);
                    let attempt = short_step_with(inst, &st, mu_new, params, Direction::Newton, ctx)
                        .and_then(|(cand, _)| recenter(inst, cand, params, ctx, t));
                    match attempt {
                        Ok((cand, rec)) if acceptable(&rec) => {
                            found = Some((cand, rec));
                            break;
                        }
                        Ok((_, rec)) => last_y = rec.yinf,
                        Err(Error::OutOfDomain { .. }) | Err(Error::SingularSystem { .. }) => {}
                        Err(e) => return Err(e),
                    }
                    try_rho /= 2.0;
                }
                match found {
                    Some(f) => {
                        rho = (try_rho * 2.0).min(params.max_mu_step());
                        f
                    }
                    None => {
                        let psi = if last_y.is_finite() { (params.lambda * last_y).cosh() } else { f64::INFINITY };
                        return Err(Error::CenteringLost { yinf: last_y, psi });
                    }
                }
            }
        };
        st = next;
        if !observer.on_step(inst, &rec, &st)? {
            break;
        }
    }
    Ok(st)
}

/// Projects `x` onto `A^T x = b` in the `T Phi''` norm; `s` is kept.
pub fn final_point(inst: &LpInstance, st: &CenteredTriple) -> Result<(Vec<f64>, Vec<f64>)> {
    let (_, d2) = barrier_grad_hess(&st.x, &inst.l, &inst.u)?;
    let w: Vec<f64> = d2.iter().zip(&st.tau).map(|(h, t)| 1.0 / (h * t)).collect();
    let solver = NormalSolver::new(&inst.a, &w)?;
    let mut x = st.x.clone();
    // Two passes: the second removes round-off left by the first.
    for _ in 0..2 {
        let r: Vec<f64> = inst.residual(&x).iter().map(|v| -v).collect();
        if r.iter().all(|&v| v == 0.0) {
            break;
        }
        let y = solver.solve(&r);
        let ay = inst.a.mul_vec(&y);
        for i in 0..x.len() {
            x[i] += w[i] * ay[i];
        }
    }
    Ok((x, st.s.clone()))
}

/// `mu` at which a midpoint start `(phi' = 0)` has `||y||_inf <= target`.
pub fn centering_mu(s: &[f64], tau: &[f64], x: &[f64], l: &[f64], u: &[f64], target: f64) -> Result<f64> {
    let (_, d2) = barrier_grad_hess(x, l, u)?;
    Ok((0..s.len()).fold(0.0f64, |m, i| m.max(s[i].abs() / (tau[i] * d2[i].sqrt()))) / target)
}
