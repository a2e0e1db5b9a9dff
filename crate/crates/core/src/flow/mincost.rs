use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::graph::FlowInstance;
use super::star::{augment_with_star, flow_initial_point, flow_target_mu, is_free_edge, AugmentedFlow};
use super::verify::{is_feasible, is_optimal};
use crate::error::{Error, Result};
use crate::ipm::{
    final_point, path_following, CenteredTriple, IpmParams, LpInstance, Mode, SamplerKind, StepObserver, StepRecord,
};

/// Options for [`solve_mincost_flow_with`].
#[derive(Debug, Clone)]
pub struct FlowOptions {
    pub mode: Mode,
    pub c: f64,
    pub seed: u64,
    pub retries: usize,
    pub jobs: usize,
    /// Stop at the first checkpoint whose rounding is certified optimal.
    pub early_stop: bool,
    pub keep_records: bool,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions { mode: Mode::Practical, c: 4.0, seed: 0, retries: 64, jobs: 1, early_stop: true, keep_records: false }
    }
}

/// Verified optimal integral flow and statistics of the attempt that produced it.
#[derive(Debug, Clone)]
pub struct FlowSolution {
    pub flow: Vec<i64>,
    pub cost: i64,
    /// 1-based index of the successful perturbation.
    pub attempts: usize,
    pub steps: usize,
    /// Recorded steps that violated a centering condition or the invariant.
    pub invariant_failures: usize,
    /// Largest star flow of the last fractional iterate, when no earlier checkpoint certified.
    pub star_max: Option<f64>,
    pub records: Vec<StepRecord>,
}

/// Integer perturbations `k_e` in `1..=2 m W`, to be divided by `4 m^2 W^2`.
pub fn isolation_perturbation(m: usize, w: i64, rng: &mut impl Rng) -> (Vec<i64>, i64) {
    let (mi, wi) = (m as i64, w);
    let den = 4 * mi * mi * wi * wi;
    ((0..m).map(|_| rng.random_range(1..=2 * mi * wi)).collect(), den)
}

fn attempt_seed(seed: u64, k: usize) -> u64 {
    seed ^ (k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Expands the rounded IPM flow to every original edge.
fn full_flow(inst: &FlowInstance, aug: &AugmentedFlow, x: &[f64]) -> Vec<i64> {
    let mut flow: Vec<i64> = inst
        .edges
        .iter()
        .map(|e| if e.tail == e.head && e.cost < 0 { e.cap } else { e.low })
        .collect();
    for (r, &k) in aug.kept.iter().enumerate() {
        flow[k] = x[r].round() as i64;
    }
    flow
}

struct Checkpoints<'a> {
    inst: &'a FlowInstance,
    aug: &'a AugmentedFlow,
    next_mu: f64,
    early_stop: bool,
    found: Option<Vec<i64>>,
    steps: usize,
    failures: usize,
    keep: bool,
    records: Vec<StepRecord>,
    last: Option<CenteredTriple>,
}

impl Checkpoints<'_> {
    fn try_round(&mut self, lp: &LpInstance, st: &CenteredTriple) -> Result<bool> {
        let (x, _) = final_point(lp, st)?;
        let flow = full_flow(self.inst, self.aug, &x);
        if is_feasible(self.inst, &flow) && is_optimal(self.inst, &flow) {
            self.found = Some(flow);
            return Ok(true);
        }
        Ok(false)
    }
}

impl StepObserver for Checkpoints<'_> {
    fn on_step(&mut self, lp: &LpInstance, rec: &StepRecord, st: &CenteredTriple) -> Result<bool> {
        self.steps += 1;
        if !rec.invariants_ok {
            self.failures += 1;
        }
        if self.keep {
            self.records.push(rec.clone());
        }
        self.last = Some(st.clone());
        if self.early_stop && rec.mu <= self.next_mu {
            while self.next_mu >= rec.mu {
                self.next_mu /= 2.0;
            }
            if self.try_round(lp, st)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

enum Attempt {
    Solved(FlowSolution),
    Failed,
    Infeasible(f64),
}

fn run_attempt(inst: &FlowInstance, base: &AugmentedFlow, opts: &FlowOptions, k: usize) -> Result<Attempt> {
    let seed = attempt_seed(opts.seed, k);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nk = base.kept.len();
    let (pert, den) = isolation_perturbation(nk, base.w, &mut rng);
    let costs: Vec<f64> = (0..nk).map(|r| base.cost[r] + pert[r] as f64 / den as f64).collect();
    let aug = base.with_costs(&costs);

    let mut params = IpmParams::new(opts.c, aug.m_total(), aug.n, opts.mode, seed)?;
    params.sampler = SamplerKind::Independent;
    let (lp, st) = flow_initial_point(&aug, &params)?;
    let mut obs = Checkpoints {
        inst,
        aug: &aug,
        next_mu: 1.0,
        early_stop: opts.early_stop,
        found: None,
        steps: 0,
        failures: 0,
        keep: opts.keep_records,
        records: Vec::new(),
        last: None,
    };
    let (fin, reached) = match path_following(&lp, st, flow_target_mu(&aug), &params, &mut obs) {
        Ok(fin) => (fin, true),
        // Round-off can stall the path short of the target; the last accepted
        // iterate is still rounded and certified. Otherwise only this perturbation is lost.
        Err(Error::CenteringLost { .. }) | Err(Error::SingularSystem { .. }) | Err(Error::NoConvergence { .. })
            if obs.found.is_none() =>
        {
            match obs.last.take() {
                Some(last) => (last, false),
                None => return Ok(Attempt::Failed),
            }
        }
        Err(e) => return Err(e),
    };
    let mut star_max = None;
    if obs.found.is_none() {
        let x = match final_point(&lp, &fin) {
            Ok((x, _)) => x,
            Err(_) if !reached => return Ok(Attempt::Failed),
            Err(e) => return Err(e),
        };
        let star = aug.star_rows().fold(0.0f64, |a, r| a.max(x[r].abs()));
        star_max = Some(star);
        if star >= 0.1 {
            return Ok(if reached { Attempt::Infeasible(star) } else { Attempt::Failed });
        }
        let flow = full_flow(inst, &aug, &x);
        if is_feasible(inst, &flow) && is_optimal(inst, &flow) {
            obs.found = Some(flow);
        }
    }
    Ok(match obs.found {
        Some(flow) => Attempt::Solved(FlowSolution {
            cost: inst.cost(&flow),
            flow,
            attempts: k + 1,
            steps: obs.steps,
            invariant_failures: obs.failures,
            star_max,
            records: obs.records,
        }),
        None => Attempt::Failed,
    })
}

/// Exact min-cost flow with default options.
pub fn solve_mincost_flow(inst: &FlowInstance, seed: u64) -> Result<FlowSolution> {
    solve_mincost_flow_with(inst, &FlowOptions { seed, ..FlowOptions::default() })
}

/// Exact min-cost flow: perturb, path-follow, round, certify; retry on failure.
///
/// Attempts run in batches of `jobs`; the lowest-indexed success wins, so the
/// output does not depend on `jobs`.
pub fn solve_mincost_flow_with(inst: &FlowInstance, opts: &FlowOptions) -> Result<FlowSolution> {
    inst.validate()?;
    let trivial = inst.edges.iter().all(|e| !is_free_edge(e));
    if trivial || inst.n == 0 {
        let flow = full_flow(inst, &augment_with_star(inst), &[]);
        if !is_feasible(inst, &flow) {
            return Err(Error::Infeasible("no edge can carry the supplies".into()));
        }
        return Ok(FlowSolution {
            cost: inst.cost(&flow),
            flow,
            attempts: 0,
            steps: 0,
            invariant_failures: 0,
            star_max: None,
            records: Vec::new(),
        });
    }
    let aug = augment_with_star(inst);
    let jobs = opts.jobs.max(1);
    let mut k = 0;
    while k < opts.retries {
        let batch: Vec<usize> = (k..(k + jobs).min(opts.retries)).collect();
        let outcomes: Vec<Result<Attempt>> = if batch.len() == 1 {
            vec![run_attempt(inst, &aug, opts, batch[0])]
        } else {
            std::thread::scope(|sc| {
                let hs: Vec<_> = batch.iter().map(|&i| sc.spawn({
                    let aug = &aug;
                    move || run_attempt(inst, aug, opts, i)
                })).collect();
                hs.into_iter().map(|h| h.join().expect("attempt thread panicked")).collect()
            })
        };
        for out in outcomes {
            match out? {
                Attempt::Solved(sol) => return Ok(sol),
                Attempt::Infeasible(star) => {
                    return Err(Error::Infeasible(format!("star flows do not vanish (max {star:.3})")))
                }
                Attempt::Failed => {}
            }
        }
        k += batch.len();
    }
    Err(Error::RetriesExhausted(opts.retries))
}
