//! End-to-end acceptance checks. Runs without the libtest harness so that the
//! per-criterion lines always reach stdout.

mod common;

use std::time::{Duration, Instant};

use rand::Rng;
use rlp::flow::*;
use rlp::ipm::*;
use rlp::linalg::{apply_scaled, DiagScaling, SparseMatrix};
use rlp::lpapps::*;
use rlp::oracles::*;
use rlp::scores::*;
use rlp::sketchtree::*;

struct Outcome {
    pass: bool,
    detail: String,
    /// Steps recorded by interior point solves, and how many failed a centering check.
    steps: usize,
    invariant_failures: usize,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, detail, steps: 0, invariant_failures: 0 }
    }
}

fn count_failures(records: &[StepRecord]) -> usize {
    records.iter().filter(|r| !r.invariants_ok).count()
}

fn sup_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

fn mincost() -> Outcome {
    let start = Instant::now();
    let (mut ok, mut steps, mut bad) = (0, 0, 0);
    let mut notes = Vec::new();
    for seed in 0..50 {
        let inst = common::random_flow(seed);
        let want = ssp_mincost(&inst).unwrap().value as i64;
        match solve_mincost_flow_with(&inst, &FlowOptions { seed, keep_records: true, ..FlowOptions::default() }) {
            Ok(sol) if sol.cost == want && is_feasible(&inst, &sol.flow) => {
                ok += 1;
                steps += sol.records.len();
                bad += count_failures(&sol.records);
            }
            Ok(sol) => notes.push(format!("seed {seed}: cost {} vs {want}", sol.cost)),
            Err(e) => notes.push(format!("seed {seed}: {e}")),
        }
    }
    let secs = start.elapsed();
    let pass = ok == 50 && secs <= Duration::from_secs(300);
    let mut o = Outcome::new(pass, format!("{ok}/50 min-cost flows match SSP in {:.1} s {}", secs.as_secs_f64(), notes.join("; ")));
    o.steps = steps;
    o.invariant_failures = bad;
    o
}

fn maxflow() -> Outcome {
    let (mut ok, mut stable, mut steps, mut bad) = (0, 0, 0, 0);
    for seed in 0..50 {
        let inst = common::random_maxflow(seed);
        let want = dinic_maxflow(&inst).unwrap().value as i64;
        if let Ok(sol) = solve_maxflow(&inst, &FlowOptions { seed, ..FlowOptions::default() }) {
            if sol.value == want {
                ok += 1;
            }
            steps += sol.steps;
            bad += sol.invariant_failures;
        }
        let text = write_dimacs(&Dimacs::Max(inst.clone()));
        let back = read_dimacs(&text).unwrap();
        if back == Dimacs::Max(inst) && write_dimacs(&back) == text {
            stable += 1;
        }
    }
    let mut o = Outcome::new(ok == 50 && stable == 50, format!("{ok}/50 max flows match Dinic, {stable}/50 DIMACS round-trips byte-stable"));
    o.steps = steps;
    o.invariant_failures = bad;
    o
}

fn general_lp() -> Outcome {
    let delta = 1e-5;
    let (mut ok, mut steps, mut bad) = (0, 0, 0);
    for seed in 0..30 {
        let inst = common::random_lp(seed);
        let want = enumerate_lp(&inst).unwrap().value;
        if let Ok(sol) = solve_lp(&inst, delta, &LpOptions { seed, keep_records: true, ..LpOptions::default() }) {
            let resid = inst.residual(&sol.x).iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if (sol.objective - want).abs() <= delta && resid <= delta {
                ok += 1;
            }
            steps += sol.stats.records.len();
            bad += count_failures(&sol.stats.records);
        }
    }
    let mut o = Outcome::new(ok == 30, format!("{ok}/30 LPs within {delta:e} of enumeration with residual <= {delta:e}"));
    o.steps = steps;
    o.invariant_failures = bad;
    o
}

fn l1_regression() -> Outcome {
    let delta = 1e-5;
    let (mut ok, mut steps, mut bad) = (0, 0, 0);
    for seed in 0..30 {
        let (a, c) = common::random_l1(seed);
        let want = enumerate_l1(&a, &c).unwrap().value;
        if let Ok(sol) = solve_l1_regression(&a, &c, delta, &LpOptions { seed, keep_records: true, ..LpOptions::default() }) {
            if (sol.value - want).abs() <= delta {
                ok += 1;
            }
            steps += sol.stats.records.len();
            bad += count_failures(&sol.stats.records);
        }
    }
    let a = SparseMatrix::from_dense(&[vec![1.0], vec![1.0], vec![1.0]]).unwrap();
    let median = solve_l1_regression(&a, &[-1.0, -2.0, -4.0], 1e-6, &LpOptions { keep_records: true, ..LpOptions::default() }).unwrap();
    steps += median.stats.records.len();
    bad += count_failures(&median.stats.records);
    let median_ok = (median.value - 3.0).abs() <= 1e-6;
    let mut o = Outcome::new(ok == 30 && median_ok, format!("{ok}/30 l1 fits within {delta:e} of enumeration, median value {:.9}", median.value));
    o.steps = steps;
    o.invariant_failures = bad;
    o
}

fn mdp() -> Outcome {
    let eps = 1e-3;
    let (mut ok, mut steps, mut bad) = (0, 0, 0);
    for seed in 0..20 {
        let inst = common::random_mdp(seed);
        let best = value_iteration(&inst, 20_000).unwrap().witness;
        if let Ok(sol) = solve_mdp(&inst, eps, &LpOptions { seed, keep_records: true, ..LpOptions::default() }) {
            let v = policy_evaluation(&inst, &sol.policy).unwrap();
            if sup_gap(&v, &best) <= eps {
                ok += 1;
            }
            steps += sol.regression.stats.records.len();
            bad += count_failures(&sol.regression.stats.records);
        }
    }
    let mut o = Outcome::new(ok == 20, format!("{ok}/20 MDP policies within {eps:e} of value iteration"));
    o.steps = steps;
    o.invariant_failures = bad;
    o
}

/// Log-scale distance of `w` from the dense oracle's Lewis map.
fn oracle_residual(a: &SparseMatrix, g: &DiagScaling, z: &RegularizerVector, p: f64, w: &[f64]) -> f64 {
    let scale: Vec<f64> = w.iter().zip(g.values()).map(|(wi, gi)| wi.powf(0.5 - 1.0 / p) * gi).collect();
    let sigma = dense_scores(a, &scale).unwrap().witness;
    let target: Vec<f64> = sigma.iter().zip(z.values()).map(|(s, zi)| s + zi).collect();
    log_distance(w, &target)
}

fn lewis() -> Outcome {
    let (mut resid_ok, mut total_ok, mut contract_ok, mut p2_ok) = (0, 0, 0, 0);
    let mut worst_ratio = f64::NEG_INFINITY;
    for seed in 0..100 {
        let (a, g, z) = common::random_lewis(seed + 7000, 60, 10);
        let (m, n) = (a.nrows() as f64, a.ncols() as f64);
        let mut r = common::rng(seed);
        let ps = [0.5, 1.0 - 1.0 / (4.0 * (4.0 * m / n).ln()), 1.5];
        let (mut res, mut tot, mut con) = (true, true, true);
        for p in ps {
            let Ok(w) = lewis_fixed_point(&a, &g, &z, p, 1e-12) else {
                res = false;
                continue;
            };
            res &= oracle_residual(&a, &g, &z, p, &w) <= 1e-6;
            let want = n + z.norm1();
            tot &= ((w.iter().sum::<f64>() - want) / want).abs() <= 1e-6;
            let w0: Vec<f64> = w.iter().map(|v| v * (0.2 * r.random_range(-1.0..1.0f64)).exp()).collect();
            let e0 = oracle_residual(&a, &g, &z, p, &w0);
            let t0 = lewis_target(&a, &g, &z, p, &w0, ScoreMode::Exact).unwrap();
            let e1 = oracle_residual(&a, &g, &z, p, &contraction_step(&w0, &t0, p));
            worst_ratio = worst_ratio.max(e1 / e0 - (1.0 - p / 2.0));
            con &= e1 <= ((1.0 - p / 2.0) + 1e-3) * e0;
        }
        resid_ok += res as usize;
        total_ok += tot as usize;
        contract_ok += con as usize;
        let w2 = lewis_fixed_point(&a, &g, &z, 2.0, 1e-12).unwrap();
        let sigma = dense_scores(&a, g.values()).unwrap().witness;
        if w2.iter().zip(&sigma).zip(z.values()).all(|((w, s), zi)| (w - s - zi).abs() <= 1e-10) {
            p2_ok += 1;
        }
    }
    let pass = resid_ok == 100 && total_ok == 100 && contract_ok == 100 && p2_ok == 100;
    Outcome::new(
        pass,
        format!(
            "residual {resid_ok}/100, total weight {total_ok}/100, contraction {contract_ok}/100 (max e1/e0 - (1 - p/2) = {worst_ratio:.2e}), p=2 {p2_ok}/100"
        ),
    )
}

fn samplers() -> Outcome {
    let mut paths_ok = 0;
    let mut paths_total = 0;
    for seed in 0..300 {
        let mut r = common::rng(seed + 20_000);
        let m = r.random_range(1..=8usize);
        let n = r.random_range(1..=m.min(3));
        let rows: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| r.random_range(-2.0..2.0)).collect()).collect();
        let a = SparseMatrix::from_dense(&rows).unwrap();
        let g = DiagScaling::new((0..m).map(|_| r.random_range(0.1..2.0)).collect()).unwrap();
        let h: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        let t = SketchTree::init(&a, &g, seed).unwrap();
        let gah = apply_scaled(&a, &g, &h).unwrap();
        let u = 4f64.exp() * gah.iter().map(|v| v * v).sum::<f64>();
        if u == 0.0 {
            continue;
        }
        paths_total += 1;
        let p = common::tree_path_probabilities(&t, &h, u);
        if (0..m).all(|i| (p[i] - gah[i] * gah[i] / u).abs() <= 1e-12) {
            paths_ok += 1;
        }
    }

    let mut heavy_ok = 0;
    for seed in 0..1000 {
        let mut r = common::rng(seed + 30_000);
        let m = r.random_range(1..=40usize);
        let n = r.random_range(1..=m.min(5));
        let rows: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| r.random_range(-3.0..3.0)).collect()).collect();
        let a = SparseMatrix::from_dense(&rows).unwrap();
        let g: Vec<f64> = (0..m).map(|_| r.random_range(0.0..2.0)).collect();
        let h: Vec<f64> = (0..n).map(|_| r.random_range(-1.0..1.0)).collect();
        let eps = r.random_range(0.01..3.0);
        let t = SketchTree::init(&a, &DiagScaling::new(g.clone()).unwrap(), seed).unwrap();
        if t.heavy_query(&h, eps).unwrap() == common::brute_heavy(&a, &g, &h, eps) {
            heavy_ok += 1;
        }
    }

    let trials = 100_000u64;
    let all = common::Moments { expectation: true, variance: true, covariance: true };

    // Independent sampler with C_valid = 1, gamma = 1/2 and no leverage term.
    let d = [0.2, -0.1, 0.15];
    let gamma = 0.5;
    let draws: Vec<Vec<f64>> =
        (0..trials).map(|s| sample_valid_independent(&d, &[0.0; 3], gamma, 1.0, 1.0, s).unwrap().to_diagonal(3)).collect();
    let bound: Vec<f64> = d.iter().map(|x| gamma * x.abs()).collect();
    let indep = common::moment_checks(&draws, &d, &bound, 1.0);

    let a = SparseMatrix::from_dense(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
    let g = DiagScaling::new(vec![0.3, 0.5, 0.2]).unwrap();
    let t = SketchTree::init(&a, &g, 4).unwrap();
    let h = [0.8, -0.4];
    let tau = [0.7, 0.7, 0.6];
    let gamma = 0.9;
    let k = MixtureConstants { c_valid: 1.0, c1: 1.0, c2: 1.0, c3: 1.0, c0_cap: Some(1.0) };
    let draws: Vec<Vec<f64>> =
        (0..trials).map(|s| sample_valid_proportional(&t, &h, &tau, gamma, &k, s).unwrap().to_diagonal(3)).collect();
    let d = apply_scaled(&a, &g, &h).unwrap();
    let bound: Vec<f64> = d.iter().map(|x| gamma * x.abs() / (k.c_valid * k.c_valid)).collect();
    // Each capped draw is one of the C_0 averaged copies of the full sampler.
    let c0 = 100.0 * k.c_valid.powi(4) * 3f64.ln() / (gamma * gamma);
    let mixture = common::moment_checks(&draws, &d, &bound, c0);

    let pass = paths_ok == paths_total && heavy_ok == 1000 && indep == all && mixture == all;
    Outcome::new(
        pass,
        format!(
            "path probabilities {paths_ok}/{paths_total}, heavy queries {heavy_ok}/1000, moments independent {}, mixture {}",
            moments_summary(indep),
            moments_summary(mixture)
        ),
    )
}

fn moments_summary(m: common::Moments) -> String {
    let flag = |b: bool| if b { "ok" } else { "FAIL" };
    format!("E {} Var {} Cov {}", flag(m.expectation), flag(m.variance), flag(m.covariance))
}

fn potential_decrease() -> (usize, usize) {
    let mut ok = 0;
    let m = 40;
    for seed in 0..100 {
        let (inst, st, params) = common::half_centered(seed, m, 8, Mode::Theory);
        let before = potential(&st.x, &st.s, st.mu, &st.tau, &inst.l, &inst.u, params.lambda).unwrap().psi;
        let mu_new = st.mu * (1.0 - params.r);
        let draws = 8;
        let mean = (0..draws)
            .map(|k| {
                let mut ctx = StepContext::new(seed * 1000 + k);
                let next = short_step(&inst, &st, mu_new, &params, &mut ctx).unwrap();
                potential(&next.x, &next.s, next.mu, &next.tau, &inst.l, &inst.u, params.lambda).unwrap().psi
            })
            .sum::<f64>()
            / draws as f64;
        if mean <= before + m as f64 {
            ok += 1;
        }
    }
    (ok, 100)
}

fn barrier() -> Outcome {
    let mut r = common::rng(90);
    let mut ok = 0u64;
    let total = 1_000_000u64;
    for _ in 0..total {
        let l = r.random_range(-1e3..1e3);
        let u = l + r.random_range(1e-3..1e3);
        let x = l + (u - l) * r.random_range(1e-4..1.0 - 1e-4);
        let Ok(d) = barrier_derivs(x, l, u) else { continue };
        let tol = 1.0 + 1e-12;
        if d.d1.abs() <= d.d2.sqrt() * tol && d.d3.abs() <= 2.0 * d.d2.powf(1.5) * tol && d.d4.abs() <= 6.0 * d.d2 * d.d2 * tol {
            ok += 1;
        }
    }
    let mut mid_ok = 0;
    for _ in 0..10_000 {
        let l = r.random_range(-1000i64..1000) as f64;
        let u = l + r.random_range(1i64..1000) as f64;
        if barrier_derivs((l + u) / 2.0, l, u).unwrap().d1 == 0.0 {
            mid_ok += 1;
        }
    }
    Outcome::new(ok == total && mid_ok == 10_000, format!("{ok}/{total} triples satisfy the derivative bounds, {mid_ok}/10000 midpoints exact"))
}

fn flat() -> Outcome {
    let mut r = common::rng(100);
    let (mut budget_ok, mut value_ok) = (0, 0);
    let mut worst = 0.0f64;
    for _ in 0..500 {
        let m = r.random_range(1..=10usize);
        let g: Vec<f64> = (0..m).map(|_| r.random_range(-5.0..5.0)).collect();
        let tau: Vec<f64> = (0..m).map(|_| r.random_range(0.01..2.0)).collect();
        let c = r.random_range(0.5..50.0);
        let h = flat_operator(&g, &tau, c).unwrap();
        if (tau_inf_norm(&h, &tau, c) - 1.0).abs() <= 1e-9 {
            budget_ok += 1;
        }
        let val: f64 = g.iter().zip(&h).map(|(a, b)| a * b).sum();
        let gap = (val - flat_oracle_value(&g, &tau, c).unwrap().value).abs();
        worst = worst.max(gap);
        if gap <= 1e-6 {
            value_ok += 1;
        }
    }
    Outcome::new(
        budget_ok == 500 && value_ok == 500,
        format!("budget identity {budget_ok}/500, objective {value_ok}/500 (worst gap {worst:.1e})"),
    )
}

fn main() {
    let mut results: Vec<Option<Outcome>> = (0..10).map(|_| None).collect();
    let mut potential = (0, 0);
    std::thread::scope(|s| {
        let jobs: Vec<(usize, std::thread::ScopedJoinHandle<Outcome>)> = vec![
            (0, s.spawn(mincost)),
            (1, s.spawn(maxflow)),
            (2, s.spawn(general_lp)),
            (3, s.spawn(l1_regression)),
            (4, s.spawn(mdp)),
            (5, s.spawn(lewis)),
            (6, s.spawn(samplers)),
            (8, s.spawn(barrier)),
            (9, s.spawn(flat)),
        ];
        let pot = s.spawn(potential_decrease);
        for (k, j) in jobs {
            results[k] = Some(j.join().unwrap_or_else(|_| Outcome::new(false, "panicked".into())));
        }
        potential = pot.join().unwrap_or((0, 100));
    });

    let (steps, bad): (usize, usize) =
        results[..5].iter().flatten().fold((0, 0), |(s, b), o| (s + o.steps, b + o.invariant_failures));
    results[7] = Some(Outcome::new(
        bad == 0 && steps > 0 && potential.0 >= 95,
        format!("{bad} of {steps} recorded steps violate a centering check, potential bound {}/{} seeds", potential.0, potential.1),
    ));

    let names = [
        "exact min-cost flow",
        "max flow",
        "general LP",
        "l1 regression",
        "MDP",
        "Lewis weights",
        "samplers and heavy hitters",
        "IPM invariants",
        "barrier calculus",
        "flat operator",
    ];
    let mut failed = 0;
    for (i, o) in results.iter().enumerate() {
        let o = o.as_ref().unwrap();
        println!("criterion {:>2} {} [{}]: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, names[i], o.detail);
        failed += !o.pass as usize;
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
