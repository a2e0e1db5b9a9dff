mod common;

use rand::Rng;
use rlp::ipm::{barrier_grad_hess, CenteringReport, IpmParams, LpInstance, Mode};
use rlp::linalg::SparseMatrix;
use rlp::lpapps::*;
use rlp::oracles::{enumerate_l1, enumerate_lp, policy_evaluation, value_iteration};

fn box_lp() -> LpInstance {
    let a = SparseMatrix::from_dense(&[vec![1.0], vec![1.0]]).unwrap();
    LpInstance::new(a, vec![1.0], vec![1.0, 0.0], vec![0.0, 0.0], vec![1.0, 1.0]).unwrap()
}

fn l1_value(a: &SparseMatrix, c: &[f64], z: &[f64]) -> f64 {
    a.mul_vec(z).iter().zip(c).map(|(x, y)| (x + y).abs()).sum()
}

fn sup_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

#[test]
fn box_lp_optimum() {
    let delta = 1e-6;
    let sol = solve_lp(&box_lp(), delta, &LpOptions::default()).unwrap();
    assert!(sol.objective <= delta);
    assert!(sol.residual <= delta);
    assert!((sol.x[0] - 0.0).abs() < 1e-3 && (sol.x[1] - 1.0).abs() < 1e-3);
    assert!(sol.x.iter().all(|&v| (0.0..=1.0).contains(&v)));
}

#[test]
fn augmented_lp_is_exactly_feasible() {
    for seed in 0..20 {
        let inst = common::random_lp(seed);
        let aug = augment_lp(&inst, 1e-5).unwrap();
        let r = aug.lp.residual(&aug.x_init);
        assert!(r.iter().all(|&v| v.abs() <= 1e-12 * (1.0 + inst.b.iter().fold(0.0f64, |a, b| a.max(b.abs())))), "seed {seed}");
        for i in 0..aug.lp.m() {
            assert!(aug.x_init[i] > aug.lp.l[i] && aug.x_init[i] < aug.lp.u[i]);
        }
        assert_eq!(aug.lp.m(), aug.m + aug.aux.len());
        assert!(aug.aux.len() <= inst.n());
    }
}

#[test]
fn lp_initial_point_is_centered() {
    for seed in 0..20 {
        let inst = common::random_lp(seed);
        let aug = augment_lp(&inst, 1e-5).unwrap();
        let params = IpmParams::new(4.0, aug.lp.m(), aug.lp.n(), Mode::Practical, seed).unwrap();
        let st = lp_initial_point(&aug, &params).unwrap();
        let rep = CenteringReport::measure(&aug.lp, &st, &params).unwrap();
        assert!(rep.yinf <= params.eps);
        assert!(rep.all_hold(&aug.lp, &st, &params), "seed {seed}: {rep:?}");
        assert_eq!(st.s, aug.lp.c);
        let (d1, _) = barrier_grad_hess(&st.x[..aug.m], &inst.l, &inst.u).unwrap();
        assert!(d1.iter().all(|&v| v.abs() < 1e-12));
    }
}

#[test]
fn random_lps_match_enumeration() {
    let delta = 1e-5;
    for seed in 0..8 {
        let inst = common::random_lp(seed);
        let o = enumerate_lp(&inst).unwrap().value;
        let sol = solve_lp(&inst, delta, &LpOptions { seed, ..LpOptions::default() }).unwrap();
        assert!(sol.objective <= o + delta, "seed {seed}: {} vs {o}", sol.objective);
        assert!(sol.objective >= o - delta - 1e-9);
        assert!(sol.residual <= delta);
        for i in 0..inst.m() {
            assert!(sol.x[i] >= inst.l[i] && sol.x[i] <= inst.u[i]);
        }
    }
}

#[test]
fn halving_delta_does_not_loosen_the_solution() {
    for seed in [1, 4] {
        let inst = common::random_lp(seed);
        let o = enumerate_lp(&inst).unwrap().value;
        let a = solve_lp(&inst, 1e-4, &LpOptions::default()).unwrap();
        let b = solve_lp(&inst, 5e-5, &LpOptions::default()).unwrap();
        assert!(a.residual <= 1e-4 && b.residual <= 5e-5);
        assert!(b.objective - o <= 5e-5);
    }
}

#[test]
fn lp_rejects_bad_delta() {
    assert!(solve_lp(&box_lp(), 0.0, &LpOptions::default()).is_err());
    assert!(augment_lp(&box_lp(), -1.0).is_err());
}

#[test]
fn l1_median() {
    let a = SparseMatrix::from_dense(&[vec![1.0], vec![1.0], vec![1.0]]).unwrap();
    let c = [-1.0, -2.0, -4.0];
    let sol = solve_l1_regression(&a, &c, 1e-6, &LpOptions::default()).unwrap();
    assert!((sol.z[0] - 2.0).abs() < 1e-4);
    assert!((sol.value - 3.0).abs() <= 1e-6);
    let o = enumerate_l1(&a, &c).unwrap();
    assert_eq!(o.value, 3.0);
    assert_eq!(o.witness, vec![2.0]);
}

#[test]
fn l1_exact_fit() {
    let mut r = common::rng(3);
    for _ in 0..5 {
        let (a, _) = common::random_l1(r.random_range(0..1000));
        let z0: Vec<f64> = (0..a.ncols()).map(|_| r.random_range(-3..=3) as f64).collect();
        let c: Vec<f64> = a.mul_vec(&z0).iter().map(|v| -v).collect();
        let delta = 1e-6;
        let sol = solve_l1_regression(&a, &c, delta, &LpOptions::default()).unwrap();
        assert!(sol.value <= delta, "{}", sol.value);
    }
}

#[test]
fn l1_random_matches_enumeration_with_weak_duality() {
    let delta = 1e-6;
    for seed in 0..10 {
        let (a, c) = common::random_l1(seed);
        let o = enumerate_l1(&a, &c).unwrap().value;
        let sol = solve_l1_regression(&a, &c, delta, &LpOptions { seed, ..LpOptions::default() }).unwrap();
        assert!((l1_value(&a, &c, &sol.z) - sol.value).abs() < 1e-9);
        assert!(sol.value <= o + delta, "seed {seed}: {} vs {o}", sol.value);
        // Weak duality against the primal iterate.
        assert!(sol.value >= sol.lower_bound - 1e-9);
        assert!(sol.lower_bound <= o + 1e-9);
    }
}

#[test]
fn extract_dual_recovers_coefficients() {
    let (a, _) = common::random_l1(11);
    let z0: Vec<f64> = (0..a.ncols()).map(|k| k as f64 - 0.5).collect();
    let c: Vec<f64> = (0..a.nrows()).map(|i| i as f64 * 0.1).collect();
    let s: Vec<f64> = a.mul_vec(&z0).iter().zip(&c).map(|(x, y)| x + y).collect();
    let z = extract_dual(&a, &c, &s).unwrap();
    assert!(sup_gap(&z, &z0) < 1e-10);
}

fn one_state() -> MdpInstance {
    MdpInstance::new(0.9, vec![vec![1.0, 0.0]], vec![vec![vec![1.0], vec![1.0]]]).unwrap()
}

#[test]
fn mdp_one_state() {
    let eps = 1e-3;
    let sol = solve_mdp(&one_state(), eps, &LpOptions::default()).unwrap();
    assert_eq!(sol.policy, vec![0]);
    let v = policy_evaluation(&one_state(), &sol.policy).unwrap();
    assert!((v[0] - 10.0).abs() < 1e-9);
    assert!((sol.values[0] - 10.0).abs() <= eps);
    assert!((value_iteration(&one_state(), 10_000).unwrap().value - 10.0).abs() < 1e-9);
}

#[test]
fn mdp_identical_rewards() {
    let mut mdp = common::random_mdp(5);
    for row in mdp.rewards.iter_mut() {
        row.iter_mut().for_each(|r| *r = 0.5);
    }
    let eps = 1e-3;
    let sol = solve_mdp(&mdp, eps, &LpOptions::default()).unwrap();
    let want = 0.5 / (1.0 - mdp.gamma);
    let v = policy_evaluation(&mdp, &sol.policy).unwrap();
    assert!(v.iter().all(|x| (x - want).abs() <= eps));
    assert!(sol.values.iter().all(|x| (x - want).abs() <= eps));
}

fn random_fixed_shape(seed: u64) -> MdpInstance {
    let mut r = common::rng(seed);
    let (s, na) = (4, 3);
    let rewards = (0..s).map(|_| (0..na).map(|_| r.random_range(-1.0..=1.0)).collect()).collect();
    let transitions = (0..s)
        .map(|_| {
            (0..na)
                .map(|_| {
                    let w: Vec<f64> = (0..s).map(|_| r.random_range(0.0..1.0f64)).collect();
                    let tot: f64 = w.iter().sum();
                    let mut p: Vec<f64> = w.iter().map(|v| v / tot).collect();
                    p[0] += 1.0 - p.iter().sum::<f64>();
                    p
                })
                .collect()
        })
        .collect();
    MdpInstance::new(0.8, rewards, transitions).unwrap()
}

#[test]
fn mdp_random_within_eps_of_value_iteration() {
    let eps = 1e-3;
    for seed in 0..5 {
        let mdp = random_fixed_shape(seed);
        let vi = value_iteration(&mdp, 10_000).unwrap().witness;
        let sol = solve_mdp(&mdp, eps, &LpOptions { seed, ..LpOptions::default() }).unwrap();
        let v = policy_evaluation(&mdp, &sol.policy).unwrap();
        assert!(sup_gap(&v, &vi) <= eps, "seed {seed}");
    }
}

#[test]
fn mdp_policy_invariant_to_reward_shift() {
    for seed in 0..4 {
        let mdp = random_fixed_shape(seed + 20);
        let mut shifted = mdp.clone();
        for row in shifted.rewards.iter_mut() {
            row.iter_mut().for_each(|r| *r += 0.25);
        }
        let vi = value_iteration(&mdp, 10_000).unwrap().witness;
        let vs = value_iteration(&shifted, 10_000).unwrap().witness;
        assert_eq!(mdp.greedy_policy(&vi), shifted.greedy_policy(&vs));
        for (a, b) in vi.iter().zip(&vs) {
            assert!((b - a - 0.25 / (1.0 - mdp.gamma)).abs() < 1e-9);
        }
        let eps = 1e-3;
        let p1 = solve_mdp(&mdp, eps, &LpOptions::default()).unwrap().policy;
        let p2 = solve_mdp(&shifted, eps, &LpOptions::default()).unwrap().policy;
        let v1 = policy_evaluation(&mdp, &p1).unwrap();
        let v2 = policy_evaluation(&mdp, &p2).unwrap();
        assert!(sup_gap(&v1, &vi) <= eps && sup_gap(&v2, &vi) <= eps);
    }
}

#[test]
fn mdp_greedy_ties_pick_lowest_action() {
    let mdp = MdpInstance::new(0.5, vec![vec![1.0, 1.0, 0.0]], vec![vec![vec![1.0], vec![1.0], vec![1.0]]]).unwrap();
    assert_eq!(mdp.greedy_policy(&[2.0]), vec![0]);
}

#[test]
fn mdp_validation() {
    assert!(MdpInstance::new(1.0, vec![vec![0.0]], vec![vec![vec![1.0]]]).is_err());
    assert!(MdpInstance::new(0.5, vec![vec![0.0]], vec![vec![vec![0.7]]]).is_err());
    assert!(MdpInstance::new(0.5, vec![vec![0.0]], vec![vec![vec![-0.1, 1.1]]]).is_err());
}

#[test]
fn mdp_regression_shape() {
    let mdp = common::random_mdp(3);
    let reg = mdp_regression(&mdp).unwrap();
    let rows: usize = mdp.rewards.iter().map(|r| r.len()).sum();
    assert_eq!(reg.b.ncols(), mdp.states());
    assert!(reg.b.nrows() >= rows);
    assert!(reg.alpha > 0.0);
}

#[test]
fn formats_parse_test_data() {
    let lp = parse_lp(
        &std::fs::read_to_string("tests/data/box.mtx").unwrap(),
        &std::fs::read_to_string("tests/data/box.json").unwrap(),
    )
    .unwrap();
    assert_eq!(lp, box_lp());
    let (a, c) = parse_l1(
        &std::fs::read_to_string("tests/data/median.mtx").unwrap(),
        &std::fs::read_to_string("tests/data/median.json").unwrap(),
    )
    .unwrap();
    assert_eq!((a.nrows(), a.ncols()), (3, 1));
    assert_eq!(c, vec![-1.0, -2.0, -4.0]);
    let mdp = parse_mdp(&std::fs::read_to_string("tests/data/one_state.json").unwrap()).unwrap();
    assert_eq!(mdp, one_state());
    assert!(parse_mdp("{\"gamma\": 0.5}").is_err());
    assert_eq!(sidecar_path(std::path::Path::new("x/box.mtx")), std::path::PathBuf::from("x/box.json"));
}

#[test]
fn degenerate_vertices_are_certified_from_both_sides() {
    // Instances whose optimal vertex is degenerate, so the central-path dual grows
    // to the penalty scale before the primal residual is small.
    let delta = 1e-5;
    for seed in [8, 9, 16, 25, 55] {
        let inst = common::random_lp(seed);
        let o = enumerate_lp(&inst).unwrap().value;
        let sol = solve_lp(&inst, delta, &LpOptions { seed, ..LpOptions::default() }).unwrap();
        assert!((sol.objective - o).abs() <= delta, "seed {seed}: {} vs {o}", sol.objective);
        assert!(sol.residual <= delta && sol.gap <= delta / 2.0);
    }
}
