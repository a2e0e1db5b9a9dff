#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rlp::flow::{Edge, FlowInstance, MaxFlowInstance};
use rlp::ipm::LpInstance;
use rlp::linalg::{DiagScaling, SparseMatrix};
use rlp::scores::RegularizerVector;
use rlp::lpapps::MdpInstance;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random min-cost flow with `n <= 10`, `m <= 25`, capacities and costs at most 8.
/// Even seeds route a random flow of value `F` between two terminals; odd seeds
/// take the supplies of a random feasible flow.
pub fn random_flow(seed: u64) -> FlowInstance {
    let mut r = rng(seed);
    let n = r.random_range(2..=10usize);
    let m = r.random_range(1..=25usize);
    let edges: Vec<Edge> = (0..m)
        .map(|_| {
            let a = r.random_range(0..n);
            let mut b = r.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            Edge::new(a, b, r.random_range(0..=8), r.random_range(-8..=8))
        })
        .collect();
    let mut supply = vec![0i64; n];
    if seed % 2 == 0 {
        let s = r.random_range(0..n);
        let t = (s + r.random_range(1..n)) % n;
        let mf = rlp::oracles::dinic_maxflow(&MaxFlowInstance::new(n, s, t, edges.iter().map(|e| (e.tail, e.head, e.cap)).collect()).unwrap())
            .unwrap()
            .value as i64;
        let f = if mf > 0 { r.random_range(0..=mf) } else { 0 };
        supply[s] += f;
        supply[t] -= f;
    } else {
        for e in &edges {
            let x = r.random_range(0..=e.cap);
            supply[e.tail] += x;
            supply[e.head] -= x;
        }
    }
    FlowInstance::new(n, edges, supply).unwrap()
}

/// Random max flow with `n <= 12` and capacities at most 8.
pub fn random_maxflow(seed: u64) -> MaxFlowInstance {
    let mut r = rng(seed);
    let n = r.random_range(2..=12usize);
    let m = r.random_range(1..=3 * n);
    let arcs: Vec<(usize, usize, i64)> = (0..m)
        .map(|_| {
            let a = r.random_range(0..n);
            let mut b = r.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            (a, b, r.random_range(0..=8))
        })
        .collect();
    let s = r.random_range(0..n);
    let t = (s + r.random_range(1..n)) % n;
    let mut arcs: Vec<(usize, usize, i64)> = arcs;
    // A few arcs leaving s and entering t keep most values nonzero.
    for _ in 0..2 {
        let v = r.random_range(0..n);
        if v != s {
            arcs.push((s, v, r.random_range(1..=8)));
        }
        let v = r.random_range(0..n);
        if v != t {
            arcs.push((v, t, r.random_range(1..=8)));
        }
    }
    MaxFlowInstance::new(n, s, t, arcs).unwrap()
}

fn full_rank_dense(r: &mut ChaCha8Rng, m: usize, n: usize, lim: i32) -> Vec<Vec<f64>> {
    loop {
        let rows: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| r.random_range(-lim..=lim) as f64).collect()).collect();
        let d = nalgebra::DMatrix::from_fn(m, n, |i, j| rows[i][j]);
        if d.rank(1e-9) == n && rows.iter().all(|row| row.iter().any(|&v| v != 0.0)) {
            return rows;
        }
    }
}

/// Feasible two-sided LP with `m <= 12`, `n <= 4` and integral data bounded by 5.
pub fn random_lp(seed: u64) -> LpInstance {
    let mut r = rng(seed);
    let n = r.random_range(1..=4usize);
    let m = r.random_range(n.max(2)..=12usize);
    let rows = full_rank_dense(&mut r, m, n, 5);
    let a = SparseMatrix::from_dense(&rows).unwrap();
    let l: Vec<f64> = (0..m).map(|_| r.random_range(-5..=0) as f64).collect();
    let u: Vec<f64> = l.iter().map(|&l| (l + r.random_range(1..=5) as f64).min(5.0)).collect();
    let x: Vec<f64> = l.iter().zip(&u).map(|(&l, &u)| r.random_range(l as i32..=u as i32) as f64).collect();
    let b = a.tmul_vec(&x);
    let c = (0..m).map(|_| r.random_range(-5..=5) as f64).collect();
    LpInstance::new(a, b, c, l, u).unwrap()
}

/// l1 regression with `m <= 15`, `n <= 3`, integral entries bounded by 5.
pub fn random_l1(seed: u64) -> (SparseMatrix, Vec<f64>) {
    let mut r = rng(seed);
    let n = r.random_range(1..=3usize);
    let m = r.random_range(n + 1..=15usize);
    let rows = full_rank_dense(&mut r, m, n, 5);
    let c = (0..m).map(|_| r.random_range(-5..=5) as f64).collect();
    (SparseMatrix::from_dense(&rows).unwrap(), c)
}

/// DMDP with `|S| <= 5`, `|A| <= 3`, `gamma <= 0.9`, rewards in `[-1, 1]`.
pub fn random_mdp(seed: u64) -> MdpInstance {
    let mut r = rng(seed);
    let s = r.random_range(1..=5usize);
    let na = r.random_range(1..=3usize);
    let gamma = r.random_range(0.5..=0.9);
    let rewards = (0..s).map(|_| (0..na).map(|_| r.random_range(-1.0..=1.0)).collect()).collect();
    let transitions = (0..s)
        .map(|_| {
            (0..na)
                .map(|_| {
                    let w: Vec<f64> = (0..s).map(|_| if r.random_bool(0.6) { r.random_range(0.0..1.0) } else { 0.0 }).collect();
                    let tot: f64 = w.iter().sum();
                    if tot == 0.0 {
                        let mut p = vec![0.0; s];
                        p[r.random_range(0..s)] = 1.0;
                        p
                    } else {
                        let mut p: Vec<f64> = w.iter().map(|v| v / tot).collect();
                        let err: f64 = 1.0 - p.iter().sum::<f64>();
                        let k = p.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
                        p[k] += err;
                        p
                    }
                })
                .collect()
        })
        .collect();
    MdpInstance::new(gamma, rewards, transitions).unwrap()
}

/// Gaussian `m x n` matrix with `m <= m_max`, `n <= n_max`, a positive row scaling and a
/// random valid regularizer.
pub fn random_lewis(seed: u64, m_max: usize, n_max: usize) -> (SparseMatrix, DiagScaling, RegularizerVector) {
    let mut r = rng(seed);
    let n = r.random_range(1..=n_max);
    let m = r.random_range(n + 1..=m_max.max(n + 1));
    let normal = rand_distr::StandardNormal;
    let rows: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| r.sample::<f64, _>(normal)).collect()).collect();
    let a = SparseMatrix::from_dense(&rows).unwrap();
    let g = DiagScaling::new((0..m).map(|_| r.random_range(0.5..2.0)).collect()).unwrap();
    let base = n as f64 / m as f64;
    let z = RegularizerVector::new((0..m).map(|_| base * r.random_range(1.0..3.0)).collect(), n).unwrap();
    (a, g, z)
}

/// Dense copy of `G A` for nalgebra oracles.
pub fn dense_of(a: &SparseMatrix, g: &[f64]) -> nalgebra::DMatrix<f64> {
    let mut d = nalgebra::DMatrix::zeros(a.nrows(), a.ncols());
    for (i, j, v) in a.triplets() {
        d[(i, j)] += g[i] * v;
    }
    d
}

/// Exact return probability of every row under `tree_sample`, by walking each
/// root-to-leaf path with node norms recomputed from the stored sketches.
pub fn tree_path_probabilities(tree: &rlp::sketchtree::SketchTree, h: &[f64], u: f64) -> Vec<f64> {
    let n = tree.ncols();
    let k = tree.sketch_rows();
    let padded = tree.padded_rows();
    let norm = |id: usize| -> f64 {
        let q = tree.stored_sketch(id);
        (0..k).map(|r| q[r * n..(r + 1) * n].iter().zip(h).map(|(a, b)| a * b).sum::<f64>().powi(2)).sum()
    };
    let gah = rlp::linalg::apply_scaled(tree.matrix(), &DiagScaling::new(tree.scaling().to_vec()).unwrap(), h).unwrap();
    (0..tree.nrows())
        .map(|row| {
            let mut id = padded + row;
            let mut reach = 1.0;
            while id > 1 {
                let parent = id / 2;
                let tot = norm(2 * parent) + norm(2 * parent + 1);
                if tot <= 0.0 {
                    return 0.0;
                }
                reach *= norm(id) / tot;
                id = parent;
            }
            if reach == 0.0 {
                0.0
            } else {
                // Acceptance is a probability, so a ratio above one would be clipped.
                reach * (gah[row] * gah[row] / (u * reach)).min(1.0)
            }
        })
        .collect()
}

/// Rows with `|(G A h)_i| >= eps`, by dense product.
pub fn brute_heavy(a: &SparseMatrix, g: &[f64], h: &[f64], eps: f64) -> Vec<usize> {
    let d = dense_of(a, g);
    let v = d * nalgebra::DVector::from_column_slice(h);
    (0..a.nrows()).filter(|&i| v[i].abs() >= eps).collect()
}

/// Outcome of the valid-distribution moment checks at three standard errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Moments {
    pub expectation: bool,
    pub variance: bool,
    pub covariance: bool,
}

/// Checks `E[R] = I`, `Var[R_ii d_i] <= var_bound[i]` (after dividing the sample
/// variance by `var_divisor`) and `E[R_ii R_jj] <= 2` on the given draws.
pub fn moment_checks(draws: &[Vec<f64>], d: &[f64], var_bound: &[f64], var_divisor: f64) -> Moments {
    let n = draws.len() as f64;
    let m = d.len();
    let mut out = Moments { expectation: true, variance: true, covariance: true };
    for i in 0..m {
        let mean = draws.iter().map(|r| r[i]).sum::<f64>() / n;
        let var = draws.iter().map(|r| (r[i] - mean).powi(2)).sum::<f64>() / (n - 1.0);
        if (mean - 1.0).abs() > 3.0 * (var / n).sqrt() + 1e-12 {
            out.expectation = false;
        }
        let xs: Vec<f64> = draws.iter().map(|r| r[i] * d[i]).collect();
        let xm = xs.iter().sum::<f64>() / n;
        let m2 = xs.iter().map(|x| (x - xm).powi(2)).sum::<f64>() / n;
        let m4 = xs.iter().map(|x| (x - xm).powi(4)).sum::<f64>() / n;
        let se = ((m4 - m2 * m2).max(0.0) / n).sqrt();
        if (m2 - 3.0 * se) / var_divisor > var_bound[i] * (1.0 + 1e-12) {
            out.variance = false;
        }
        for j in i + 1..m {
            let prods: Vec<f64> = draws.iter().map(|r| r[i] * r[j]).collect();
            let pm = prods.iter().sum::<f64>() / n;
            let pv = prods.iter().map(|x| (x - pm).powi(2)).sum::<f64>() / (n - 1.0);
            if pm - 3.0 * (pv / n).sqrt() > 2.0 {
                out.covariance = false;
            }
        }
    }
    out
}

/// A random instance whose start `(x, z = 0, mu = 1)` has centrality `y` drawn uniformly
/// from `[-eps/2, eps/2]`: the cost vector is chosen so that `s = c` gives that `y`.
pub fn half_centered(
    seed: u64,
    m: usize,
    n: usize,
    mode: rlp::ipm::Mode,
) -> (LpInstance, rlp::ipm::CenteredTriple, rlp::ipm::IpmParams) {
    use rlp::ipm::{barrier_grad_hess, tau_weights, CenteredTriple, IpmParams, SamplerKind};
    let mut r = rng(seed);
    let normal = rand_distr::StandardNormal;
    let rows: Vec<Vec<f64>> = (0..m).map(|_| (0..n).map(|_| r.sample::<f64, _>(normal)).collect()).collect();
    let a = SparseMatrix::from_dense(&rows).unwrap();
    let l: Vec<f64> = (0..m).map(|_| r.random_range(-1.0..0.0)).collect();
    let u: Vec<f64> = l.iter().map(|l| l + r.random_range(1.0..3.0)).collect();
    let x: Vec<f64> = l.iter().zip(&u).map(|(l, u)| l + (u - l) * r.random_range(0.2..0.8)).collect();
    let b = a.tmul_vec(&x);
    let mut params = IpmParams::new(4.0, m, n, mode, seed).unwrap();
    params.sampler = SamplerKind::Mixture;
    let probe = LpInstance::new(a.clone(), b.clone(), vec![0.0; m], l.clone(), u.clone()).unwrap();
    let tau = tau_weights(&probe, &x, params.p, None).unwrap();
    let (d1, d2) = barrier_grad_hess(&x, &l, &u).unwrap();
    let half = params.eps / 2.0;
    let c: Vec<f64> = (0..m).map(|i| tau[i] * (d2[i].sqrt() * r.random_range(-half..half) - d1[i])).collect();
    let inst = LpInstance::new(a, b, c, l, u).unwrap();
    let st = CenteredTriple::new(&inst, x, vec![0.0; n], 1.0, &params).unwrap();
    (inst, st, params)
}
