use super::checkpoint::LpOptions;
use super::l1::{solve_l1_regression, L1Solution};
use super::mdp_types::MdpInstance;
use crate::error::Result;
use crate::linalg::SparseMatrix;

/// l1 instance `min_v ||B v + c||_1` whose minimizers solve the DMDP LP
/// `min 1^T v` subject to `(E - gamma P) v >= r`.
#[derive(Debug, Clone)]
pub struct MdpRegression {
    pub b: SparseMatrix,
    pub c: Vec<f64>,
    pub alpha: f64,
    pub reward_bound: f64,
}

/// Builds `[S^{-1} A; S^{-1} A; alpha 1^T]` and `[-S^{-1} b - 1; -S^{-1} b + 1; alpha |S| M / (1 - gamma)]`
/// with `s = (2M/(1-gamma) - r)/2`, `b = (2M/(1-gamma) + r)/2`.
///
/// `alpha = (1 - gamma)^2 / (4 |S| M)` keeps the penalty exact: a unit move of
/// `1^T v` gains at most `alpha`, while leaving the feasible band costs at least
/// `(1 - gamma) / M` per unit of dual mass, and the dual mass is at most `|S| / (1 - gamma)`.
pub fn mdp_regression(mdp: &MdpInstance) -> Result<MdpRegression> {
    mdp.validate()?;
    let ns = mdp.states();
    let g = mdp.gamma;
    let mmax = mdp.rewards.iter().flatten().fold(0.0f64, |m, r| m.max(r.abs()));
    let big = if mmax > 0.0 { mmax } else { 1.0 };
    let alpha = (1.0 - g).powi(2) / (4.0 * ns as f64 * big);
    let top = 2.0 * big / (1.0 - g);
    let mut rows: Vec<(Vec<(usize, f64)>, f64, f64)> = Vec::new();
    for i in 0..ns {
        for a in 0..mdp.rewards[i].len() {
            let r = mdp.rewards[i][a];
            let (s, b) = (0.5 * (top - r), 0.5 * (top + r));
            let mut row: Vec<(usize, f64)> = (0..ns)
                .map(|j| (j, (f64::from(i == j) - g * mdp.transitions[i][a][j]) / s))
                .filter(|&(_, v)| v != 0.0)
                .collect();
            row.sort_by_key(|e| e.0);
            rows.push((row, s, b));
        }
    }
    let k = rows.len();
    let mut trip = Vec::new();
    let mut c = vec![0.0; 2 * k + 1];
    for (r, (row, s, b)) in rows.iter().enumerate() {
        for &(j, v) in row {
            trip.push((r, j, v));
            trip.push((k + r, j, v));
        }
        c[r] = -b / s - 1.0;
        c[k + r] = -b / s + 1.0;
    }
    for j in 0..ns {
        trip.push((2 * k, j, alpha));
    }
    c[2 * k] = alpha * ns as f64 * big / (1.0 - g);
    Ok(MdpRegression { b: SparseMatrix::from_triplets(2 * k + 1, ns, &trip)?, c, alpha, reward_bound: big })
}

#[derive(Debug, Clone)]
pub struct MdpSolution {
    pub policy: Vec<usize>,
    /// Approximate optimal values `v`.
    pub values: Vec<f64>,
    pub regression: L1Solution,
}

/// `eps`-optimal policy: solve the regression to `alpha eps_2` with
/// `eps_2 = eps (1 - gamma)^2 / (8 |S|)`, then act greedily on `v`.
pub fn solve_mdp(mdp: &MdpInstance, eps: f64, opts: &LpOptions) -> Result<MdpSolution> {
    let reg = mdp_regression(mdp)?;
    let ns = mdp.states() as f64;
    let eps2 = eps * (1.0 - mdp.gamma).powi(2) / (8.0 * ns);
    let eps3 = (reg.alpha * eps2).min(eps2 * (1.0 - mdp.gamma) / (2.0 * reg.reward_bound));
    let regression = solve_l1_regression(&reg.b, &reg.c, eps3, opts)?;
    let values = regression.z.clone();
    Ok(MdpSolution { policy: mdp.greedy_policy(&values), values, regression })
}
