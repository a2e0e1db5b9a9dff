use nalgebra::{DMatrix, DVector};

use super::{OracleMethod, OracleResult};
use crate::error::{Error, Result};
use crate::lpapps::MdpInstance;

/// Bellman sweeps from `v = 0`; `value` is `max_i v_i`, `witness` is `v`.
pub fn value_iteration(mdp: &MdpInstance, iters: usize) -> Result<OracleResult> {
    mdp.validate()?;
    let s = mdp.states();
    let mut v = vec![0.0; s];
    for _ in 0..iters {
        let next: Vec<f64> = (0..s)
            .map(|i| {
                (0..mdp.rewards[i].len())
                    .map(|a| mdp.rewards[i][a] + mdp.gamma * mdp.transitions[i][a].iter().zip(&v).map(|(p, x)| p * x).sum::<f64>())
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        v = next;
    }
    Ok(OracleResult {
        value: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        witness: v,
        method: OracleMethod::ValueIteration,
    })
}

/// Exact `v_pi = (I - gamma P_pi)^{-1} r_pi`.
pub fn policy_evaluation(mdp: &MdpInstance, policy: &[usize]) -> Result<Vec<f64>> {
    let s = mdp.states();
    if policy.len() != s || policy.iter().enumerate().any(|(i, &a)| a >= mdp.rewards[i].len()) {
        return Err(Error::InvalidArgument("policy does not match the MDP".into()));
    }
    let m = DMatrix::from_fn(s, s, |i, j| f64::from(i == j) - mdp.gamma * mdp.transitions[i][policy[i]][j]);
    let r = DVector::from_fn(s, |i, _| mdp.rewards[i][policy[i]]);
    let v = m.lu().solve(&r).ok_or_else(|| Error::SingularSystem { pivot: 0.0, threshold: 0.0 })?;
    Ok(v.iter().copied().collect())
}
