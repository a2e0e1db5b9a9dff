use super::checkpoint::{Checkpoint, LpOptions, RunStats};
use crate::error::{Error, Result};
use crate::ipm::{
    centering_mu, final_point, path_following, tau_weights, CenteredTriple, CenteringReport, IpmParams, LpInstance,
};
use crate::linalg::{norm_inf, NormalSolver, SparseMatrix};

#[derive(Debug, Clone)]
pub struct L1Solution {
    pub z: Vec<f64>,
    /// `||A z + c||_1`.
    pub value: f64,
    /// `-c^T x` for the final primal point; a lower bound on the optimum.
    pub lower_bound: f64,
    pub stats: RunStats,
}

/// `z = (A^T A)^{-1} A^T (s - c)`.
pub fn extract_dual(a: &SparseMatrix, c: &[f64], s: &[f64]) -> Result<Vec<f64>> {
    let solver = NormalSolver::new(a, &vec![1.0; a.nrows()])?;
    let sc: Vec<f64> = s.iter().zip(c).map(|(s, c)| s - c).collect();
    Ok(solver.solve(&a.tmul_vec(&sc)))
}

fn l1_value(a: &SparseMatrix, z: &[f64], c: &[f64]) -> f64 {
    a.mul_vec(z).iter().zip(c).map(|(v, c)| (v + c).abs()).sum()
}

/// `min_z ||A z + c||_1` through its dual `min c^T x` over `A^T x = 0`, `-1 <= x <= 1`.
pub fn solve_l1_regression(a: &SparseMatrix, c: &[f64], delta: f64, opts: &LpOptions) -> Result<L1Solution> {
    let (m, n) = (a.nrows(), a.ncols());
    if c.len() != m {
        return Err(Error::Dimension("c must have one entry per row".into()));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    if norm_inf(c) == 0.0 {
        return Ok(L1Solution { z: vec![0.0; n], value: 0.0, lower_bound: 0.0, stats: RunStats::default() });
    }
    let lp = LpInstance::new(a.clone(), vec![0.0; n], c.to_vec(), vec![-1.0; m], vec![1.0; m])?;
    let params = IpmParams::new(opts.c, m, n, opts.mode, opts.seed)?;
    let x0 = vec![0.0; m];
    let formula = norm_inf(c) * m as f64 / (n as f64 * params.eps);
    let tau = tau_weights(&lp, &x0, params.p, None)?;
    let need = centering_mu(c, &tau, &x0, &lp.l, &lp.u, CenteringReport::start_target(&params))?;
    let init = CenteredTriple::new(&lp, x0, vec![0.0; n], formula.max(need), &params)?;
    let mu_target = delta / (opts.c * n as f64);

    let evaluate = |lp: &LpInstance, st: &CenteredTriple| -> Result<(Vec<f64>, f64, f64)> {
        let (x, s) = final_point(lp, st)?;
        let z = extract_dual(a, c, &s)?;
        let value = l1_value(a, &z, c);
        // Weak duality needs x inside the box.
        let lower = if x.iter().all(|v| v.abs() <= 1.0) { -lp.objective(&x) } else { f64::NEG_INFINITY };
        Ok((z, value, lower))
    };
    let mut best = None;
    let early = opts.early_stop;
    let mut obs = Checkpoint::new(
        |lp: &LpInstance, st: &CenteredTriple| {
            if !early {
                return Ok(false);
            }
            let r = evaluate(lp, st)?;
            let ok = r.1 - r.2 <= delta;
            if ok {
                best = Some(r);
            }
            Ok(ok)
        },
        opts.keep_records,
    );
    let fin = path_following(&lp, init, mu_target, &params, &mut obs)?;
    let stats = RunStats { steps: obs.steps, invariant_failures: obs.failures, records: std::mem::take(&mut obs.records) };
    drop(obs);
    let (z, value, lower_bound) = match best {
        Some(b) => b,
        None => evaluate(&lp, &fin)?,
    };
    Ok(L1Solution { z, value, lower_bound, stats })
}
