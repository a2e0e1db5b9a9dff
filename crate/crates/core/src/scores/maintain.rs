use super::leverage::ScoreMode;
use super::lewis::{
    contraction_step, lewis_fixed_point, lewis_fixed_point_from, lewis_target, log_distance,
    RegularizerVector,
};
use crate::error::{Error, Result};
use crate::linalg::{DiagScaling, SparseMatrix};

/// Whether the maintenance chain enforces the paper-strength drift contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaintainMode {
    Theory,
    Practical,
}

/// Lazily maintained regularized Lewis weights of `G A`.
#[derive(Debug, Clone)]
pub struct LewisState {
    a: SparseMatrix,
    g: Vec<f64>,
    g_at_query: Vec<f64>,
    z: RegularizerVector,
    p: f64,
    delta: f64,
    eps: f64,
    levels: Vec<Vec<f64>>,
    mode: MaintainMode,
    sketch: Option<f64>,
    seed: u64,
    queries: u64,
}

/// Number of chain levels `ceil(log_{4/3}(200 delta) + 1)`.
pub fn chain_length(delta: f64) -> usize {
    ((200.0 * delta).ln() / (4.0f64 / 3.0).ln() + 1.0).ceil().max(2.0) as usize
}

impl LewisState {
    /// Builds the chain with exact leverage scores in every level.
    pub fn init(
        a: &SparseMatrix,
        g: &DiagScaling,
        z: RegularizerVector,
        p: f64,
        delta: f64,
        eps: f64,
    ) -> Result<Self> {
        Self::init_with(a, g, z, p, delta, eps, MaintainMode::Practical, None, 0)
    }

    /// Full constructor. `sketch = Some(acc)` computes the level scores with JL
    /// sketches of accuracy `acc`.
    #[allow(clippy::too_many_arguments)]
    pub fn init_with(
        a: &SparseMatrix,
        g: &DiagScaling,
        z: RegularizerVector,
        p: f64,
        delta: f64,
        eps: f64,
        mode: MaintainMode,
        sketch: Option<f64>,
        seed: u64,
    ) -> Result<Self> {
        if !(p >= 0.5 && p < 2.0) {
            return Err(Error::InvalidArgument(format!("maintenance needs p in [1/2,2), got {p}")));
        }
        if !(eps > 0.0 && eps < 1.0) || !(delta > 0.0) {
            return Err(Error::InvalidArgument("eps must lie in (0,1) and delta be positive".into()));
        }
        if mode == MaintainMode::Theory {
            let n = a.ncols().max(2) as f64;
            let bound = 1.0 / (1024.0 * delta * n.ln());
            if eps > bound {
                return Err(Error::InvalidArgument(format!("theory mode needs eps <= {bound:.3e}")));
            }
        }
        let w = lewis_fixed_point(a, g, &z, p, eps / 100.0)?;
        let l = chain_length(delta);
        let mut st = LewisState {
            a: a.clone(),
            g: g.values().to_vec(),
            g_at_query: g.values().to_vec(),
            z,
            p,
            delta,
            eps,
            levels: vec![w],
            mode,
            sketch,
            seed,
            queries: 0,
        };
        st.rebuild_levels(l)?;
        Ok(st)
    }

    fn score_mode(&self, level: usize) -> ScoreMode {
        match self.sketch {
            None => ScoreMode::Exact,
            Some(acc) => ScoreMode::Sketched {
                eps: acc,
                seed: self.seed ^ (self.queries << 20) ^ level as u64,
            },
        }
    }

    fn rebuild_levels(&mut self, l: usize) -> Result<()> {
        let g = DiagScaling::new(self.g.clone())?;
        self.levels.truncate(1);
        for j in 0..l - 1 {
            let cur = &self.levels[j];
            let sig = lewis_target(&self.a, &g, &self.z, self.p, cur, self.score_mode(j))?;
            let next = contraction_step(cur, &sig, self.p);
            self.levels.push(next);
        }
        Ok(())
    }

    /// Sets `g_i <- b`.
    pub fn scale(&mut self, i: usize, b: f64) -> Result<()> {
        if i >= self.g.len() {
            return Err(Error::Dimension(format!("row {i} out of range")));
        }
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::InvalidArgument("scaling must be finite and non-negative".into()));
        }
        if self.mode == MaintainMode::Theory {
            let drift = (b / self.g_at_query[i]).ln().abs();
            let allowed = self.delta * self.eps;
            if drift > 2.0 * allowed {
                return Err(Error::DriftTooLarge { drift, allowed });
            }
        }
        self.g[i] = b;
        Ok(())
    }

    /// Refreshes the chain and writes back coordinates of `v^(1)` whose top level
    /// moved by more than `e^{eps/10}`. Returns the rewritten indices.
    pub fn query(&mut self) -> Result<Vec<usize>> {
        self.queries += 1;
        let l = self.levels.len();
        self.rebuild_levels(l)?;
        let top = self.levels[l - 1].clone();
        let mut changed = Vec::new();
        for (i, &t) in top.iter().enumerate() {
            if (t.ln() - self.levels[0][i].ln()).abs() > self.eps / 10.0 {
                self.levels[0][i] = t;
                changed.push(i);
            }
        }
        let g = DiagScaling::new(self.g.clone())?;
        let target = lewis_target(&self.a, &g, &self.z, self.p, &self.levels[0], ScoreMode::Exact)?;
        if log_distance(&self.levels[0], &target) > self.eps {
            let old = self.levels[0].clone();
            let (w, _) =
                lewis_fixed_point_from(&self.a, &g, &self.z, self.p, self.eps / 100.0, old.clone())?;
            for (i, (o, n)) in old.iter().zip(&w).enumerate() {
                if o != n && !changed.contains(&i) {
                    changed.push(i);
                }
            }
            changed.sort_unstable();
            self.levels[0] = w;
        }
        if !changed.is_empty() {
            self.rebuild_levels(l)?;
        }
        self.g_at_query = self.g.clone();
        Ok(changed)
    }

    /// Current maintained weights `v^(1)`.
    pub fn weights(&self) -> &[f64] {
        &self.levels[0]
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn scaling(&self) -> &[f64] {
        &self.g
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Exact fixed-point residual of the maintained weights.
    pub fn residual(&self) -> Result<f64> {
        let g = DiagScaling::new(self.g.clone())?;
        let t = lewis_target(&self.a, &g, &self.z, self.p, &self.levels[0], ScoreMode::Exact)?;
        Ok(log_distance(&self.levels[0], &t))
    }
}
