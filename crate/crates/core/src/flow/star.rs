use super::graph::{incidence_matrix, FlowInstance};
use crate::error::{Error, Result};
use crate::ipm::{centering_mu, tau_weights, CenteredTriple, CenteringReport, IpmParams, LpInstance};
use crate::linalg::SparseMatrix;

/// Star-augmented instance: original edges with positive width, then the pairs
/// `(v, z)`, `(z, v)` for every vertex `v`, with the column of `z` deleted.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedFlow {
    /// Number of original vertices; the star root is vertex `n`.
    pub n: usize,
    /// Original edge index of each of the first `kept.len()` rows.
    pub kept: Vec<usize>,
    pub arcs: Vec<(usize, usize)>,
    pub low: Vec<f64>,
    pub cap: Vec<f64>,
    pub cost: Vec<f64>,
    /// Right-hand side `A_z^T x = demand`, `demand = -supply`.
    pub demand: Vec<f64>,
    pub x_init: Vec<f64>,
    pub a_z: SparseMatrix,
    /// Edge count and `max(||u||, ||c||, ||b||, 1)` of the kept original edges.
    pub m: usize,
    pub w: i64,
    pub star_cost: f64,
}

impl AugmentedFlow {
    pub fn m_total(&self) -> usize {
        self.arcs.len()
    }

    /// Range of star rows.
    pub fn star_rows(&self) -> std::ops::Range<usize> {
        self.kept.len()..self.arcs.len()
    }

    pub fn lp(&self) -> Result<LpInstance> {
        LpInstance::new(self.a_z.clone(), self.demand.clone(), self.cost.clone(), self.low.clone(), self.cap.clone())
    }

    /// Same instance with the costs of the kept edges replaced.
    pub fn with_costs(&self, kept_costs: &[f64]) -> AugmentedFlow {
        let mut out = self.clone();
        out.cost[..kept_costs.len()].copy_from_slice(kept_costs);
        out
    }
}

/// Whether an edge takes part in the interior point solve. Self-loops and
/// fixed edges are decided directly.
pub fn is_free_edge(e: &super::Edge) -> bool {
    e.tail != e.head && e.cap > e.low
}

/// Builds the star-augmented instance with its exactly feasible midpoint flow.
pub fn augment_with_star(inst: &FlowInstance) -> AugmentedFlow {
    let n = inst.n;
    let z = n;
    let kept: Vec<usize> = (0..inst.m()).filter(|&k| is_free_edge(&inst.edges[k])).collect();
    // Edges outside the solve carry their fixed flow; fold it into the supplies.
    let mut supply = inst.supply.clone();
    for e in &inst.edges {
        if !is_free_edge(e) && e.tail != e.head {
            supply[e.tail] -= e.low;
            supply[e.head] += e.low;
        }
    }
    let m = kept.len().max(1);
    let w = kept
        .iter()
        .map(|&k| inst.edges[k].cap.max(inst.edges[k].cost.abs()))
        .chain(supply.iter().map(|b| b.abs()))
        .fold(1, i64::max);
    let u_inf = kept.iter().map(|&k| inst.edges[k].cap).fold(1, i64::max) as f64;
    let c_inf = kept.iter().map(|&k| inst.edges[k].cost.abs()).fold(1, i64::max) as f64;
    let star_cost = 50.0 * m as f64 * u_inf * c_inf;

    // Twice the net inflow minus demand, kept integral.
    let mut excess2 = vec![0i64; n];
    for &k in &kept {
        let e = &inst.edges[k];
        let mid2 = e.low + e.cap;
        excess2[e.head] += mid2;
        excess2[e.tail] -= mid2;
    }
    for v in 0..n {
        excess2[v] += 2 * supply[v];
    }

    let mut arcs = Vec::new();
    let (mut low, mut cap, mut cost, mut x_init) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for &k in &kept {
        let e = &inst.edges[k];
        arcs.push((e.tail, e.head));
        low.push(e.low as f64);
        cap.push(e.cap as f64);
        cost.push(e.cost as f64);
        x_init.push((e.low + e.cap) as f64 / 2.0);
    }
    for v in 0..n {
        // Positive excess leaves through (v, z); a deficit arrives through (z, v).
        let e = excess2[v] as f64 / 2.0;
        let (out, inn) = if e > 0.0 { (1.0 + e, 1.0) } else { (1.0, 1.0 - e) };
        for (arc, x) in [((v, z), out), ((z, v), inn)] {
            arcs.push(arc);
            low.push(0.0);
            cap.push(2.0 * x);
            cost.push(star_cost);
            x_init.push(x);
        }
    }
    let full = incidence_matrix(n + 1, arcs.iter().copied());
    let a_z = full.select_columns(&(0..n).collect::<Vec<_>>());
    AugmentedFlow {
        n,
        kept,
        arcs,
        low,
        cap,
        cost,
        demand: supply.iter().map(|&b| -(b as f64)).collect(),
        x_init,
        a_z,
        m,
        w,
        star_cost,
    }
}

/// Initial centered triple `(x_init, c, mu_init)` with zero dual vector.
///
/// `mu_init` is `100 m^2 W^3 / eps`, raised if needed so the measured
/// centrality meets `CenteringReport::start_target`.
pub fn flow_initial_point(aug: &AugmentedFlow, params: &IpmParams) -> Result<(LpInstance, CenteredTriple)> {
    let lp = aug.lp()?;
    let (m, w) = (aug.m as f64, aug.w as f64);
    let paper_mu = 100.0 * m * m * w.powi(3) / params.eps;
    let tau = tau_weights(&lp, &aug.x_init, params.p, None)?;
    let need = centering_mu(&lp.c, &tau, &aug.x_init, &lp.l, &lp.u, CenteringReport::start_target(params))?;
    let mu = paper_mu.max(need);
    if !mu.is_finite() {
        return Err(Error::NonFiniteInput("initial mu"));
    }
    let st = CenteredTriple::new(&lp, aug.x_init.clone(), vec![0.0; aug.n], mu, params)?;
    Ok((lp, st))
}

/// `1 / (12 m^2 W^3 n)`.
pub fn flow_target_mu(aug: &AugmentedFlow) -> f64 {
    let (m, w) = (aug.m as f64, aug.w as f64);
    1.0 / (12.0 * m * m * w.powi(3) * aug.n as f64)
}
