use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;

/// Directed edge with integral bounds and cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub low: i64,
    pub cap: i64,
    pub cost: i64,
}

impl Edge {
    pub fn new(tail: usize, head: usize, cap: i64, cost: i64) -> Self {
        Edge { tail, head, low: 0, cap, cost }
    }
}

/// Min-cost flow instance. `supply[v] > 0` means `v` emits that much net flow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowInstance {
    pub n: usize,
    pub edges: Vec<Edge>,
    pub supply: Vec<i64>,
}

impl FlowInstance {
    pub fn new(n: usize, edges: Vec<Edge>, supply: Vec<i64>) -> Result<Self> {
        let inst = FlowInstance { n, edges, supply };
        inst.validate()?;
        Ok(inst)
    }

    /// Single-commodity instance sending `f` units from `s` to `t`.
    pub fn st(n: usize, edges: Vec<Edge>, s: usize, t: usize, f: i64) -> Result<Self> {
        let mut supply = vec![0; n];
        if s >= n || t >= n {
            return Err(Error::InvalidArgument("terminal out of range".into()));
        }
        supply[s] += f;
        supply[t] -= f;
        Self::new(n, edges, supply)
    }

    pub fn validate(&self) -> Result<()> {
        if self.supply.len() != self.n {
            return Err(Error::Dimension("supply vector length".into()));
        }
        for (k, e) in self.edges.iter().enumerate() {
            if e.tail >= self.n || e.head >= self.n {
                return Err(Error::InvalidArgument(format!("edge {k} has an endpoint out of range")));
            }
            if e.low < 0 || e.cap < e.low {
                return Err(Error::InvalidArgument(format!("edge {k} needs 0 <= low <= cap")));
            }
        }
        if self.supply.iter().sum::<i64>() != 0 {
            return Err(Error::Infeasible("supplies do not sum to zero".into()));
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// `max(||u||_inf, ||c||_inf, ||supply||_inf, 1)`.
    pub fn max_abs_data(&self) -> i64 {
        self.edges
            .iter()
            .map(|e| e.cap.max(e.cost.abs()))
            .chain(self.supply.iter().map(|b| b.abs()))
            .fold(1, i64::max)
    }

    pub fn cost(&self, flow: &[i64]) -> i64 {
        self.edges.iter().zip(flow).map(|(e, f)| e.cost * f).sum()
    }

    /// Incidence matrix with `A[e, tail] = -1`, `A[e, head] = +1`.
    pub fn incidence(&self) -> SparseMatrix {
        incidence_matrix(self.n, self.edges.iter().map(|e| (e.tail, e.head)))
    }
}

pub fn incidence_matrix(n: usize, arcs: impl Iterator<Item = (usize, usize)>) -> SparseMatrix {
    let mut t = Vec::new();
    let mut m = 0;
    for (k, (a, b)) in arcs.enumerate() {
        t.push((k, a, -1.0));
        t.push((k, b, 1.0));
        m = k + 1;
    }
    SparseMatrix::from_triplets(m, n, &t).expect("incidence entries are in range")
}

/// Max-flow instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlowInstance {
    pub n: usize,
    pub s: usize,
    pub t: usize,
    /// `(tail, head, capacity)`.
    pub arcs: Vec<(usize, usize, i64)>,
}

impl MaxFlowInstance {
    pub fn new(n: usize, s: usize, t: usize, arcs: Vec<(usize, usize, i64)>) -> Result<Self> {
        if s >= n || t >= n || s == t {
            return Err(Error::InvalidArgument("source and sink must be distinct vertices".into()));
        }
        for (k, &(a, b, c)) in arcs.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::InvalidArgument(format!("arc {k} has an endpoint out of range")));
            }
            if c < 0 {
                return Err(Error::InvalidArgument(format!("arc {k} has negative capacity")));
            }
        }
        Ok(MaxFlowInstance { n, s, t, arcs })
    }
}
