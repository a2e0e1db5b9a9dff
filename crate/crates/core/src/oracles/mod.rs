//! Brute-force reference solvers used to check the main algorithms.
//! Nothing here calls into the solver modules; only instance types are shared.

mod dense;
mod enumerate;
mod flows;
mod mdp;

pub use dense::{dense_lewis, dense_scores, flat_oracle_value};
pub use enumerate::{enumerate_l1, enumerate_lp};
pub use flows::{dinic_maxflow, min_cut_enumeration, ssp_mincost};
pub use mdp::{policy_evaluation, value_iteration};

/// How an oracle value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    SuccessiveShortestPaths,
    Dinic,
    CutEnumeration,
    VertexEnumeration,
    SubsetEnumeration,
    ValueIteration,
    DenseInverse,
    DenseFixedPoint,
    DualBisection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub witness: Vec<f64>,
    pub method: OracleMethod,
}
