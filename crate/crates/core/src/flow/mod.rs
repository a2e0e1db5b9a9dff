//! Min-cost flow and max flow on top of the interior point method.

mod dimacs;
mod graph;
mod maxflow;
mod mincost;
mod star;
mod verify;

pub use dimacs::{read_dimacs, read_solution, write_dimacs, write_solution, Dimacs};
pub use graph::{incidence_matrix, Edge, FlowInstance, MaxFlowInstance};
pub use maxflow::{solve_maxflow, MaxFlowSolution};
pub use mincost::{isolation_perturbation, solve_mincost_flow, solve_mincost_flow_with, FlowOptions, FlowSolution};
pub use star::{augment_with_star, flow_initial_point, flow_target_mu, is_free_edge, AugmentedFlow};
pub use verify::{is_feasible, is_optimal};
