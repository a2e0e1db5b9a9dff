//! General LPs, l1 regression and discounted MDPs.

mod checkpoint;
mod formats;
mod l1;
mod lp;
mod mdp;
mod mdp_types;

pub use checkpoint::{LpOptions, RunStats};
pub use formats::{parse_l1, parse_lp, parse_mdp, sidecar_path, L1Sidecar, LpSidecar};
pub use l1::{extract_dual, solve_l1_regression, L1Solution};
pub use lp::{augment_lp, lp_initial_point, solve_lp, AugmentedLp, LpSolution};
pub use mdp::{mdp_regression, solve_mdp, MdpRegression, MdpSolution};
pub use mdp_types::MdpInstance;
