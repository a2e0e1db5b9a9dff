//! Robust interior point method for two-sided linear programs
//! `min c^T x  s.t.  A^T x = b, l <= x <= u`, with exact min-cost flow, max flow,
//! l1 regression and discounted MDP frontends.

pub mod cli;
pub mod error;
pub mod flow;
pub mod ipm;
pub mod linalg;
pub mod lpapps;
pub mod oracles;
pub mod scores;
pub mod sketchtree;

pub use error::{Error, Result};
