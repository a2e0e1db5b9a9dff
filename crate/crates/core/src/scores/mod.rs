//! Leverage scores, regularized Lewis weights and their lazy maintenance.

mod leverage;
mod lewis;
mod maintain;

pub use leverage::{exact_scores_with, leverage_scores, ScoreMode};
pub use lewis::{
    contraction_step, lewis_fixed_point, lewis_fixed_point_from, lewis_residual, lewis_step_count,
    lewis_target, log_distance, RegularizerVector, LEWIS_BUFFER_STEPS, LEWIS_MAX_STEPS,
};
pub use maintain::{chain_length, LewisState, MaintainMode};
