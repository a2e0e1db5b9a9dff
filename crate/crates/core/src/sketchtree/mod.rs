//! JL segment tree for heavy hitters and l2 row sampling, plus valid sampling schemes.

mod sampling;
mod tree;

pub use sampling::{
    independent_probabilities, mixture_plan, sample_valid_independent, sample_valid_proportional,
    MixtureConstants, MixturePlan, SampleMatrix, DIRECT_DRAW_LIMIT,
};
pub use tree::{PreparedQuery, SketchTree};
