//! Robust interior point method over two-sided log barriers.

mod barrier;
mod instance;
mod norm;
mod params;
mod path;
mod potential;
mod state;
mod step;
mod trace;

pub use barrier::{barrier_derivs, barrier_grad_hess, strictly_interior, BarrierDerivs};
pub use instance::LpInstance;
pub use norm::{dual_norm, flat_operator, tau_inf_norm, tau_norm};
pub use params::{IpmParams, Mode, SamplerKind};
pub use path::{
    centering_mu, final_point, path_following, path_following_with, NoObserver, RecordingObserver, StepObserver,
    StepRecord,
};
pub use potential::{centrality, potential, potential_gradient, potential_of, PotentialReport};
pub use state::{feasibility_roundoff, tau_weights, CenteredTriple, CenteringReport, TAU_TOL};
pub use step::{short_step, short_step_with, Direction, StepContext, StepInternals};
pub use trace::TraceWriter;
