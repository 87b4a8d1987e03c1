//! Model state and single-site heat-bath dynamics with rating barriers.

mod coupling;
mod dynamics;
mod params;
mod state;

pub use coupling::{sample_couplings, CouplingMatrix};
pub use dynamics::{
    apply_barrier, micro_update, run_realization, time_step, RealizationOutcome, RealizationSeed,
};
pub use params::{FTable, ModelParams, Selection, Spin};
pub use state::{conditional_distribution, init_state, EnsembleState, LocalDistribution};
