//! Seeded parallel ensembles, parameter sweeps, output files and the CLI.

mod cli;
mod emit;
mod ensemble;
mod presets;
mod sweep;

pub use cli::cli;
pub use emit::{emit, read_json, write_csv, write_json, Format, CSV_HEADER};
pub use ensemble::{build_pool, derive_seed, run_ensemble, with_threads};
pub use presets::{Figure, REFERENCE_K, REFERENCE_N};
pub use sweep::{
    linspace, run_sweep, run_sweep_with_progress, FMode, Metadata, SweepPoint, SweepResult, SweepSpec,
    SweepVariable,
};
