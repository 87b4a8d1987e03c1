//! Firm-rating Potts-glass model.
//!
//! Each firm carries a rating `R` in `0..=r_max` (0 is default, absorbing) and a
//! rating-change spin `s` in {-1, 0, +1}. Spins are resampled one firm at a time
//! from a heat-bath distribution that couples every pair of firms through a
//! symmetric Gaussian matrix `J_ij`; ratings follow the spins.
//!
//! Modules:
//! - [`potts_core`]: model state, coupling sampling, single-site dynamics.
//! - [`mean_field`]: mean-field fixed points, the exact independent-firm
//!   default oracle, the closed-form default polynomial and phase boundaries.
//! - [`risk_stats`]: ensemble statistics (mean defaults, upper semivariance,
//!   histograms).
//! - [`experiment`]: seeded parallel ensembles, sweeps, CSV/JSON output and the CLI.

pub mod error;
pub mod experiment;
pub mod mean_field;
pub mod potts_core;
pub mod risk_stats;

pub use error::{Error, Result};
pub use potts_core::{
    CouplingMatrix, EnsembleState, FTable, LocalDistribution, ModelParams, Selection, Spin,
};
