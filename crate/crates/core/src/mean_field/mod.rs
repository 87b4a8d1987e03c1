//! Mean-field theory of the rating dynamics and its exact single-firm oracle.

mod fixed_point;
mod oracle;
mod phase;
mod polynomial;

pub use fixed_point::{
    critical_beta, jacobian, mf_fixed_points, mf_fixed_points_with, mf_map, spectral_radius,
    symmetric_point_radius, BetaScaling, FixedPointConfig, FixedPointSearch, MeanFieldPoint, NonConvergence,
};
pub use oracle::{nd_ferromagnetic_average, nd_oracle, RatingChain};
pub use phase::{phase_predict, PhasePrediction, Regime};
pub use polynomial::{deviation_grid, nd_ferromagnetic_average_polynomial, nd_polynomial, DeviationPoint};
