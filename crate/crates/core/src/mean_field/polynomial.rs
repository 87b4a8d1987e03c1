use serde::{Deserialize, Serialize};

use super::oracle::nd_oracle;
use crate::error::Result;

/// Closed-form default fraction after 8 steps with 7 starting classes.
///
/// Note the argument roles: the first argument is the probability of a rating
/// *decrease* and the second of an *increase* (the polynomial is 1 at
/// `(1, 0)` and 0 at `(0, 1)`). Pass `(q_down, p_up)` when feeding it
/// mean-field solutions. Only the anchor points are exact; [`deviation_grid`]
/// maps the difference to [`nd_oracle`] elsewhere.
#[rustfmt::skip]
pub fn nd_polynomial(p_down: f64, q_up: f64) -> f64 {
    let (p, q) = (p_down, q_up);
    let bracket = p * q.powi(7)
        + (p - 14.0 * p.powi(2)) * q.powi(6)
        + (12.0 * p.powi(2) + p) * q.powi(5)
        + (70.0 * p.powi(4) - 80.0 * p.powi(3) + 10.0 * p.powi(2) + p) * q.powi(4)
        + (70.0 * p.powi(5) - 120.0 * p.powi(4) + 40.0 * p.powi(3) + 8.0 * p.powi(2) + p) * q.powi(3)
        + (30.0 * p.powi(5) - 60.0 * p.powi(4) + 24.0 * p.powi(3) + 6.0 * p.powi(2) + p) * q.powi(2)
        + (-21.0 * p.powi(7) + 80.0 * p.powi(6) - 102.0 * p.powi(5) + 32.0 * p.powi(4)
            + 12.0 * p.powi(3) + 4.0 * p.powi(2) + p) * q
        - 7.0 * p.powi(8) + 21.0 * p.powi(7) - 24.0 * p.powi(6) + 2.0 * p.powi(5)
        + 8.0 * p.powi(4) + 4.0 * p.powi(3) + 2.0 * p.powi(2) + p;
    bracket / 7.0
}

/// Three-state average with the polynomial standing in for the oracle.
pub fn nd_ferromagnetic_average_polynomial() -> f64 {
    // (p_up, q_down) corners, swapped into (down, up)
    [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]
        .iter()
        .map(|&(p_up, q_down)| nd_polynomial(q_down, p_up))
        .sum::<f64>()
        / 3.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationPoint {
    pub p_up: f64,
    pub q_down: f64,
    pub oracle: f64,
    pub polynomial: f64,
    /// `polynomial - oracle`.
    pub deviation: f64,
}

/// Polynomial vs. oracle (8 steps, 7 classes) on the grid
/// `(i·step, j·step)`, `i + j <= 1/step`.
pub fn deviation_grid(step: f64) -> Result<Vec<DeviationPoint>> {
    let m = (1.0 / step).round() as usize;
    let mut out = Vec::with_capacity((m + 1) * (m + 2) / 2);
    for i in 0..=m {
        for j in 0..=(m - i) {
            let p_up = i as f64 / m as f64;
            let q_down = j as f64 / m as f64;
            let oracle = nd_oracle(p_up, q_down, 8, 7)?;
            let polynomial = nd_polynomial(q_down, p_up);
            out.push(DeviationPoint {
                p_up,
                q_down,
                oracle,
                polynomial,
                deviation: polynomial - oracle,
            });
        }
    }
    Ok(out)
}
