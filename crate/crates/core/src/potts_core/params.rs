use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rating-change variable of a firm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Down,
    Stay,
    Up,
}

impl Spin {
    pub const ALL: [Spin; 3] = [Spin::Down, Spin::Stay, Spin::Up];

    /// Position of the spin in per-spin arrays (`Down=0, Stay=1, Up=2`).
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Spin::Down => 0,
            Spin::Stay => 1,
            Spin::Up => 2,
        }
    }

    #[inline]
    pub fn from_index(idx: usize) -> Spin {
        Spin::ALL[idx]
    }

    /// Signed rating increment, -1, 0 or +1.
    #[inline]
    pub fn value(self) -> i32 {
        self.index() as i32 - 1
    }

    pub fn from_value(v: i32) -> Option<Spin> {
        match v {
            -1 => Some(Spin::Down),
            0 => Some(Spin::Stay),
            1 => Some(Spin::Up),
            _ => None,
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.value())
    }
}

/// Individual-dynamics term `f(s)`, independent of the rating.
///
/// Stored as the Boltzmann weights `exp(f(s))` so that a weight of exactly zero
/// (a forbidden move) survives serialization; the logarithms are cached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FTableWeights", into = "FTableWeights")]
pub struct FTable {
    weights: [f64; 3],
    log_weights: [f64; 3],
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct FTableWeights {
    down: f64,
    stay: f64,
    up: f64,
}

impl TryFrom<FTableWeights> for FTable {
    type Error = Error;

    fn try_from(w: FTableWeights) -> Result<Self> {
        FTable::from_weights(w.down, w.stay, w.up)
    }
}

impl From<FTable> for FTableWeights {
    fn from(t: FTable) -> Self {
        FTableWeights {
            down: t.weights[0],
            stay: t.weights[1],
            up: t.weights[2],
        }
    }
}

impl FTable {
    /// `f ≡ 0`: no individual preference.
    pub fn zero() -> Self {
        FTable {
            weights: [1.0; 3],
            log_weights: [0.0; 3],
        }
    }

    /// Damping field with `exp(f) = (0.15, 0.75, 0.10)` for (down, stay, up).
    pub fn damped() -> Self {
        FTable::from_weights(0.15, 0.75, 0.10).expect("valid constant table")
    }

    /// Builds the table from `exp(f(-1)), exp(f(0)), exp(f(+1))`. Weights must be
    /// finite and non-negative with at least one strictly positive.
    pub fn from_weights(down: f64, stay: f64, up: f64) -> Result<Self> {
        let weights = [down, stay, up];
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::param(
                "f_table",
                format!("weights must be finite and >= 0, got {weights:?}"),
            ));
        }
        if weights.iter().all(|w| *w == 0.0) {
            return Err(Error::param("f_table", "at least one weight must be positive"));
        }
        Ok(FTable {
            weights,
            log_weights: weights.map(f64::ln),
        })
    }

    /// `f(s)`; `-inf` for a zero weight.
    #[inline]
    pub fn f(&self, s: Spin) -> f64 {
        self.log_weights[s.index()]
    }

    pub fn log_weights(&self) -> [f64; 3] {
        self.log_weights
    }

    pub fn weights(&self) -> [f64; 3] {
        self.weights
    }

    pub fn is_zero(&self) -> bool {
        self.log_weights == [0.0; 3]
    }
}

impl Default for FTable {
    fn default() -> Self {
        FTable::zero()
    }
}

/// How firms are picked for the `N` micro-updates of one time step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    /// `N` independent uniform draws; a firm may be updated 0, 1 or more times.
    #[default]
    WithReplacement,
    /// A fresh random permutation; every firm is updated exactly once.
    Permutation,
}

/// Scalar inputs of one model realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n_firms: usize,
    /// Highest rating; ratings live in `0..=r_max`.
    pub r_max: u32,
    /// Mean coupling.
    pub j0: f64,
    /// Coupling standard deviation.
    pub sigma_j: f64,
    pub f_table: FTable,
    /// Number of time steps (each is `n_firms` micro-updates).
    pub steps: u32,
    #[serde(default)]
    pub selection: Selection,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            n_firms: 1000,
            r_max: 7,
            j0: 0.0,
            sigma_j: 0.0,
            f_table: FTable::zero(),
            steps: 8,
            selection: Selection::WithReplacement,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_firms == 0 {
            return Err(Error::param("n_firms", "must be >= 1"));
        }
        if self.r_max == 0 {
            return Err(Error::param("r_max", "must be >= 1"));
        }
        if self.steps == 0 {
            return Err(Error::param("steps", "must be >= 1"));
        }
        if !self.j0.is_finite() {
            return Err(Error::param("j0", format!("must be finite, got {}", self.j0)));
        }
        if !self.sigma_j.is_finite() || self.sigma_j < 0.0 {
            return Err(Error::param(
                "sigma_j",
                format!("must be finite and >= 0, got {}", self.sigma_j),
            ));
        }
        Ok(())
    }

    /// `J0 * N`, the effective mean-field coupling.
    pub fn j0n(&self) -> f64 {
        self.j0 * self.n_firms as f64
    }
}
