//! Parameter sets of the published figures.
//!
//! Couplings are defined at the reference size `N = 1000`. At another size
//! the mean coupling keeps its `J0·N` value and the spread keeps its
//! `σ_J·√N` value, so every point stays in the same regime relative to
//! `J_c = 3/N` and `σ = 3/√N`.

use std::fmt;
use std::str::FromStr;

use super::sweep::{linspace, FMode, SweepSpec, SweepVariable};
use crate::potts_core::{FTable, ModelParams, Selection};

pub const REFERENCE_N: usize = 1000;
pub const REFERENCE_K: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// ND distribution, J0 = 0.0001, σ_J = 0.001.
    Fig1,
    /// ND distribution, J0 = 0.02, σ_J = 0.001.
    Fig2,
    /// Mean ND and semivariance vs J0 across J_c, σ_J = 0.001, f ≡ 0.
    Fig3_4,
    /// Mean ND vs J0 over both plateaus, σ_J = 0.001, f ≡ 0.
    Fig5,
    /// Mean ND and semivariance vs J0 with σ_J = 0.2, f ≡ 0.
    Fig6_7,
    /// Mean ND and semivariance vs J0·N in [0, 40] under the constant damping field.
    Fig8_9,
}

impl Figure {
    pub const ALL: [Figure; 6] = [
        Figure::Fig1,
        Figure::Fig2,
        Figure::Fig3_4,
        Figure::Fig5,
        Figure::Fig6_7,
        Figure::Fig8_9,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3_4 => "fig3-4",
            Figure::Fig5 => "fig5",
            Figure::Fig6_7 => "fig6-7",
            Figure::Fig8_9 => "fig8-9",
        }
    }

    /// `(J0·N values, σ_J at N = 1000, f table)`.
    fn definition(self) -> (Vec<f64>, f64, FTable) {
        match self {
            Figure::Fig1 => (vec![0.1], 0.001, FTable::zero()),
            Figure::Fig2 => (vec![20.0], 0.001, FTable::zero()),
            Figure::Fig3_4 => (linspace(0.0, 10.0, 21), 0.001, FTable::zero()),
            Figure::Fig5 => (linspace(0.0, 20.0, 21), 0.001, FTable::zero()),
            Figure::Fig6_7 => (linspace(0.0, 40.0, 21), 0.2, FTable::zero()),
            Figure::Fig8_9 => (linspace(0.0, 40.0, 20), 0.001, FTable::damped()),
        }
    }

    /// Sweep over `J0` for `n_firms` firms and `k` realizations.
    pub fn spec(self, n_firms: usize, k: usize, master_seed: u64, selection: Selection) -> SweepSpec {
        let (j0n, sigma_ref, f_table) = self.definition();
        let n = n_firms as f64;
        let sigma_j = sigma_ref * (REFERENCE_N as f64 / n).sqrt();
        let f_mode = if f_table.is_zero() {
            FMode::Zero
        } else {
            FMode::ConstantTable
        };
        let values: Vec<f64> = j0n.iter().map(|x| x / n).collect();
        SweepSpec {
            base: ModelParams {
                n_firms,
                r_max: 7,
                j0: values[0],
                sigma_j,
                f_table,
                steps: 8,
                selection,
            },
            sweep_variable: SweepVariable::J0,
            values,
            k_realizations: k,
            master_seed,
            f_mode,
        }
    }

    /// The figure's parameters at full scale (N = 1000, K = 1000).
    pub fn reference_spec(self, master_seed: u64) -> SweepSpec {
        self.spec(REFERENCE_N, REFERENCE_K, master_seed, Selection::WithReplacement)
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Figure::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| {
            format!("unknown figure `{s}` (expected fig1, fig2, fig3-4, fig5, fig6-7 or fig8-9)")
        })
    }
}
