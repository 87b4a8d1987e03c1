use std::fmt;

use serde::{Deserialize, Serialize};

use crate::potts_core::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Paramagnetic,
    Ferromagnetic,
    SpinGlass,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Paramagnetic => "paramagnetic",
            Regime::Ferromagnetic => "ferromagnetic",
            Regime::SpinGlass => "spin_glass",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePrediction {
    /// Critical mean coupling `3/N`.
    pub j_critical: f64,
    /// Coupling spread `3/√N` at and above which the spin-glass phase takes over.
    pub sigma_glass: f64,
    pub regime: Regime,
}

pub fn phase_predict(params: &ModelParams) -> PhasePrediction {
    let n = params.n_firms as f64;
    let j_critical = 3.0 / n;
    let sigma_glass = 3.0 / n.sqrt();
    let regime = if params.sigma_j >= sigma_glass {
        Regime::SpinGlass
    } else if params.j0 > j_critical {
        Regime::Ferromagnetic
    } else {
        Regime::Paramagnetic
    };
    PhasePrediction {
        j_critical,
        sigma_glass,
        regime,
    }
}
