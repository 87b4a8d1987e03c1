use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::ensemble::{build_pool, run_ensemble};
use crate::error::{Error, Result};
use crate::mean_field::{phase_predict, PhasePrediction};
use crate::potts_core::ModelParams;
use crate::risk_stats::EnsembleStats;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    J0,
    SigmaJ,
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepVariable::J0 => "j0",
            SweepVariable::SigmaJ => "sigma_j",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FMode {
    #[default]
    Zero,
    ConstantTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: ModelParams,
    pub sweep_variable: SweepVariable,
    pub values: Vec<f64>,
    pub k_realizations: usize,
    pub master_seed: u64,
    pub f_mode: FMode,
}

impl SweepSpec {
    /// A one-value sweep at the base parameters.
    pub fn single(base: ModelParams, k_realizations: usize, master_seed: u64) -> Self {
        let f_mode = if base.f_table.is_zero() {
            FMode::Zero
        } else {
            FMode::ConstantTable
        };
        SweepSpec {
            values: vec![base.j0],
            base,
            sweep_variable: SweepVariable::J0,
            k_realizations,
            master_seed,
            f_mode,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.values.is_empty() {
            return Err(Error::param("values", "sweep needs at least one value"));
        }
        if let Some(v) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(Error::param("values", format!("non-finite sweep value {v}")));
        }
        if self.values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("values", "sweep values must be strictly increasing"));
        }
        if self.sweep_variable == SweepVariable::SigmaJ && self.values[0] < 0.0 {
            return Err(Error::param("values", "sigma_j values must be >= 0"));
        }
        if self.k_realizations == 0 {
            return Err(Error::param("k_realizations", "must be >= 1"));
        }
        if self.f_mode == FMode::Zero && !self.base.f_table.is_zero() {
            return Err(Error::param("f_mode", "f_mode=zero with a non-zero f table"));
        }
        Ok(())
    }

    /// Base parameters with the sweep variable set to `value`.
    pub fn params_at(&self, value: f64) -> ModelParams {
        let mut p = self.base.clone();
        match self.sweep_variable {
            SweepVariable::J0 => p.j0 = value,
            SweepVariable::SigmaJ => p.sigma_j = value,
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub j0: f64,
    pub sigma_j: f64,
    pub j0n: f64,
    pub phase: PhasePrediction,
    /// `None` when the value failed; see `error`.
    pub stats: Option<EnsembleStats>,
    pub error: Option<String>,
}

impl SweepPoint {
    pub fn mean_nd_frac(&self, n_firms: usize) -> Option<f64> {
        self.stats.as_ref().map(|s| s.mean_nd / n_firms as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub code_version: String,
    pub wall_time_secs: f64,
    pub failed_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub points: Vec<SweepPoint>,
    /// Sweep value with the lowest mean default count.
    pub argmin_mean_nd: Option<f64>,
    pub metadata: Metadata,
}

pub fn run_sweep(spec: &SweepSpec, threads: Option<usize>) -> Result<SweepResult> {
    run_sweep_with_progress(spec, threads, |_, _| {})
}

/// Runs one ensemble per sweep value. A value whose ensemble fails (e.g. the
/// coupling matrix cannot be allocated) is recorded as failed and the sweep
/// continues.
pub fn run_sweep_with_progress(
    spec: &SweepSpec,
    threads: Option<usize>,
    mut progress: impl FnMut(usize, &SweepPoint),
) -> Result<SweepResult> {
    spec.validate()?;
    let pool = build_pool(threads)?;
    let started = Instant::now();
    let mut points = Vec::with_capacity(spec.values.len());
    for (i, &value) in spec.values.iter().enumerate() {
        let params = spec.params_at(value);
        let ensemble = || run_ensemble(&params, spec.k_realizations, spec.master_seed);
        let outcome = match &pool {
            Some(pool) => pool.install(ensemble),
            None => ensemble(),
        };
        let (stats, error) = match outcome {
            Ok(s) => (Some(s), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let point = SweepPoint {
            value,
            j0: params.j0,
            sigma_j: params.sigma_j,
            j0n: params.j0n(),
            phase: phase_predict(&params),
            stats,
            error,
        };
        progress(i, &point);
        points.push(point);
    }

    let argmin_mean_nd = points
        .iter()
        .filter_map(|p| p.stats.as_ref().map(|s| (p.value, s.mean_nd)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(v, _)| v);
    let failed_values = points
        .iter()
        .filter(|p| p.error.is_some())
        .map(|p| p.value)
        .collect();
    Ok(SweepResult {
        spec: spec.clone(),
        points,
        argmin_mean_nd,
        metadata: Metadata {
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_secs: started.elapsed().as_secs_f64(),
            failed_values,
        },
    })
}

/// `points` evenly spaced values from `min` to `max` inclusive.
pub fn linspace(min: f64, max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![min],
        _ => (0..points)
            .map(|i| min + (max - min) * i as f64 / (points - 1) as f64)
            .collect(),
    }
}
