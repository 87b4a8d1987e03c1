use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use super::sweep::SweepResult;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    Csv,
    #[default]
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected csv or json)")),
        }
    }
}

pub const CSV_HEADER: [&str; 9] = [
    "sweep_value",
    "mean_nd",
    "mean_nd_frac",
    "semivar_plus",
    "regime",
    "k",
    "n",
    "steps",
    "seed",
];

/// One row per sweep value; numeric cells of a failed value are left empty.
pub fn write_csv<W: Write>(result: &SweepResult, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    let spec = &result.spec;
    let n = spec.base.n_firms;
    for p in &result.points {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        out.write_record([
            p.value.to_string(),
            opt(p.stats.as_ref().map(|s| s.mean_nd)),
            opt(p.mean_nd_frac(n)),
            opt(p.stats.as_ref().and_then(|s| s.semivariance_plus)),
            p.phase.regime.to_string(),
            spec.k_realizations.to_string(),
            n.to_string(),
            spec.base.steps.to_string(),
            spec.master_seed.to_string(),
        ])?;
    }
    out.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(value: &T, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w).map_err(|e| Error::Json(serde_json::Error::io(e)))?;
    Ok(())
}

pub fn read_json(path: &Path) -> Result<SweepResult> {
    let f = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(serde_json::from_reader(std::io::BufReader::new(f))?)
}

/// Writes `result` to `path` in `format`.
pub fn emit(result: &SweepResult, format: Format, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let f = File::create(path).map_err(io_err)?;
    let mut w = BufWriter::new(f);
    let res = match format {
        Format::Csv => write_csv(result, &mut w),
        Format::Json => write_json(result, &mut w),
    };
    // surface write failures with the path attached
    res.map_err(|e| match e {
        Error::Json(j) if j.is_io() => io_err(std::io::Error::other(j)),
        other => other,
    })?;
    w.flush().map_err(io_err)
}
