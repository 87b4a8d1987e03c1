//! Command-line front end.
//!
//! Exit codes: 0 success, 1 configuration error, 2 runtime failure. Data goes
//! to `--out` or standard output; progress goes to standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use super::emit::{emit, write_csv, write_json, Format};
use super::presets::Figure;
use super::sweep::{linspace, run_sweep_with_progress, FMode, SweepResult, SweepSpec, SweepVariable};
use crate::error::Error;
use crate::mean_field::{
    deviation_grid, mf_fixed_points, nd_oracle, nd_polynomial, BetaScaling, FixedPointSearch,
};
use crate::potts_core::{FTable, ModelParams, Selection};

#[derive(Debug, Parser)]
#[command(name = "potts-credit", version, about = "Firm-rating Potts-glass simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one ensemble of K realizations.
    Run {
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        j0: f64,
        #[arg(long = "sigma-j", default_value_t = 0.0)]
        sigma_j: f64,
    },
    /// Sweep J0 (or sigma_j) and run one ensemble per value.
    Sweep {
        #[command(flatten)]
        sim: SimArgs,
        #[command(flatten)]
        range: SweepArgs,
    },
    /// Mean-field fixed points and predicted default fraction over a J0 range.
    Meanfield {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        steps: u32,
        #[arg(long, default_value_t = 7)]
        rmax: u32,
        #[arg(long = "j0-min", default_value_t = 0.0, allow_negative_numbers = true)]
        j0_min: f64,
        #[arg(long = "j0-max", default_value_t = 0.01, allow_negative_numbers = true)]
        j0_max: f64,
        #[arg(long = "j0-points", default_value_t = 21)]
        j0_points: usize,
        #[arg(long = "beta-scaling", value_enum, default_value_t = BetaScalingArg::J0n)]
        beta_scaling: BetaScalingArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact single-firm default fraction and the closed-form polynomial.
    ///
    /// `--p` is the probability of a rating increase, `--q` of a decrease.
    /// Without `--p/--q` the polynomial-vs-oracle deviation grid is emitted.
    Oracle {
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = 8)]
        steps: u32,
        #[arg(long, default_value_t = 7)]
        rmax: u32,
        #[arg(long = "grid-step", default_value_t = 0.1)]
        grid_step: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Preset sweeps with the published figure parameters.
    Reproduce {
        #[arg(value_parser = parse_figure)]
        figure: Figure,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SelectionArg::WithReplacement)]
        selection: SelectionArg,
        #[arg(long)]
        threads: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse_figure(s: &str) -> Result<Figure, String> {
    s.parse()
}

#[derive(Debug, Args)]
struct SimArgs {
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    k: usize,
    #[arg(long, default_value_t = 8)]
    steps: u32,
    #[arg(long, default_value_t = 7)]
    rmax: u32,
    #[arg(long = "f-mode", value_enum, default_value_t = FModeArg::Zero)]
    f_mode: FModeArg,
    /// exp(f(-1)); only with --f-mode constant_table (default 0.15).
    #[arg(long = "f-down")]
    f_down: Option<f64>,
    /// exp(f(0)); default 0.75.
    #[arg(long = "f-stay")]
    f_stay: Option<f64>,
    /// exp(f(+1)); default 0.10.
    #[arg(long = "f-up")]
    f_up: Option<f64>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SelectionArg::WithReplacement)]
    selection: SelectionArg,
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Fixed sigma_j for a J0 sweep.
    #[arg(long = "sigma-j", default_value_t = 0.001)]
    sigma_j: f64,
    /// Fixed J0 for a sigma_j sweep.
    #[arg(long, allow_negative_numbers = true)]
    j0: Option<f64>,
    #[arg(long = "j0-min", allow_negative_numbers = true)]
    j0_min: Option<f64>,
    #[arg(long = "j0-max", allow_negative_numbers = true)]
    j0_max: Option<f64>,
    #[arg(long = "j0-points")]
    j0_points: Option<usize>,
    #[arg(long = "sigma-j-min")]
    sigma_j_min: Option<f64>,
    #[arg(long = "sigma-j-max")]
    sigma_j_max: Option<f64>,
    #[arg(long = "sigma-j-points")]
    sigma_j_points: Option<usize>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FModeArg {
    Zero,
    #[value(name = "constant_table")]
    ConstantTable,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SelectionArg {
    #[value(name = "with_replacement")]
    WithReplacement,
    Permutation,
}

impl From<SelectionArg> for Selection {
    fn from(s: SelectionArg) -> Self {
        match s {
            SelectionArg::WithReplacement => Selection::WithReplacement,
            SelectionArg::Permutation => Selection::Permutation,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BetaScalingArg {
    J0n,
    Bare,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParam { .. } | Error::Precondition(_) => Failure::Config(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

/// Parses `argv` (program name first) and runs the subcommand.
pub fn cli<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let parsed = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    1
                }
            };
        }
    };
    match dispatch(parsed.command, stdout, stderr) {
        Ok(()) => 0,
        Err(Failure::Config(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Run { sim, j0, sigma_j } => {
            let base = sim.params(j0, sigma_j)?;
            let spec = SweepSpec {
                values: vec![j0],
                sweep_variable: SweepVariable::J0,
                k_realizations: sim.k,
                master_seed: sim.seed,
                f_mode: sim.f_mode(),
                base,
            };
            simulate(&spec, sim.threads, &sim.output, stdout, stderr)
        }
        Command::Sweep { sim, range } => {
            let spec = sweep_spec(&sim, &range)?;
            simulate(&spec, sim.threads, &sim.output, stdout, stderr)
        }
        Command::Meanfield {
            n,
            steps,
            rmax,
            j0_min,
            j0_max,
            j0_points,
            beta_scaling,
            output,
        } => {
            let j0s = range("j0", j0_min, j0_max, j0_points)?;
            if n == 0 || steps == 0 || rmax == 0 {
                return Err(Failure::Config("--n, --steps and --rmax must be >= 1".into()));
            }
            let scaling = match beta_scaling {
                BetaScalingArg::J0n => BetaScaling::J0n,
                BetaScalingArg::Bare => BetaScaling::Bare,
            };
            let mut rows = Vec::with_capacity(j0s.len());
            for j0 in j0s {
                let beta = scaling.beta(j0, n);
                if beta.is_nan() || beta < 0.0 {
                    return Err(Failure::Config(format!(
                        "--j0-min: effective coupling {beta} must be >= 0"
                    )));
                }
                let search = mf_fixed_points(beta);
                rows.push(MeanFieldRow {
                    j0,
                    beta,
                    predicted_nd_frac: search.predicted_nd_frac(steps, rmax),
                    search,
                });
            }
            let report = MeanFieldReport {
                n_firms: n,
                steps,
                r_max: rmax,
                beta_scaling: scaling,
                rows,
            };
            match Format::from(output.format) {
                Format::Json => write_out(&output, stdout, |w| write_json(&report, w)),
                Format::Csv => write_out(&output, stdout, |w| report.write_csv(w)),
            }
        }
        Command::Oracle {
            p,
            q,
            steps,
            rmax,
            grid_step,
            output,
        } => match (p, q) {
            (Some(p_up), Some(q_down)) => {
                let oracle = nd_oracle(p_up, q_down, steps, rmax)?;
                let polynomial = (steps == 8 && rmax == 7).then(|| nd_polynomial(q_down, p_up));
                let report = OracleReport {
                    p_up,
                    q_down,
                    steps,
                    r_max: rmax,
                    oracle,
                    polynomial,
                    deviation: polynomial.map(|x| x - oracle),
                };
                match Format::from(output.format) {
                    Format::Json => write_out(&output, stdout, |w| write_json(&report, w)),
                    Format::Csv => write_out(&output, stdout, |w| csv_rows(w, [report])),
                }
            }
            (None, None) => {
                if !(grid_step > 0.0 && grid_step <= 1.0) {
                    return Err(Failure::Config(format!(
                        "--grid-step must be in (0, 1], got {grid_step}"
                    )));
                }
                let grid = deviation_grid(grid_step)?;
                let max = grid.iter().map(|d| d.deviation.abs()).fold(0.0, f64::max);
                let _ = writeln!(stderr, "max |polynomial - oracle| on grid: {max:.6}");
                match Format::from(output.format) {
                    Format::Json => write_out(&output, stdout, |w| write_json(&grid, w)),
                    Format::Csv => write_out(&output, stdout, |w| csv_rows(w, grid)),
                }
            }
            _ => Err(Failure::Config("--p and --q must be given together".into())),
        },
        Command::Reproduce {
            figure,
            n,
            k,
            seed,
            selection,
            threads,
            output,
        } => {
            if n == 0 || k == 0 {
                return Err(Failure::Config("--n and --k must be >= 1".into()));
            }
            let spec = figure.spec(n, k, seed, selection.into());
            simulate(&spec, threads, &output, stdout, stderr)
        }
    }
}

impl SimArgs {
    fn f_mode(&self) -> FMode {
        match self.f_mode {
            FModeArg::Zero => FMode::Zero,
            FModeArg::ConstantTable => FMode::ConstantTable,
        }
    }

    fn f_table(&self) -> CliResult<FTable> {
        match self.f_mode {
            FModeArg::Zero => {
                let flag = [
                    ("--f-down", self.f_down),
                    ("--f-stay", self.f_stay),
                    ("--f-up", self.f_up),
                ]
                .into_iter()
                .find(|(_, v)| v.is_some());
                if let Some((name, _)) = flag {
                    return Err(Failure::Config(format!(
                        "{name} requires --f-mode constant_table"
                    )));
                }
                Ok(FTable::zero())
            }
            FModeArg::ConstantTable => {
                let d = FTable::damped().weights();
                Ok(FTable::from_weights(
                    self.f_down.unwrap_or(d[0]),
                    self.f_stay.unwrap_or(d[1]),
                    self.f_up.unwrap_or(d[2]),
                )?)
            }
        }
    }

    fn params(&self, j0: f64, sigma_j: f64) -> CliResult<ModelParams> {
        let p = ModelParams {
            n_firms: self.n,
            r_max: self.rmax,
            j0,
            sigma_j,
            f_table: self.f_table()?,
            steps: self.steps,
            selection: self.selection.into(),
        };
        p.validate().map_err(|e| Failure::Config(flag_hint(e)))?;
        if self.k == 0 {
            return Err(Failure::Config("--k must be >= 1".into()));
        }
        if self.threads == Some(0) {
            return Err(Failure::Config("--threads must be >= 1".into()));
        }
        Ok(p)
    }
}

fn flag_hint(e: Error) -> String {
    let flag = match &e {
        Error::InvalidParam { name, .. } => match *name {
            "n_firms" => "--n",
            "r_max" => "--rmax",
            "steps" => "--steps",
            "j0" => "--j0",
            "sigma_j" => "--sigma-j",
            "f_table" => "--f-down/--f-stay/--f-up",
            _ => "",
        },
        _ => "",
    };
    if flag.is_empty() {
        e.to_string()
    } else {
        format!("{flag}: {e}")
    }
}

fn range(name: &str, min: f64, max: f64, points: usize) -> CliResult<Vec<f64>> {
    if !(min.is_finite() && max.is_finite()) {
        return Err(Failure::Config(format!(
            "--{name}-min/--{name}-max must be finite"
        )));
    }
    if points == 0 {
        return Err(Failure::Config(format!("--{name}-points must be >= 1")));
    }
    if max < min || (points > 1 && max == min) {
        return Err(Failure::Config(format!(
            "--{name}-max ({max}) must be greater than --{name}-min ({min})"
        )));
    }
    Ok(linspace(min, max, points))
}

fn sweep_spec(sim: &SimArgs, r: &SweepArgs) -> CliResult<SweepSpec> {
    let j0_given = r.j0_min.is_some() || r.j0_max.is_some() || r.j0_points.is_some();
    let sigma_given = r.sigma_j_min.is_some() || r.sigma_j_max.is_some() || r.sigma_j_points.is_some();
    let (variable, values, base) = match (j0_given, sigma_given) {
        (true, true) => {
            return Err(Failure::Config(
                "--j0-min/--j0-max/--j0-points cannot be combined with --sigma-j-min/--sigma-j-max/--sigma-j-points"
                    .into(),
            ))
        }
        (_, false) => {
            if r.j0.is_some() {
                return Err(Failure::Config("--j0 applies only to a sigma_j sweep; use --j0-min/--j0-max".into()));
            }
            let values = range(
                "j0",
                r.j0_min.unwrap_or(0.0),
                r.j0_max.unwrap_or(0.01),
                r.j0_points.unwrap_or(21),
            )?;
            let base = sim.params(values[0], r.sigma_j)?;
            (SweepVariable::J0, values, base)
        }
        (false, true) => {
            let values = range(
                "sigma-j",
                r.sigma_j_min.unwrap_or(0.0),
                r.sigma_j_max.unwrap_or(0.2),
                r.sigma_j_points.unwrap_or(21),
            )?;
            if values[0] < 0.0 {
                return Err(Failure::Config("--sigma-j-min must be >= 0".into()));
            }
            let base = sim.params(r.j0.unwrap_or(0.0), values[0])?;
            (SweepVariable::SigmaJ, values, base)
        }
    };
    let spec = SweepSpec {
        base,
        sweep_variable: variable,
        values,
        k_realizations: sim.k,
        master_seed: sim.seed,
        f_mode: sim.f_mode(),
    };
    spec.validate()?;
    Ok(spec)
}

fn simulate(
    spec: &SweepSpec,
    threads: Option<usize>,
    output: &OutputArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> CliResult {
    spec.validate()?;
    let total = spec.values.len();
    let n = spec.base.n_firms;
    let result: SweepResult = run_sweep_with_progress(spec, threads, |i, p| {
        let line = match (&p.stats, &p.error) {
            (Some(s), _) => format!(
                "[{}/{total}] {}={:.6} mean_nd/N={:.4} semivar+={}",
                i + 1,
                spec.sweep_variable,
                p.value,
                s.mean_nd / n as f64,
                s.semivariance_plus.map_or("-".to_string(), |v| format!("{v:.2}")),
            ),
            (None, Some(e)) => format!(
                "[{}/{total}] {}={} failed: {e}",
                i + 1,
                spec.sweep_variable,
                p.value
            ),
            (None, None) => unreachable!(),
        };
        let _ = writeln!(stderr, "{line}");
    })?;
    let _ = writeln!(stderr, "done in {:.2}s", result.metadata.wall_time_secs);
    if result.points.iter().all(|p| p.error.is_some()) {
        return Err(Failure::Runtime("every sweep value failed".into()));
    }
    let format = Format::from(output.format);
    match &output.out {
        Some(path) => emit(&result, format, path)?,
        None => match format {
            Format::Json => write_json(&result, &mut *stdout)?,
            Format::Csv => write_csv(&result, &mut *stdout)?,
        },
    }
    Ok(())
}

fn write_out(
    output: &OutputArgs,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> crate::Result<()>,
) -> CliResult {
    match &output.out {
        None => Ok(f(stdout)?),
        Some(path) => {
            let io_err = |source| {
                Failure::from(Error::Io {
                    path: path.clone(),
                    source,
                })
            };
            let mut file = std::io::BufWriter::new(std::fs::File::create(path).map_err(io_err)?);
            f(&mut file)?;
            file.flush().map_err(io_err)
        }
    }
}

fn csv_rows<T: Serialize>(w: &mut dyn Write, rows: impl IntoIterator<Item = T>) -> crate::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct OracleReport {
    p_up: f64,
    q_down: f64,
    steps: u32,
    r_max: u32,
    oracle: f64,
    polynomial: Option<f64>,
    deviation: Option<f64>,
}

#[derive(Debug, Serialize)]
struct MeanFieldRow {
    j0: f64,
    beta: f64,
    predicted_nd_frac: Option<f64>,
    search: FixedPointSearch,
}

#[derive(Debug, Serialize)]
struct MeanFieldReport {
    n_firms: usize,
    steps: u32,
    r_max: u32,
    beta_scaling: BetaScaling,
    rows: Vec<MeanFieldRow>,
}

impl MeanFieldReport {
    fn write_csv(&self, w: &mut dyn Write) -> crate::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "j0",
            "beta",
            "p_up",
            "q_down",
            "stable",
            "spectral_radius",
            "point_nd_frac",
            "predicted_nd_frac",
        ])?;
        for row in &self.rows {
            let predicted = row.predicted_nd_frac.map(|v| v.to_string()).unwrap_or_default();
            for p in &row.search.points {
                out.write_record([
                    row.j0.to_string(),
                    row.beta.to_string(),
                    p.p_up.to_string(),
                    p.q_down.to_string(),
                    p.stable.to_string(),
                    p.spectral_radius.to_string(),
                    p.predicted_nd_frac(self.steps, self.r_max).to_string(),
                    predicted.clone(),
                ])?;
            }
        }
        out.flush().map_err(|e| Error::Csv(e.into()))?;
        Ok(())
    }
}
