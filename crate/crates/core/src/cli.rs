//! Command-line front end: design summaries and CSV figure data.
//!
//! Exit codes: 0 success, 2 usage error, 3 numerical failure,
//! 4 configuration or budget error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{c_max, naive_design, naive_design_report, omega, optimize_design, solve_beta_hat};
use crate::compander::SourceModel;
use crate::error::Error;
use crate::format::fmt_g;
use crate::simulator::{sweep, DesignChoice, SimMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "zerodelay", version, about = "Zero-delay compander design and energy-distortion bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the optimized and naive design constants as key=value lines.
    Design(DesignArgs),
    /// CSV of the normalization constant over a grid of c.
    BetaCurve(CurveArgs),
    /// CSV of the distortion coefficient over a grid of c.
    OmegaCurve(CurveArgs),
    /// CSV of the optimized and naive point densities.
    Density(DensityArgs),
    /// CSV of distortion bounds (and optional simulation) over an ENR grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceFlag {
    Gaussian,
    Uniform,
}

impl From<SourceFlag> for SourceModel {
    fn from(flag: SourceFlag) -> Self {
        match flag {
            SourceFlag::Gaussian => SourceModel::GaussianStdNormal,
            SourceFlag::Uniform => SourceModel::UniformSymmetricUnit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DesignFlag {
    Optimized,
    Naive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeFlag {
    Analytic,
    Full,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[arg(long, value_enum, default_value = "gaussian")]
    pub source: SourceFlag,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[arg(long, value_enum, default_value = "gaussian")]
    pub source: SourceFlag,
    #[arg(long, default_value_t = 0.05)]
    pub c_min: f64,
    /// Defaults to the largest feasible c for the source.
    #[arg(long)]
    pub c_max: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub c_points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long, value_enum, default_value = "gaussian")]
    pub source: SourceFlag,
    /// Defaults to -8 (Gaussian) or -0.5 (uniform).
    #[arg(long, allow_hyphen_values = true)]
    pub x_min: Option<f64>,
    /// Defaults to 8 (Gaussian) or 0.5 (uniform).
    #[arg(long, allow_hyphen_values = true)]
    pub x_max: Option<f64>,
    #[arg(long, default_value_t = 1601)]
    pub x_points: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value = "gaussian")]
    pub source: SourceFlag,
    #[arg(long, value_enum, default_value = "optimized")]
    pub design: DesignFlag,
    #[arg(long, default_value_t = 10.0)]
    pub gamma_min: f64,
    #[arg(long, default_value_t = 180.0)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = 10.0)]
    pub gamma_step: f64,
    /// Monte Carlo samples per row; 0 leaves the simulation columns empty.
    #[arg(long, default_value_t = 0)]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "analytic")]
    pub mode: ModeFlag,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Library(Error::Configuration(_)) => EXIT_CONFIG,
            CliError::Library(_) => EXIT_NUMERICAL,
            CliError::Io(_) => EXIT_CONFIG,
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("zerodelay: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command, writing to its `--out` file or stdout.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let out = match &cli.command {
        Command::Design(a) => &a.out,
        Command::BetaCurve(a) | Command::OmegaCurve(a) => &a.out,
        Command::Density(a) => &a.out,
        Command::Sweep(a) => &a.out,
    };
    // compute everything before touching the output so failures leave no
    // partial file behind
    let text = render(&cli.command)?;
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(text.as_bytes())?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()?;
        }
    }
    Ok(())
}

/// The full output of a command as text.
pub fn render(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Design(a) => cmd_design(a.source.into()),
        Command::BetaCurve(a) => {
            let grid = c_grid(a)?;
            let source = a.source.into();
            curve("c,beta_hat", &grid, |c| solve_beta_hat(source, c))
        }
        Command::OmegaCurve(a) => {
            let grid = c_grid(a)?;
            let source = a.source.into();
            curve("c,omega", &grid, |c| omega(source, c))
        }
        Command::Density(a) => cmd_density(a),
        Command::Sweep(a) => cmd_sweep(a),
    }
}

fn cmd_design(source: SourceModel) -> Result<String, CliError> {
    let r = naive_design_report(source)?;
    let lines = [
        ("c0", r.c_max),
        ("c_opt", r.c_opt),
        ("beta_hat_opt", r.beta_hat_opt),
        ("omega_opt", r.omega_opt),
        ("dispersion", r.dispersion_lower_bound),
        ("density_second_moment", r.density_second_moment),
        ("naive_c", r.naive_c),
        ("naive_omega", r.naive_omega),
        ("naive_dispersion", r.naive_dispersion),
        ("gap_db", r.gap_db),
    ];
    let mut s = format!("source={}\n", source.name());
    for (key, value) in lines {
        s.push_str(&format!("{key}={}\n", fmt_g(value)));
    }
    Ok(s)
}

/// Evenly spaced points with exact endpoints; a grid symmetric about zero
/// comes out exactly antisymmetric.
fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let m = (points - 1) as f64;
    (0..points)
        .map(|i| (lo * (m - i as f64) + hi * i as f64) / m)
        .collect()
}

fn c_grid(a: &CurveArgs) -> Result<Vec<f64>, CliError> {
    let limit = c_max(a.source.into())?;
    let hi = a.c_max.unwrap_or(limit);
    if !(a.c_min > 0.0 && a.c_min < hi) {
        return Err(CliError::Usage(format!("need 0 < c-min < c-max, got {} and {hi}", a.c_min)));
    }
    if hi > limit * (1.0 + 1e-9) {
        return Err(CliError::Usage(format!("c-max {hi} exceeds the largest feasible c {limit}")));
    }
    if a.c_points < 2 {
        return Err(CliError::Usage("c-points must be at least 2".into()));
    }
    Ok(linspace(a.c_min, hi.min(limit), a.c_points))
}

fn curve<F>(header: &str, grid: &[f64], f: F) -> Result<String, CliError>
where
    F: Fn(f64) -> crate::Result<f64> + Sync,
{
    use rayon::prelude::*;
    let values = grid.par_iter().map(|&c| f(c)).collect::<crate::Result<Vec<f64>>>()?;
    let mut s = format!("{header}\n");
    for (c, v) in grid.iter().zip(values) {
        s.push_str(&format!("{},{}\n", fmt_g(*c), fmt_g(v)));
    }
    Ok(s)
}

fn cmd_density(a: &DensityArgs) -> Result<String, CliError> {
    let source: SourceModel = a.source.into();
    let (lo_default, hi_default) = match source {
        SourceModel::GaussianStdNormal => (-8.0, 8.0),
        SourceModel::UniformSymmetricUnit => (-0.5, 0.5),
    };
    let lo = a.x_min.unwrap_or(lo_default);
    let hi = a.x_max.unwrap_or(hi_default);
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(CliError::Usage(format!("need finite x-min < x-max, got {lo} and {hi}")));
    }
    if a.x_points < 2 {
        return Err(CliError::Usage("x-points must be at least 2".into()));
    }
    let optimized = optimize_design(source)?;
    let naive = naive_design(source)?;
    let mut s = String::from("x,lambda_optimized,lambda_naive\n");
    for x in linspace(lo, hi, a.x_points) {
        s.push_str(&format!(
            "{},{},{}\n",
            fmt_g(x),
            fmt_g(optimized.density.evaluate(x)),
            fmt_g(naive.density.evaluate(x))
        ));
    }
    Ok(s)
}

/// γ grid from min to max inclusive; the last point is kept when it lands
/// within a millionth of a step of `max`.
pub fn gamma_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(min > 0.0 && min.is_finite() && max.is_finite() && min <= max && step > 0.0) {
        return Err(CliError::Usage(format!(
            "need 0 < gamma-min <= gamma-max and gamma-step > 0, got {min}, {max}, {step}"
        )));
    }
    let count = ((max - min) / step + 1e-6).floor() as usize + 1;
    if count > 100_000 {
        return Err(CliError::Usage(format!("gamma grid has {count} points")));
    }
    Ok((0..count).map(|i| min + step * i as f64).collect())
}

pub const SWEEP_HEADER: &str =
    "gamma,n_levels,bound_optimized,bound_naive,knopp_numeric,knopp_analytic,sim_mse,sim_stderr,pe_exact,pe_bound,neg_ln_D";

fn cmd_sweep(a: &SweepArgs) -> Result<String, CliError> {
    let gammas = gamma_grid(a.gamma_min, a.gamma_max, a.gamma_step)?;
    let choice = match a.design {
        DesignFlag::Optimized => DesignChoice::Optimized,
        DesignFlag::Naive => DesignChoice::Naive,
    };
    let mode = match a.mode {
        ModeFlag::Analytic => SimMode::AnalyticOutage,
        ModeFlag::Full => SimMode::FullChannel,
    };
    let records = sweep(a.source.into(), choice, &gammas, a.samples, a.seed, mode)?;
    let opt = |v: Option<f64>| v.map(fmt_g).unwrap_or_default();
    let mut s = format!("{SWEEP_HEADER}\n");
    for r in &records {
        let fields = [
            fmt_g(r.gamma),
            r.n_levels.to_string(),
            fmt_g(r.bound_optimized),
            fmt_g(r.bound_naive),
            opt(r.knopp_numeric),
            opt(r.knopp_analytic),
            opt(r.sim_mse),
            opt(r.sim_stderr),
            fmt_g(r.pe_exact),
            opt(r.pe_bound),
            fmt_g(r.neg_ln_bound(choice)),
        ];
        s.push_str(&fields.join(","));
        s.push('\n');
    }
    Ok(s)
}
