//! The `czsim` command line.
//!
//! Exit status: 0 on success, 1 on argument errors, 2 on numerical or
//! validation failures. Data goes to standard output (or `--output`);
//! diagnostics and check reports go to standard error.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::Matrix4;

use crate::checks::ideal_checks;
use crate::error::{Error, Result};
use crate::levels::HadamardMode;
use crate::output::{
    montecarlo_json, report_json, reports_json, write_csv, write_summary_csv, MonteCarloEcho,
};
use crate::sweep::{
    run_montecarlo_with, run_single, run_sweep_with, Execution, InputSpec, MonteCarloSpec,
    NoiseParam, NoiseSet, RunConfig, SweepAxis, SweepSpec,
};
use crate::C64;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "czsim", version, about = "Cirac-Zoller CNOT error-model simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the noiseless protocol and print PASS/FAIL per check.
    Ideal,
    /// Evaluate one noise configuration.
    Single(SingleArgs),
    /// Sweep one noise parameter over a range.
    Sweep(SweepArgs),
    /// Scan a two-parameter grid.
    Grid(GridArgs),
    /// Gaussian noise ensemble.
    Montecarlo(MonteCarloArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct NoiseArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub dtheta1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub dpsi1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub dphi1: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub dtheta2: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub dpsi2: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub dphi2: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub dtheta3: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub dpsi3: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub dphi3: f64,
}

impl NoiseArgs {
    pub fn noise(&self) -> NoiseSet {
        NoiseSet::from_values([
            self.dtheta1,
            self.dpsi1,
            self.dphi1,
            self.dtheta2,
            self.dpsi2,
            self.dphi2,
            self.dtheta3,
            self.dpsi3,
            self.dphi3,
        ])
    }
}

/// `mixed`, `basis:K` or `file:PATH`.
#[derive(Debug, Clone, PartialEq)]
pub enum InputArg {
    Mixed,
    Basis(usize),
    File(PathBuf),
}

impl FromStr for InputArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "mixed" {
            return Ok(InputArg::Mixed);
        }
        if let Some(k) = s.strip_prefix("basis:") {
            return match k.parse::<usize>() {
                Ok(k) if k < 4 => Ok(InputArg::Basis(k)),
                _ => Err(format!("basis index must be 0, 1, 2 or 3, got `{k}`")),
            };
        }
        if let Some(p) = s.strip_prefix("file:") {
            if !p.is_empty() {
                return Ok(InputArg::File(PathBuf::from(p)));
            }
        }
        Err(format!("expected mixed, basis:K or file:PATH, got `{s}`"))
    }
}

impl InputArg {
    pub fn resolve(&self) -> Result<InputSpec> {
        match self {
            InputArg::Mixed => Ok(InputSpec::Mixed),
            InputArg::Basis(k) => Ok(InputSpec::Basis(*k)),
            InputArg::File(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| Error::Input(format!("{}: {e}", p.display())))?;
                let m = parse_density_json(&text)?;
                // validate now so file errors surface before any computation
                crate::channel::DensityMatrix::new(m).map_err(|e| e.for_parameter("input"))?;
                Ok(InputSpec::Matrix(m))
            }
        }
    }
}

/// A 4×4 JSON array of `[re, im]` pairs.
pub fn parse_density_json(text: &str) -> Result<Matrix4<C64>> {
    let rows: Vec<Vec<[f64; 2]>> =
        serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))?;
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(Error::Input("expected a 4x4 array of [re, im] pairs".into()));
    }
    Ok(Matrix4::from_fn(|i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Paper)]
    pub hadamard_mode: ModeArg,
    #[arg(long, default_value = "mixed")]
    pub input: InputArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Write data here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Paper,
    Physical,
}

impl From<ModeArg> for HadamardMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Paper => HadamardMode::Paper,
            ModeArg::Physical => HadamardMode::Physical,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SingleArgs {
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    /// Haar samples for the average fidelity.
    #[arg(long, default_value_t = 512)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub param: NoiseParam,
    #[arg(long, default_value_t = -0.3, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long, default_value_t = 61)]
    pub steps: usize,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 512)]
    pub samples: usize,
    /// Evaluate grid points on one thread.
    #[arg(long)]
    pub serial: bool,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Outer (slowest-varying) axis.
    #[arg(long)]
    pub x_param: NoiseParam,
    #[arg(long, default_value_t = -0.3, allow_negative_numbers = true)]
    pub x_from: f64,
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    pub x_to: f64,
    #[arg(long, default_value_t = 11)]
    pub x_steps: usize,
    /// Inner axis.
    #[arg(long)]
    pub y_param: NoiseParam,
    #[arg(long, default_value_t = -0.3, allow_negative_numbers = true)]
    pub y_from: f64,
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    pub y_to: f64,
    #[arg(long, default_value_t = 11)]
    pub y_steps: usize,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 512)]
    pub samples: usize,
    #[arg(long)]
    pub serial: bool,
}

#[derive(Debug, Clone, Args)]
pub struct MonteCarloArgs {
    #[arg(long, default_value_t = 0.0)]
    pub sigma_theta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub sigma_psi: f64,
    #[arg(long, default_value_t = 0.0)]
    pub sigma_phi: f64,
    /// Ensemble size.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Haar samples for each average fidelity.
    #[arg(long, default_value_t = 512)]
    pub fidelity_samples: usize,
    /// Also write the per-sample table (CSV) to this path.
    #[arg(long)]
    pub per_sample: Option<PathBuf>,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub serial: bool,
}

fn execution(serial: bool) -> Execution {
    if serial {
        Execution::Serial
    } else {
        Execution::Parallel
    }
}

fn base_config(noise: &NoiseArgs, common: &CommonArgs, samples: usize) -> Result<RunConfig> {
    Ok(RunConfig {
        noise: noise.noise(),
        hadamard_mode: common.hadamard_mode.into(),
        input: common.input.resolve()?,
        samples,
        seed: common.seed,
    })
}

fn emit(common: &CommonArgs, stdout: &mut dyn Write, body: &[u8]) -> io::Result<()> {
    match &common.output {
        Some(path) => fs::write(path, body),
        None => stdout.write_all(body),
    }
}

fn table(format: OutputFormat, rows: &[crate::metrics::ChannelReport]) -> Vec<u8> {
    match format {
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            write_csv(&mut buf, rows).expect("write to memory");
            buf
        }
        OutputFormat::Json => {
            let mut s = reports_json(rows);
            s.push('\n');
            s.into_bytes()
        }
    }
}

#[derive(Debug)]
enum Failure {
    Numeric(Error),
    Io(io::Error),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn cmd_ideal(stderr: &mut dyn Write) -> std::result::Result<(), Failure> {
    let checks = ideal_checks();
    for c in &checks {
        let verdict = if c.passed() { "PASS" } else { "FAIL" };
        writeln!(
            stderr,
            "{verdict}  {:<48} residual {:.3e}  (tol {:.0e})",
            c.name, c.residual, c.tolerance
        )?;
    }
    if checks.iter().all(|c| c.passed()) {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn cmd_single(args: &SingleArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let cfg = base_config(&args.noise, &args.common, args.samples)?;
    let report = run_single(&cfg)?;
    let body = match args.common.format {
        OutputFormat::Csv => table(OutputFormat::Csv, std::slice::from_ref(&report)),
        OutputFormat::Json => format!("{}\n", report_json(&report)).into_bytes(),
    };
    emit(&args.common, stdout, &body)?;
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let base = base_config(&args.noise, &args.common, args.samples)?;
    let spec = SweepSpec::one(SweepAxis::new(args.param, args.from, args.to, args.steps), base);
    let rows = run_sweep_with(&spec, execution(args.serial))?;
    emit(&args.common, stdout, &table(args.common.format, &rows))?;
    Ok(())
}

fn cmd_grid(args: &GridArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let base = base_config(&args.noise, &args.common, args.samples)?;
    let spec = SweepSpec::two(
        SweepAxis::new(args.x_param, args.x_from, args.x_to, args.x_steps),
        SweepAxis::new(args.y_param, args.y_from, args.y_to, args.y_steps),
        base,
    );
    let rows = run_sweep_with(&spec, execution(args.serial))?;
    emit(&args.common, stdout, &table(args.common.format, &rows))?;
    Ok(())
}

fn cmd_montecarlo(args: &MonteCarloArgs, stdout: &mut dyn Write) -> std::result::Result<(), Failure> {
    let base = base_config(&args.noise, &args.common, args.fidelity_samples)?;
    let mut spec = MonteCarloSpec::uniform(
        args.sigma_theta,
        args.sigma_psi,
        args.sigma_phi,
        args.samples,
        args.common.seed,
    );
    spec.base = base;
    spec.keep_samples = args.per_sample.is_some();
    let result = run_montecarlo_with(&spec, execution(args.serial))?;

    if let (Some(path), Some(rows)) = (&args.per_sample, &result.per_sample) {
        let mut buf = Vec::new();
        write_csv(&mut buf, rows)?;
        fs::write(path, buf)?;
    }
    let body = match args.common.format {
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            write_summary_csv(&mut buf, &result)?;
            buf
        }
        OutputFormat::Json => {
            let echo = MonteCarloEcho {
                sigma: &spec.sigma,
                hadamard_mode: spec.base.hadamard_mode,
                fidelity_samples: spec.base.samples,
            };
            let summary_only = crate::sweep::MonteCarloResult {
                per_sample: None,
                ..result
            };
            format!("{}\n", montecarlo_json(&summary_only, &echo)).into_bytes()
        }
    };
    emit(&args.common, stdout, &body)?;
    Ok(())
}

/// Parse `args` (program name first) and run, returning the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };

    let outcome = match &cli.command {
        Command::Ideal => cmd_ideal(stderr),
        Command::Single(a) => cmd_single(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Grid(a) => cmd_grid(a, stdout),
        Command::Montecarlo(a) => cmd_montecarlo(a, stdout),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Checks) => EXIT_FAILURE,
        Err(Failure::Numeric(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILURE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_FAILURE
        }
    }
}
