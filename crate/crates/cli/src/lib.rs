//! Command-line front end: `run`, `converge` and `compare`.

pub mod config;
pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hwk::error::Error;
use hwk::models::{run_experiment, CsvTable, Experiment, RunOutput};

pub use config::{ConfigError, ExperimentKind, RunConfig, Settings, CONVERGENCE_CFL_FD, OUTPUT_ENV};
pub use report::{compare_tables, Comparison, ConvergenceReport, ConvergenceRow};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    /// `compare` found differences beyond the tolerance.
    pub const DIFFERENT: i32 = 1;
    /// Bad command line or configuration.
    pub const CONFIG: i32 = 2;
    /// A run failed numerically (step failure, CFL violation, solver failure, non-finite data).
    pub const RUNTIME: i32 = 3;
    /// Reading or writing files failed.
    pub const IO: i32 = 4;
}

#[derive(Debug, Parser)]
#[command(name = "hwk", version, about = "Hermite-WENO transport simulations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an experiment (transport1d, beam or diocotron) once per requested resolution.
    Run {
        experiment: String,
        #[command(flatten)]
        flags: Flags,
    },
    /// Convergence study of the transport test over several resolutions.
    Converge {
        #[command(flatten)]
        flags: Flags,
    },
    /// Compare two time-series CSV files.
    Compare {
        a: PathBuf,
        b: PathBuf,
        /// Relative tolerance (scaled by max(1, |a|, |b|)).
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
struct Flags {
    /// `key = value` configuration file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scheme: Option<String>,
    /// Node count, or a comma-separated list of node counts.
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    ny: Option<String>,
    /// Courant number of the semi-Lagrangian phase.
    #[arg(long, allow_hyphen_values = true)]
    cfl: Option<String>,
    /// Courant number of the finite-difference phase.
    #[arg(long, allow_hyphen_values = true)]
    cfl_fd: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t_end: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    dt: Option<String>,
    /// Output root (default: $HWK_OUTPUT_DIR, then ./hwk-output).
    #[arg(long)]
    output: Option<String>,
    /// Comma-separated snapshot times.
    #[arg(long, allow_hyphen_values = true)]
    snapshots: Option<String>,
    /// Initial profile of the transport test: sine, step or composite.
    #[arg(long)]
    profile: Option<String>,
    /// Disk radius of the guiding-center model.
    #[arg(long, allow_hyphen_values = true)]
    radius: Option<String>,
}

impl Flags {
    fn settings(&self, experiment: &str) -> Result<Settings, ConfigError> {
        let base = match &self.config {
            Some(path) => Settings::read(path)?,
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        flags.set("experiment", experiment)?;
        let pairs = [
            ("scheme", &self.scheme),
            ("n", &self.n),
            ("ny", &self.ny),
            ("cfl", &self.cfl),
            ("cfl_fd", &self.cfl_fd),
            ("t_end", &self.t_end),
            ("dt", &self.dt),
            ("output", &self.output),
            ("snapshots", &self.snapshots),
            ("profile", &self.profile),
            ("radius", &self.radius),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                flags.set(key, v)?;
            }
        }
        Ok(base.overlay(&flags))
    }
}

/// Any failure of a command, mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Run(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Run(Error::Config(_)) => exit::CONFIG,
            CliError::Run(Error::Io(_) | Error::Format(_)) => exit::IO,
            CliError::Run(_) => exit::RUNTIME,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "configuration error: {e}"),
            CliError::Run(e) => write!(f, "{e}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Run(e)
    }
}

/// Builds a validated configuration for `experiment` from flags, an optional file and
/// [`OUTPUT_ENV`].
pub fn parse_config<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| {
        CliError::Config(ConfigError::Malformed {
            line: 0,
            text: e.to_string(),
        })
    })?;
    let env = std::env::var(OUTPUT_ENV).ok();
    match cli.command {
        Command::Run { experiment, flags } => Ok(flags.settings(&experiment)?.into_config(env.as_deref())?),
        Command::Converge { flags } => Ok(flags.settings("convergence")?.into_config(env.as_deref())?),
        Command::Compare { .. } => Err(CliError::Config(ConfigError::OutOfRange {
            key: "command".into(),
            reason: "compare takes no run configuration".into(),
        })),
    }
}

/// Runs every queued resolution of `config`, writing each run's files under its own directory.
pub fn run(config: &RunConfig) -> Result<Vec<(usize, RunOutput)>, CliError> {
    let mut outputs = Vec::new();
    for &n in &config.sizes {
        let exp = config.experiment_at(n)?;
        let out = run_experiment(&exp, &config.run_options(&exp))?;
        out.write_to_dir(&config.run_dir(n))?;
        outputs.push((n, out));
    }
    Ok(outputs)
}

/// Runs the transport test at every resolution and tabulates L1 errors and orders.
/// A failed resolution aborts the sweep; the rows gathered so far are written first.
pub fn converge(config: &RunConfig) -> Result<ConvergenceReport, CliError> {
    let label = format!("{} / {} / T = {}", config.profile, config.scheme, config.t_end.unwrap_or(8.0));
    let mut report = ConvergenceReport::new(label);
    let dir = config.output.join(format!("convergence-{}-{}", config.profile, config.scheme));
    for &n in &config.sizes {
        let exp = config.experiment_at(n)?;
        let outcome = run_experiment(&exp, &config.run_options(&exp));
        let out = match outcome {
            Ok(out) => out,
            Err(e) => {
                report.write(&dir)?;
                return Err(e.into());
            }
        };
        let Experiment::Transport1D(_) = exp else {
            unreachable!("convergence studies use the transport test")
        };
        report.push(n, out.l1_error.unwrap_or(f64::NAN), out.tv_error.unwrap_or(f64::NAN));
    }
    report.write(&dir)?;
    Ok(report)
}

fn compare_files(a: &PathBuf, b: &PathBuf, tol: f64) -> Result<Comparison, CliError> {
    let read = |p: &PathBuf| -> Result<CsvTable, CliError> { Ok(CsvTable::read(BufReader::new(File::open(p).map_err(Error::from)?))?) };
    Ok(compare_tables(&read(a)?, &read(b)?, tol))
}

/// Entry point of the `hwk` binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::CONFIG } else { exit::SUCCESS };
        }
    };
    let env = std::env::var(OUTPUT_ENV).ok();
    let result: Result<i32, CliError> = (|| match cli.command {
        Command::Run { experiment, flags } => {
            let config = flags.settings(&experiment)?.into_config(env.as_deref())?;
            if config.experiment == ExperimentKind::Convergence {
                return Ok(print_report(&converge(&config)?));
            }
            for (n, out) in run(&config)? {
                let last = out.series.last().expect("a run records its initial state");
                let mut line = format!(
                    "{} {} n={n}: {} steps to t={}, mass {:.12e}, min {:.3e}, max {:.3e}",
                    out.experiment, config.scheme, out.steps, last.t, last.mass, last.min, last.max
                );
                if let Some(e) = out.l1_error {
                    line.push_str(&format!(", L1 error {e:.3e}"));
                }
                if let Some(t) = out.switch_time {
                    line.push_str(&format!(", switched to finite differences at t={t}"));
                }
                println!("{line}");
                println!("  -> {}", config.run_dir(n).display());
            }
            Ok(exit::SUCCESS)
        }
        Command::Converge { flags } => {
            let config = flags.settings("convergence")?.into_config(env.as_deref())?;
            Ok(print_report(&converge(&config)?))
        }
        Command::Compare { a, b, tol } => {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(CliError::Config(ConfigError::OutOfRange {
                    key: "tol".into(),
                    reason: format!("must be non-negative, got {tol}"),
                }));
            }
            let c = compare_files(&a, &b, tol)?;
            if let Some(m) = &c.mismatch {
                println!("different: {m}");
                return Ok(exit::DIFFERENT);
            }
            match (&c.location, c.within_tolerance) {
                (_, true) => println!("identical within {tol:e} (max difference {:e})", c.max_diff),
                (Some((row, col)), false) => println!("different: max difference {:e} at row {row}, column {col}", c.max_diff),
                (None, false) => println!("different"),
            }
            Ok(if c.within_tolerance { exit::SUCCESS } else { exit::DIFFERENT })
        }
    })();
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("hwk: {e}");
            e.exit_code()
        }
    }
}

fn print_report(report: &ConvergenceReport) -> i32 {
    print!("{}", report.to_text());
    exit::SUCCESS
}
