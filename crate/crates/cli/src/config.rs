//! Run configuration: a flat `key = value` file overlaid with command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hwk::advect::{SchemeConfig, SchemeId, TimeStep};
use hwk::error::Error;
use hwk::models::{BeamSetup, DiocotronSetup, Experiment, Profile, RunOptions, Transport1DSetup};

/// Environment variable naming the default output root.
pub const OUTPUT_ENV: &str = "HWK_OUTPUT_DIR";

/// Finite-difference Courant number of convergence studies: small enough that the RK4
/// time error stays below the fifth-order spatial error up to n = 800.
pub const CONVERGENCE_CFL_FD: f64 = 0.4;
const DEFAULT_OUTPUT: &str = "hwk-output";

/// Reasons a configuration is refused, each with its own diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    /// A line of the config file that is not `key = value`.
    Malformed { line: usize, text: String },
    UnknownKey(String),
    UnknownExperiment(String),
    UnknownScheme(String),
    UnknownProfile(String),
    /// A value that does not parse as the key's type.
    BadValue { key: String, value: String },
    /// A value outside its valid range.
    OutOfRange { key: String, reason: String },
    Unreadable { path: PathBuf, reason: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Malformed { line, text } => write!(f, "line {line}: expected 'key = value', got '{text}'"),
            ConfigError::UnknownKey(k) => write!(f, "unknown key '{k}'"),
            ConfigError::UnknownExperiment(e) => {
                write!(f, "unknown experiment '{e}' (expected transport1d, beam, diocotron or convergence)")
            }
            ConfigError::UnknownScheme(s) => write!(f, "unknown scheme '{s}'"),
            ConfigError::UnknownProfile(p) => write!(f, "unknown profile '{p}' (expected sine, step or composite)"),
            ConfigError::BadValue { key, value } => write!(f, "invalid value '{value}' for '{key}'"),
            ConfigError::OutOfRange { key, reason } => write!(f, "'{key}' {reason}"),
            ConfigError::Unreadable { path, reason } => write!(f, "cannot read {}: {reason}", path.display()),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Transport1D,
    Beam,
    Diocotron,
    /// Sweep of the transport test over several resolutions.
    Convergence,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Transport1D => "transport1d",
            ExperimentKind::Beam => "beam",
            ExperimentKind::Diocotron => "diocotron",
            ExperimentKind::Convergence => "convergence",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "transport1d" => Ok(ExperimentKind::Transport1D),
            "beam" => Ok(ExperimentKind::Beam),
            "diocotron" => Ok(ExperimentKind::Diocotron),
            "convergence" => Ok(ExperimentKind::Convergence),
            other => Err(ConfigError::UnknownExperiment(other.to_string())),
        }
    }
}

/// A validated run configuration. `sizes` holds one or more resolutions; each becomes a
/// queued run (or one row of a convergence table).
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: ExperimentKind,
    pub scheme: SchemeId,
    pub sizes: Vec<usize>,
    pub ny: Option<usize>,
    pub cfl: Option<f64>,
    pub cfl_fd: Option<f64>,
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub output: PathBuf,
    pub snapshots: Option<Vec<f64>>,
    pub profile: Profile,
    pub radius: Option<f64>,
}

/// Raw `key -> value` settings before validation; later sources override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    entries: Vec<(String, String)>,
}

pub const KEYS: [&str; 12] = [
    "experiment", "scheme", "n", "ny", "cfl", "cfl_fd", "t_end", "dt", "output", "snapshots", "profile", "radius",
];

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut s = Settings::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Malformed {
                line: k + 1,
                text: raw.trim().to_string(),
            })?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError::Malformed {
                    line: k + 1,
                    text: raw.trim().to_string(),
                });
            }
            s.set(key, value)?;
        }
        Ok(s)
    }

    pub fn read(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Unreadable {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey(key.to_string()));
        }
        self.entries.retain(|(k, _)| k != key);
        self.entries.push((key.to_string(), value.to_string()));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Values of `other` replace those of `self`.
    pub fn overlay(mut self, other: &Settings) -> Self {
        for (k, v) in &other.entries {
            self.entries.retain(|(key, _)| key != k);
            self.entries.push((k.clone(), v.clone()));
        }
        self
    }

    /// Validates the settings; `env_output` is the value of [`OUTPUT_ENV`], if set.
    pub fn into_config(self, env_output: Option<&str>) -> Result<RunConfig, ConfigError> {
        let experiment: ExperimentKind = self
            .get("experiment")
            .ok_or_else(|| ConfigError::OutOfRange {
                key: "experiment".into(),
                reason: "is required".into(),
            })?
            .parse()?;
        let scheme = match self.get("scheme") {
            Some(s) => s.parse::<SchemeId>().map_err(|_| ConfigError::UnknownScheme(s.to_string()))?,
            None => SchemeId::SlHweno5,
        };
        let profile = match self.get("profile") {
            Some(p) => p.parse::<Profile>().map_err(|_| ConfigError::UnknownProfile(p.to_string()))?,
            None => Profile::Sine,
        };
        let sizes = match self.get("n") {
            Some(v) => list::<i64>("n", v)?
                .into_iter()
                .map(|n| count("n", n))
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![default_size(experiment)],
        };
        if sizes.is_empty() {
            return Err(ConfigError::BadValue {
                key: "n".into(),
                value: String::new(),
            });
        }
        let ny = self.get("ny").map(|v| scalar::<i64>("ny", v).and_then(|n| count("ny", n))).transpose()?;
        let positive = |key: &str| -> Result<Option<f64>, ConfigError> {
            self.get(key)
                .map(|v| {
                    let x = scalar::<f64>(key, v)?;
                    if x.is_finite() && x > 0.0 {
                        Ok(x)
                    } else {
                        Err(ConfigError::OutOfRange {
                            key: key.into(),
                            reason: format!("must be positive, got {v}"),
                        })
                    }
                })
                .transpose()
        };
        let cfl = positive("cfl")?;
        let cfl_fd = positive("cfl_fd")?;
        let t_end = positive("t_end")?;
        let dt = positive("dt")?;
        let radius = positive("radius")?;
        let snapshots = self
            .get("snapshots")
            .map(|v| {
                let times = list::<f64>("snapshots", v)?;
                if times.iter().all(|t| t.is_finite() && *t > 0.0) {
                    Ok(times)
                } else {
                    Err(ConfigError::OutOfRange {
                        key: "snapshots".into(),
                        reason: "times must be positive".into(),
                    })
                }
            })
            .transpose()?;
        let output = self
            .get("output")
            .or(env_output)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT));
        let config = RunConfig {
            experiment,
            scheme,
            sizes,
            ny,
            cfl,
            cfl_fd,
            t_end,
            dt,
            output,
            snapshots,
            profile,
            radius,
        };
        config.validate()?;
        Ok(config)
    }
}

fn scalar<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.trim().parse().map_err(|_| ConfigError::BadValue {
        key: key.into(),
        value: value.into(),
    })
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, ConfigError> {
    value.split(',').map(|v| scalar(key, v)).collect()
}

fn count(key: &str, n: i64) -> Result<usize, ConfigError> {
    if n <= 0 {
        return Err(ConfigError::OutOfRange {
            key: key.into(),
            reason: format!("must be a positive node count, got {n}"),
        });
    }
    Ok(n as usize)
}

fn default_size(kind: ExperimentKind) -> usize {
    match kind {
        ExperimentKind::Transport1D | ExperimentKind::Convergence => 200,
        ExperimentKind::Beam => 129,
        ExperimentKind::Diocotron => 128,
    }
}

impl RunConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        let is_2d = matches!(self.experiment, ExperimentKind::Beam | ExperimentKind::Diocotron);
        if let Some(ny) = self.ny {
            if !is_2d {
                return Err(ConfigError::OutOfRange {
                    key: "ny".into(),
                    reason: "only applies to 2D experiments".into(),
                });
            }
            if self.sizes.iter().any(|&n| n != ny) {
                return Err(ConfigError::OutOfRange {
                    key: "ny".into(),
                    reason: "must equal n (the 2D problems use square grids)".into(),
                });
            }
        }
        if self.experiment == ExperimentKind::Convergence && self.sizes.len() < 2 {
            return Err(ConfigError::OutOfRange {
                key: "n".into(),
                reason: "needs at least two resolutions for a convergence study".into(),
            });
        }
        for &n in &self.sizes {
            let exp = self.experiment_at(n).map_err(|e| ConfigError::OutOfRange {
                key: "n".into(),
                reason: e.to_string(),
            })?;
            self.run_options(&exp).scheme.validate().map_err(|e| ConfigError::OutOfRange {
                key: "cfl".into(),
                reason: e.to_string(),
            })?;
        }
        Ok(())
    }

    /// The problem at resolution `n`, with this configuration's overrides applied.
    pub fn experiment_at(&self, n: usize) -> Result<Experiment, Error> {
        let exp = match self.experiment {
            ExperimentKind::Transport1D | ExperimentKind::Convergence => {
                let mut s = Transport1DSetup::new(self.profile, n);
                if let Some(t) = self.t_end {
                    s.t_end = t;
                }
                s.grid()?;
                Experiment::Transport1D(s)
            }
            ExperimentKind::Beam => {
                let mut s = BeamSetup::new(n);
                if let Some(t) = self.t_end {
                    s.t_end = t;
                }
                if let Some(dt) = self.dt {
                    s.dt = dt;
                }
                s.validate()?;
                s.grid()?;
                Experiment::Beam(s)
            }
            ExperimentKind::Diocotron => {
                let mut s = DiocotronSetup::new(n);
                if let Some(t) = self.t_end {
                    s.t_end = t;
                }
                if let Some(r) = self.radius {
                    s.radius = r;
                    s.half_width = s.half_width.max(1.1 * r);
                }
                s.validate()?;
                s.grid()?;
                Experiment::Diocotron(s)
            }
        };
        Ok(exp)
    }

    /// Engine settings for `experiment`; CFL numbers default per problem (2.5 / 0.85 for the
    /// transport test and the beam, 2 / 0.5 for the guiding-center model). Convergence
    /// studies run the finite-difference schemes at [`CONVERGENCE_CFL_FD`].
    pub fn run_options(&self, experiment: &Experiment) -> RunOptions {
        let mut scheme = SchemeConfig::new(self.scheme);
        if self.experiment == ExperimentKind::Convergence {
            scheme.cfl_nonlinear = CONVERGENCE_CFL_FD;
        }
        if let Experiment::Diocotron(_) = experiment {
            scheme.cfl_linear = 2.0;
            scheme.cfl_nonlinear = 0.5;
        }
        if let Some(c) = self.cfl {
            scheme.cfl_linear = c;
        }
        if let Some(c) = self.cfl_fd {
            scheme.cfl_nonlinear = c;
        }
        let mut opts = RunOptions::for_experiment(experiment, scheme);
        if let (Some(dt), Experiment::Diocotron(_)) = (self.dt, experiment) {
            opts.time_step = TimeStep::Fixed(dt);
        }
        if let Some(times) = &self.snapshots {
            opts.snapshot_times = times.clone();
        }
        opts
    }

    /// Output directory of the run at resolution `n`.
    pub fn run_dir(&self, n: usize) -> PathBuf {
        let mut name = format!("{}-{}-n{n}", self.experiment.name(), self.scheme);
        if matches!(self.experiment, ExperimentKind::Transport1D | ExperimentKind::Convergence) {
            name = format!("{}-{}-{}-n{n}", self.experiment.name(), self.profile, self.scheme);
        }
        self.output.join(name)
    }
}
