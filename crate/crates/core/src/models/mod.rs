//! Problem definitions, diagnostics and the experiment driver.
//!
//! - [`transport1d`]: periodic constant-speed transport with smooth, step and composite
//!   profiles.
//! - [`beam`]: paraxial beam in the `(r, v)` phase plane with the radial self-field.
//! - [`diocotron`]: guiding-center density on a disk, started from a perturbed annulus.
//! - [`run_experiment`]: advances any of them and gathers diagnostics and snapshots.

pub mod beam;
pub mod diagnostics;
pub mod diocotron;
pub mod transport1d;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub use beam::{charge_density, kinetic_energy, rhs_beam, BeamField, BeamSetup};
pub use diagnostics::{relative_change, CsvTable, DiagnosticsRecord, TimeSeries, CSV_HEADER};
pub use diocotron::{angular_mode_amplitude, DiocotronSetup, GuidingCenterField};
pub use transport1d::{run_transport1d, Profile, Transport1DRun, Transport1DSetup};

use crate::advect::{Engine2D, SchemeConfig, TimeStep, VelocityField, VelocityProvider};
use crate::error::{Error, Result};
use crate::grid::io::Snapshot;
use crate::grid::Field2D;

/// A fully specified problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Experiment {
    Transport1D(Transport1DSetup),
    Beam(BeamSetup),
    Diocotron(DiocotronSetup),
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Transport1D(_) => "transport1d",
            Experiment::Beam(_) => "beam",
            Experiment::Diocotron(_) => "diocotron",
        }
    }

    pub fn t_end(&self) -> f64 {
        match self {
            Experiment::Transport1D(s) => s.t_end,
            Experiment::Beam(s) => s.t_end,
            Experiment::Diocotron(s) => s.t_end,
        }
    }

    /// Snapshot times shown for each problem (none for the 1D test, which keeps its final state).
    pub fn default_snapshot_times(&self) -> Vec<f64> {
        match self {
            Experiment::Transport1D(_) => Vec::new(),
            Experiment::Beam(_) => vec![10.0, 15.0, 20.0],
            Experiment::Diocotron(_) => vec![40.0, 50.0, 60.0],
        }
    }

    /// Fixed steps for the beam, CFL-adaptive steps for the guiding-center model.
    pub fn default_time_step(&self) -> TimeStep {
        match self {
            Experiment::Beam(s) => TimeStep::Fixed(s.dt),
            _ => TimeStep::Adaptive,
        }
    }
}

/// Engine settings of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub scheme: SchemeConfig,
    /// Ignored by the 1D transport test, which uses equal CFL-sized steps.
    pub time_step: TimeStep,
    pub snapshot_times: Vec<f64>,
}

impl RunOptions {
    pub fn for_experiment(experiment: &Experiment, scheme: SchemeConfig) -> Self {
        Self {
            scheme,
            time_step: experiment.default_time_step(),
            snapshot_times: experiment.default_snapshot_times(),
        }
    }
}

/// Everything a run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub experiment: &'static str,
    pub series: TimeSeries,
    pub snapshots: Vec<(f64, Snapshot)>,
    pub final_state: Snapshot,
    pub steps: usize,
    /// L1 error against the exact solution (1D transport).
    pub l1_error: Option<f64>,
    /// Total-variation error against the exact solution (1D transport).
    pub tv_error: Option<f64>,
    /// Time at which the mixed scheme switched to finite differences.
    pub switch_time: Option<f64>,
    /// `(t, amplitude)` of the perturbed angular mode (guiding-center model).
    pub mode_series: Vec<(f64, f64)>,
}

impl RunOutput {
    /// Writes `series.csv`, `final.hwk`, one `snapshot_t<time>.hwk` per snapshot and, for the
    /// guiding-center model, `mode.csv`. Returns the written paths.
    pub fn write_to_dir(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let path = dir.join("series.csv");
        let mut w = BufWriter::new(File::create(&path)?);
        self.series.write_csv(&mut w)?;
        w.flush()?;
        written.push(path);
        let path = dir.join("final.hwk");
        self.final_state.save(&path)?;
        written.push(path);
        for (t, s) in &self.snapshots {
            let path = dir.join(format!("snapshot_t{t}.hwk"));
            s.save(&path)?;
            written.push(path);
        }
        if !self.mode_series.is_empty() {
            let path = dir.join("mode.csv");
            let mut w = BufWriter::new(File::create(&path)?);
            writeln!(w, "t,amplitude")?;
            for (t, a) in &self.mode_series {
                writeln!(w, "{t:e},{a:e}")?;
            }
            w.flush()?;
            written.push(path);
        }
        Ok(written)
    }
}

/// A velocity provider that also knows how to summarise a state.
trait Observed: VelocityProvider {
    fn observe(&mut self, t: f64, f: &Field2D) -> Result<DiagnosticsRecord>;
}

impl Observed for BeamField {
    fn observe(&mut self, t: f64, f: &Field2D) -> Result<DiagnosticsRecord> {
        Ok(DiagnosticsRecord::from_field2d(t, f, Some(kinetic_energy(f))))
    }
}

struct DiocotronObserver {
    field: GuidingCenterField,
    mode: u32,
    modes: Vec<(f64, f64)>,
}

impl VelocityProvider for DiocotronObserver {
    fn velocity(&mut self, f: &Field2D, t: f64) -> Result<VelocityField> {
        self.field.velocity(f, t)
    }
}

impl Observed for DiocotronObserver {
    fn observe(&mut self, t: f64, f: &Field2D) -> Result<DiagnosticsRecord> {
        let (_, energy) = self.field.solve(f)?;
        self.modes.push((t, angular_mode_amplitude(f, self.mode)));
        Ok(DiagnosticsRecord::from_field2d(t, f, Some(energy)))
    }
}

struct Driven {
    f: Field2D,
    series: TimeSeries,
    snapshots: Vec<(f64, Snapshot)>,
    steps: usize,
    switch_time: Option<f64>,
}

fn drive_2d(
    engine: &mut Engine2D,
    mut f: Field2D,
    model: &mut dyn Observed,
    t_end: f64,
    snapshot_times: &[f64],
) -> Result<Driven> {
    let mut stops: Vec<f64> = snapshot_times.iter().copied().filter(|&s| s > 0.0 && s < t_end).collect();
    stops.push(t_end);
    stops.sort_by(f64::total_cmp);
    stops.dedup();
    let mut series = TimeSeries::new();
    series.push(model.observe(0.0, &f)?);
    let mut snapshots = Vec::new();
    let mut steps = 0;
    let mut switch_time = None;
    let mut t = 0.0;
    for stop in stops {
        while t < stop {
            let out = engine.step(&f, t, stop, model)?;
            t = out.t;
            if (stop - t).abs() <= 1e-9 * stop.max(1.0) {
                t = stop;
            }
            f = out.f;
            steps += 1;
            if out.switched {
                switch_time = Some(t);
            }
            series.push(model.observe(t, &f)?);
        }
        if snapshot_times.contains(&stop) {
            snapshots.push((stop, Snapshot::from_field2d(&f)));
        }
    }
    Ok(Driven {
        f,
        series,
        snapshots,
        steps,
        switch_time,
    })
}

/// Advances `experiment` to its final time with the chosen scheme.
pub fn run_experiment(experiment: &Experiment, opts: &RunOptions) -> Result<RunOutput> {
    opts.scheme.validate()?;
    if opts.snapshot_times.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::config("snapshot times must be positive"));
    }
    match experiment {
        Experiment::Transport1D(setup) => {
            let run = run_transport1d(setup, &opts.scheme)?;
            Ok(RunOutput {
                experiment: experiment.name(),
                final_state: Snapshot::from_field1d(&run.final_field),
                series: run.series,
                snapshots: Vec::new(),
                steps: run.steps,
                l1_error: Some(run.l1_error),
                tv_error: Some(run.tv_error),
                switch_time: run.switch_time,
                mode_series: Vec::new(),
            })
        }
        Experiment::Beam(setup) => {
            let f0 = setup.initial()?;
            let h = f0.grid().h();
            let mut engine = Engine2D::new(opts.scheme, opts.time_step, h)?;
            let mut model = BeamField { eps: setup.eps };
            let d = drive_2d(&mut engine, f0, &mut model, setup.t_end, &opts.snapshot_times)?;
            Ok(finish_2d(experiment, d, Vec::new()))
        }
        Experiment::Diocotron(setup) => {
            let f0 = setup.initial()?;
            let h = f0.grid().h();
            let mut engine = Engine2D::new(opts.scheme, opts.time_step, h)?;
            let mut model = DiocotronObserver {
                field: GuidingCenterField::new(setup)?,
                mode: setup.mode,
                modes: Vec::new(),
            };
            let d = drive_2d(&mut engine, f0, &mut model, setup.t_end, &opts.snapshot_times)?;
            Ok(finish_2d(experiment, d, model.modes))
        }
    }
}

fn finish_2d(experiment: &Experiment, d: Driven, mode_series: Vec<(f64, f64)>) -> RunOutput {
    RunOutput {
        experiment: experiment.name(),
        final_state: Snapshot::from_field2d(&d.f),
        series: d.series,
        snapshots: d.snapshots,
        steps: d.steps,
        l1_error: None,
        tv_error: None,
        switch_time: d.switch_time,
        mode_series,
    }
}
