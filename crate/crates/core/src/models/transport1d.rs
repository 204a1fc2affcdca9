use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use super::diagnostics::{DiagnosticsRecord, TimeSeries};
use crate::advect::{fd_step_rk4_1d, sl_step_const_1d, MixedState, Phase, SchemeConfig};
use crate::error::{Error, Result};
use crate::grid::{Field1D, Grid1D};
use crate::reconstruct_fd::Velocity1D;

/// Initial profiles of the periodic transport test on `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Profile {
    /// `sin(pi x)`.
    Sine,
    /// 1 on `[-1, 0]`, 0 elsewhere.
    Step,
    /// Gaussian bumps, square pulse, triangle and semi-ellipse side by side.
    Composite,
}

impl Profile {
    pub const ALL: [Profile; 3] = [Profile::Sine, Profile::Step, Profile::Composite];

    pub fn name(self) -> &'static str {
        match self {
            Profile::Sine => "sine",
            Profile::Step => "step",
            Profile::Composite => "composite",
        }
    }

    /// Profile value at `x` in `[-1, 1)`.
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Profile::Sine => (PI * x).sin(),
            Profile::Step => {
                if (-1.0..=0.0).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::Composite => composite(x),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Profile::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::config(format!("unknown profile '{s}' (expected sine, step or composite)")))
    }
}

const COMPOSITE_Z: f64 = -0.7;
const COMPOSITE_DELTA: f64 = 0.005;
const COMPOSITE_A: f64 = 0.5;
const COMPOSITE_ALPHA: f64 = 10.0;

fn composite(x: f64) -> f64 {
    let beta = std::f64::consts::LN_2 / (36.0 * COMPOSITE_DELTA * COMPOSITE_DELTA);
    let g = |x: f64, z: f64| (-beta * (x - z) * (x - z)).exp();
    let f = |x: f64, a: f64| (1.0 - COMPOSITE_ALPHA * COMPOSITE_ALPHA * (x - a) * (x - a)).max(0.0).sqrt();
    let (z, d, a) = (COMPOSITE_Z, COMPOSITE_DELTA, COMPOSITE_A);
    if (-0.8..=-0.6).contains(&x) {
        (g(x, z - d) + g(x, z + d) + 4.0 * g(x, z)) / 6.0
    } else if (-0.4..=-0.2).contains(&x) {
        1.0
    } else if (0.0..=0.2).contains(&x) {
        1.0 - (10.0 * (x - 0.1)).abs()
    } else if (0.4..=0.6).contains(&x) {
        (f(x, a - d) + f(x, a + d) + 4.0 * f(x, a)) / 6.0
    } else {
        0.0
    }
}

/// `f_t + a f_x = 0` on the periodic interval `[-1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transport1DSetup {
    pub profile: Profile,
    pub n: usize,
    pub velocity: f64,
    pub t_end: f64,
}

impl Transport1DSetup {
    pub fn new(profile: Profile, n: usize) -> Self {
        Self {
            profile,
            n,
            velocity: 1.0,
            t_end: 8.0,
        }
    }

    pub fn grid(&self) -> Result<Grid1D> {
        Grid1D::periodic(self.n, -1.0, 1.0)
    }

    pub fn initial(&self) -> Result<Field1D> {
        let p = self.profile;
        Ok(Field1D::from_fn(self.grid()?, |x| p.eval(x)))
    }

    /// Exact solution at time `t`: the initial profile translated periodically.
    pub fn exact(&self, t: f64) -> Result<Field1D> {
        let g = self.grid()?;
        let p = self.profile;
        let shift = self.velocity * t;
        Ok(Field1D::from_fn(g, |x| p.eval(g.wrap(x - shift))))
    }

    /// Number of equal steps used to reach `t_end` with the phase's Courant number:
    /// `ceil(t_end |a| / (cfl dx))` (taking `|a| = 1` for zero velocity).
    pub fn step_count(&self, cfl: f64) -> Result<usize> {
        let dx = self.grid()?.dx();
        let speed = if self.velocity == 0.0 { 1.0 } else { self.velocity.abs() };
        let steps = (self.t_end * speed / (cfl * dx) * (1.0 - 1e-12)).ceil();
        if !(steps.is_finite() && steps >= 1.0) {
            return Err(Error::config(format!("cannot reach t_end = {} with cfl = {cfl}", self.t_end)));
        }
        Ok(steps as usize)
    }
}

/// Outcome of a transport run.
#[derive(Debug, Clone, PartialEq)]
pub struct Transport1DRun {
    pub final_field: Field1D,
    pub exact: Field1D,
    pub series: TimeSeries,
    /// `dx sum |f_i - f_exact(x_i)|` at `t_end`.
    pub l1_error: f64,
    /// `|TV(f) - TV(f_exact)|` at `t_end`, with the exact solution sampled on the grid.
    pub tv_error: f64,
    pub steps: usize,
    /// Time of the switch to finite differences for the mixed scheme.
    pub switch_time: Option<f64>,
}

/// Runs the transport test with equal time steps.
///
/// Semi-Lagrangian schemes use `cfg.cfl_linear`, finite-difference schemes
/// `cfg.cfl_nonlinear`. The mixed scheme starts semi-Lagrangian and, once the per-step
/// mass drift exceeds `dx^3`, continues with finite differences at the finite-difference
/// step size.
pub fn run_transport1d(setup: &Transport1DSetup, cfg: &SchemeConfig) -> Result<Transport1DRun> {
    cfg.validate()?;
    if !(setup.t_end.is_finite() && setup.t_end > 0.0) {
        return Err(Error::config(format!("t_end must be positive, got {}", setup.t_end)));
    }
    if !setup.velocity.is_finite() {
        return Err(Error::config("velocity must be finite"));
    }
    let mut f = setup.initial()?;
    let dx = f.grid().dx();
    let mut series = TimeSeries::new();
    series.push(DiagnosticsRecord::from_field1d(0.0, &f));

    let mut phase = if cfg.scheme.starts_semi_lagrangian() {
        Phase::SemiLagrangian
    } else {
        Phase::FiniteDifference
    };
    let mut mixed = cfg.mixed_switch.then(|| MixedState::new(dx));
    let mut switch_time = None;
    let mut t = 0.0;
    let mut k = 0usize;
    let mut steps = 0usize;
    let plan = |phase: Phase, t: f64| -> Result<(usize, f64)> {
        let cfl = match phase {
            Phase::SemiLagrangian => cfg.cfl_linear,
            Phase::FiniteDifference => cfg.cfl_nonlinear,
        };
        let mut rest = *setup;
        rest.t_end = setup.t_end - t;
        let count = rest.step_count(cfl)?;
        Ok((count, rest.t_end / count as f64))
    };
    let (mut count, mut dt) = plan(phase, 0.0)?;
    let mut t0 = 0.0;
    while k < count {
        let next = match phase {
            Phase::SemiLagrangian => {
                let kind = cfg.scheme.interp_kind().expect("semi-Lagrangian scheme");
                sl_step_const_1d(&f, setup.velocity, dt, kind)?
            }
            Phase::FiniteDifference => {
                let opts = cfg.flux_options().expect("finite-difference scheme");
                fd_step_rk4_1d(&f, Velocity1D::Constant(setup.velocity), dt, &opts, cfg.cfl_nonlinear)
                    .map_err(|e| match e {
                        Error::Step { reason, .. } => Error::Step { t, reason },
                        other => other,
                    })?
            }
        };
        k += 1;
        steps += 1;
        t = if k == count { setup.t_end } else { t0 + k as f64 * dt };
        let switched = match mixed.as_mut() {
            Some(state) if phase == Phase::SemiLagrangian => {
                state.observe_masses(f.norms().mass, next.norms().mass) == Phase::FiniteDifference
            }
            _ => false,
        };
        f = next;
        series.push(DiagnosticsRecord::from_field1d(t, &f));
        if switched && k < count {
            phase = Phase::FiniteDifference;
            switch_time = Some(t);
            (count, dt) = plan(phase, t)?;
            t0 = t;
            k = 0;
        } else if switched {
            switch_time = Some(t);
        }
    }
    let exact = setup.exact(setup.t_end)?;
    let l1_error = f.l1_error(|x| setup.profile.eval(f.grid().wrap(x - setup.velocity * setup.t_end)));
    let tv_error = (f.norms().tv.unwrap_or(0.0) - exact.norms().tv.unwrap_or(0.0)).abs();
    Ok(Transport1DRun {
        final_field: f,
        exact,
        series,
        l1_error,
        tv_error,
        steps,
        switch_time,
    })
}
