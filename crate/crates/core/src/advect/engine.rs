use super::mixed::{MixedState, Phase};
use super::rk4::{courant_number_2d, fd_step_rk4_2d};
use super::sl2d::{sl_step_bootstrap_2d, sl_step_leapfrog_2d};
use super::velocity::VelocityProvider;
use super::SchemeConfig;
use crate::error::{Error, Result};
use crate::grid::Field2D;

/// Largest relative change between consecutive steps for which the two-level scheme is
/// used; beyond it the velocity sample drifts off the middle of the trace and a one-level
/// midpoint step from the current state is taken instead.
const LEAPFROG_RATIO: f64 = 0.25;

/// Time-step policy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    /// Constant step (the last two steps share what is left before the final time). In the
    /// finite-difference phase of the mixed scheme the CFL step is used when smaller.
    Fixed(f64),
    /// `dt = cfl * min(dx / max |a_x|, dy / max |a_y|)` with the current phase's CFL number.
    Adaptive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub f: Field2D,
    pub t: f64,
    pub dt: f64,
    /// Phase used for this step.
    pub phase: Phase,
    /// True when the mixed controller switched to finite differences after this step.
    pub switched: bool,
}

/// Advances a 2D density with one of the schemes, keeping the extra time level needed by
/// the two-level semi-Lagrangian scheme and the mixed-switch state.
#[derive(Debug, Clone)]
pub struct Engine2D {
    cfg: SchemeConfig,
    policy: TimeStep,
    phase: Phase,
    previous: Option<(Field2D, f64)>,
    mixed: Option<MixedState>,
}

impl Engine2D {
    /// `h` is the smallest space step (used by the mixed switch).
    pub fn new(cfg: SchemeConfig, policy: TimeStep, h: f64) -> Result<Self> {
        cfg.validate()?;
        if let TimeStep::Fixed(dt) = policy {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(Error::config(format!("time step must be positive, got {dt}")));
            }
        }
        let phase = if cfg.scheme.starts_semi_lagrangian() {
            Phase::SemiLagrangian
        } else {
            Phase::FiniteDifference
        };
        Ok(Self {
            cfg,
            policy,
            phase,
            previous: None,
            mixed: cfg.mixed_switch.then(|| MixedState::new(h)),
        })
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.cfg
    }

    pub fn mixed_state(&self) -> Option<&MixedState> {
        self.mixed.as_ref()
    }

    /// Advances `f` from `t` by one step, never beyond `t_end`.
    pub fn step(&mut self, f: &Field2D, t: f64, t_end: f64, provider: &mut dyn VelocityProvider) -> Result<StepOutcome> {
        let at = |e: Error| match e {
            Error::Step { reason, .. } => Error::Step { t, reason },
            other => other,
        };
        let remaining = t_end - t;
        if !(remaining > 0.0) {
            return Err(Error::contract(format!("no time left to advance: t = {t}, t_end = {t_end}")));
        }
        let velocity = provider.velocity(f, t).map_err(at)?;
        let unit_courant = courant_number_2d(&velocity, 1.0);
        let phase = self.phase;
        let cfl = match phase {
            Phase::SemiLagrangian => self.cfg.cfl_linear,
            Phase::FiniteDifference => self.cfg.cfl_nonlinear,
        };
        let cfl_dt = if unit_courant > 0.0 { cfl / unit_courant } else { f64::INFINITY };
        let mut dt = match self.policy {
            TimeStep::Fixed(dt) if self.mixed.is_some() && phase == Phase::FiniteDifference => dt.min(cfl_dt),
            TimeStep::Fixed(dt) => dt,
            TimeStep::Adaptive => cfl_dt,
        };
        // Steps within rounding of the remaining time land on it; otherwise the last two
        // steps share the remainder evenly.
        if dt >= remaining - 1e-9 * t_end.abs().max(1.0) {
            dt = remaining;
        } else if 2.0 * dt > remaining {
            dt = 0.5 * remaining;
        }
        let next = match phase {
            Phase::SemiLagrangian => {
                let kind = self.cfg.scheme.interp_kind().expect("semi-Lagrangian scheme");
                let next = match self.previous.take() {
                    Some((prev, dt_prev)) if (dt / dt_prev - 1.0).abs() <= LEAPFROG_RATIO => {
                        sl_step_leapfrog_2d(&prev, &velocity, dt_prev, dt, kind, &self.cfg)
                    }
                    _ => sl_step_bootstrap_2d(f, &velocity, dt, kind, &self.cfg),
                }
                .map_err(at)?;
                self.previous = Some((f.clone(), dt));
                next
            }
            Phase::FiniteDifference => {
                let opts = self.cfg.flux_options().expect("finite-difference scheme");
                fd_step_rk4_2d(f, t, dt, &velocity, provider, &opts, cfl).map_err(at)?
            }
        };
        let mut switched = false;
        if let Some(state) = self.mixed.as_mut() {
            if phase == Phase::SemiLagrangian
                && state.observe_masses(f.mass(), next.mass()) == Phase::FiniteDifference
            {
                self.phase = Phase::FiniteDifference;
                self.previous = None;
                switched = true;
            }
        }
        Ok(StepOutcome {
            f: next,
            t: if dt == remaining { t_end } else { t + dt },
            dt,
            phase,
            switched,
        })
    }
}
