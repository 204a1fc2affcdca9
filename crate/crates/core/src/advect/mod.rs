//! Time-advance engines.
//!
//! - [`sl_step_const_1d`]: backward semi-Lagrangian step for constant 1D advection.
//! - [`sl_step_leapfrog_2d`]: two-level semi-Lagrangian step along characteristics traced
//!   with a midpoint fixed point over `[t_{n-1}, t_{n+1}]`, bootstrapped by
//!   [`sl_step_bootstrap_2d`].
//! - [`fd_step_rk4_1d`] / [`fd_step_rk4_2d`]: classical RK4 on the conservative
//!   finite-difference form `df/dt = -div(A f)`.
//! - [`MixedState`] / [`mixed_controller`]: one-way switch from semi-Lagrangian to finite
//!   differences once the per-step mass drift exceeds `h^3`.
//! - [`Engine2D`]: drives any of the schemes with fixed or CFL-adaptive steps.

mod engine;
mod mixed;
mod rk4;
mod sl1d;
mod sl2d;
mod velocity;

pub use engine::{Engine2D, StepOutcome, TimeStep};
pub use mixed::{mixed_controller, MixedState, Phase};
pub use rk4::{courant_number_2d, fd_step_rk4_1d, fd_step_rk4_2d, rk4_combine};
pub use sl1d::sl_step_const_1d;
pub use sl2d::{
    solve_departure, sl_step_bootstrap_2d, sl_step_leapfrog_2d, CharacteristicFoot, Interpolant2D,
};
pub use velocity::{VelocityField, VelocityProvider};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::reconstruct_fd::{FluxKind, FluxOptions, Splitting};
use crate::reconstruct_sl::{SlInterpKind, EPSILON};

/// The transport schemes available to the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    SlSpline,
    SlHweno3,
    SlHweno5,
    FdWeno5,
    FdHweno5,
    /// Semi-Lagrangian HWENO5 in the linear phase, finite-difference HWENO5 afterwards.
    Mixed,
}

impl SchemeId {
    pub const ALL: [SchemeId; 6] = [
        SchemeId::SlSpline,
        SchemeId::SlHweno3,
        SchemeId::SlHweno5,
        SchemeId::FdWeno5,
        SchemeId::FdHweno5,
        SchemeId::Mixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::SlSpline => "sl-spline",
            SchemeId::SlHweno3 => "sl-hweno3",
            SchemeId::SlHweno5 => "sl-hweno5",
            SchemeId::FdWeno5 => "fd-weno5",
            SchemeId::FdHweno5 => "fd-hweno5",
            SchemeId::Mixed => "mixed",
        }
    }

    /// Interpolation used in the semi-Lagrangian phase, if any.
    pub fn interp_kind(self) -> Option<SlInterpKind> {
        match self {
            SchemeId::SlSpline => Some(SlInterpKind::CubicSpline),
            SchemeId::SlHweno3 => Some(SlInterpKind::Hweno3),
            SchemeId::SlHweno5 | SchemeId::Mixed => Some(SlInterpKind::Hweno5),
            SchemeId::FdWeno5 | SchemeId::FdHweno5 => None,
        }
    }

    /// Flux reconstruction used in the finite-difference phase, if any.
    pub fn flux_kind(self) -> Option<FluxKind> {
        match self {
            SchemeId::FdWeno5 => Some(FluxKind::Weno5),
            SchemeId::FdHweno5 | SchemeId::Mixed => Some(FluxKind::Hweno5),
            _ => None,
        }
    }

    pub fn starts_semi_lagrangian(self) -> bool {
        !matches!(self, SchemeId::FdWeno5 | SchemeId::FdHweno5)
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                let known: Vec<_> = SchemeId::ALL.iter().map(|id| id.name()).collect();
                Error::config(format!("unknown scheme '{s}' (expected one of {})", known.join(", ")))
            })
    }
}

/// Scheme selection and numerical parameters shared by every engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub scheme: SchemeId,
    /// Courant number of the semi-Lagrangian phase (may exceed 1).
    pub cfl_linear: f64,
    /// Courant number of the finite-difference phase.
    pub cfl_nonlinear: f64,
    pub eps: f64,
    pub fixed_point_tol: f64,
    pub fixed_point_max_iter: usize,
    /// Enables the SL -> FD switch (on by default for [`SchemeId::Mixed`] only).
    pub mixed_switch: bool,
    pub splitting: Splitting,
}

impl SchemeConfig {
    pub fn new(scheme: SchemeId) -> Self {
        Self {
            scheme,
            cfl_linear: 2.5,
            cfl_nonlinear: 0.85,
            eps: EPSILON,
            fixed_point_tol: 1e-12,
            fixed_point_max_iter: 25,
            mixed_switch: scheme == SchemeId::Mixed,
            splitting: Splitting::Upwind,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, what: &str| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(format!("{what} must be positive, got {v}")))
            }
        };
        positive(self.cfl_linear, "cfl_linear")?;
        positive(self.cfl_nonlinear, "cfl_nonlinear")?;
        positive(self.eps, "eps")?;
        positive(self.fixed_point_tol, "fixed_point_tol")?;
        if self.fixed_point_max_iter == 0 {
            return Err(Error::config("fixed_point_max_iter must be at least 1"));
        }
        if self.scheme.flux_kind().is_some() && self.cfl_nonlinear > 1.0 {
            return Err(Error::config(format!(
                "cfl_nonlinear = {} exceeds 1 for a finite-difference scheme",
                self.cfl_nonlinear
            )));
        }
        if self.mixed_switch && self.scheme != SchemeId::Mixed {
            return Err(Error::config("mixed_switch requires the mixed scheme"));
        }
        Ok(())
    }

    pub fn flux_options(&self) -> Option<FluxOptions> {
        self.scheme.flux_kind().map(|kind| FluxOptions {
            kind,
            splitting: self.splitting,
            eps: self.eps,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scheme_names_round_trip() {
        for id in SchemeId::ALL {
            assert_eq!(id.name().parse::<SchemeId>().unwrap(), id);
        }
        assert!(matches!("sl-hweno7".parse::<SchemeId>(), Err(Error::Config(_))));
    }

    #[test]
    fn validation_rejects_bad_numbers() {
        let mut c = SchemeConfig::new(SchemeId::FdHweno5);
        assert!(c.validate().is_ok());
        c.cfl_nonlinear = 1.5;
        assert!(c.validate().is_err());
        let mut c = SchemeConfig::new(SchemeId::SlSpline);
        c.cfl_linear = -1.0;
        assert!(c.validate().is_err());
        c.cfl_linear = 2.5;
        c.mixed_switch = true;
        assert!(c.validate().is_err());
        assert!(SchemeConfig::new(SchemeId::Mixed).validate().is_ok());
    }
}
