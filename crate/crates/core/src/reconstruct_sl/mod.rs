//! Point-value interpolation kernels for semi-Lagrangian updates.
//!
//! - [`CubicSpline1D`] / [`CubicSpline2D`]: global C2 cubic splines (the classical baseline).
//! - [`HermiteCell3`]: third-order Hermite-WENO on one cell, blending the two quadratics
//!   that each honour one endpoint derivative.
//! - [`HermiteCell5`]: fifth-order Hermite-WENO blending three cubics on the stencil
//!   `x_{i-1} .. x_{i+2}` with derivative data at the outer nodes.
//!
//! Derivative data come from centered differences of the point values
//! ([`eval_derivative4`] for HWENO3, [`eval_derivative6`] for HWENO5).

mod derivative;
mod hweno3;
mod hweno5;
mod spline;
mod weights;

pub use derivative::{eval_derivative4, eval_derivative6, line_derivatives, DerivativeOrder};
pub use hweno3::{interp_hweno3, HermiteCell3};
pub use hweno5::{interp_hweno5, HermiteCell5};
pub use spline::{interp_cubic_spline, CubicSpline1D, CubicSpline2D, SplineEnds};
pub use weights::WenoWeights;

pub(crate) use spline::locate;

use crate::grid::{Field1D, Grid1D};

/// Regularisation of the nonlinear weights.
pub const EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlInterpKind {
    CubicSpline,
    Hweno3,
    Hweno5,
}

impl SlInterpKind {
    pub fn derivative_order(self) -> Option<DerivativeOrder> {
        match self {
            SlInterpKind::CubicSpline => None,
            SlInterpKind::Hweno3 => Some(DerivativeOrder::Fourth),
            SlInterpKind::Hweno5 => Some(DerivativeOrder::Sixth),
        }
    }
}

/// Evaluates a Hermite-WENO interpolant of a line of samples in cell `k` at `t`.
///
/// `derivs` holds the derivative estimates at every node. On open lines the cells
/// next to the ends lack the outer HWENO5 nodes and use HWENO3 instead.
#[inline]
pub fn hermite_line_eval(
    values: &[f64],
    derivs: &[f64],
    dx: f64,
    periodic: bool,
    kind: SlInterpKind,
    k: usize,
    t: f64,
    eps: f64,
) -> f64 {
    let n = values.len();
    let idx = |o: isize| -> usize {
        let m = k as isize + o;
        if periodic {
            m.rem_euclid(n as isize) as usize
        } else {
            m as usize
        }
    };
    let full_stencil = periodic || (k >= 1 && k + 2 < n);
    if kind == SlInterpKind::Hweno5 && full_stencil {
        let cell = HermiteCell5 {
            f: [values[idx(-1)], values[k], values[idx(1)], values[idx(2)]],
            fp_im1: derivs[idx(-1)],
            fp_ip2: derivs[idx(2)],
            dx,
        };
        cell.eval_unit(t, eps)
    } else {
        let k1 = idx(1);
        let cell = HermiteCell3 {
            f_i: values[k],
            f_ip1: values[k1],
            fp_i: derivs[k],
            fp_ip1: derivs[k1],
            dx,
        };
        cell.eval_unit(t, eps)
    }
}

/// A line of samples prepared for repeated interpolation.
#[derive(Debug, Clone, PartialEq)]
pub enum SlInterpolant {
    Spline(CubicSpline1D),
    Hermite {
        kind: SlInterpKind,
        grid: Grid1D,
        values: Vec<f64>,
        derivs: Vec<f64>,
        eps: f64,
    },
}

impl SlInterpolant {
    pub fn new(kind: SlInterpKind, f: &Field1D, eps: f64) -> Self {
        match kind.derivative_order() {
            None => SlInterpolant::Spline(CubicSpline1D::new(f)),
            Some(order) => {
                let g = *f.grid();
                SlInterpolant::Hermite {
                    kind,
                    grid: g,
                    derivs: line_derivatives(f.values(), g.dx(), order, g.is_periodic()),
                    values: f.values().to_vec(),
                    eps,
                }
            }
        }
    }

    /// Value at `x`; `None` outside an open domain.
    #[inline]
    pub fn eval(&self, x: f64) -> Option<f64> {
        match self {
            SlInterpolant::Spline(s) => s.eval(x),
            SlInterpolant::Hermite { grid, .. } => {
                let (k, t) = locate(grid, x)?;
                Some(self.eval_cell(k, t))
            }
        }
    }

    #[inline]
    pub fn eval_cell(&self, k: usize, t: f64) -> f64 {
        match self {
            SlInterpolant::Spline(s) => s.eval_cell(k, t),
            SlInterpolant::Hermite {
                kind,
                grid,
                values,
                derivs,
                eps,
            } => hermite_line_eval(
                values,
                derivs,
                grid.dx(),
                grid.is_periodic(),
                *kind,
                k,
                t,
                *eps,
            ),
        }
    }
}
