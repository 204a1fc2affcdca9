//! Global C2 cubic splines in uniform B-spline form.
//!
//! Interpolation conditions are `(c_{i-1} + 4 c_i + c_{i+1}) / 6 = f_i`. Coefficients are
//! stored with one ghost on the left and two on the right so that every cell `k` reads
//! `c_{k-1} .. c_{k+2}` from a contiguous slice.

use crate::error::{Error, Result};
use crate::grid::{Field1D, Field2D, Grid1D};
use crate::numerics::{solve_cyclic_constant, solve_tridiagonal};

/// End conditions of an open (non-periodic) spline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplineEnds {
    /// Zero second derivative at both ends.
    Natural,
    /// Prescribed first derivatives at the left and right ends.
    Clamped(f64, f64),
}

#[inline]
fn bspline_basis(t: f64) -> [f64; 4] {
    let s = 1.0 - t;
    let t2 = t * t;
    let t3 = t2 * t;
    [
        s * s * s / 6.0,
        (3.0 * t3 - 6.0 * t2 + 4.0) / 6.0,
        (-3.0 * t3 + 3.0 * t2 + 3.0 * t + 1.0) / 6.0,
        t3 / 6.0,
    ]
}

/// Extended coefficients `c_{-1} .. c_{n+1}` (length `n + 3`) for one line of data.
fn line_coefficients(values: &[f64], dx: f64, periodic: bool, ends: SplineEnds) -> Vec<f64> {
    let n = values.len();
    let mut ext = vec![0.0; n + 3];
    if periodic {
        let mut c: Vec<f64> = values.iter().map(|v| 6.0 * v).collect();
        solve_cyclic_constant(1.0, 4.0, &mut c);
        ext[1..=n].copy_from_slice(&c);
        ext[0] = c[n - 1];
        ext[n + 1] = c[0];
        ext[n + 2] = c[1 % n];
        return ext;
    }
    match ends {
        SplineEnds::Natural => {
            // c_0 = f_0, c_{n-1} = f_{n-1}; interior rows are tridiagonal.
            let m = n - 2;
            let mut rhs: Vec<f64> = values[1..n - 1].iter().map(|v| 6.0 * v).collect();
            if m > 0 {
                rhs[0] -= values[0];
                rhs[m - 1] -= values[n - 1];
                let ones = vec![1.0; m];
                let fours = vec![4.0; m];
                solve_tridiagonal(&ones, &fours, &ones, &mut rhs);
            }
            ext[1] = values[0];
            ext[2..n].copy_from_slice(&rhs);
            ext[n] = values[n - 1];
            ext[0] = 2.0 * ext[1] - ext[2];
            ext[n + 1] = 2.0 * ext[n] - ext[n - 1];
        }
        SplineEnds::Clamped(g0, g1) => {
            // c_{-1} = c_1 - 2 dx g0 and c_n = c_{n-2} + 2 dx g1 fold into the end rows.
            let mut lower = vec![1.0; n];
            let diag = vec![4.0; n];
            let mut upper = vec![1.0; n];
            upper[0] = 2.0;
            lower[n - 1] = 2.0;
            let mut rhs: Vec<f64> = values.iter().map(|v| 6.0 * v).collect();
            rhs[0] += 2.0 * dx * g0;
            rhs[n - 1] -= 2.0 * dx * g1;
            solve_tridiagonal(&lower, &diag, &upper, &mut rhs);
            ext[1..=n].copy_from_slice(&rhs);
            ext[0] = ext[2] - 2.0 * dx * g0;
            ext[n + 1] = ext[n - 1] + 2.0 * dx * g1;
        }
    }
    ext
}

/// Positions within `1e-12` cells of a node are treated as the node itself, so points
/// computed as `x_i + k dx` evaluate exactly at nodes.
#[inline]
fn snap_to_node(s: f64) -> f64 {
    let r = s.round();
    if (s - r).abs() <= 1e-12 * r.abs().max(1.0) {
        r
    } else {
        s
    }
}

/// Locates the cell containing `x`: returns `(k, t)` with `t` in `[0, 1]`, or `None`
/// when `x` is outside an open grid.
#[inline]
pub(crate) fn locate(grid: &Grid1D, x: f64) -> Option<(usize, f64)> {
    let n = grid.n();
    let dx = grid.dx();
    if grid.is_periodic() {
        let s = snap_to_node((grid.wrap(x) - grid.x_min()) / dx);
        let k = (s.floor() as usize).min(n - 1);
        Some((k, (s - k as f64).clamp(0.0, 1.0)))
    } else {
        let s = snap_to_node((x - grid.x_min()) / dx);
        if !(0.0..=(n - 1) as f64).contains(&s) {
            return None;
        }
        let k = (s.floor() as usize).min(n - 2);
        Some((k, s - k as f64))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline1D {
    grid: Grid1D,
    coeffs: Vec<f64>,
}

impl CubicSpline1D {
    /// Periodic spline on periodic grids, natural spline otherwise.
    pub fn new(f: &Field1D) -> Self {
        Self::with_ends(f, SplineEnds::Natural)
    }

    pub fn with_ends(f: &Field1D, ends: SplineEnds) -> Self {
        let grid = *f.grid();
        Self {
            coeffs: line_coefficients(f.values(), grid.dx(), grid.is_periodic(), ends),
            grid,
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// Value at `x`; `None` outside an open domain.
    #[inline]
    pub fn eval(&self, x: f64) -> Option<f64> {
        let (k, t) = locate(&self.grid, x)?;
        Some(self.eval_cell(k, t))
    }

    #[inline]
    pub fn eval_cell(&self, k: usize, t: f64) -> f64 {
        let b = bspline_basis(t);
        let c = &self.coeffs[k..k + 4];
        b[0] * c[0] + b[1] * c[1] + b[2] * c[2] + b[3] * c[3]
    }
}

/// Spline value at `x`; points outside an open domain are a contract violation.
pub fn interp_cubic_spline(spline: &CubicSpline1D, x: f64) -> Result<f64> {
    spline.eval(x).ok_or_else(|| {
        Error::contract(format!(
            "x = {x} is outside [{}, {}]",
            spline.grid.x_min(),
            spline.grid.x_max()
        ))
    })
}

/// Tensor-product cubic spline on a 2D grid (natural ends on open axes).
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline2D {
    x: Grid1D,
    y: Grid1D,
    /// `(nx + 3) x (ny + 3)` coefficients, x fastest.
    coeffs: Vec<f64>,
}

impl CubicSpline2D {
    pub fn new(f: &Field2D) -> Self {
        let g = f.grid();
        let (x, y) = (*g.x_axis(), *g.y_axis());
        let (nx, ny) = (x.n(), y.n());
        let sx = nx + 3;
        let sy = ny + 3;
        let mut rows = vec![0.0; sx * ny];
        for j in 0..ny {
            let c = line_coefficients(f.row(j), x.dx(), x.is_periodic(), SplineEnds::Natural);
            rows[j * sx..(j + 1) * sx].copy_from_slice(&c);
        }
        let mut coeffs = vec![0.0; sx * sy];
        let mut column = vec![0.0; ny];
        for i in 0..sx {
            for j in 0..ny {
                column[j] = rows[j * sx + i];
            }
            let c = line_coefficients(&column, y.dx(), y.is_periodic(), SplineEnds::Natural);
            for (l, v) in c.into_iter().enumerate() {
                coeffs[l * sx + i] = v;
            }
        }
        Self { x, y, coeffs }
    }

    #[inline]
    pub fn eval(&self, px: f64, py: f64) -> Option<f64> {
        let (k, tx) = locate(&self.x, px)?;
        let (l, ty) = locate(&self.y, py)?;
        let bx = bspline_basis(tx);
        let by = bspline_basis(ty);
        let sx = self.x.n() + 3;
        let mut acc = 0.0;
        for (m, wy) in by.iter().enumerate() {
            let row = &self.coeffs[(l + m) * sx + k..(l + m) * sx + k + 4];
            acc += wy * (bx[0] * row[0] + bx[1] * row[1] + bx[2] * row[2] + bx[3] * row[3]);
        }
        Some(acc)
    }
}
