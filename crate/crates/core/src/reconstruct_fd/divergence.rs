use super::hweno5::{flux_hweno5_minus, flux_hweno5_plus};
use super::weno5::{flux_weno5_js, flux_weno5_js_plus};
use crate::error::{Error, Result};
use crate::grid::{Field1D, Field2D};
use crate::reconstruct_sl::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FluxKind {
    Weno5,
    Hweno5,
}

/// How the advective flux `a f` is split into left- and right-going parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Splitting {
    /// Reconstruct `a f` from the upwind side given by the sign of `a` at the interface.
    Upwind,
    /// Global Lax-Friedrichs: `(a f +- alpha f) / 2` with `alpha = max |a|` on the line.
    LaxFriedrichs,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxOptions {
    pub kind: FluxKind,
    pub splitting: Splitting,
    pub eps: f64,
}

impl FluxOptions {
    pub fn new(kind: FluxKind) -> Self {
        Self {
            kind,
            splitting: Splitting::Upwind,
            eps: EPSILON,
        }
    }
}

/// Wind direction at an interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wind {
    FromLeft,
    FromRight,
}

/// Point values around the interface `x_{i+1/2}`: `f_{i-4} .. f_{i+5}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxStencil {
    pub window: [f64; 10],
    pub wind: Wind,
}

impl FluxStencil {
    pub fn flux(&self, kind: FluxKind, eps: f64) -> f64 {
        let w = &self.window;
        match (kind, self.wind) {
            (FluxKind::Hweno5, Wind::FromLeft) => flux_hweno5_minus(w[0..9].try_into().unwrap(), eps),
            (FluxKind::Hweno5, Wind::FromRight) => flux_hweno5_plus(w[1..10].try_into().unwrap(), eps),
            (FluxKind::Weno5, Wind::FromLeft) => flux_weno5_js(w[2..7].try_into().unwrap(), eps),
            (FluxKind::Weno5, Wind::FromRight) => flux_weno5_js_plus(w[3..8].try_into().unwrap(), eps),
        }
    }
}

/// Ghost width on each side of a line.
const PAD: usize = 5;

#[inline]
fn minus_flux(kind: FluxKind, p: &[f64], i: isize, eps: f64) -> f64 {
    // Node m lives at p[m + PAD]; interface i+1/2 reads nodes i-4 .. i+4.
    let s = (i + PAD as isize) as usize;
    match kind {
        FluxKind::Hweno5 => flux_hweno5_minus(p[s - 4..s + 5].try_into().unwrap(), eps),
        FluxKind::Weno5 => flux_weno5_js(p[s - 2..s + 3].try_into().unwrap(), eps),
    }
}

#[inline]
fn plus_flux(kind: FluxKind, p: &[f64], i: isize, eps: f64) -> f64 {
    let s = (i + PAD as isize) as usize;
    match kind {
        FluxKind::Hweno5 => flux_hweno5_plus(p[s - 3..s + 6].try_into().unwrap(), eps),
        FluxKind::Weno5 => flux_weno5_js_plus(p[s - 1..s + 4].try_into().unwrap(), eps),
    }
}

/// Advection velocity along one line.
#[derive(Debug, Clone, Copy)]
pub enum LineVelocity<'a> {
    Constant(f64),
    Nodal(&'a [f64]),
}

/// Reusable buffers for [`line_divergence`].
#[derive(Debug, Default, Clone)]
pub struct LineScratch {
    q_plus: Vec<f64>,
    q_minus: Vec<f64>,
    a: Vec<f64>,
    flux: Vec<f64>,
}

fn fill_padded(dst: &mut Vec<f64>, n: usize, periodic: bool, src: impl Fn(usize) -> f64, open_fill: impl Fn(isize) -> f64) {
    dst.clear();
    dst.resize(n + 2 * PAD, 0.0);
    for (k, d) in dst.iter_mut().enumerate() {
        let m = k as isize - PAD as isize;
        *d = if (0..n as isize).contains(&m) {
            src(m as usize)
        } else if periodic {
            src(m.rem_euclid(n as isize) as usize)
        } else {
            open_fill(m)
        };
    }
}

/// Writes `-(F_{i+1/2} - F_{i-1/2}) / dx` into `out` for the line `values` advected by
/// `velocity`. Open lines see zero inflow (the field vanishes beyond the ends), and their
/// end faces pass the upwind end value, so a field that vanishes at the ends keeps its
/// mass exactly.
pub fn line_divergence(
    values: &[f64],
    velocity: LineVelocity<'_>,
    dx: f64,
    periodic: bool,
    opts: &FluxOptions,
    scratch: &mut LineScratch,
    out: &mut [f64],
) {
    let n = values.len();
    debug_assert_eq!(out.len(), n);
    let vel = |m: usize| match velocity {
        LineVelocity::Constant(a) => a,
        LineVelocity::Nodal(a) => a[m],
    };
    let LineScratch {
        q_plus,
        q_minus,
        a,
        flux,
    } = scratch;
    fill_padded(a, n, periodic, vel, |m| vel(m.clamp(0, n as isize - 1) as usize));

    // Interfaces x_{i+1/2} for i = -1 .. n-1, stored at flux[i + 1].
    flux.clear();
    flux.resize(n + 1, 0.0);
    let first = if periodic { 1 } else { 0 };
    match opts.splitting {
        Splitting::Upwind => {
            fill_padded(q_plus, n, periodic, |m| vel(m) * values[m], |_| 0.0);
            for k in first..=n {
                let i = k as isize - 1;
                let s = (i + PAD as isize) as usize;
                let a_face = 0.5 * (a[s] + a[s + 1]);
                flux[k] = if a_face >= 0.0 {
                    minus_flux(opts.kind, q_plus, i, opts.eps)
                } else {
                    plus_flux(opts.kind, q_plus, i, opts.eps)
                };
            }
        }
        Splitting::LaxFriedrichs => {
            let alpha = (0..n).map(|m| vel(m).abs()).fold(0.0, f64::max);
            fill_padded(q_plus, n, periodic, |m| 0.5 * (vel(m) + alpha) * values[m], |_| 0.0);
            fill_padded(q_minus, n, periodic, |m| 0.5 * (vel(m) - alpha) * values[m], |_| 0.0);
            for k in first..=n {
                let i = k as isize - 1;
                flux[k] = minus_flux(opts.kind, q_plus, i, opts.eps)
                    + plus_flux(opts.kind, q_minus, i, opts.eps);
            }
        }
    }
    if periodic {
        flux[0] = flux[n];
    } else {
        // The end faces only carry outflow of the end values.
        let edge = |m: usize, outward: f64| {
            let q = vel(m) * values[m];
            if vel(m) * outward > 0.0 {
                q
            } else {
                0.0
            }
        };
        flux[0] = edge(0, -1.0);
        flux[n] = edge(n - 1, 1.0);
    }
    for i in 0..n {
        out[i] = -(flux[i + 1] - flux[i]) / dx;
    }
}

/// Velocity for [`divergence_1d`].
#[derive(Debug, Clone, Copy)]
pub enum Velocity1D<'a> {
    Constant(f64),
    Field(&'a [f64]),
}

/// Conservative approximation of `-d(a f)/dx` at every node.
pub fn divergence_1d(f: &Field1D, velocity: Velocity1D<'_>, opts: &FluxOptions) -> Result<Field1D> {
    let g = *f.grid();
    let line_vel = match velocity {
        Velocity1D::Constant(a) => {
            if !a.is_finite() {
                return Err(Error::NonFinite("velocity"));
            }
            LineVelocity::Constant(a)
        }
        Velocity1D::Field(a) => {
            if a.len() != g.n() {
                return Err(Error::contract("velocity length differs from the grid"));
            }
            if a.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("velocity"));
            }
            LineVelocity::Nodal(a)
        }
    };
    let mut out = Field1D::zeros(g);
    let mut scratch = LineScratch::default();
    line_divergence(
        f.values(),
        line_vel,
        g.dx(),
        g.is_periodic(),
        opts,
        &mut scratch,
        out.values_mut(),
    );
    Ok(out)
}

/// Nodal velocity components on a 2D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityComponents<'a> {
    pub ax: &'a [f64],
    pub ay: &'a [f64],
}

/// Dimension-by-dimension conservative approximation of `-div(A f)`.
pub fn divergence_2d(
    f: &Field2D,
    velocity: VelocityComponents<'_>,
    opts: &FluxOptions,
    out: &mut [f64],
) {
    let g = *f.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let mut scratch = LineScratch::default();
    let mut line_out = vec![0.0; nx.max(ny)];
    for j in 0..ny {
        let row = j * nx..(j + 1) * nx;
        line_divergence(
            &f.values()[row.clone()],
            LineVelocity::Nodal(&velocity.ax[row.clone()]),
            g.dx(),
            g.x_axis().is_periodic(),
            opts,
            &mut scratch,
            &mut line_out[..nx],
        );
        out[row].copy_from_slice(&line_out[..nx]);
    }
    let mut col = vec![0.0; ny];
    let mut col_a = vec![0.0; ny];
    for i in 0..nx {
        for j in 0..ny {
            col[j] = f.values()[j * nx + i];
            col_a[j] = velocity.ay[j * nx + i];
        }
        line_divergence(
            &col,
            LineVelocity::Nodal(&col_a),
            g.dy(),
            g.y_axis().is_periodic(),
            opts,
            &mut scratch,
            &mut line_out[..ny],
        );
        for j in 0..ny {
            out[j * nx + i] += line_out[j];
        }
    }
}
