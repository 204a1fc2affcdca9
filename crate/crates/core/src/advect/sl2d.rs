use super::velocity::VelocityField;
use super::SchemeConfig;
use crate::error::{Error, Result};
use crate::grid::{Field2D, Grid2D};
use crate::reconstruct_sl::{
    eval_derivative4, eval_derivative6, hermite_line_eval, line_derivatives, locate, CubicSpline2D,
    DerivativeOrder, HermiteCell3, HermiteCell5, SlInterpKind,
};

/// A field prepared for evaluation at arbitrary points: tensor-product spline or
/// dimension-by-dimension Hermite-WENO (along x on the rows around the point, then along y).
#[derive(Debug, Clone, PartialEq)]
pub enum Interpolant2D {
    Spline(CubicSpline2D),
    Hermite {
        kind: SlInterpKind,
        grid: Grid2D,
        values: Vec<f64>,
        /// x-derivative estimates of every row.
        x_derivs: Vec<f64>,
        eps: f64,
    },
}

impl Interpolant2D {
    pub fn new(kind: SlInterpKind, f: &Field2D, eps: f64) -> Self {
        let Some(order) = kind.derivative_order() else {
            return Interpolant2D::Spline(CubicSpline2D::new(f));
        };
        let grid = *f.grid();
        let x = grid.x_axis();
        let mut x_derivs = Vec::with_capacity(grid.len());
        for j in 0..grid.ny() {
            x_derivs.extend(line_derivatives(f.row(j), x.dx(), order, x.is_periodic()));
        }
        Interpolant2D::Hermite {
            kind,
            grid,
            values: f.values().to_vec(),
            x_derivs,
            eps,
        }
    }

    /// Value at `(x, y)`; `None` outside an open domain.
    pub fn eval(&self, x: f64, y: f64) -> Option<f64> {
        match self {
            Interpolant2D::Spline(s) => s.eval(x, y),
            Interpolant2D::Hermite {
                kind,
                grid,
                values,
                x_derivs,
                eps,
            } => {
                let (xa, ya) = (grid.x_axis(), grid.y_axis());
                let (k, tx) = locate(xa, x)?;
                let (l, ty) = locate(ya, y)?;
                let (nx, ny) = (xa.n(), ya.n());
                let (below, above) = match kind {
                    SlInterpKind::Hweno5 => (4, 5),
                    _ => (2, 3),
                };
                let mut column = [0.0; 10];
                let along_x = |r: usize| {
                    let row = r * nx..(r + 1) * nx;
                    hermite_line_eval(
                        &values[row.clone()],
                        &x_derivs[row],
                        xa.dx(),
                        xa.is_periodic(),
                        *kind,
                        k,
                        tx,
                        *eps,
                    )
                };
                let (len, cell) = if ya.is_periodic() {
                    for (m, c) in column[..below + above + 1].iter_mut().enumerate() {
                        let r = (l as isize + m as isize - below as isize).rem_euclid(ny as isize);
                        *c = along_x(r as usize);
                    }
                    (below + above + 1, below)
                } else {
                    let r0 = l.saturating_sub(below);
                    let r1 = (l + above).min(ny - 1);
                    for (m, c) in column[..=r1 - r0].iter_mut().enumerate() {
                        *c = along_x(r0 + m);
                    }
                    (r1 - r0 + 1, l - r0)
                };
                let dy = ya.dx();
                let value = if len == below + above + 1 {
                    match kind {
                        SlInterpKind::Hweno5 => HermiteCell5 {
                            f: [column[3], column[4], column[5], column[6]],
                            fp_im1: eval_derivative6(column[0..7].try_into().unwrap(), dy),
                            fp_ip2: eval_derivative6(column[3..10].try_into().unwrap(), dy),
                            dx: dy,
                        }
                        .eval_unit(ty, *eps),
                        _ => HermiteCell3 {
                            f_i: column[2],
                            f_ip1: column[3],
                            fp_i: eval_derivative4(column[0..5].try_into().unwrap(), dy),
                            fp_ip1: eval_derivative4(column[1..6].try_into().unwrap(), dy),
                            dx: dy,
                        }
                        .eval_unit(ty, *eps),
                    }
                } else {
                    let order = kind.derivative_order().unwrap_or(DerivativeOrder::Fourth);
                    let derivs = line_derivatives(&column[..len], dy, order, false);
                    hermite_line_eval(&column[..len], &derivs, dy, false, *kind, cell, ty, *eps)
                };
                Some(value)
            }
        }
    }
}

/// Departure points of the characteristics ending at every node.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicFoot {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Fixed-point iterations used at each node.
    pub iterations: Vec<u32>,
}

/// Solves `d = span * A(p - lag * d)` for the displacement `d` of the characteristic
/// ending at `p`, starting from `d = span * A(p)`.
///
/// Returns the displacement and the iteration count, or `None` if the displacement
/// grows beyond `limit`.
pub fn solve_departure(
    velocity: &VelocityField,
    p: (f64, f64),
    span: f64,
    lag: f64,
    tol: f64,
    max_iter: usize,
    limit: f64,
) -> Option<((f64, f64), u32)> {
    let (u, v) = velocity.eval(p.0, p.1);
    let mut d = (span * u, span * v);
    for it in 1..=max_iter {
        let (u, v) = velocity.eval(p.0 - lag * d.0, p.1 - lag * d.1);
        let next = (span * u, span * v);
        let change = (next.0 - d.0).abs().max((next.1 - d.1).abs());
        d = next;
        if !(d.0.abs() <= limit && d.1.abs() <= limit) {
            return None;
        }
        if change <= tol * (1.0 + d.0.abs().max(d.1.abs())) {
            return Some((d, it as u32));
        }
    }
    Some((d, max_iter as u32))
}

fn domain_extent(g: &Grid2D) -> f64 {
    g.x_axis().length().max(g.y_axis().length())
}

fn trace(velocity: &VelocityField, span: f64, lag: f64, cfg: &SchemeConfig) -> Result<CharacteristicFoot> {
    let g = *velocity.grid();
    let limit = domain_extent(&g);
    let mut foot = CharacteristicFoot {
        x: Vec::with_capacity(g.len()),
        y: Vec::with_capacity(g.len()),
        iterations: Vec::with_capacity(g.len()),
    };
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            let p = g.coords(i, j);
            let (d, it) = solve_departure(velocity, p, span, lag, cfg.fixed_point_tol, cfg.fixed_point_max_iter, limit)
                .ok_or_else(|| Error::Step {
                    t: f64::NAN,
                    reason: format!("characteristic from ({}, {}) left the domain extent", p.0, p.1),
                })?;
            foot.x.push(p.0 - d.0);
            foot.y.push(p.1 - d.1);
            foot.iterations.push(it);
        }
    }
    Ok(foot)
}

fn interpolate_at(f: &Field2D, foot: &CharacteristicFoot, kind: SlInterpKind, eps: f64) -> Result<Field2D> {
    let interp = Interpolant2D::new(kind, f, eps);
    let values = foot
        .x
        .iter()
        .zip(&foot.y)
        .map(|(&x, &y)| interp.eval(x, y).unwrap_or(0.0))
        .collect();
    let out = Field2D::from_values(*f.grid(), values)?;
    out.ensure_finite("semi-Lagrangian update")?;
    Ok(out)
}

/// Departure points for a leap-frog step over `[t_{n-1}, t_{n+1}]` with the velocity
/// frozen at `t_n`: `d = (dt_prev + dt) A(x - d dt / (dt_prev + dt))`.
pub fn leapfrog_feet(velocity: &VelocityField, dt_prev: f64, dt: f64, cfg: &SchemeConfig) -> Result<CharacteristicFoot> {
    let span = dt_prev + dt;
    trace(velocity, span, dt / span, cfg)
}

/// Two-level semi-Lagrangian step: `f_{n+1}(x) = f_{n-1}(x - d)` with the displacement
/// from [`leapfrog_feet`]. Feet outside an open domain receive 0.
pub fn sl_step_leapfrog_2d(
    f_prev: &Field2D,
    velocity: &VelocityField,
    dt_prev: f64,
    dt: f64,
    kind: SlInterpKind,
    cfg: &SchemeConfig,
) -> Result<Field2D> {
    if f_prev.grid() != velocity.grid() {
        return Err(Error::contract("density and velocity live on different grids"));
    }
    if (dt == 0.0 && dt_prev == 0.0) || velocity.max_abs() == (0.0, 0.0) {
        return Ok(f_prev.clone());
    }
    let foot = leapfrog_feet(velocity, dt_prev, dt, cfg)?;
    interpolate_at(f_prev, &foot, kind, cfg.eps)
}

/// First step of the two-level scheme: one midpoint (RK2) backward trace with the
/// velocity at `t_0`, `d = dt A(x - dt A(x) / 2)`.
pub fn sl_step_bootstrap_2d(
    f: &Field2D,
    velocity: &VelocityField,
    dt: f64,
    kind: SlInterpKind,
    cfg: &SchemeConfig,
) -> Result<Field2D> {
    if f.grid() != velocity.grid() {
        return Err(Error::contract("density and velocity live on different grids"));
    }
    let g = *f.grid();
    let mut foot = CharacteristicFoot {
        x: Vec::with_capacity(g.len()),
        y: Vec::with_capacity(g.len()),
        iterations: vec![1; g.len()],
    };
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            let (x, y) = g.coords(i, j);
            let (u, v) = velocity.eval(x, y);
            let (u, v) = velocity.eval(x - 0.5 * dt * u, y - 0.5 * dt * v);
            foot.x.push(x - dt * u);
            foot.y.push(y - dt * v);
        }
    }
    interpolate_at(f, &foot, kind, cfg.eps)
}
