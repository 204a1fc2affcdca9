use super::velocity::{VelocityField, VelocityProvider};
use crate::error::{Error, Result};
use crate::grid::{Field1D, Field2D};
use crate::reconstruct_fd::{divergence_2d, line_divergence, FluxOptions, LineScratch, LineVelocity, Velocity1D, VelocityComponents};

/// Slack on the CFL comparison so that `dt = cfl * dx / |a|` is always accepted.
const CFL_SLACK: f64 = 1e-12;

/// `y + dt / 6 (k1 + 2 k2 + 2 k3 + k4)`.
pub fn rk4_combine(y: &[f64], k: [&[f64]; 4], dt: f64) -> Vec<f64> {
    let [k1, k2, k3, k4] = k;
    (0..y.len())
        .map(|i| y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

fn axpy(y: &[f64], a: f64, k: &[f64]) -> Vec<f64> {
    y.iter().zip(k).map(|(y, k)| y + a * k).collect()
}

fn check_cfl(dt: f64, courant: f64, limit: f64) -> Result<()> {
    if !(dt.is_finite() && dt >= 0.0) {
        return Err(Error::contract(format!("time step {dt} must be finite and non-negative")));
    }
    if courant > limit * (1.0 + CFL_SLACK) {
        return Err(Error::Cfl { dt, courant, limit });
    }
    Ok(())
}

/// `dt * max(max |a_x| / dx, max |a_y| / dy)`.
pub fn courant_number_2d(velocity: &VelocityField, dt: f64) -> f64 {
    let g = velocity.grid();
    let (mx, my) = velocity.max_abs();
    dt * (mx / g.dx()).max(my / g.dy())
}

/// One RK4 step of `f_t + (a f)_x = 0` with a time-independent velocity.
pub fn fd_step_rk4_1d(f: &Field1D, velocity: Velocity1D<'_>, dt: f64, opts: &FluxOptions, cfl_limit: f64) -> Result<Field1D> {
    let g = *f.grid();
    let (line_vel, amax) = match velocity {
        Velocity1D::Constant(a) => (LineVelocity::Constant(a), a.abs()),
        Velocity1D::Field(a) => {
            if a.len() != g.n() {
                return Err(Error::contract("velocity length differs from the grid"));
            }
            (LineVelocity::Nodal(a), a.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
        }
    };
    if !amax.is_finite() {
        return Err(Error::NonFinite("velocity"));
    }
    check_cfl(dt, dt * amax / g.dx(), cfl_limit)?;
    if dt == 0.0 || amax == 0.0 {
        return Ok(f.clone());
    }
    let n = g.n();
    let mut scratch = LineScratch::default();
    let mut rate = |y: &[f64]| {
        let mut out = vec![0.0; n];
        line_divergence(y, line_vel, g.dx(), g.is_periodic(), opts, &mut scratch, &mut out);
        out
    };
    let y = f.values();
    let k1 = rate(y);
    let k2 = rate(&axpy(y, 0.5 * dt, &k1));
    let k3 = rate(&axpy(y, 0.5 * dt, &k2));
    let k4 = rate(&axpy(y, dt, &k3));
    let out = Field1D::from_values(g, rk4_combine(y, [&k1, &k2, &k3, &k4], dt))?;
    out.ensure_finite("finite-difference update")?;
    Ok(out)
}

/// One RK4 step of `f_t + div(A f) = 0` from time `t`.
///
/// `first` is the velocity for `f` at `t`; the later stages ask `provider` for the
/// velocity of each stage value, so self-consistent fields are re-solved per stage.
pub fn fd_step_rk4_2d(
    f: &Field2D,
    t: f64,
    dt: f64,
    first: &VelocityField,
    provider: &mut dyn VelocityProvider,
    opts: &FluxOptions,
    cfl_limit: f64,
) -> Result<Field2D> {
    let g = *f.grid();
    if first.grid() != &g {
        return Err(Error::contract("density and velocity live on different grids"));
    }
    check_cfl(dt, courant_number_2d(first, dt), cfl_limit)?;
    if dt == 0.0 {
        return Ok(f.clone());
    }
    let rate = |y: &Field2D, a: &VelocityField| {
        let mut out = vec![0.0; g.len()];
        divergence_2d(y, VelocityComponents { ax: a.ax(), ay: a.ay() }, opts, &mut out);
        out
    };
    let stage = |k: &[f64], h: f64| Field2D::from_values(g, axpy(f.values(), h, k));
    let k1 = rate(f, first);
    let f2 = stage(&k1, 0.5 * dt)?;
    let k2 = rate(&f2, &provider.velocity(&f2, t + 0.5 * dt)?);
    let f3 = stage(&k2, 0.5 * dt)?;
    let k3 = rate(&f3, &provider.velocity(&f3, t + 0.5 * dt)?);
    let f4 = stage(&k3, dt)?;
    let k4 = rate(&f4, &provider.velocity(&f4, t + dt)?);
    let out = Field2D::from_values(g, rk4_combine(f.values(), [&k1, &k2, &k3, &k4], dt))?;
    out.ensure_finite("finite-difference update")?;
    Ok(out)
}
