use crate::error::{Error, Result};
use crate::grid::Field1D;
use crate::reconstruct_sl::{SlInterpKind, SlInterpolant, EPSILON};

/// One backward semi-Lagrangian step of `f_t + a f_x = 0` on a periodic grid:
/// `f_new(x_i) = f(x_i - a dt)`, interpolated with `kind`.
///
/// Departure points are located in index space, so shifts by whole cells land exactly
/// on nodes.
pub fn sl_step_const_1d(f: &Field1D, a: f64, dt: f64, kind: SlInterpKind) -> Result<Field1D> {
    let g = *f.grid();
    if !g.is_periodic() {
        return Err(Error::contract("constant-velocity semi-Lagrangian step needs a periodic grid"));
    }
    if !(a.is_finite() && dt.is_finite()) {
        return Err(Error::NonFinite("velocity or time step"));
    }
    let n = g.n();
    let shift = a * dt / g.dx();
    // Whole periods drop out; the remainder keeps its fractional part exact.
    let shift = shift - (shift / n as f64).floor() * n as f64;
    if shift == 0.0 {
        return Ok(f.clone());
    }
    let interp = SlInterpolant::new(kind, f, EPSILON);
    let mut whole = shift.floor();
    let mut frac = shift - whole;
    // Shifts within rounding of a whole number of cells are whole-cell shifts.
    if frac < 1e-12 {
        frac = 0.0;
    } else if frac > 1.0 - 1e-12 {
        whole += 1.0;
        frac = 0.0;
    }
    let values = (0..n)
        .map(|i| {
            // Departure point x_i - shift dx = x_{k} + t dx with k = i - whole - 1, t = 1 - frac.
            if frac == 0.0 {
                let k = (i as isize - whole as isize).rem_euclid(n as isize) as usize;
                f.values()[k]
            } else {
                let k = (i as isize - whole as isize - 1).rem_euclid(n as isize) as usize;
                interp.eval_cell(k, 1.0 - frac)
            }
        })
        .collect();
    let out = Field1D::from_values(g, values)?;
    out.ensure_finite("semi-Lagrangian update")?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;
    use std::f64::consts::PI;

    const KINDS: [SlInterpKind; 3] = [SlInterpKind::CubicSpline, SlInterpKind::Hweno3, SlInterpKind::Hweno5];

    #[test]
    fn whole_cell_shifts_are_exact() {
        let g = Grid1D::periodic(40, -1.0, 1.0).unwrap();
        let f = Field1D::from_fn(g, |x| if x.abs() < 0.3 { 1.0 } else { (7.0 * x).sin() });
        for kind in KINDS {
            let out = sl_step_const_1d(&f, 1.0, 3.0 * g.dx(), kind).unwrap();
            for i in 0..40 {
                assert_eq!(out.values()[(i + 3) % 40], f.values()[i], "{kind:?}");
            }
        }
    }

    #[test]
    fn zero_step_is_the_identity() {
        let g = Grid1D::periodic(16, 0.0, 1.0).unwrap();
        let f = Field1D::from_fn(g, |x| (2.0 * PI * x).cos());
        for kind in KINDS {
            assert_eq!(sl_step_const_1d(&f, 1.0, 0.0, kind).unwrap(), f);
        }
    }

    #[test]
    fn fractional_shift_matches_translated_sine() {
        let g = Grid1D::periodic(200, -1.0, 1.0).unwrap();
        let f = Field1D::from_fn(g, |x| (PI * x).sin());
        let dt = 0.37 * g.dx();
        for (kind, tol) in [(SlInterpKind::CubicSpline, 1e-8), (SlInterpKind::Hweno3, 1e-7), (SlInterpKind::Hweno5, 1e-11)] {
            let out = sl_step_const_1d(&f, -1.0, dt, kind).unwrap();
            let err = out.l1_error(|x| (PI * (x + dt)).sin());
            assert!(err < tol, "{kind:?}: {err:e}");
        }
    }

    #[test]
    fn open_grids_are_rejected() {
        let g = Grid1D::dirichlet(16, 0.0, 1.0).unwrap();
        assert!(sl_step_const_1d(&Field1D::zeros(g), 1.0, 0.1, SlInterpKind::Hweno5).is_err());
    }
}
