use crate::error::Result;
use crate::grid::{Field1D, Grid1D};

/// `E(r) = (1/r) int_0^r s rho(s) ds` at the nodes of a signed radial grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField {
    grid: Grid1D,
    values: Vec<f64>,
}

impl RadialField {
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Integrates `s rho(s)` by the trapezoid rule outward from `r = 0` in both directions.
///
/// The integrand vanishes at the origin, so the first partial interval (from 0 to the
/// nearest node on each side) is a trapezoid with one zero end. `E(0) = 0`.
pub fn efield_radial(rho: &Field1D) -> Result<RadialField> {
    rho.ensure_finite("charge density")?;
    let g = *rho.grid();
    let n = g.n();
    let dx = g.dx();
    let s_rho: Vec<f64> = g.nodes().zip(rho.values()).map(|(r, q)| r * q).collect();
    let mut integral = vec![0.0; n];
    // First node at or right of the origin.
    let right = (0..n).find(|&i| g.x(i) >= 0.0).unwrap_or(n);
    if right < n {
        integral[right] = 0.5 * g.x(right) * s_rho[right];
        for i in right + 1..n {
            integral[i] = integral[i - 1] + 0.5 * dx * (s_rho[i - 1] + s_rho[i]);
        }
    }
    if right > 0 {
        let left = right - 1;
        integral[left] = 0.5 * g.x(left) * s_rho[left];
        for i in (0..left).rev() {
            integral[i] = integral[i + 1] - 0.5 * dx * (s_rho[i + 1] + s_rho[i]);
        }
    }
    let values = g
        .nodes()
        .zip(integral)
        .map(|(r, q)| if r == 0.0 { 0.0 } else { q / r })
        .collect();
    Ok(RadialField { grid: g, values })
}
