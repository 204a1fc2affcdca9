use std::f64::consts::PI;

use crate::advect::{VelocityField, VelocityProvider};
use crate::error::{Error, Result};
use crate::fields::efield_radial;
use crate::grid::{Boundary, Field1D, Field2D, Grid1D, Grid2D};
use crate::numerics::compensated_sum;

/// Paraxial beam in the `(r, v)` phase plane:
/// `f_t + (v / eps) f_r + (E - r / eps) f_v = 0`, `E(r) = (1/r) int_0^r s rho(s) ds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSetup {
    pub n: usize,
    pub eps: f64,
    /// Velocity variance of the initial Maxwellian.
    pub alpha: f64,
    pub half_width: f64,
    pub t_end: f64,
    pub dt: f64,
}

impl BeamSetup {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            eps: 0.7,
            alpha: 0.2,
            half_width: 4.0,
            t_end: 20.0,
            dt: 1.0 / 800.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (v, what) in [
            (self.eps, "eps"),
            (self.alpha, "alpha"),
            (self.half_width, "half_width"),
            (self.t_end, "t_end"),
            (self.dt, "dt"),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(format!("beam {what} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// `n x n` nodes on `[-L, L]^2`, both ends included, closed periodically so that the
    /// conservative fluxes telescope; x is the position `r`, y the velocity `v`.
    pub fn grid(&self) -> Result<Grid2D> {
        let l = self.half_width;
        if self.n < 2 {
            return Err(Error::config(format!("beam grid needs at least 2 nodes, got {}", self.n)));
        }
        let period_end = l + 2.0 * l / (self.n - 1) as f64;
        Grid2D::new((self.n, self.n), (-l, period_end), (-l, period_end), Boundary::Periodic)
    }

    /// Smoothed indicator of `[-1.2, 1.2]`.
    pub fn profile(r: f64) -> f64 {
        0.5 * libm::erf((r + 1.2) / 0.3) - 0.5 * libm::erf((r - 1.2) / 0.3)
    }

    pub fn initial_value(&self, r: f64, v: f64) -> f64 {
        4.0 / (2.0 * PI * self.alpha).sqrt() * Self::profile(r) * (-v * v / (2.0 * self.alpha)).exp()
    }

    pub fn initial(&self) -> Result<Field2D> {
        self.validate()?;
        Ok(Field2D::from_fn(self.grid()?, |r, v| self.initial_value(r, v)))
    }
}

/// `rho(r) = int f dv` by the trapezoid rule over the velocity nodes.
pub fn charge_density(f: &Field2D) -> Result<Field1D> {
    let g = f.grid();
    let (nx, ny, dv) = (g.nx(), g.ny(), g.dy());
    let rho = (0..nx)
        .map(|i| {
            let col = (0..ny).map(|j| {
                let w = if j == 0 || j + 1 == ny { 0.5 } else { 1.0 };
                w * f.at(i, j)
            });
            dv * compensated_sum(col)
        })
        .collect();
    let r = g.x_axis();
    Field1D::from_values(Grid1D::dirichlet(nx, r.x_min(), r.x(nx - 1))?, rho)
}

/// Phase-space velocity `A = (v / eps, E(r) - r / eps)` for the density `f`.
pub fn rhs_beam(f: &Field2D, eps: f64) -> Result<VelocityField> {
    let g = *f.grid();
    let e = efield_radial(&charge_density(f)?)?;
    let (nx, ny) = (g.nx(), g.ny());
    let mut ax = Vec::with_capacity(g.len());
    let mut ay = Vec::with_capacity(g.len());
    for j in 0..ny {
        for i in 0..nx {
            let (r, v) = g.coords(i, j);
            ax.push(v / eps);
            ay.push(e.values()[i] - r / eps);
        }
    }
    VelocityField::new(g, ax, ay)
}

/// `int (v^2 / 2) f dr dv` by the rectangle rule.
pub fn kinetic_energy(f: &Field2D) -> f64 {
    let g = f.grid();
    let terms = (0..g.ny()).flat_map(|j| {
        let v = g.y_axis().x(j);
        f.row(j).iter().map(move |x| 0.5 * v * v * x)
    });
    g.cell_area() * compensated_sum(terms)
}

/// Self-consistent beam velocity for the engines.
#[derive(Debug, Clone, Copy)]
pub struct BeamField {
    pub eps: f64,
}

impl VelocityProvider for BeamField {
    fn velocity(&mut self, f: &Field2D, _t: f64) -> Result<VelocityField> {
        rhs_beam(f, self.eps)
    }
}
