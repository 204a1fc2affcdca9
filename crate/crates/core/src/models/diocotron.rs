use crate::advect::{VelocityField, VelocityProvider};
use crate::error::{Error, Result};
use crate::fields::{build_ghost_extrapolation, potential_energy, velocity_from_potential, PoissonSolver};
use crate::grid::{classify_disk_nodes, DiskMask, Field2D, Grid2D};
use crate::numerics::compensated_sum;

/// Guiding-center model on a disk: `rho_t + U . grad rho = 0`, `U = (-phi_y, phi_x)`,
/// `-lap(phi) = rho`, `phi = 0` on the circle, started from a perturbed annulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiocotronSetup {
    pub n: usize,
    /// Amplitude of the angular perturbation.
    pub eps: f64,
    pub r_inner: f64,
    pub r_outer: f64,
    /// Angular mode number of the perturbation.
    pub mode: u32,
    pub radius: f64,
    /// Half-width of the square grid holding the disk.
    pub half_width: f64,
    pub t_end: f64,
}

impl DiocotronSetup {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            eps: 0.001,
            r_inner: 5.0,
            r_outer: 8.0,
            mode: 7,
            radius: 10.0,
            half_width: 11.0,
            t_end: 60.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_inner >= 0.0 && self.r_inner < self.r_outer && self.r_outer < self.radius) {
            return Err(Error::config(format!(
                "need 0 <= r_inner < r_outer < radius, got {} / {} / {}",
                self.r_inner, self.r_outer, self.radius
            )));
        }
        if !(self.half_width > self.radius) {
            return Err(Error::config("the grid half-width must exceed the disk radius"));
        }
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::config(format!("t_end must be positive, got {}", self.t_end)));
        }
        if !self.eps.is_finite() {
            return Err(Error::config("perturbation amplitude must be finite"));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid2D> {
        Grid2D::square(self.n, self.half_width)
    }

    pub fn initial_value(&self, x: f64, y: f64) -> f64 {
        let r = x.hypot(y);
        if r < self.r_inner || r > self.r_outer {
            return 0.0;
        }
        let theta = y.atan2(x);
        (1.0 + self.eps * (self.mode as f64 * theta).cos()) * (-4.0 * (r - 6.5) * (r - 6.5)).exp()
    }

    pub fn initial(&self) -> Result<Field2D> {
        self.validate()?;
        Ok(Field2D::from_fn(self.grid()?, |x, y| self.initial_value(x, y)))
    }
}

/// Self-consistent drift velocity: Poisson solve on the disk, then `U = (-phi_y, phi_x)`.
#[derive(Debug)]
pub struct GuidingCenterField {
    solver: PoissonSolver,
}

impl GuidingCenterField {
    pub fn new(setup: &DiocotronSetup) -> Result<Self> {
        setup.validate()?;
        let mask = classify_disk_nodes(&setup.grid()?, setup.radius)?;
        Ok(Self {
            solver: PoissonSolver::new(build_ghost_extrapolation(&mask)?)?,
        })
    }

    pub fn mask(&self) -> &DiskMask {
        self.solver.ghosts().mask()
    }

    pub fn solver(&self) -> &PoissonSolver {
        &self.solver
    }

    /// Velocity and `int |grad phi|^2` for the density `rho`.
    pub fn solve(&self, rho: &Field2D) -> Result<(VelocityField, f64)> {
        let phi = self.solver.solve(rho)?;
        let u = velocity_from_potential(&phi, self.mask())?;
        let energy = potential_energy(&u, self.mask());
        Ok((u, energy))
    }
}

impl VelocityProvider for GuidingCenterField {
    fn velocity(&mut self, f: &Field2D, _t: f64) -> Result<VelocityField> {
        Ok(self.solve(f)?.0)
    }
}

/// `|int rho exp(-i m theta) dx|`, the size of the angular Fourier mode `m`.
pub fn angular_mode_amplitude(rho: &Field2D, m: u32) -> f64 {
    let g = rho.grid();
    let mut re = Vec::with_capacity(g.len());
    let mut im = Vec::with_capacity(g.len());
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            let (x, y) = g.coords(i, j);
            let theta = m as f64 * y.atan2(x);
            let v = rho.at(i, j);
            re.push(v * theta.cos());
            im.push(-v * theta.sin());
        }
    }
    g.cell_area() * compensated_sum(re).hypot(compensated_sum(im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_density_lives_on_the_annulus() {
        let s = DiocotronSetup::new(64);
        let f = s.initial().unwrap();
        let g = *f.grid();
        for j in 0..g.ny() {
            for i in 0..g.nx() {
                let (x, y) = g.coords(i, j);
                let r = x.hypot(y);
                let v = f.at(i, j);
                if !(5.0..=8.0).contains(&r) {
                    assert_eq!(v, 0.0);
                } else {
                    assert!(v > 0.0);
                }
            }
        }
    }

    #[test]
    fn perturbation_selects_its_mode() {
        let s = DiocotronSetup::new(128);
        let f = s.initial().unwrap();
        let a7 = angular_mode_amplitude(&f, 7);
        let a0 = angular_mode_amplitude(&f, 0);
        assert!((a0 - f.mass()).abs() < 1e-10 * a0);
        // eps/2 of the mean from cos(7 theta), up to grid sampling.
        assert!((a7 / (0.5 * s.eps * a0) - 1.0).abs() < 0.2, "{a7} vs {a0}");
        assert!(angular_mode_amplitude(&f, 3) < 0.2 * a7);
    }

    #[test]
    fn annulus_drift_is_azimuthal_at_first_order() {
        let mut s = DiocotronSetup::new(96);
        s.eps = 0.0;
        let field = GuidingCenterField::new(&s).unwrap();
        let (u, energy) = field.solve(&s.initial().unwrap()).unwrap();
        assert!(energy > 0.0);
        let g = *u.grid();
        let mut radial = 0.0f64;
        let mut total = 0.0f64;
        for j in 0..g.ny() {
            for i in 0..g.nx() {
                let (x, y) = g.coords(i, j);
                let r = x.hypot(y);
                if !(1.0..=9.0).contains(&r) {
                    continue;
                }
                let k = g.index(i, j);
                radial = radial.max(((u.ax()[k] * x + u.ay()[k] * y) / r).abs());
                total = total.max(u.ax()[k].hypot(u.ay()[k]));
            }
        }
        assert!(radial < 1e-2 * total, "radial {radial} vs {total}");
    }
}
