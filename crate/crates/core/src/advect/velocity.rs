use crate::error::{Error, Result};
use crate::grid::{Field2D, Grid1D, Grid2D};
use crate::numerics::cubic_lagrange_weights;

/// Nodal advection velocity `A = (a_x, a_y)` on a 2D grid, evaluated off-grid by
/// tensor-product cubic Lagrange interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityField {
    grid: Grid2D,
    ax: Vec<f64>,
    ay: Vec<f64>,
}

/// Cell index and the four stencil nodes `k-1 .. k+2` (wrapped or shifted inside an open
/// axis) with their cubic weights.
#[inline]
fn axis_stencil(axis: &Grid1D, x: f64) -> ([usize; 4], [f64; 4]) {
    let n = axis.n();
    let s = (x - axis.x_min()) / axis.dx();
    if axis.is_periodic() {
        let k = s.floor();
        let w = cubic_lagrange_weights(s - k);
        let k = k as isize;
        let idx = std::array::from_fn(|m| (k - 1 + m as isize).rem_euclid(n as isize) as usize);
        (idx, w)
    } else {
        // Leftmost stencil node, kept inside [0, n - 4]; beyond the ends this extrapolates.
        let k = s.floor().clamp(1.0, (n - 3) as f64);
        let w = cubic_lagrange_weights(s - k);
        let k = k as usize;
        ([k - 1, k, k + 1, k + 2], w)
    }
}

impl VelocityField {
    pub fn new(grid: Grid2D, ax: Vec<f64>, ay: Vec<f64>) -> Result<Self> {
        if ax.len() != grid.len() || ay.len() != grid.len() {
            return Err(Error::contract("velocity components differ in size from the grid"));
        }
        if ax.iter().chain(&ay).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("velocity"));
        }
        Ok(Self { grid, ax, ay })
    }

    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            grid,
            ax: vec![0.0; grid.len()],
            ay: vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid2D, a: impl Fn(f64, f64) -> (f64, f64)) -> Result<Self> {
        let mut ax = Vec::with_capacity(grid.len());
        let mut ay = Vec::with_capacity(grid.len());
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                let (x, y) = grid.coords(i, j);
                let (u, v) = a(x, y);
                ax.push(u);
                ay.push(v);
            }
        }
        Self::new(grid, ax, ay)
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn ax(&self) -> &[f64] {
        &self.ax
    }

    pub fn ay(&self) -> &[f64] {
        &self.ay
    }

    /// `(max |a_x|, max |a_y|)` over the nodes.
    pub fn max_abs(&self) -> (f64, f64) {
        let m = |v: &[f64]| v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
        (m(&self.ax), m(&self.ay))
    }

    /// Interpolated velocity at `(x, y)`.
    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        let (ix, wx) = axis_stencil(self.grid.x_axis(), x);
        let (iy, wy) = axis_stencil(self.grid.y_axis(), y);
        let nx = self.grid.nx();
        let (mut u, mut v) = (0.0, 0.0);
        for (j, wj) in iy.iter().zip(wy) {
            let row = j * nx;
            let (mut ru, mut rv) = (0.0, 0.0);
            for (i, wi) in ix.iter().zip(wx) {
                ru += wi * self.ax[row + i];
                rv += wi * self.ay[row + i];
            }
            u += wj * ru;
            v += wj * rv;
        }
        (u, v)
    }
}

/// Supplies the advection velocity for a density at a given time (for self-consistent
/// models this solves the field equation).
pub trait VelocityProvider {
    fn velocity(&mut self, f: &Field2D, t: f64) -> Result<VelocityField>;
}

impl<F> VelocityProvider for F
where
    F: FnMut(&Field2D, f64) -> Result<VelocityField>,
{
    fn velocity(&mut self, f: &Field2D, t: f64) -> Result<VelocityField> {
        self(f, t)
    }
}
