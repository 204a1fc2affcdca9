//! Uniform node-centered Cartesian grids and the nodal fields living on them.
//!
//! Periodic axes store `n` distinct nodes with `x_max` excluded, so
//! `dx = (x_max - x_min) / n`. Dirichlet axes include both ends and use
//! `dx = (x_max - x_min) / (n - 1)`.

mod disk;
pub mod io;

pub use disk::{classify_disk_nodes, DiskMask, NodeClass, NodeCounts};

use crate::error::{Error, Result};
use crate::numerics::compensated_sum;

/// Smallest node count supporting the widest 5th-order stencil.
pub const MIN_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Periodic,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n: usize,
    x_min: f64,
    x_max: f64,
    dx: f64,
    bc: Boundary,
}

impl Grid1D {
    pub fn new(n: usize, x_min: f64, x_max: f64, bc: Boundary) -> Result<Self> {
        if n < MIN_NODES {
            return Err(Error::config(format!(
                "a 1D grid needs at least {MIN_NODES} nodes, got {n}"
            )));
        }
        Self::axis(n, x_min, x_max, bc)
    }

    pub fn periodic(n: usize, x_min: f64, x_max: f64) -> Result<Self> {
        Self::new(n, x_min, x_max, Boundary::Periodic)
    }

    pub fn dirichlet(n: usize, x_min: f64, x_max: f64) -> Result<Self> {
        Self::new(n, x_min, x_max, Boundary::Dirichlet)
    }

    /// Axis of a 2D grid; only requires two nodes.
    fn axis(n: usize, x_min: f64, x_max: f64, bc: Boundary) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::config(format!(
                "invalid bounds [{x_min}, {x_max}]"
            )));
        }
        if n < 2 {
            return Err(Error::config("an axis needs at least 2 nodes"));
        }
        let cells = match bc {
            Boundary::Periodic => n,
            Boundary::Dirichlet => n - 1,
        };
        let dx = (x_max - x_min) / cells as f64;
        Ok(Self {
            n,
            x_min,
            x_max,
            dx,
            bc,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn bc(&self) -> Boundary {
        self.bc
    }

    pub fn is_periodic(&self) -> bool {
        self.bc == Boundary::Periodic
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    /// Coordinate of node `i`; a pure function of `i`.
    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.x(i))
    }

    /// Maps a coordinate to the periodic fundamental interval `[x_min, x_max)`.
    pub fn wrap(&self, x: f64) -> f64 {
        let len = self.length();
        let mut y = (x - self.x_min).rem_euclid(len) + self.x_min;
        if y >= self.x_max {
            y -= len;
        }
        y
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    x: Grid1D,
    y: Grid1D,
}

impl Grid2D {
    pub fn new(
        (nx, ny): (usize, usize),
        (x_min, x_max): (f64, f64),
        (y_min, y_max): (f64, f64),
        bc: Boundary,
    ) -> Result<Self> {
        Ok(Self {
            x: Grid1D::axis(nx, x_min, x_max, bc)?,
            y: Grid1D::axis(ny, y_min, y_max, bc)?,
        })
    }

    /// Square Dirichlet grid `[-half_width, half_width]^2` with `n x n` nodes.
    pub fn square(n: usize, half_width: f64) -> Result<Self> {
        Self::new(
            (n, n),
            (-half_width, half_width),
            (-half_width, half_width),
            Boundary::Dirichlet,
        )
    }

    pub fn x_axis(&self) -> &Grid1D {
        &self.x
    }

    pub fn y_axis(&self) -> &Grid1D {
        &self.y
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.x.n
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.y.n
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        self.x.dx
    }

    #[inline]
    pub fn dy(&self) -> f64 {
        self.y.dx
    }

    pub fn len(&self) -> usize {
        self.nx() * self.ny()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major (x fastest) linear index.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.x.n + i
    }

    #[inline]
    pub fn coords(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x.x(i), self.y.x(j))
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    /// Smallest space step.
    pub fn h(&self) -> f64 {
        self.dx().min(self.dy())
    }
}

/// Summary norms of a nodal field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norms {
    pub mass: f64,
    pub l1: f64,
    pub l2: f64,
    /// Total variation; only defined for 1D fields.
    pub tv: Option<f64>,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field1D {
    grid: Grid1D,
    values: Vec<f64>,
}

impl Field1D {
    pub fn zeros(grid: Grid1D) -> Self {
        Self {
            values: vec![0.0; grid.n()],
            grid,
        }
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: grid.nodes().map(f).collect(),
            grid,
        }
    }

    pub fn from_values(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n() {
            return Err(Error::contract(format!(
                "field has {} values for a grid of {} nodes",
                values.len(),
                grid.n()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn ensure_finite(&self, what: &'static str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite(what))
        }
    }

    /// Mass, L1, L2 (uniform quadrature weight `dx`), total variation and extrema.
    /// The total variation closes periodically on periodic grids.
    pub fn norms(&self) -> Norms {
        let dx = self.grid.dx();
        let v = &self.values;
        let mut tv = compensated_sum(v.windows(2).map(|w| (w[1] - w[0]).abs()));
        if self.grid.is_periodic() {
            tv += (v[0] - v[v.len() - 1]).abs();
        }
        Norms {
            mass: dx * compensated_sum(v.iter().copied()),
            l1: dx * compensated_sum(v.iter().map(|x| x.abs())),
            l2: (dx * compensated_sum(v.iter().map(|x| x * x))).sqrt(),
            tv: Some(tv),
            min: v.iter().copied().fold(f64::INFINITY, f64::min),
            max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// `dx * sum |f_i - g(x_i)|`.
    pub fn l1_error(&self, exact: impl Fn(f64) -> f64) -> f64 {
        self.grid.dx()
            * compensated_sum(
                self.grid
                    .nodes()
                    .zip(&self.values)
                    .map(|(x, v)| (v - exact(x)).abs()),
            )
    }
}

/// `field_norms` over a 1D field.
pub fn field_norms(f: &Field1D) -> Norms {
    f.norms()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field2D {
    grid: Grid2D,
    values: Vec<f64>,
}

impl Field2D {
    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            values: vec![0.0; grid.len()],
            grid,
        }
    }

    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                let (x, y) = grid.coords(i, j);
                values.push(f(x, y));
            }
        }
        Self { grid, values }
    }

    pub fn from_values(grid: Grid2D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::contract(format!(
                "field has {} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn row(&self, j: usize) -> &[f64] {
        let nx = self.grid.nx();
        &self.values[j * nx..(j + 1) * nx]
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn ensure_finite(&self, what: &'static str) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite(what))
        }
    }

    /// Mass, L1 and L2 with the uniform weight `dx * dy`, plus extrema.
    pub fn norms(&self) -> Norms {
        let area = self.grid.cell_area();
        let v = &self.values;
        Norms {
            mass: area * compensated_sum(v.iter().copied()),
            l1: area * compensated_sum(v.iter().map(|x| x.abs())),
            l2: (area * compensated_sum(v.iter().map(|x| x * x))).sqrt(),
            tv: None,
            min: v.iter().copied().fold(f64::INFINITY, f64::min),
            max: v.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn mass(&self) -> f64 {
        self.grid.cell_area() * compensated_sum(self.values.iter().copied())
    }
}
