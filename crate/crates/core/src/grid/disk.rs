use super::Grid2D;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeClass {
    /// Inside the closed disk.
    Interior,
    /// Outside the disk with at least one interior node among its four neighbours.
    Ghost,
    Exterior,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NodeCounts {
    pub interior: usize,
    pub ghost: usize,
    pub exterior: usize,
}

/// Classification of every node of a grid against the disk `x^2 + y^2 <= R^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskMask {
    grid: Grid2D,
    radius: f64,
    classes: Vec<NodeClass>,
    counts: NodeCounts,
}

impl DiskMask {
    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn counts(&self) -> NodeCounts {
        self.counts
    }

    pub fn classes(&self) -> &[NodeClass] {
        &self.classes
    }

    #[inline]
    pub fn class(&self, i: usize, j: usize) -> NodeClass {
        self.classes[self.grid.index(i, j)]
    }

    /// Class of a possibly out-of-range node; nodes off the grid are exterior.
    #[inline]
    pub fn class_signed(&self, i: isize, j: isize) -> NodeClass {
        if i < 0 || j < 0 || i >= self.grid.nx() as isize || j >= self.grid.ny() as isize {
            NodeClass::Exterior
        } else {
            self.class(i as usize, j as usize)
        }
    }

    #[inline]
    pub fn is_interior(&self, i: isize, j: isize) -> bool {
        self.class_signed(i, j) == NodeClass::Interior
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x * x + y * y <= self.radius * self.radius
    }
}

/// Classifies grid nodes against the origin-centred disk of radius `radius`.
///
/// The circle must either lie inside the grid rectangle or enclose it entirely;
/// a circle crossing the rectangle's edges would need ghost nodes off the grid.
pub fn classify_disk_nodes(grid: &Grid2D, radius: f64) -> Result<DiskMask> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::config(format!("disk radius must be positive, got {radius}")));
    }
    let (xa, ya) = (grid.x_axis(), grid.y_axis());
    let inner = [-xa.x_min(), xa.x_max(), -ya.x_min(), ya.x_max()]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let outer = [
        (xa.x_min(), ya.x_min()),
        (xa.x_min(), ya.x_max()),
        (xa.x_max(), ya.x_min()),
        (xa.x_max(), ya.x_max()),
    ]
    .into_iter()
    .map(|(x, y)| x.hypot(y))
    .fold(0.0, f64::max);
    if radius > inner && radius < outer {
        return Err(Error::config(format!(
            "disk radius {radius} exceeds the domain half-width {inner}"
        )));
    }

    let (nx, ny) = (grid.nx(), grid.ny());
    let r2 = radius * radius;
    let inside: Vec<bool> = (0..ny)
        .flat_map(|j| (0..nx).map(move |i| (i, j)))
        .map(|(i, j)| {
            let (x, y) = grid.coords(i, j);
            x * x + y * y <= r2
        })
        .collect();

    let mut counts = NodeCounts::default();
    let mut classes = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let class = if inside[grid.index(i, j)] {
                counts.interior += 1;
                NodeClass::Interior
            } else {
                let neighbour_inside = (i > 0 && inside[grid.index(i - 1, j)])
                    || (i + 1 < nx && inside[grid.index(i + 1, j)])
                    || (j > 0 && inside[grid.index(i, j - 1)])
                    || (j + 1 < ny && inside[grid.index(i, j + 1)]);
                if neighbour_inside {
                    counts.ghost += 1;
                    NodeClass::Ghost
                } else {
                    counts.exterior += 1;
                    NodeClass::Exterior
                }
            };
            classes.push(class);
        }
    }
    Ok(DiskMask {
        grid: *grid,
        radius,
        classes,
        counts,
    })
}
