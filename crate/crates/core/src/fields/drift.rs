use crate::advect::VelocityField;
use crate::error::{Error, Result};
use crate::grid::{DiskMask, Field2D, NodeClass};
use crate::numerics::compensated_sum;

/// Derivative along one axis at a node, from the values at offsets -2..=2 (`None` where the
/// node is unavailable). Fourth-order centred when all four neighbours exist, second-order
/// centred when the nearest two do, one-sided otherwise.
fn axis_derivative(v: [Option<f64>; 5], h: f64) -> f64 {
    match v {
        [Some(m2), Some(m1), _, Some(p1), Some(p2)] => (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h),
        [_, Some(m1), _, Some(p1), _] => (p1 - m1) / (2.0 * h),
        [_, _, Some(c), Some(p1), Some(p2)] => (-3.0 * c + 4.0 * p1 - p2) / (2.0 * h),
        [Some(m2), Some(m1), Some(c), _, _] => (3.0 * c - 4.0 * m1 + m2) / (2.0 * h),
        [_, _, Some(c), Some(p1), _] => (p1 - c) / h,
        [_, Some(m1), Some(c), _, _] => (c - m1) / h,
        _ => 0.0,
    }
}

/// Drift velocity `U = (-d phi/dy, d phi/dx)` on the interior nodes of `mask`, zero elsewhere.
///
/// `phi` must carry valid ghost values (as returned by the Poisson solver); interior and ghost
/// nodes both feed the difference stencils.
pub fn velocity_from_potential(phi: &Field2D, mask: &DiskMask) -> Result<VelocityField> {
    let g = *mask.grid();
    if phi.grid() != &g {
        return Err(Error::contract("potential and mask live on different grids"));
    }
    phi.ensure_finite("potential")?;
    let usable = |i: isize, j: isize| mask.class_signed(i, j) != NodeClass::Exterior;
    let value = |i: isize, j: isize| usable(i, j).then(|| phi.at(i as usize, j as usize));
    let mut ax = vec![0.0; g.len()];
    let mut ay = vec![0.0; g.len()];
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            if mask.class(i, j) != NodeClass::Interior {
                continue;
            }
            let (ii, jj) = (i as isize, j as isize);
            let along_x = [-2, -1, 0, 1, 2].map(|d| value(ii + d, jj));
            let along_y = [-2, -1, 0, 1, 2].map(|d| value(ii, jj + d));
            let k = g.index(i, j);
            ax[k] = -axis_derivative(along_y, g.dy());
            ay[k] = axis_derivative(along_x, g.dx());
        }
    }
    VelocityField::new(g, ax, ay)
}

/// `int |grad phi|^2` over the disk, by the rectangle rule on the interior nodes.
pub fn potential_energy(velocity: &VelocityField, mask: &DiskMask) -> f64 {
    let area = mask.grid().cell_area();
    area * compensated_sum(
        mask.classes()
            .iter()
            .zip(velocity.ax().iter().zip(velocity.ay()))
            .filter(|(c, _)| **c == NodeClass::Interior)
            .map(|(_, (u, v))| u * u + v * v),
    )
}
