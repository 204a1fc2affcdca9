//! Self-consistent field solvers.
//!
//! - [`efield_radial`]: `E(r) = (1/r) int_0^r s rho(s) ds` on a signed radial grid.
//! - [`build_ghost_extrapolation`]: values at ghost nodes outside a disk, extrapolated along
//!   the inward normal from the boundary value and two interpolated interior points.
//! - [`PoissonSolver`]: five-point `-lap(phi) = rho` over the interior disk nodes with
//!   `phi = 0` on the circle, factored once and reused.
//! - [`velocity_from_potential`]: drift velocity `U = (-d phi/dy, d phi/dx)`.

mod drift;
mod ghost;
mod poisson;
mod radial;

pub use drift::{potential_energy, velocity_from_potential};
pub use ghost::{build_ghost_extrapolation, GhostExtrapolation, GhostNode, StencilDegree};
pub use poisson::{solve_poisson_disk, PoissonSolver};
pub use radial::{efield_radial, RadialField};
