//! Hermite-WENO transport kernels and the simulations built on them.
//!
//! The crate is organised bottom-up:
//!
//! - [`grid`]: uniform Cartesian meshes, nodal fields, disk classification, norms and snapshots.
//! - [`reconstruct_sl`]: point-value interpolants for semi-Lagrangian updates
//!   (cubic spline, HWENO3, HWENO5).
//! - [`reconstruct_fd`]: conservative flux reconstructions (HWENO5 on the primitive
//!   function, WENO5-JS) and the flux divergence.
//! - [`advect`]: time-advance engines (backward semi-Lagrangian, leap-frog characteristics,
//!   RK4 finite differences) and the mixed SL/FD controller.
//! - [`fields`]: self-consistent field solvers (radial field, disk Poisson solver with
//!   normal-direction ghost extrapolation, drift velocity).
//! - [`models`]: 1D transport, paraxial beam and guiding-center diocotron setups with
//!   their diagnostics and the experiment driver.

pub mod advect;
pub mod error;
pub mod fields;
pub mod grid;
pub mod models;
pub(crate) mod numerics;
pub mod reconstruct_fd;
pub mod reconstruct_sl;

pub use error::{Error, Result};
