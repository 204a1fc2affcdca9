//! Conservative finite-difference flux reconstruction.
//!
//! Interface fluxes `F_{i+1/2}` are built so that `(F_{i+1/2} - F_{i-1/2}) / dx`
//! approximates the derivative of the flux function to fifth order:
//!
//! - [`flux_hweno5_minus`] / [`flux_hweno5_plus`]: Hermite-WENO through the primitive
//!   function, with slope data estimated at the outer half points.
//! - [`flux_weno5_js`] / [`flux_weno5_js_plus`]: the classical WENO baseline.
//!
//! [`divergence_1d`] and [`divergence_2d`] assemble `-div(A f)` with upwind or
//! Lax-Friedrichs splitting of the product `a f`.

mod divergence;
mod hweno5;
mod weno5;

pub use divergence::{
    divergence_1d, divergence_2d, line_divergence, FluxKind, FluxOptions, FluxStencil,
    LineScratch, LineVelocity, Splitting, Velocity1D, VelocityComponents, Wind,
};
pub use hweno5::{
    flux_hweno5_linear, flux_hweno5_minus, flux_hweno5_plus, hweno5_smoothness, hweno5_weights,
    primitive_slope, PrimitiveTrace, LINEAR_WEIGHTS as HWENO5_LINEAR_WEIGHTS,
};
pub use weno5::{flux_weno5_js, flux_weno5_js_plus, LINEAR_WEIGHTS as WENO5_LINEAR_WEIGHTS};
