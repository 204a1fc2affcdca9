use super::weights::WenoWeights;
use super::EPSILON;
use crate::error::{Error, Result};

/// Endpoint values and derivative estimates of one cell `[x_i, x_{i+1}]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteCell3 {
    pub f_i: f64,
    pub f_ip1: f64,
    pub fp_i: f64,
    pub fp_ip1: f64,
    pub dx: f64,
}

impl HermiteCell3 {
    /// Curvature coefficients of the two quadratics `h_l`, `h_r`, written as
    /// `f_i + delta * t + a_k * t (t - 1)` in the unit variable `t = (x - x_i) / dx`.
    #[inline]
    fn curvatures(&self) -> (f64, f64, f64) {
        let delta = self.f_ip1 - self.f_i;
        let a_l = delta - self.dx * self.fp_i;
        let a_r = self.dx * self.fp_ip1 - delta;
        (delta, a_l, a_r)
    }

    /// Smoothness indicators `(beta_l, beta_r)`.
    #[inline]
    pub fn smoothness(&self) -> [f64; 2] {
        let (delta, a_l, a_r) = self.curvatures();
        let d2 = delta * delta;
        [d2 + 13.0 / 3.0 * a_l * a_l, d2 + 13.0 / 3.0 * a_r * a_r]
    }

    /// Weights at `t = (x - x_i) / dx`, with `c_l = 1 - t`, `c_r = t`.
    #[inline]
    pub fn weights(&self, t: f64, eps: f64) -> WenoWeights<2> {
        WenoWeights::new([1.0 - t, t], self.smoothness(), eps)
    }

    /// Weighted value at `t` in `[0, 1]`.
    #[inline]
    pub fn eval_unit(&self, t: f64, eps: f64) -> f64 {
        let (delta, a_l, a_r) = self.curvatures();
        let w = self.weights(t, eps);
        let q = t * (t - 1.0);
        self.f_i + delta * t + q * (w.w[0] * a_l + w.w[1] * a_r)
    }

    /// The full cubic Hermite interpolant at `t`.
    pub fn hermite_cubic(&self, t: f64) -> f64 {
        let (delta, a_l, _) = self.curvatures();
        let b = self.dx * (self.fp_i + self.fp_ip1) - 2.0 * delta;
        self.f_i + delta * t + a_l * t * (t - 1.0) + b * t * t * (t - 1.0)
    }
}

/// HWENO3 value at `x` in the cell starting at `x_i`, with `eps = 1e-6`.
pub fn interp_hweno3(cell: &HermiteCell3, x_i: f64, x: f64) -> Result<f64> {
    let t = (x - x_i) / cell.dx;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::contract(format!(
            "x = {x} lies outside the cell [{x_i}, {}]",
            x_i + cell.dx
        )));
    }
    Ok(cell.eval_unit(t, EPSILON))
}
