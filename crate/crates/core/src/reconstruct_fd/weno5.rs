//! Classical fifth-order WENO flux, the finite-difference baseline.

use crate::reconstruct_sl::WenoWeights;

pub const LINEAR_WEIGHTS: [f64; 3] = [0.1, 0.6, 0.3];

/// Left-biased flux at `x_{i+1/2}` from `f_{i-2} .. f_{i+2}`.
#[inline]
pub fn flux_weno5_js(st: &[f64; 5], eps: f64) -> f64 {
    let [fm2, fm1, f0, fp1, fp2] = *st;
    let q = [
        (2.0 * fm2 - 7.0 * fm1 + 11.0 * f0) / 6.0,
        (-fm1 + 5.0 * f0 + 2.0 * fp1) / 6.0,
        (2.0 * f0 + 5.0 * fp1 - fp2) / 6.0,
    ];
    let s0 = fm2 - 2.0 * fm1 + f0;
    let t0 = fm2 - 4.0 * fm1 + 3.0 * f0;
    let s1 = fm1 - 2.0 * f0 + fp1;
    let t1 = fm1 - fp1;
    let s2 = f0 - 2.0 * fp1 + fp2;
    let t2 = 3.0 * f0 - 4.0 * fp1 + fp2;
    let beta = [
        13.0 / 12.0 * s0 * s0 + 0.25 * t0 * t0,
        13.0 / 12.0 * s1 * s1 + 0.25 * t1 * t1,
        13.0 / 12.0 * s2 * s2 + 0.25 * t2 * t2,
    ];
    WenoWeights::new(LINEAR_WEIGHTS, beta, eps).combine(q)
}

/// Right-biased flux at `x_{i+1/2}` from `f_{i-1} .. f_{i+3}` (mirror image).
#[inline]
pub fn flux_weno5_js_plus(st: &[f64; 5], eps: f64) -> f64 {
    let mut r = *st;
    r.reverse();
    flux_weno5_js(&r, eps)
}
