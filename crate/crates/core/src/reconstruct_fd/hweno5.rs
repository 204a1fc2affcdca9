//! Fifth-order Hermite-WENO flux through the primitive function.
//!
//! With `G_{j+1/2} = dx * sum_{k <= j} f_k` known exactly at half points, the flux at
//! `x_{i+1/2}` is the derivative of a Hermite interpolant of `G`. The three candidate
//! cubics use `G` at `x_{i-3/2} .. x_{i+3/2}` and slope estimates `G'` at the outer
//! half points `x_{i-3/2}` (left cubic) and `x_{i+3/2}` (right cubic).

use crate::reconstruct_sl::WenoWeights;

/// Linear weights of the left, central and right candidate fluxes.
pub const LINEAR_WEIGHTS: [f64; 3] = [1.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0];

/// Sixth-order centered slope of the primitive at `x_{j+1/2}` from `f_{j-2} .. f_{j+3}`.
///
/// This is the centered difference of `G` at `x_{j-5/2}, .., x_{j+7/2}` after telescoping
/// the prefix sums, so no running sums are needed.
#[inline]
pub fn primitive_slope(f: &[f64]) -> f64 {
    debug_assert_eq!(f.len(), 6);
    ((f[0] + f[5]) - 8.0 * (f[1] + f[4]) + 37.0 * (f[2] + f[3])) / 60.0
}

/// `primitive_slope(f) - base`, summed as differences so that constant data gives exactly 0.
#[inline]
fn primitive_slope_offset(f: &[f64], base: f64) -> f64 {
    let d = |k: usize| f[k] - base;
    ((d(0) + d(5)) - 8.0 * (d(1) + d(4)) + 37.0 * (d(2) + d(3))) / 60.0
}

/// Candidate fluxes `(h_l, h_c, h_r)` and smoothness indicators from the window
/// `f_{i-4} .. f_{i+4}`.
#[inline]
fn candidates(st: &[f64; 9]) -> ([f64; 3], [f64; 3]) {
    let (a, b, c) = (st[3], st[4], st[5]);
    let gl = primitive_slope(&st[0..6]);
    let gr = primitive_slope(&st[3..9]);
    let h = [
        -2.0 * a + 2.0 * b + gl,
        (-a + 5.0 * b + 2.0 * c) / 6.0,
        (b + 5.0 * c - 2.0 * gr) / 4.0,
    ];
    // The quadratic forms in difference variables; each vanishes exactly on constant data.
    let (d_ab, d_bc) = (b - a, c - b);
    let (el, er) = (primitive_slope_offset(&st[0..6], a), primitive_slope_offset(&st[3..9], c));
    let beta_l = 139.0 / 16.0 * d_ab * d_ab + 99.0 / 4.0 * d_ab * el + 75.0 / 4.0 * el * el;
    let beta_c = 13.0 / 12.0 * d_ab * d_ab - 13.0 / 6.0 * d_ab * d_bc + 25.0 / 12.0 * d_bc * d_bc;
    let beta_r = 55.0 / 16.0 * d_bc * d_bc - 39.0 / 4.0 * d_bc * er + 39.0 / 4.0 * er * er;
    // The forms are positive semidefinite; clip rounding noise.
    (h, [beta_l.max(0.0), beta_c.max(0.0), beta_r.max(0.0)])
}

/// Smoothness indicators `(beta_l, beta_c, beta_r)` for the window `f_{i-4} .. f_{i+4}`.
pub fn hweno5_smoothness(st: &[f64; 9]) -> [f64; 3] {
    candidates(st).1
}

/// Nonlinear weights used by [`flux_hweno5_minus`].
pub fn hweno5_weights(st: &[f64; 9], eps: f64) -> WenoWeights<3> {
    WenoWeights::new(LINEAR_WEIGHTS, candidates(st).1, eps)
}

/// Left-biased flux `f^-_{i+1/2}` from `f_{i-4} .. f_{i+4}`.
#[inline]
pub fn flux_hweno5_minus(st: &[f64; 9], eps: f64) -> f64 {
    let (h, beta) = candidates(st);
    WenoWeights::new(LINEAR_WEIGHTS, beta, eps).combine(h)
}

/// Right-biased flux `f^+_{i+1/2}` from `f_{i-3} .. f_{i+5}`: the mirror image of the
/// minus flux about `x_{i+1/2}`.
#[inline]
pub fn flux_hweno5_plus(st: &[f64; 9], eps: f64) -> f64 {
    let mut r = *st;
    r.reverse();
    flux_hweno5_minus(&r, eps)
}

/// The full quintic Hermite flux (the linear-weight combination).
pub fn flux_hweno5_linear(st: &[f64; 9]) -> f64 {
    let (a, b, c) = (st[3], st[4], st[5]);
    let gl = primitive_slope(&st[0..6]);
    let gr = primitive_slope(&st[3..9]);
    (-8.0 * a + 19.0 * b + 19.0 * c + 3.0 * gl - 6.0 * gr) / 27.0
}

/// Prefix sums of the primitive and their slope estimates along one line.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimitiveTrace {
    /// `G_{j+1/2}` for `j = -1 .. n-1` (index `j + 1`), with `G_{-1/2} = 0`.
    pub g: Vec<f64>,
    /// Sixth-order centered slope of `G` at each half point where the stencil fits,
    /// computed directly from the prefix sums.
    pub slope: Vec<Option<f64>>,
}

impl PrimitiveTrace {
    pub fn new(values: &[f64], dx: f64) -> Self {
        let mut g = Vec::with_capacity(values.len() + 1);
        g.push(0.0);
        let mut acc = 0.0;
        for v in values {
            acc += dx * v;
            g.push(acc);
        }
        let m = g.len();
        let slope = (0..m)
            .map(|k| {
                (k >= 3 && k + 3 < m).then(|| {
                    ((g[k + 3] - g[k - 3]) - 9.0 * (g[k + 2] - g[k - 2]) + 45.0 * (g[k + 1] - g[k - 1]))
                        / (60.0 * dx)
                })
            })
            .collect();
        Self { g, slope }
    }
}
