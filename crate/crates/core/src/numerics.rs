//! Small numerical helpers shared by the kernels.

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = CompensatedSum::default();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Solves a tridiagonal system in place (Thomas algorithm). `lower[0]` and
/// `upper[n-1]` are ignored. The system must be diagonally dominant.
pub(crate) fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) {
    let n = rhs.len();
    debug_assert!(lower.len() == n && diag.len() == n && upper.len() == n);
    if n == 0 {
        return;
    }
    let mut c = vec![0.0; n];
    let mut beta = diag[0];
    rhs[0] /= beta;
    for i in 1..n {
        c[i] = upper[i - 1] / beta;
        beta = diag[i] - lower[i] * c[i];
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i + 1] * rhs[i + 1];
    }
}

/// Solves the cyclic system `s*x[i-1] + d*x[i] + s*x[i+1] = rhs[i]` (indices mod n)
/// with the Sherman-Morrison correction. Requires `|d| > 2|s|` and `n >= 3`.
pub(crate) fn solve_cyclic_constant(s: f64, d: f64, rhs: &mut [f64]) {
    let n = rhs.len();
    debug_assert!(n >= 3);
    // A = B + u v^T with u = (gamma, 0, .., 0, s), v = (1, 0, .., 0, s/gamma).
    let gamma = -d;
    let mut diag = vec![d; n];
    diag[0] = d - gamma;
    diag[n - 1] = d - s * s / gamma;
    let off = vec![s; n];
    solve_tridiagonal(&off, &diag, &off, rhs);
    let mut u = vec![0.0; n];
    u[0] = gamma;
    u[n - 1] = s;
    solve_tridiagonal(&off, &diag, &off, &mut u);
    let factor = (rhs[0] + s * rhs[n - 1] / gamma) / (1.0 + u[0] + s * u[n - 1] / gamma);
    for (x, z) in rhs.iter_mut().zip(&u) {
        *x -= factor * z;
    }
}

/// Weights `w` such that `sum_k w[k] f(offsets[k])` is the derivative at 0 of the
/// Lagrange interpolant through the (unit-spaced) offsets. `0` must be one of the offsets.
pub(crate) fn derivative_weights_at_zero(offsets: &[i32]) -> Vec<f64> {
    let zero = offsets
        .iter()
        .position(|&o| o == 0)
        .expect("derivative stencil must contain the evaluation node");
    offsets
        .iter()
        .enumerate()
        .map(|(k, &xk)| {
            if k == zero {
                offsets
                    .iter()
                    .enumerate()
                    .filter(|&(m, _)| m != zero)
                    .map(|(_, &xm)| -1.0 / xm as f64)
                    .sum()
            } else {
                let num: f64 = offsets
                    .iter()
                    .enumerate()
                    .filter(|&(m, _)| m != k && m != zero)
                    .map(|(_, &xm)| -(xm as f64))
                    .product();
                let den: f64 = offsets
                    .iter()
                    .enumerate()
                    .filter(|&(m, _)| m != k)
                    .map(|(_, &xm)| (xk - xm) as f64)
                    .product();
                num / den
            }
        })
        .collect()
}

/// Lagrange interpolation weights for the nodes `nodes` evaluated at `x`.
pub(crate) fn lagrange_weights(nodes: &[f64], x: f64) -> Vec<f64> {
    nodes
        .iter()
        .enumerate()
        .map(|(k, &xk)| {
            nodes
                .iter()
                .enumerate()
                .filter(|&(m, _)| m != k)
                .map(|(_, &xm)| (x - xm) / (xk - xm))
                .product()
        })
        .collect()
}

/// Cubic Lagrange weights on the unit-spaced nodes -1, 0, 1, 2 at `t`.
#[inline]
pub(crate) fn cubic_lagrange_weights(t: f64) -> [f64; 4] {
    let tm1 = t - 1.0;
    let tm2 = t - 2.0;
    let tp1 = t + 1.0;
    [
        -t * tm1 * tm2 / 6.0,
        tp1 * tm1 * tm2 / 2.0,
        -tp1 * t * tm2 / 2.0,
        tp1 * t * tm1 / 6.0,
    ]
}
