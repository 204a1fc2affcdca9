/// Nonlinear WENO weights built from linear weights and smoothness indicators:
/// `alpha_k = c_k / (eps + beta_k)^2`, `w_k = alpha_k / sum(alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WenoWeights<const N: usize> {
    pub linear: [f64; N],
    pub beta: [f64; N],
    pub alpha: [f64; N],
    pub w: [f64; N],
}

impl<const N: usize> WenoWeights<N> {
    /// `linear` must be nonnegative with a positive sum and `beta` nonnegative.
    #[inline]
    pub fn new(linear: [f64; N], beta: [f64; N], eps: f64) -> Self {
        let mut alpha = [0.0; N];
        let mut total = 0.0;
        for k in 0..N {
            let d = eps + beta[k];
            alpha[k] = linear[k] / (d * d);
            total += alpha[k];
        }
        let mut w = [0.0; N];
        for k in 0..N {
            w[k] = alpha[k] / total;
        }
        Self {
            linear,
            beta,
            alpha,
            w,
        }
    }

    /// `sum_k w_k * values_k`.
    #[inline]
    pub fn combine(&self, values: [f64; N]) -> f64 {
        let mut acc = 0.0;
        for k in 0..N {
            acc += self.w[k] * values[k];
        }
        acc
    }
}
