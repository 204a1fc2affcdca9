//! Centered finite-difference derivative estimates feeding the Hermite cells.

use crate::numerics::derivative_weights_at_zero;

/// Fourth-order centered first derivative from `f_{i-2} .. f_{i+2}`.
#[inline]
pub fn eval_derivative4(f: &[f64; 5], dx: f64) -> f64 {
    (8.0 * (f[3] - f[1]) - (f[4] - f[0])) / (12.0 * dx)
}

/// Sixth-order centered first derivative from `f_{i-3} .. f_{i+3}`.
#[inline]
pub fn eval_derivative6(f: &[f64; 7], dx: f64) -> f64 {
    ((f[6] - f[0]) - 9.0 * (f[5] - f[1]) + 45.0 * (f[4] - f[2])) / (60.0 * dx)
}

/// Order of the centered derivative estimate: 4 (five points) or 6 (seven points).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeOrder {
    Fourth,
    Sixth,
}

impl DerivativeOrder {
    pub fn half_width(self) -> usize {
        match self {
            DerivativeOrder::Fourth => 2,
            DerivativeOrder::Sixth => 3,
        }
    }
}

/// Derivative estimates at every node of a line.
///
/// Periodic lines use the centered formulas with wrap-around. Open lines use
/// same-order one-sided stencils near the ends, shifted just enough to stay
/// inside the data.
pub fn line_derivatives(values: &[f64], dx: f64, order: DerivativeOrder, periodic: bool) -> Vec<f64> {
    let n = values.len();
    let hw = order.half_width();
    let mut out = vec![0.0; n];
    if periodic {
        let at = |k: isize| values[k.rem_euclid(n as isize) as usize];
        for (i, d) in out.iter_mut().enumerate() {
            let i = i as isize;
            *d = match order {
                DerivativeOrder::Fourth => {
                    eval_derivative4(&[at(i - 2), at(i - 1), at(i), at(i + 1), at(i + 2)], dx)
                }
                DerivativeOrder::Sixth => eval_derivative6(
                    &[
                        at(i - 3),
                        at(i - 2),
                        at(i - 1),
                        at(i),
                        at(i + 1),
                        at(i + 2),
                        at(i + 3),
                    ],
                    dx,
                ),
            };
        }
        return out;
    }

    let width = 2 * hw + 1;
    if n < width {
        // Too short for the requested order: fall back to the widest stencil available.
        let offsets_for = |i: usize| -> Vec<i32> { (0..n as i32).map(|k| k - i as i32).collect() };
        for (i, d) in out.iter_mut().enumerate() {
            let w = derivative_weights_at_zero(&offsets_for(i));
            *d = w.iter().zip(values).map(|(w, v)| w * v).sum::<f64>() / dx;
        }
        return out;
    }

    for i in hw..n - hw {
        out[i] = match order {
            DerivativeOrder::Fourth => {
                let s: &[f64; 5] = values[i - 2..=i + 2].try_into().unwrap();
                eval_derivative4(s, dx)
            }
            DerivativeOrder::Sixth => {
                let s: &[f64; 7] = values[i - 3..=i + 3].try_into().unwrap();
                eval_derivative6(s, dx)
            }
        };
    }
    for i in (0..hw).chain(n - hw..n) {
        let start = i.saturating_sub(hw).min(n - width);
        let offsets: Vec<i32> = (start..start + width).map(|k| k as i32 - i as i32).collect();
        let w = derivative_weights_at_zero(&offsets);
        out[i] = w
            .iter()
            .zip(&values[start..start + width])
            .map(|(w, v)| w * v)
            .sum::<f64>()
            / dx;
    }
    out
}
