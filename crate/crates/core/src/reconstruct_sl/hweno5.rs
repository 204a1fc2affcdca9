use super::weights::WenoWeights;
use super::EPSILON;
use crate::error::{Error, Result};

/// Four point values `f_{i-1} .. f_{i+2}` around the cell `[x_i, x_{i+1}]` and the
/// derivative estimates at the two outer nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteCell5 {
    pub f: [f64; 4],
    pub fp_im1: f64,
    pub fp_ip2: f64,
    pub dx: f64,
}

/// Cubic `a0 + a1 t + a2 t^2 + a3 t^3` in the unit variable `t = (x - x_i) / dx`.
type Cubic = [f64; 4];

#[inline]
fn eval_cubic(p: &Cubic, t: f64) -> f64 {
    p[0] + t * (p[1] + t * (p[2] + t * p[3]))
}

/// `int_0^1 (p')^2 + (p'')^2 + (p''')^2 dt`, the scaled smoothness integral over the cell.
#[inline]
fn smoothness_integral(p: &Cubic) -> f64 {
    let (a1, a2, a3) = (p[1], p[2], p[3]);
    a1 * a1
        + 2.0 * a1 * a2
        + 2.0 * a1 * a3
        + 16.0 / 3.0 * a2 * a2
        + 15.0 * a2 * a3
        + 249.0 / 5.0 * a3 * a3
}

impl HermiteCell5 {
    /// The three candidate cubics `h_l`, `h_c`, `h_r`.
    #[inline]
    pub fn sub_cubics(&self) -> [Cubic; 3] {
        let [fm, f0, f1, f2] = self.f;
        // Differences from f_i keep every coefficient exactly zero on constant data.
        let (em, e1, e2) = (fm - f0, f1 - f0, f2 - f0);
        let dm = self.dx * self.fp_im1;
        let d2 = self.dx * self.fp_ip2;
        let a2_lc = 0.5 * (em + e1);
        let h_l = [
            f0,
            -0.5 * dm + 0.25 * e1 - 1.25 * em,
            a2_lc,
            0.5 * dm + 0.25 * e1 + 0.75 * em,
        ];
        let h_c = [
            f0,
            e1 - e2 / 6.0 - em / 3.0,
            a2_lc,
            -0.5 * e1 + (e2 - em) / 6.0,
        ];
        let h_r = [
            f0,
            d2 + 4.0 * e1 - 2.0 * e2,
            -1.5 * d2 - 4.0 * e1 + 2.75 * e2,
            0.5 * d2 + e1 - 0.75 * e2,
        ];
        [h_l, h_c, h_r]
    }

    pub fn smoothness(&self) -> [f64; 3] {
        self.sub_cubics().map(|p| smoothness_integral(&p))
    }

    /// Linear weights `c_l = (t-2)^2/9`, `c_r = (t+1)^2/9`, `c_c = 1 - c_l - c_r`.
    #[inline]
    pub fn linear_weights(t: f64) -> [f64; 3] {
        let c_l = (t - 2.0) * (t - 2.0) / 9.0;
        let c_r = (t + 1.0) * (t + 1.0) / 9.0;
        [c_l, 1.0 - c_l - c_r, c_r]
    }

    pub fn weights(&self, t: f64, eps: f64) -> WenoWeights<3> {
        WenoWeights::new(Self::linear_weights(t), self.smoothness(), eps)
    }

    #[inline]
    pub fn eval_unit(&self, t: f64, eps: f64) -> f64 {
        let subs = self.sub_cubics();
        let beta = subs.map(|p| smoothness_integral(&p));
        let w = WenoWeights::new(Self::linear_weights(t), beta, eps);
        // Offsets from f_i so that t = 0 returns f_i exactly.
        let incr = subs.map(|p| eval_cubic(&p, t) - p[0]);
        self.f[1] + w.combine(incr)
    }

    /// The linear-weight combination, i.e. the quintic Hermite interpolant `H_5`.
    pub fn eval_linear(&self, t: f64) -> f64 {
        let subs = self.sub_cubics();
        let c = Self::linear_weights(t);
        self.f[1]
            + c.iter()
                .zip(&subs)
                .map(|(c, p)| c * (eval_cubic(p, t) - p[0]))
                .sum::<f64>()
    }
}

/// HWENO5 value at `x` in the central cell starting at `x_i`, with `eps = 1e-6`.
pub fn interp_hweno5(cell: &HermiteCell5, x_i: f64, x: f64) -> Result<f64> {
    let t = (x - x_i) / cell.dx;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::contract(format!(
            "x = {x} lies outside the central cell [{x_i}, {}]",
            x_i + cell.dx
        )));
    }
    Ok(cell.eval_unit(t, EPSILON))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell_from(p: impl Fn(f64) -> f64, dp: impl Fn(f64) -> f64, xi: f64, dx: f64) -> HermiteCell5 {
        HermiteCell5 {
            f: std::array::from_fn(|k| p(xi + (k as f64 - 1.0) * dx)),
            fp_im1: dp(xi - dx),
            fp_ip2: dp(xi + 2.0 * dx),
            dx,
        }
    }

    #[test]
    fn sub_cubics_satisfy_their_hermite_conditions() {
        let cell = HermiteCell5 {
            f: [0.3, -1.2, 2.2, 0.7],
            fp_im1: 4.0,
            fp_ip2: -3.0,
            dx: 0.5,
        };
        let [hl, hc, hr] = cell.sub_cubics();
        let d = |p: &Cubic, t: f64| (p[1] + t * (2.0 * p[2] + 3.0 * t * p[3])) / cell.dx;
        for (k, t) in [-1.0, 0.0, 1.0].into_iter().enumerate() {
            assert!((eval_cubic(&hl, t) - cell.f[k]).abs() < 1e-14);
        }
        assert!((d(&hl, -1.0) - cell.fp_im1).abs() < 1e-13);
        for (k, t) in [-1.0, 0.0, 1.0, 2.0].into_iter().enumerate() {
            assert!((eval_cubic(&hc, t) - cell.f[k]).abs() < 1e-14);
        }
        for (k, t) in [0.0, 1.0, 2.0].into_iter().enumerate() {
            assert!((eval_cubic(&hr, t) - cell.f[k + 1]).abs() < 1e-14);
        }
        assert!((d(&hr, 2.0) - cell.fp_ip2).abs() < 1e-13);
    }

    #[test]
    fn smoothness_matches_expanded_quadratic_form() {
        // Frozen from exact symbolic integration of (h')^2 + (h'')^2 + (h''')^2 over [0, 1].
        let (fm, f0, f1, f2, dm, d2) = (0.3, -1.2, 2.2, 0.7, 0.9, -0.4);
        let cell = HermiteCell5 {
            f: [fm, f0, f1, f2],
            fp_im1: dm,
            fp_ip2: d2,
            dx: 1.0,
        };
        let bl = 61.0 * dm * dm / 5.0 - 553.0 * dm * f0 / 10.0 + 309.0 * dm * f1 / 20.0
            + 797.0 * dm * fm / 20.0
            + 1007.0 * f0 * f0 / 15.0
            - 2429.0 * f0 * f1 / 60.0
            - 5627.0 * f0 * fm / 60.0
            + 811.0 * f1 * f1 / 120.0
            + 809.0 * f1 * fm / 30.0
            + 4009.0 * fm * fm / 120.0;
        let bc = 331.0 * f0 * f0 / 30.0 - 1259.0 * f0 * f1 / 60.0 + 179.0 * f0 * f2 / 30.0
            - 141.0 * f0 * fm / 20.0
            + 331.0 * f1 * f1 / 30.0
            - 141.0 * f1 * f2 / 20.0
            + 179.0 * f1 * fm / 30.0
            + 61.0 * f2 * f2 / 45.0
            - 293.0 * f2 * fm / 180.0
            + 61.0 * fm * fm / 45.0;
        let br = 61.0 * d2 * d2 / 5.0 - 309.0 * d2 * f0 / 20.0 + 553.0 * d2 * f1 / 10.0
            - 797.0 * d2 * f2 / 20.0
            + 811.0 * f0 * f0 / 120.0
            - 2429.0 * f0 * f1 / 60.0
            + 809.0 * f0 * f2 / 30.0
            + 1007.0 * f1 * f1 / 15.0
            - 5627.0 * f1 * f2 / 60.0
            + 4009.0 * f2 * f2 / 120.0;
        let b = cell.smoothness();
        for (got, want) in b.iter().zip([bl, bc, br]) {
            assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "{got} vs {want}");
        }
    }

    #[test]
    fn constant_data_is_reproduced() {
        let cell = HermiteCell5 {
            f: [4.0; 4],
            fp_im1: 0.0,
            fp_ip2: 0.0,
            dx: 0.3,
        };
        for t in [0.0, 0.4, 1.0] {
            assert_eq!(cell.eval_unit(t, EPSILON), 4.0);
        }
        assert_eq!(cell.smoothness(), [0.0; 3]);
    }

    #[test]
    fn cubic_data_is_exact_with_nonlinear_weights() {
        let p = |x: f64| 0.5 - 2.0 * x + x * x * 3.0 - 1.7 * x.powi(3);
        let dp = |x: f64| -2.0 + 6.0 * x - 5.1 * x * x;
        let cell = cell_from(p, dp, 0.2, 0.1);
        for t in [0.0, 0.25, 0.5, 0.8, 1.0] {
            let v = cell.eval_unit(t, EPSILON);
            assert!((v - p(0.2 + t * 0.1)).abs() < 1e-14);
        }
    }

    #[test]
    fn left_endpoint_is_exact_for_rough_data() {
        let cell = HermiteCell5 {
            f: [1.0, 0.1234567, 1e3, -5.0],
            fp_im1: 1e4,
            fp_ip2: -2.0,
            dx: 0.01,
        };
        assert_eq!(cell.eval_unit(0.0, EPSILON), 0.1234567);
    }

    #[test]
    fn linear_weights_are_a_partition_of_unity() {
        for t in [0.0, 0.3, 0.5, 1.0] {
            let c = HermiteCell5::linear_weights(t);
            assert!(c.iter().all(|&c| c > 0.0));
            assert!((c.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn outside_points_are_rejected() {
        let cell = HermiteCell5 {
            f: [0.0; 4],
            fp_im1: 0.0,
            fp_ip2: 0.0,
            dx: 1.0,
        };
        assert!(interp_hweno5(&cell, 0.0, -0.1).is_err());
    }
}
