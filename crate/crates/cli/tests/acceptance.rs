//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Long runs are opt-in: `HWK_ACCEPTANCE_FULL=1` adds the n = 513 beam runs. With
//! `HWK_ACCEPTANCE_STRICT=1` any failing criterion makes the target exit non-zero.

use std::path::{Path, PathBuf};
use std::time::Instant;

use hwk::advect::{fd_step_rk4_1d, Engine2D, SchemeConfig, SchemeId, TimeStep, VelocityField};
use hwk::fields::{build_ghost_extrapolation, solve_poisson_disk, StencilDegree};
use hwk::grid::{classify_disk_nodes, Boundary, Field1D, Field2D, Grid1D, Grid2D};
use hwk::models::{
    run_experiment, run_transport1d, BeamSetup, CsvTable, DiocotronSetup, Experiment, Profile,
    RunOptions, RunOutput, Transport1DSetup,
};
use hwk::reconstruct_fd::{
    divergence_1d, flux_hweno5_linear, flux_hweno5_minus, flux_hweno5_plus, flux_weno5_js, flux_weno5_js_plus,
    hweno5_smoothness, hweno5_weights, primitive_slope, FluxKind, FluxOptions, Velocity1D,
};
use hwk::reconstruct_sl::{HermiteCell3, HermiteCell5, WenoWeights, EPSILON};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SIZES: [usize; 3] = [200, 400, 800];
const TABLE_SCHEMES: [SchemeId; 5] =
    [SchemeId::SlSpline, SchemeId::SlHweno3, SchemeId::SlHweno5, SchemeId::FdWeno5, SchemeId::FdHweno5];

fn full_mode() -> bool {
    std::env::var("HWK_ACCEPTANCE_FULL").is_ok_and(|v| v == "1")
}

struct Check {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Check {
    Check { pass, detail: detail.into() }
}

struct Criterion {
    id: u32,
    title: &'static str,
    checks: Vec<Check>,
    seconds: f64,
}

impl Criterion {
    fn pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    fn print(&self) {
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} - {} ({:.1} s)", self.id, self.title, self.seconds);
        for c in &self.checks {
            println!("    [{}] {}", if c.pass { "ok" } else { "FAIL" }, c.detail);
        }
    }
}

fn order(e_coarse: f64, e_fine: f64) -> f64 {
    (e_coarse / e_fine).log2()
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.3e}")).collect::<Vec<_>>().join(", ")
}

// ---------------------------------------------------------------------------------------
// Transport tables

/// L1 and TV errors of one scheme over [`SIZES`].
#[derive(Debug, Clone, PartialEq)]
struct Table {
    l1: Vec<f64>,
    tv: Vec<f64>,
    finals: Vec<Vec<f64>>,
}

impl Table {
    fn orders(&self) -> Vec<f64> {
        self.l1.windows(2).map(|w| order(w[0], w[1])).collect()
    }
}

fn table_config(scheme: SchemeId) -> SchemeConfig {
    let mut cfg = SchemeConfig::new(scheme);
    cfg.cfl_nonlinear = hwk_cli::CONVERGENCE_CFL_FD;
    cfg
}

fn run_table(profile: Profile, scheme: SchemeId, cfg: &SchemeConfig) -> Table {
    let mut t = Table { l1: Vec::new(), tv: Vec::new(), finals: Vec::new() };
    for n in SIZES {
        let run = run_transport1d(&Transport1DSetup::new(profile, n), cfg)
            .unwrap_or_else(|e| panic!("{scheme} n={n}: {e}"));
        t.l1.push(run.l1_error);
        t.tv.push(run.tv_error);
        t.finals.push(run.final_field.values().to_vec());
    }
    t
}

fn run_tables(profile: Profile) -> Vec<(SchemeId, Table)> {
    TABLE_SCHEMES.iter().map(|&s| (s, run_table(profile, s, &table_config(s)))).collect()
}

fn table_of(tables: &[(SchemeId, Table)], id: SchemeId) -> &Table {
    &tables.iter().find(|(s, _)| *s == id).expect("scheme tabulated").1
}

fn criterion_smooth(tables: &[(SchemeId, Table)]) -> Vec<Check> {
    let mut checks = Vec::new();
    let reference = [1.03e-6, 1.29e-7, 1.61e-8];
    for id in [SchemeId::SlSpline, SchemeId::SlHweno3] {
        let t = table_of(tables, id);
        let within = t.l1.iter().zip(reference).all(|(e, p)| e / p <= 3.0 && p / e <= 3.0);
        let orders = t.orders();
        checks.push(check(
            within && orders.iter().all(|&r| r >= 2.9),
            format!("{id}: L1 [{}] within x3 of [{}], orders {orders:.2?} >= 2.9", fmt_list(&t.l1), fmt_list(&reference)),
        ));
    }
    let t = table_of(tables, SchemeId::SlHweno5);
    let orders = t.orders();
    checks.push(check(
        orders.iter().all(|&r| r >= 4.5) && t.l1[0] <= 5e-9,
        format!("sl-hweno5: L1 [{}], orders {orders:.2?} >= 4.5, n=200 error <= 5e-9", fmt_list(&t.l1)),
    ));
    for id in [SchemeId::FdWeno5, SchemeId::FdHweno5] {
        let t = table_of(tables, id);
        let orders = t.orders();
        checks.push(check(
            orders.iter().all(|&r| r >= 4.8),
            format!("{id} (cfl {}): L1 [{}], orders {orders:.2?} >= 4.8", hwk_cli::CONVERGENCE_CFL_FD, fmt_list(&t.l1)),
        ));
    }
    let (w, h) = (table_of(tables, SchemeId::FdWeno5), table_of(tables, SchemeId::FdHweno5));
    checks.push(check(
        h.l1.iter().zip(&w.l1).all(|(h, w)| h < w),
        format!("fd-hweno5 error below fd-weno5 at every n: [{}] vs [{}]", fmt_list(&h.l1), fmt_list(&w.l1)),
    ));
    checks
}

fn criterion_step(tables: &[(SchemeId, Table)]) -> Vec<Check> {
    let mut checks = Vec::new();
    for (id, t) in tables {
        let orders = t.orders();
        checks.push(check(
            orders.iter().all(|r| (0.70..=0.90).contains(r)),
            format!("{id}: L1 [{}], orders {orders:.2?} in [0.70, 0.90]", fmt_list(&t.l1)),
        ));
    }
    let (w, h) = (table_of(tables, SchemeId::FdWeno5), table_of(tables, SchemeId::FdHweno5));
    checks.push(check(
        h.l1.iter().zip(&w.l1).all(|(h, w)| h <= w),
        format!("fd-hweno5 error <= fd-weno5 at every n: [{}] vs [{}]", fmt_list(&h.l1), fmt_list(&w.l1)),
    ));
    checks
}

fn criterion_oscillation(tables: &[(SchemeId, Table)]) -> Vec<Check> {
    let tv = |id| table_of(tables, id).tv[0];
    let bounds: [(SchemeId, &str, f64); 4] = [
        (SchemeId::SlSpline, ">=", 0.3),
        (SchemeId::SlHweno3, "<=", 5e-3),
        (SchemeId::FdWeno5, "<=", 5e-4),
        (SchemeId::FdHweno5, "<=", 1e-2),
    ];
    bounds
        .iter()
        .map(|&(id, op, bound)| {
            let v = tv(id);
            let pass = if op == ">=" { v >= bound } else { v <= bound };
            check(pass, format!("{id}: TV error at n=200 = {v:.3e} {op} {bound:e}"))
        })
        .collect()
}

// ---------------------------------------------------------------------------------------
// Kernel properties

/// Solves the small dense system `a x = b` by Gaussian elimination with partial pivoting.
fn solve_dense<const N: usize>(mut a: [[f64; N]; N], mut b: [f64; N]) -> [f64; N] {
    for col in 0..N {
        let piv = (col..N).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..N {
            let m = a[row][col] / a[col][col];
            for k in col..N {
                a[row][k] -= m * a[col][k];
            }
            b[row] -= m * b[col];
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let s: f64 = (row + 1..N).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Value and derivative rows of the monomial basis `1, s, s^2, ..` at `s`.
fn value_row<const N: usize>(s: f64) -> [f64; N] {
    std::array::from_fn(|k| s.powi(k as i32))
}

fn slope_row<const N: usize>(s: f64) -> [f64; N] {
    std::array::from_fn(|k| if k == 0 { 0.0 } else { k as f64 * s.powi(k as i32 - 1) })
}

/// `int_lo^hi sum_{d=1..} (p^(d))^2 ds` by 5-point Gauss-Legendre (exact for these degrees).
fn derivative_energy(p: &[f64], lo: f64, hi: f64) -> f64 {
    const X: [f64; 5] = [0.0, -0.538_469_310_105_683_1, 0.538_469_310_105_683_1, -0.906_179_845_938_664, 0.906_179_845_938_664];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let mut coeffs = p.to_vec();
    let mut total = 0.0;
    while coeffs.len() > 1 {
        coeffs = coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        total += half
            * X.iter()
                .zip(W)
                .map(|(x, w)| {
                    let s = mid + half * x;
                    let v: f64 = coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c);
                    w * v * v
                })
                .sum::<f64>();
    }
    total
}

fn random_data(rng: &mut ChaCha8Rng) -> f64 {
    let scale = 10f64.powf(rng.gen_range(-3.0..3.0));
    scale * rng.gen_range(-1.0..1.0)
}

fn weights_ok<const N: usize>(w: &WenoWeights<N>) -> bool {
    let sum: f64 = w.w.iter().sum();
    (sum - 1.0).abs() <= 4.0 * f64::EPSILON * N as f64 && w.w.iter().all(|&x| x >= 0.0)
}

fn criterion_kernels() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_160_512);
    let mut checks = Vec::new();
    const STENCILS: usize = 100_000;

    // Normalization and positivity.
    let mut bad = [0usize; 3];
    for _ in 0..STENCILS {
        let t = rng.gen_range(0.0..=1.0);
        let c3 = HermiteCell3 {
            f_i: random_data(&mut rng),
            f_ip1: random_data(&mut rng),
            fp_i: random_data(&mut rng),
            fp_ip1: random_data(&mut rng),
            dx: 10f64.powf(rng.gen_range(-3.0..0.0)),
        };
        bad[0] += usize::from(!weights_ok(&c3.weights(t, EPSILON)));
        let c5 = HermiteCell5 {
            f: std::array::from_fn(|_| random_data(&mut rng)),
            fp_im1: random_data(&mut rng),
            fp_ip2: random_data(&mut rng),
            dx: 10f64.powf(rng.gen_range(-3.0..0.0)),
        };
        bad[1] += usize::from(!weights_ok(&c5.weights(t, EPSILON)));
        let st: [f64; 9] = std::array::from_fn(|_| random_data(&mut rng));
        bad[2] += usize::from(!weights_ok(&hweno5_weights(&st, EPSILON)));
    }
    checks.push(check(
        bad == [0; 3],
        format!("weights sum to 1 and are >= 0 on {STENCILS} random stencils each (violations sl-hweno3/sl-hweno5/fd-hweno5: {bad:?})"),
    ));

    // Polynomial exactness in the smooth (linear-weight) limit, and of the nonlinear
    // values on the degrees every candidate reproduces.
    let mut worst = [0.0_f64; 6];
    for _ in 0..1000 {
        let p: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let x_i = rng.gen_range(-1.0..1.0);
        let dx = rng.gen_range(0.05..0.5);
        let t = rng.gen_range(0.0..=1.0);
        let eval = |deg: usize, x: f64| p[..=deg].iter().rev().fold(0.0, |acc, c| acc * x + c);
        let deriv = |deg: usize, x: f64| (1..=deg).rev().fold(0.0, |acc, k| acc * x + k as f64 * p[k]);
        let scale = 1.0 + p.iter().map(|c| c.abs()).sum::<f64>() * 4.0;
        let x = x_i + t * dx;
        let cell3 = |deg| HermiteCell3 {
            f_i: eval(deg, x_i),
            f_ip1: eval(deg, x_i + dx),
            fp_i: deriv(deg, x_i),
            fp_ip1: deriv(deg, x_i + dx),
            dx,
        };
        let cell5 = |deg| HermiteCell5 {
            f: std::array::from_fn(|k| eval(deg, x_i + (k as f64 - 1.0) * dx)),
            fp_im1: deriv(deg, x_i - dx),
            fp_ip2: deriv(deg, x_i + 2.0 * dx),
            dx,
        };
        worst[0] = worst[0].max((cell3(3).hermite_cubic(t) - eval(3, x)).abs() / scale);
        worst[1] = worst[1].max((cell3(2).eval_unit(t, EPSILON) - eval(2, x)).abs() / scale);
        worst[2] = worst[2].max((cell5(5).eval_linear(t) - eval(5, x)).abs() / scale);
        worst[3] = worst[3].max((cell5(3).eval_unit(t, EPSILON) - eval(3, x)).abs() / scale);
        // Conservative fluxes: (F_{i+1/2} - F_{i-1/2}) / dx = f'(x_i) for polynomial data.
        let node = |deg: usize, k: isize| eval(deg, x_i + k as f64 * dx);
        let window9 = |deg: usize, c: isize| -> [f64; 9] { std::array::from_fn(|k| node(deg, c + k as isize - 4)) };
        let fd = (flux_hweno5_linear(&window9(4, 0)) - flux_hweno5_linear(&window9(4, -1))) / dx;
        worst[4] = worst[4].max((fd - deriv(4, x_i)).abs() * dx / scale);
        let window5 = |deg: usize, c: isize| -> [f64; 5] { std::array::from_fn(|k| node(deg, c + k as isize - 2)) };
        let fdn = (flux_hweno5_minus(&window9(2, 0), EPSILON) - flux_hweno5_minus(&window9(2, -1), EPSILON)) / dx;
        let fdw = (flux_weno5_js(&window5(2, 0), EPSILON) - flux_weno5_js(&window5(2, -1), EPSILON)) / dx;
        worst[5] = worst[5].max(((fdn - deriv(2, x_i)).abs()).max((fdw - deriv(2, x_i)).abs()) * dx / scale);
    }
    let tol = 1e3 * f64::EPSILON;
    checks.push(check(
        worst.iter().all(|&w| w <= tol),
        format!(
            "polynomial exactness (relative, tol {tol:.1e}): hermite-3 on cubics {:.1e}, hweno3 on quadratics {:.1e}, \
             hermite-5 on quintics {:.1e}, hweno5 on cubics {:.1e}, linear fd-hweno5 flux on quartics {:.1e}, \
             nonlinear fd fluxes on quadratics {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4], worst[5]
        ),
    ));

    // Mirror identity, on single stencils and on the assembled divergence.
    let mut mirror_bad = 0;
    for _ in 0..STENCILS / 10 {
        let st9: [f64; 9] = std::array::from_fn(|_| random_data(&mut rng));
        let mut r9 = st9;
        r9.reverse();
        mirror_bad += usize::from(flux_hweno5_plus(&st9, EPSILON).to_bits() != flux_hweno5_minus(&r9, EPSILON).to_bits());
        let st5: [f64; 5] = std::array::from_fn(|_| random_data(&mut rng));
        let mut r5 = st5;
        r5.reverse();
        mirror_bad += usize::from(flux_weno5_js_plus(&st5, EPSILON).to_bits() != flux_weno5_js(&r5, EPSILON).to_bits());
    }
    let g = Grid1D::periodic(64, -1.0, 1.0).unwrap();
    let f = Field1D::from_fn(g, |x| if x.abs() < 0.4 { 1.0 } else { 0.0 } + 0.3 * (5.0 * x).sin());
    let mirrored = Field1D::from_values(g, (0..64).map(|i| f.values()[(64 - i) % 64]).collect()).unwrap();
    let mut div_diff = 0.0_f64;
    for kind in [FluxKind::Hweno5, FluxKind::Weno5] {
        let opts = FluxOptions::new(kind);
        let d = divergence_1d(&f, Velocity1D::Constant(1.0), &opts).unwrap();
        let dm = divergence_1d(&mirrored, Velocity1D::Constant(-1.0), &opts).unwrap();
        for i in 0..64 {
            div_diff = div_diff.max((d.values()[i] - dm.values()[(64 - i) % 64]).abs());
        }
    }
    checks.push(check(
        mirror_bad == 0 && div_diff <= 1e-12,
        format!(
            "mirror identity f+(data) = f-(reverse): {mirror_bad} bitwise mismatches on {} stencils; mirrored divergence differs by {div_diff:.1e}",
            STENCILS / 5
        ),
    ));

    // Smoothness indicators vanish exactly on constant candidates and only there.
    let mut zero_bad = 0;
    let mut positive_bad = 0;
    for _ in 0..10_000 {
        let c = random_data(&mut rng);
        let dx = 10f64.powf(rng.gen_range(-3.0..0.0));
        let r = |rng: &mut ChaCha8Rng| c + random_data(rng);
        // hweno3: left candidate flat, right one not.
        let cell3 = HermiteCell3 { f_i: c, f_ip1: c, fp_i: 0.0, fp_ip1: r(&mut rng) - c, dx };
        let b = cell3.smoothness();
        zero_bad += usize::from(b[0] != 0.0);
        positive_bad += usize::from(b[1] <= 0.0 && cell3.fp_ip1 != 0.0);
        // hweno5: left candidate flat.
        let cell5 = HermiteCell5 { f: [c, c, c, r(&mut rng)], fp_im1: 0.0, fp_ip2: r(&mut rng), dx };
        let b = cell5.smoothness();
        zero_bad += usize::from(b[0] != 0.0);
        positive_bad += usize::from(b[1] <= 0.0 || b[2] <= 0.0);
        let flat5 = HermiteCell5 { f: [c; 4], fp_im1: 0.0, fp_ip2: 0.0, dx };
        zero_bad += usize::from(flat5.smoothness() != [0.0; 3]);
        // fd-hweno5: the left candidate needs a flat primitive slope too.
        let mut st = [c; 9];
        for v in &mut st[6..] {
            *v = r(&mut rng);
        }
        let b = hweno5_smoothness(&st);
        zero_bad += usize::from(b[0] != 0.0 || b[1] != 0.0);
        positive_bad += usize::from(b[2] <= 0.0);
        zero_bad += usize::from(hweno5_smoothness(&[c; 9]) != [0.0; 3]);
        let rough: [f64; 9] = std::array::from_fn(|_| random_data(&mut rng));
        positive_bad += usize::from(hweno5_smoothness(&rough).iter().any(|&b| b <= 0.0));
    }
    checks.push(check(
        zero_bad == 0 && positive_bad == 0,
        format!("smoothness indicators: {zero_bad} non-zero values on constant candidates, {positive_bad} non-positive values on varying ones (10000 trials)"),
    ));

    // Closed forms against direct quadrature of the candidate polynomials.
    let mut worst_beta = [0.0_f64; 3];
    for _ in 0..2000 {
        // hweno3 in the unit variable: quadratics through f_i, f_{i+1} with one end slope.
        let cell = HermiteCell3 {
            f_i: rng.gen_range(-1.0..1.0),
            f_ip1: rng.gen_range(-1.0..1.0),
            fp_i: rng.gen_range(-5.0..5.0),
            fp_ip1: rng.gen_range(-5.0..5.0),
            dx: rng.gen_range(0.01..1.0),
        };
        let left = solve_dense([value_row(0.0), value_row(1.0), slope_row(0.0)], [cell.f_i, cell.f_ip1, cell.dx * cell.fp_i]);
        let right = solve_dense([value_row(0.0), value_row(1.0), slope_row(1.0)], [cell.f_i, cell.f_ip1, cell.dx * cell.fp_ip1]);
        let b = cell.smoothness();
        for (closed, poly) in b.iter().zip([left, right]) {
            let direct = derivative_energy(&poly, 0.0, 1.0);
            worst_beta[0] = worst_beta[0].max((closed - direct).abs() / direct.max(1e-12));
        }
        // hweno5 sub-cubics from their Hermite conditions on nodes t = -1, 0, 1, 2.
        let cell = HermiteCell5 {
            f: std::array::from_fn(|_| rng.gen_range(-1.0..1.0)),
            fp_im1: rng.gen_range(-5.0..5.0),
            fp_ip2: rng.gen_range(-5.0..5.0),
            dx: rng.gen_range(0.01..1.0),
        };
        let [fm, f0, f1, f2] = cell.f;
        let h_l = solve_dense([value_row(-1.0), value_row(0.0), value_row(1.0), slope_row(-1.0)], [fm, f0, f1, cell.dx * cell.fp_im1]);
        let h_c = solve_dense([value_row(-1.0), value_row(0.0), value_row(1.0), value_row(2.0)], [fm, f0, f1, f2]);
        let h_r = solve_dense([value_row(0.0), value_row(1.0), value_row(2.0), slope_row(2.0)], [f0, f1, f2, cell.dx * cell.fp_ip2]);
        for (closed, poly) in cell.smoothness().iter().zip([h_l, h_c, h_r]) {
            let direct = derivative_energy(&poly, 0.0, 1.0);
            worst_beta[1] = worst_beta[1].max((closed - direct).abs() / direct.max(1e-12));
        }
        // fd-hweno5: cubics of the primitive on half points s = -2, -1, 0, 1 (s = 0 at
        // x_{i+1/2}); the candidate flux is their derivative, measured over [x_i, x_{i+1}].
        let st: [f64; 9] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let g = [0.0, st[3], st[3] + st[4], st[3] + st[4] + st[5]];
        let gl = primitive_slope(&st[0..6]);
        let gr = primitive_slope(&st[3..9]);
        let p_l = solve_dense([value_row(-2.0), value_row(-1.0), value_row(0.0), slope_row(-2.0)], [g[0], g[1], g[2], gl]);
        let p_c = solve_dense([value_row(-2.0), value_row(-1.0), value_row(0.0), value_row(1.0)], g);
        let p_r = solve_dense([value_row(-1.0), value_row(0.0), value_row(1.0), slope_row(1.0)], [g[1], g[2], g[3], gr]);
        for (closed, poly) in hweno5_smoothness(&st).iter().zip([p_l, p_c, p_r]) {
            let flux: Vec<f64> = poly.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
            let direct = derivative_energy(&flux, -0.5, 0.5);
            worst_beta[2] = worst_beta[2].max((closed - direct).abs() / direct.max(1e-12));
        }
    }
    checks.push(check(
        worst_beta.iter().all(|&w| w <= 1e-9),
        format!(
            "smoothness closed forms vs Gauss quadrature (max relative gap): sl-hweno3 {:.1e}, sl-hweno5 {:.1e}, fd-hweno5 {:.1e}",
            worst_beta[0], worst_beta[1], worst_beta[2]
        ),
    ));
    checks
}

// ---------------------------------------------------------------------------------------
// Conservation

#[derive(Debug, Clone, PartialEq)]
struct ConservationRun {
    worst_step: f64,
    total: f64,
    final_values: Vec<f64>,
}

fn conservation_1d(kind: FluxKind, steps: usize) -> ConservationRun {
    let g = Grid1D::periodic(200, -1.0, 1.0).unwrap();
    let mut f = Field1D::from_fn(g, |x| 1.0 + if x.abs() < 0.5 { 1.0 } else { 0.0 } + 0.2 * (3.0 * std::f64::consts::PI * x).sin());
    let a: Vec<f64> = g.nodes().map(|x| 1.0 + 0.5 * (std::f64::consts::PI * x).sin()).collect();
    let opts = FluxOptions::new(kind);
    let dt = 0.85 * g.dx() / 1.5;
    let m0 = f.norms().mass;
    let (mut prev, mut worst) = (m0, 0.0_f64);
    for _ in 0..steps {
        f = fd_step_rk4_1d(&f, Velocity1D::Field(&a), dt, &opts, 0.85).unwrap();
        let m = f.norms().mass;
        worst = worst.max(((m - prev) / m0).abs());
        prev = m;
    }
    ConservationRun { worst_step: worst, total: ((prev - m0) / m0).abs(), final_values: f.into_values() }
}

fn conservation_2d(scheme: SchemeId, steps: usize) -> ConservationRun {
    use std::f64::consts::PI;
    let g = Grid2D::new((32, 32), (-1.0, 1.0), (-1.0, 1.0), Boundary::Periodic).unwrap();
    // Divergence-free cellular flow plus a uniform drift.
    let v = VelocityField::from_fn(g, |x, y| (0.3 + (PI * y).sin() * (PI * x).cos(), -(PI * x).sin() * (PI * y).cos())).unwrap();
    let mut f = Field2D::from_fn(g, |x, y| 1.0 + if x.abs() < 0.4 && y.abs() < 0.4 { 1.0 } else { 0.0 });
    let mut provider = |_: &Field2D, _: f64| Ok(v.clone());
    let mut engine = Engine2D::new(SchemeConfig::new(scheme), TimeStep::Adaptive, g.h()).unwrap();
    let m0 = f.mass();
    let (mut prev, mut worst, mut t) = (m0, 0.0_f64, 0.0);
    for _ in 0..steps {
        let out = engine.step(&f, t, f64::INFINITY, &mut provider).unwrap();
        f = out.f;
        t = out.t;
        let m = f.mass();
        worst = worst.max(((m - prev) / m0).abs());
        prev = m;
    }
    ConservationRun { worst_step: worst, total: ((prev - m0) / m0).abs(), final_values: f.values().to_vec() }
}

fn conservation_runs() -> Vec<(String, ConservationRun)> {
    let steps = 10_000;
    vec![
        ("1D fd-weno5".into(), conservation_1d(FluxKind::Weno5, steps)),
        ("1D fd-hweno5".into(), conservation_1d(FluxKind::Hweno5, steps)),
        ("2D fd-weno5".into(), conservation_2d(SchemeId::FdWeno5, steps)),
        ("2D fd-hweno5".into(), conservation_2d(SchemeId::FdHweno5, steps)),
    ]
}

fn criterion_conservation(runs: &[(String, ConservationRun)]) -> Vec<Check> {
    runs.iter()
        .map(|(name, r)| {
            check(
                r.worst_step <= 1e-12 && r.total <= 1e-10,
                format!("{name}: worst per-step drift {:.1e} <= 1e-12, drift over 10^4 steps {:.1e} <= 1e-10", r.worst_step, r.total),
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------------------
// Poisson solver

fn criterion_poisson() -> Vec<Check> {
    let radius: f64 = 10.0;
    let mut errors = Vec::new();
    let mut degrees = Vec::new();
    for n in [64, 128] {
        let g = Grid2D::square(n, 11.0).unwrap();
        let mask = classify_disk_nodes(&g, radius).unwrap();
        let ghosts = build_ghost_extrapolation(&mask).unwrap();
        degrees.push(ghosts.degree_counts());
        let rho = Field2D::from_fn(g, |_, _| 1.0);
        let phi = solve_poisson_disk(&rho, &ghosts).unwrap();
        let mut err = 0.0_f64;
        for j in 0..n {
            for i in 0..n {
                if mask.is_interior(i as isize, j as isize) {
                    let (x, y) = g.coords(i, j);
                    err = err.max((phi.at(i, j) - (radius * radius - x * x - y * y) / 4.0).abs());
                }
            }
        }
        errors.push(err);
    }
    let r = order(errors[0], errors[1]);
    // The paraboloid lies in the span of the 5-point operator and the quadratic ghost
    // extrapolation, so the discrete solution is exact up to round-off.
    let exact = errors.iter().all(|&e| e <= 1e-10);
    let mut checks = vec![check(
        r >= 1.8 || exact,
        format!(
            "phi = (R^2 - r^2)/4: max errors {} at n = 64, 128 (order {r:.2}; both at round-off level: {exact})",
            fmt_list(&errors)
        ),
    )];

    // Ghost extrapolation on global quadratics where the 3x3 stencil applies.
    let mut worst = 0.0_f64;
    let mut q2 = 0;
    for n in [64, 128] {
        let g = Grid2D::square(n, 11.0).unwrap();
        let mask = classify_disk_nodes(&g, radius).unwrap();
        let ghosts = build_ghost_extrapolation(&mask).unwrap();
        let quad = |x: f64, y: f64| 3.0 + 0.5 * x - 0.25 * y + 0.125 * x * x - 0.3 * x * y + 0.2 * y * y;
        let values = Field2D::from_fn(g, quad);
        for ghost in ghosts.ghosts().iter().filter(|gh| gh.degree == StencilDegree::Q2) {
            q2 += 1;
            let (bx, by) = ghost.boundary_point;
            let got = ghost.extrapolate(values.values(), quad(bx, by));
            let (i, j) = (ghost.node % n, ghost.node / n);
            let (x, y) = g.coords(i, j);
            worst = worst.max((got - quad(x, y)).abs() / quad(x, y).abs().max(1.0));
        }
    }
    checks.push(check(
        worst <= 1e-11 && q2 > 0,
        format!("ghost extrapolation on a global quadratic: {q2} Q2 ghosts, worst relative error {worst:.1e}; degree counts [Q0, Q1, Q2] {degrees:?}"),
    ));
    checks
}

// ---------------------------------------------------------------------------------------
// Beam

fn reference_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/beam_reference_energy.csv")
}

/// `(t, energy)` of the high-resolution reference, if shipped.
fn reference_energy() -> Option<Vec<(f64, f64)>> {
    let file = std::fs::File::open(reference_path()).ok()?;
    let table = CsvTable::read(std::io::BufReader::new(file)).ok()?;
    let t = table.column("t")?;
    let e = table.column("energy")?;
    Some(t.into_iter().zip(e).collect())
}

fn interpolate(series: &[(f64, f64)], t: f64) -> Option<f64> {
    let k = series.partition_point(|(s, _)| *s < t);
    if k < series.len() && (series[k].0 - t).abs() <= 1e-9 {
        return Some(series[k].1);
    }
    if k == 0 || k == series.len() {
        return None;
    }
    let ((t0, e0), (t1, e1)) = (series[k - 1], series[k]);
    Some(e0 + (e1 - e0) * (t - t0) / (t1 - t0))
}

/// Largest relative gap to the reference over `t` in `[lo, hi]`, with its time.
fn energy_gap(run: &RunOutput, reference: &[(f64, f64)], lo: f64, hi: f64) -> (f64, f64) {
    let mut worst = (0.0_f64, 0.0);
    for r in run.series.records() {
        if r.t < lo - 1e-12 || r.t > hi + 1e-12 {
            continue;
        }
        let (Some(e), Some(e_ref)) = (r.energy, interpolate(reference, r.t)) else { continue };
        let gap = ((e - e_ref) / e_ref).abs();
        if gap > worst.0 {
            worst = (gap, r.t);
        }
    }
    worst
}

fn beam_run(n: usize, dt: f64, t_end: f64, scheme: SchemeId) -> RunOutput {
    let mut setup = BeamSetup::new(n);
    setup.dt = dt;
    setup.t_end = t_end;
    let exp = Experiment::Beam(setup);
    let mut opts = RunOptions::for_experiment(&exp, SchemeConfig::new(scheme));
    opts.snapshot_times.retain(|&t| t < t_end);
    run_experiment(&exp, &opts).unwrap_or_else(|e| panic!("beam {scheme} n={n}: {e}"))
}

fn criterion_beam(smoke: &RunOutput) -> Vec<Check> {
    let Some(reference) = reference_energy() else {
        return vec![check(false, format!("reference energy series missing at {}", reference_path().display()))];
    };
    let mut checks = Vec::new();
    let (gap, at) = energy_gap(smoke, &reference, 0.0, 10.0);
    checks.push(check(
        gap <= 0.05,
        format!("smoke n=129 fd-hweno5 (dt = 1/200): energy within {gap:.2e} (at t = {at}) of the reference for t <= 10, bound 5%"),
    ));
    if full_mode() {
        let fd = beam_run(513, 1.0 / 800.0, 20.0, SchemeId::FdHweno5);
        let (gap, at) = energy_gap(&fd, &reference, 0.0, 10.0);
        checks.push(check(gap <= 0.02, format!("n=513 fd-hweno5: energy within {gap:.2e} (at t = {at}) of the reference for t <= 10, bound 2%")));
        let sl = beam_run(513, 1.0 / 800.0, 20.0, SchemeId::SlSpline);
        let (gap, at) = energy_gap(&sl, &reference, 15.0, 20.0);
        checks.push(check(gap > 0.05, format!("n=513 sl-spline: largest energy gap to the reference on [15, 20] is {gap:.2e} (at t = {at}), needs > 5%")));
    } else {
        println!("    (n=513 beam runs skipped; set HWK_ACCEPTANCE_FULL=1)");
    }
    checks
}

// ---------------------------------------------------------------------------------------
// Diocotron

fn diocotron_run(n: usize, scheme: SchemeId, t_end: f64) -> RunOutput {
    let mut setup = DiocotronSetup::new(n);
    setup.t_end = t_end;
    let exp = Experiment::Diocotron(setup);
    let mut cfg = SchemeConfig::new(scheme);
    cfg.cfl_linear = 2.0;
    cfg.cfl_nonlinear = 0.5;
    let mut opts = RunOptions::for_experiment(&exp, cfg);
    opts.snapshot_times.clear();
    run_experiment(&exp, &opts).unwrap_or_else(|e| panic!("diocotron {scheme} n={n}: {e}"))
}

/// Least-squares slope and coefficient of determination of `ln(amplitude)` against `t`.
fn log_linear_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), (t, y)| (a + t, b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (t, y) in points {
        let (dx, dy) = (t - mx, y.ln() - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    (slope, sxy * sxy / (sxx * syy))
}

fn criterion_diocotron(n: usize, mixed: &RunOutput, spline: &RunOutput) -> Vec<Check> {
    let mut checks = Vec::new();
    let max_rel = |r: &RunOutput| r.series.relative_mass().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let (m_mixed, m_spline) = (max_rel(mixed), max_rel(spline));
    checks.push(check(
        m_mixed <= m_spline,
        format!("n={n}: max |relative mass error| on [0, 60]: mixed {m_mixed:.3e} <= sl-spline {m_spline:.3e} (mixed switched at t = {:?})", mixed.switch_time),
    ));
    // Linear phase: from t = 5 until the amplitude first reaches a tenth of its maximum.
    let modes = &mixed.mode_series;
    let peak = modes.iter().fold(0.0_f64, |m, (_, a)| m.max(*a));
    let end = modes.iter().find(|(_, a)| *a >= 0.1 * peak).map_or(0.0, |(t, _)| *t);
    let window: Vec<(f64, f64)> = modes.iter().copied().filter(|&(t, _)| t >= 5.0 && t <= end).collect();
    let (slope, r2) = if window.len() >= 3 { log_linear_fit(&window) } else { (f64::NAN, f64::NAN) };
    let a0 = modes.first().map_or(f64::NAN, |m| m.1);
    checks.push(check(
        window.len() >= 10 && slope > 0.0 && r2 >= 0.99 && peak >= 10.0 * a0,
        format!(
            "mode 7 grows log-linearly on t in [5, {end:.2}] ({} samples): rate {slope:.4}, R^2 {r2:.5}, amplitude {a0:.3e} -> peak {peak:.3e}",
            window.len()
        ),
    ));
    let (min_mixed, min_spline) = (mixed.series.last().unwrap().min, spline.series.last().unwrap().min);
    checks.push(check(
        min_mixed >= min_spline,
        format!("final minimum density: mixed {min_mixed:.3e} >= sl-spline {min_spline:.3e}"),
    ));
    checks
}

// ---------------------------------------------------------------------------------------
// Determinism

fn files_identical(a: &Path, b: &Path) -> Result<usize, String> {
    let mut names: Vec<_> = std::fs::read_dir(a).map_err(|e| e.to_string())?.map(|e| e.unwrap().file_name()).collect();
    names.sort();
    for name in &names {
        let (x, y) = (std::fs::read(a.join(name)).map_err(|e| e.to_string())?, std::fs::read(b.join(name)).map_err(|e| e.to_string())?);
        if x != y {
            return Err(format!("{} differs", name.to_string_lossy()));
        }
    }
    Ok(names.len())
}

fn run_cli_into(dir: &Path, args: &[&str]) -> i32 {
    let mut full = vec!["hwk"];
    full.extend_from_slice(args);
    let out = dir.to_str().unwrap();
    full.extend_from_slice(&["--output", out]);
    hwk_cli::main_with_args(full)
}

struct FirstPass {
    smooth: Vec<(SchemeId, Table)>,
    step: Vec<(SchemeId, Table)>,
    conservation: Vec<(String, ConservationRun)>,
    beam: RunOutput,
    mixed: RunOutput,
    spline: RunOutput,
}

fn criterion_determinism(first: &FirstPass, diocotron_n: usize) -> Vec<Check> {
    let mut checks = Vec::new();
    checks.push(check(run_tables(Profile::Sine) == first.smooth, "criterion 1 tables (errors and final fields) bit-identical on rerun"));
    checks.push(check(run_tables(Profile::Step) == first.step, "criteria 2-3 tables (errors, TV and final fields) bit-identical on rerun"));
    checks.push(check(conservation_runs() == first.conservation, "criterion 5 runs bit-identical on rerun"));
    checks.push(check(
        beam_run(129, 1.0 / 200.0, 10.0, SchemeId::FdHweno5) == first.beam,
        "criterion 7 smoke run (series, snapshots, final state) bit-identical on rerun",
    ));
    let (m, s) = (diocotron_run(diocotron_n, SchemeId::Mixed, 60.0), diocotron_run(diocotron_n, SchemeId::SlSpline, 60.0));
    checks.push(check(m == first.mixed && s == first.spline, format!("criterion 8 runs (n={diocotron_n}) bit-identical on rerun")));
    // Written files through the command-line driver.
    let tmp = tempfile::tempdir().unwrap();
    let argsets: [&[&str]; 3] = [
        &["run", "transport1d", "--scheme", "mixed", "--profile", "composite", "--n", "200"],
        &["run", "beam", "--scheme", "sl-hweno5", "--n", "65", "--dt", "0.01", "--t-end", "2", "--snapshots", "1"],
        &["run", "diocotron", "--scheme", "mixed", "--n", "64", "--t-end", "5", "--snapshots", "2.5"],
    ];
    for args in argsets {
        let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
        let codes = (run_cli_into(&a, args), run_cli_into(&b, args));
        let sub = std::fs::read_dir(&a).unwrap().next().unwrap().unwrap().file_name();
        let same = files_identical(&a.join(&sub), &b.join(&sub));
        checks.push(check(
            codes == (0, 0) && same.is_ok(),
            format!("`hwk {}` twice: exit codes {codes:?}, output files identical: {same:?}", args.join(" ")),
        ));
        std::fs::remove_dir_all(&a).unwrap();
        std::fs::remove_dir_all(&b).unwrap();
    }
    checks
}

// ---------------------------------------------------------------------------------------

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

fn main() {
    let strict = std::env::var("HWK_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let diocotron_n = 256;
    let mut results = Vec::new();
    let mut report = |c: Criterion| {
        c.print();
        results.push((c.id, c.pass()));
    };

    let (smooth, s1) = timed(|| run_tables(Profile::Sine));
    report(Criterion { id: 1, title: "smooth convergence", checks: criterion_smooth(&smooth), seconds: s1 });
    let (step, s2) = timed(|| run_tables(Profile::Step));
    report(Criterion { id: 2, title: "discontinuous convergence", checks: criterion_step(&step), seconds: s2 });
    report(Criterion { id: 3, title: "oscillation control", checks: criterion_oscillation(&step), seconds: 0.0 });
    let (checks, s4) = timed(criterion_kernels);
    report(Criterion { id: 4, title: "kernel properties", checks, seconds: s4 });
    let (conservation, s5) = timed(conservation_runs);
    report(Criterion { id: 5, title: "conservation", checks: criterion_conservation(&conservation), seconds: s5 });
    let (checks, s6) = timed(criterion_poisson);
    report(Criterion { id: 6, title: "Poisson disk solver", checks, seconds: s6 });
    let ((beam, checks), s7) = timed(|| {
        let beam = beam_run(129, 1.0 / 200.0, 10.0, SchemeId::FdHweno5);
        let checks = criterion_beam(&beam);
        (beam, checks)
    });
    report(Criterion { id: 7, title: "beam energy", checks, seconds: s7 });
    let ((mixed, spline), s8a) =
        timed(|| (diocotron_run(diocotron_n, SchemeId::Mixed, 60.0), diocotron_run(diocotron_n, SchemeId::SlSpline, 60.0)));
    let checks = criterion_diocotron(diocotron_n, &mixed, &spline);
    report(Criterion { id: 8, title: "diocotron", checks, seconds: s8a });
    let first = FirstPass { smooth, step, conservation, beam, mixed, spline };
    let (checks, s9) = timed(|| criterion_determinism(&first, diocotron_n));
    report(Criterion { id: 9, title: "determinism", checks, seconds: s9 });

    let failed: Vec<u32> = results.iter().filter(|(_, p)| !p).map(|(id, _)| *id).collect();
    println!("acceptance: {} of {} criteria pass{}", results.len() - failed.len(), results.len(), if failed.is_empty() { String::new() } else { format!("; failing: {failed:?}") });
    if strict && !failed.is_empty() {
        std::process::exit(1);
    }
}
