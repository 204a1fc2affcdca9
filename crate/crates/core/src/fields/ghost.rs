use crate::error::{Error, Result};
use crate::grid::{DiskMask, NodeClass};
use crate::numerics::lagrange_weights;

/// Polynomial degree of the interpolation stencil behind one ghost value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StencilDegree {
    /// One interior node.
    Q0,
    /// Two nodes on each of two grid lines.
    Q1,
    /// Three nodes on each of three grid lines.
    Q2,
}

/// Extrapolation data for one ghost node.
///
/// `phi_g = w_p phi(x_p) + w_h phi(x_h) + w_2h phi(x_2h)`, where `x_p` is the boundary point
/// on the inward normal through the ghost and `x_h`, `x_2h` lie `h` and `2h` further in.
/// `phi(x_h)` and `phi(x_2h)` are Lagrange combinations of interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct GhostNode {
    /// Grid index of the ghost node.
    pub node: usize,
    pub boundary_point: (f64, f64),
    pub inner_points: [(f64, f64); 2],
    /// `[w_p, w_h, w_2h]`.
    pub normal_weights: [f64; 3],
    pub degree: StencilDegree,
    /// Interior nodes and their interpolation weights at `x_h` and `x_2h`.
    pub stencil: Vec<(usize, f64, f64)>,
    /// `w_h * w_{h,l} + w_2h * w_{2h,l}` merged per interior node.
    pub combined: Vec<(usize, f64)>,
}

impl GhostNode {
    /// Ghost value from interior values (full-grid array) and the boundary value at `x_p`.
    #[inline]
    pub fn extrapolate(&self, values: &[f64], boundary_value: f64) -> f64 {
        self.normal_weights[0] * boundary_value
            + self.combined.iter().map(|&(k, w)| w * values[k]).sum::<f64>()
    }
}

/// Ghost data for every ghost node of a disk mask.
#[derive(Debug, Clone, PartialEq)]
pub struct GhostExtrapolation {
    mask: DiskMask,
    /// Normal spacing `h = min(dx, dy)`.
    h: f64,
    ghosts: Vec<GhostNode>,
    /// Position in `ghosts` of each grid node, if it is a ghost.
    slot: Vec<Option<u32>>,
}

impl GhostExtrapolation {
    pub fn mask(&self) -> &DiskMask {
        &self.mask
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn ghosts(&self) -> &[GhostNode] {
        &self.ghosts
    }

    pub fn ghost_at(&self, node: usize) -> Option<&GhostNode> {
        self.slot[node].map(|s| &self.ghosts[s as usize])
    }

    /// Number of ghosts per stencil degree `[Q0, Q1, Q2]`.
    pub fn degree_counts(&self) -> [usize; 3] {
        let mut c = [0; 3];
        for g in &self.ghosts {
            c[g.degree as usize] += 1;
        }
        c
    }

    /// Overwrites every ghost entry of `values` (a full-grid array) with its extrapolation,
    /// taking the boundary values from `boundary`.
    pub fn apply(&self, values: &mut [f64], boundary: impl Fn(f64, f64) -> f64) {
        for g in &self.ghosts {
            let (x, y) = g.boundary_point;
            values[g.node] = g.extrapolate(values, boundary(x, y));
        }
    }
}

/// Quadratic Lagrange weights along the normal: the ghost sits at distance `delta` outside
/// the boundary point, the inner points at `h` and `2h` inside.
fn normal_weights(delta: f64, h: f64) -> [f64; 3] {
    let h2 = h * h;
    [
        (delta + h) * (delta + 2.0 * h) / (2.0 * h2),
        -delta * (delta + 2.0 * h) / h2,
        delta * (delta + h) / (2.0 * h2),
    ]
}

/// Grid lines crossed by the normal and the nodes picked on each of them.
struct LineStencil {
    /// For each line: its coordinate along the stepping axis and the node coordinates
    /// along the line, with grid indices.
    lines: Vec<(f64, Vec<(f64, usize)>)>,
    /// True when the lines are rows (`y = const`).
    rows: bool,
}

impl LineStencil {
    fn weights_at(&self, p: (f64, f64)) -> Vec<(usize, f64)> {
        let (along, across) = if self.rows { (p.0, p.1) } else { (p.1, p.0) };
        let line_coords: Vec<f64> = self.lines.iter().map(|l| l.0).collect();
        let wl = lagrange_weights(&line_coords, across);
        let mut out = Vec::new();
        for ((_, nodes), wl) in self.lines.iter().zip(wl) {
            let coords: Vec<f64> = nodes.iter().map(|n| n.0).collect();
            for (&(_, k), w) in nodes.iter().zip(lagrange_weights(&coords, along)) {
                out.push((k, wl * w));
            }
        }
        out
    }
}

fn line_stencil(mask: &DiskMask, ghost: (usize, usize), normal: (f64, f64), width: usize) -> Option<LineStencil> {
    let g = mask.grid();
    let (gi, gj) = (ghost.0 as isize, ghost.1 as isize);
    let (xg, yg) = g.coords(ghost.0, ghost.1);
    let rows = normal.1.abs() >= normal.0.abs();
    let mut lines = Vec::with_capacity(width);
    for l in 1..=width as isize {
        // Step inward along the dominant normal axis and cross the normal with that line.
        let (line_coord, along, step_cells, axis_min, axis_step) = if rows {
            let j = gj + l * normal.1.signum() as isize;
            let y = g.y_axis().x_min() + j as f64 * g.dy();
            let x = xg + normal.0 * (y - yg) / normal.1;
            (j, x, g.dx(), g.x_axis().x_min(), g.dx())
        } else {
            let i = gi + l * normal.0.signum() as isize;
            let x = g.x_axis().x_min() + i as f64 * g.dx();
            let y = yg + normal.1 * (x - xg) / normal.0;
            (i, y, g.dy(), g.y_axis().x_min(), g.dy())
        };
        let s = (along - axis_min) / step_cells;
        // Nearest window first, then the windows shifted by one node either way.
        let base = if width == 3 { s.round() as isize - 1 } else { s.floor() as isize };
        let mut shifts = [base - 1, base + 1];
        if s - s.floor() >= 0.5 {
            shifts.swap(0, 1);
        }
        let inside = |first: isize| {
            (first..first + width as isize).all(|m| {
                let (i, j) = if rows { (m, line_coord) } else { (line_coord, m) };
                mask.is_interior(i, j)
            })
        };
        let first = [base, shifts[0], shifts[1]].into_iter().find(|&f| inside(f))?;
        let nodes: Vec<(f64, usize)> = (first..first + width as isize)
            .map(|m| {
                let (i, j) = if rows { (m, line_coord) } else { (line_coord, m) };
                (axis_min + m as f64 * axis_step, g.index(i as usize, j as usize))
            })
            .collect();
        let coord = if rows {
            g.y_axis().x_min() + line_coord as f64 * g.dy()
        } else {
            g.x_axis().x_min() + line_coord as f64 * g.dx()
        };
        lines.push((coord, nodes));
    }
    Some(LineStencil { lines, rows })
}

fn nearest_interior(mask: &DiskMask, p: (f64, f64)) -> Option<usize> {
    let g = mask.grid();
    let ci = ((p.0 - g.x_axis().x_min()) / g.dx()).round() as isize;
    let cj = ((p.1 - g.y_axis().x_min()) / g.dy()).round() as isize;
    let mut best: Option<(f64, usize)> = None;
    for j in cj - 2..=cj + 2 {
        for i in ci - 2..=ci + 2 {
            if mask.is_interior(i, j) {
                let (x, y) = g.coords(i as usize, j as usize);
                let d = (x - p.0).hypot(y - p.1);
                if best.is_none_or(|(bd, _)| d < bd) {
                    best = Some((d, g.index(i as usize, j as usize)));
                }
            }
        }
    }
    best.map(|b| b.1)
}

fn merge(stencil: &[(usize, f64, f64)], w_h: f64, w_2h: f64) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(stencil.len());
    for &(k, a, b) in stencil {
        let w = w_h * a + w_2h * b;
        match out.iter_mut().find(|e| e.0 == k) {
            Some(e) => e.1 += w,
            None => out.push((k, w)),
        }
    }
    out.sort_by_key(|e| e.0);
    out
}

/// Builds the normal-direction extrapolation for every ghost node of `mask`, trying
/// nine-point (Q2), then four-point (Q1), then one-point (Q0) interpolation stencils.
pub fn build_ghost_extrapolation(mask: &DiskMask) -> Result<GhostExtrapolation> {
    let g = *mask.grid();
    let radius = mask.radius();
    let h = g.dx().min(g.dy());
    let mut ghosts = Vec::with_capacity(mask.counts().ghost);
    let mut slot = vec![None; g.len()];
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            if mask.class(i, j) != NodeClass::Ghost {
                continue;
            }
            let (x, y) = g.coords(i, j);
            let r = x.hypot(y);
            let normal = (-x / r, -y / r);
            let delta = r - radius;
            let xp = (radius * x / r, radius * y / r);
            let xh = (xp.0 + h * normal.0, xp.1 + h * normal.1);
            let x2h = (xp.0 + 2.0 * h * normal.0, xp.1 + 2.0 * h * normal.1);
            let w = normal_weights(delta, h);

            let mut found = None;
            for (width, degree) in [(3, StencilDegree::Q2), (2, StencilDegree::Q1)] {
                if let Some(ls) = line_stencil(mask, (i, j), normal, width) {
                    let a = ls.weights_at(xh);
                    let b = ls.weights_at(x2h);
                    let stencil = a.iter().zip(&b).map(|(&(k, wa), &(_, wb))| (k, wa, wb)).collect();
                    found = Some((degree, stencil));
                    break;
                }
            }
            let (degree, stencil): (StencilDegree, Vec<(usize, f64, f64)>) = match found {
                Some(f) => f,
                None => {
                    let a = nearest_interior(mask, xh);
                    let b = nearest_interior(mask, x2h);
                    match (a, b) {
                        (Some(a), Some(b)) if a == b => (StencilDegree::Q0, vec![(a, 1.0, 1.0)]),
                        (Some(a), Some(b)) => (StencilDegree::Q0, vec![(a, 1.0, 0.0), (b, 0.0, 1.0)]),
                        _ => {
                            return Err(Error::config(format!(
                                "no interior node near ghost ({x:.4}, {y:.4}); the grid is too coarse for R = {radius}"
                            )))
                        }
                    }
                }
            };
            slot[g.index(i, j)] = Some(ghosts.len() as u32);
            ghosts.push(GhostNode {
                node: g.index(i, j),
                boundary_point: xp,
                inner_points: [xh, x2h],
                normal_weights: w,
                degree,
                combined: merge(&stencil, w[1], w[2]),
                stencil,
            });
        }
    }
    Ok(GhostExtrapolation {
        mask: mask.clone(),
        h,
        ghosts,
        slot,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{classify_disk_nodes, Grid2D};

    fn setup(n: usize) -> GhostExtrapolation {
        let g = Grid2D::square(n, 11.0).unwrap();
        build_ghost_extrapolation(&classify_disk_nodes(&g, 10.0).unwrap()).unwrap()
    }

    fn ghost_errors(ext: &GhostExtrapolation, p: impl Fn(f64, f64) -> f64, degrees: &[StencilDegree]) -> f64 {
        let g = *ext.mask().grid();
        let values: Vec<f64> = (0..g.ny()).flat_map(|j| (0..g.nx()).map(move |i| (i, j))).map(|(i, j)| {
            let (x, y) = g.coords(i, j);
            p(x, y)
        }).collect();
        let mut out = values.clone();
        ext.apply(&mut out, &p);
        ext.ghosts()
            .iter()
            .filter(|gh| degrees.contains(&gh.degree))
            .map(|gh| (out[gh.node] - values[gh.node]).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn normal_weights_reproduce_quadratics_along_the_normal() {
        let (delta, h) = (0.37, 0.5);
        let w = normal_weights(delta, h);
        for q in [|s: f64| 1.0 + 0.0 * s, |s: f64| 2.0 - s, |s: f64| s * s - 3.0 * s] {
            let got = w[0] * q(0.0) + w[1] * q(h) + w[2] * q(2.0 * h);
            assert!((got - q(-delta)).abs() < 1e-14);
        }
    }

    #[test]
    fn ghosts_and_stencils_are_well_formed() {
        let ext = setup(64);
        let mask = ext.mask();
        assert_eq!(ext.ghosts().len(), mask.counts().ghost);
        for gh in ext.ghosts() {
            assert_eq!(mask.classes()[gh.node], NodeClass::Ghost);
            assert!(gh.stencil.iter().all(|&(k, _, _)| mask.classes()[k] == NodeClass::Interior));
            let total: f64 = gh.normal_weights[0] + gh.combined.iter().map(|c| c.1).sum::<f64>();
            assert!((total - 1.0).abs() < 1e-12);
            assert!(gh.stencil.len() <= 9);
        }
        assert!(ext.degree_counts()[2] > 0);
    }

    #[test]
    fn constants_and_linears_are_exact() {
        for n in [64, 128] {
            let ext = setup(n);
            let all = [StencilDegree::Q1, StencilDegree::Q2];
            assert!(ghost_errors(&ext, |_, _| 1.0, &[StencilDegree::Q0, StencilDegree::Q1, StencilDegree::Q2]) < 1e-12);
            assert!(ghost_errors(&ext, |x, y| 0.3 * x - 1.2 * y + 2.0, &all) < 1e-11);
        }
    }

    #[test]
    fn quadratics_are_exact_on_nine_point_stencils() {
        for n in [64, 128, 100] {
            let ext = setup(n);
            assert!(ghost_errors(&ext, |x, y| x * x + x * y, &[StencilDegree::Q2]) < 1e-10);
            assert!(ghost_errors(&ext, |x, y| 100.0 - x * x - y * y, &[StencilDegree::Q2]) < 1e-10);
        }
    }
}
