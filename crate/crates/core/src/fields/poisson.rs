use std::io::Write;

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Lu;
use faer::sparse::{SparseColMat, Triplet};
use faer::MatMut;

use super::ghost::GhostExtrapolation;
use crate::error::{Error, Result};
use crate::grid::{Field2D, NodeClass};

/// Residual bound relative to `||rho||_2` over the interior nodes.
const RESIDUAL_TOL: f64 = 1e-10;

/// Five-point discretisation of `-lap(phi) = rho` over the interior nodes of a disk with
/// `phi = 0` on the circle. Ghost values are eliminated through the normal extrapolation,
/// so the unknowns are the interior nodes only. The matrix is factored once.
pub struct PoissonSolver {
    ghosts: GhostExtrapolation,
    /// Grid index of each unknown.
    nodes: Vec<usize>,
    /// Merged `(row, col, value)` entries, sorted by row then column.
    entries: Vec<(usize, usize, f64)>,
    lu: Lu<usize, f64>,
}

impl std::fmt::Debug for PoissonSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PoissonSolver")
            .field("unknowns", &self.nodes.len())
            .field("nonzeros", &self.entries.len())
            .finish()
    }
}

impl PoissonSolver {
    pub fn new(ghosts: GhostExtrapolation) -> Result<Self> {
        let mask = ghosts.mask();
        let g = *mask.grid();
        let mut unknown = vec![usize::MAX; g.len()];
        let mut nodes = Vec::with_capacity(mask.counts().interior);
        for (k, c) in mask.classes().iter().enumerate() {
            if *c == NodeClass::Interior {
                unknown[k] = nodes.len();
                nodes.push(k);
            }
        }
        if nodes.is_empty() {
            return Err(Error::config("the disk contains no grid nodes"));
        }

        let (cx, cy) = (1.0 / (g.dx() * g.dx()), 1.0 / (g.dy() * g.dy()));
        let mut raw: Vec<(usize, usize, f64)> = Vec::with_capacity(nodes.len() * 7);
        for (row, &k) in nodes.iter().enumerate() {
            let (i, j) = ((k % g.nx()) as isize, (k / g.nx()) as isize);
            raw.push((row, row, 2.0 * cx + 2.0 * cy));
            for (di, dj, c) in [(-1, 0, cx), (1, 0, cx), (0, -1, cy), (0, 1, cy)] {
                let (ni, nj) = (i + di, j + dj);
                match mask.class_signed(ni, nj) {
                    NodeClass::Interior => {
                        raw.push((row, unknown[g.index(ni as usize, nj as usize)], -c));
                    }
                    NodeClass::Ghost => {
                        let gh = ghosts
                            .ghost_at(g.index(ni as usize, nj as usize))
                            .expect("every ghost node has extrapolation data");
                        for &(l, w) in &gh.combined {
                            raw.push((row, unknown[l], -c * w));
                        }
                    }
                    NodeClass::Exterior => {
                        return Err(Error::config(format!(
                            "interior node ({i}, {j}) touches the edge of the grid; enlarge the domain"
                        )));
                    }
                }
            }
        }
        raw.sort_by_key(|e| (e.0, e.1));
        let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(raw.len());
        for e in raw {
            match entries.last_mut() {
                Some(last) if last.0 == e.0 && last.1 == e.1 => last.2 += e.2,
                _ => entries.push(e),
            }
        }

        let n = nodes.len();
        let triplets: Vec<Triplet<usize, usize, f64>> =
            entries.iter().map(|&(r, c, v)| Triplet::new(r, c, v)).collect();
        let mat = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
            .map_err(|e| Error::Solver(format!("assembling the Poisson matrix failed: {e:?}")))?;
        let lu = mat
            .sp_lu()
            .map_err(|e| Error::Solver(format!("LU factorisation failed: {e:?}")))?;
        Ok(Self {
            ghosts,
            nodes,
            entries,
            lu,
        })
    }

    pub fn ghosts(&self) -> &GhostExtrapolation {
        &self.ghosts
    }

    pub fn unknowns(&self) -> usize {
        self.nodes.len()
    }

    /// Assembled matrix entries as `(row, col, value)`.
    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    /// Writes the matrix in coordinate text form, one `row col value` line per entry.
    pub fn write_triplets(&self, mut out: impl Write) -> Result<()> {
        writeln!(out, "# {} {} {}", self.nodes.len(), self.nodes.len(), self.entries.len())?;
        for &(r, c, v) in &self.entries {
            writeln!(out, "{r} {c} {v:.17e}")?;
        }
        Ok(())
    }

    /// Applies the assembled operator to interior values `x`.
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; x.len()];
        for &(r, c, v) in &self.entries {
            y[r] += v * x[c];
        }
        y
    }

    /// Solves for `phi` on the full grid: interior values from the linear system, ghost
    /// values extrapolated, exterior values zero.
    pub fn solve(&self, rho: &Field2D) -> Result<Field2D> {
        let g = *self.ghosts.mask().grid();
        if rho.grid() != &g {
            return Err(Error::contract("charge density lives on a different grid"));
        }
        let rhs: Vec<f64> = self.nodes.iter().map(|&k| rho.values()[k]).collect();
        if rhs.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("charge density"));
        }
        let mut x = rhs.clone();
        self.lu
            .solve_in_place(MatMut::from_column_major_slice_mut(&mut x, self.nodes.len(), 1));

        let rho_norm = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        let res_norm = self
            .apply(&x)
            .iter()
            .zip(&rhs)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        if !(res_norm <= RESIDUAL_TOL * rho_norm) && !(rho_norm == 0.0 && res_norm == 0.0) {
            return Err(Error::Solver(format!(
                "Poisson residual {res_norm:.3e} exceeds {RESIDUAL_TOL:.0e} * ||rho|| = {:.3e}",
                RESIDUAL_TOL * rho_norm
            )));
        }

        let mut phi = vec![0.0; g.len()];
        for (&k, v) in self.nodes.iter().zip(x) {
            phi[k] = v;
        }
        self.ghosts.apply(&mut phi, |_, _| 0.0);
        Field2D::from_values(g, phi)
    }
}

/// One-shot disk Poisson solve; build a [`PoissonSolver`] to reuse the factorisation.
pub fn solve_poisson_disk(rho: &Field2D, ghosts: &GhostExtrapolation) -> Result<Field2D> {
    PoissonSolver::new(ghosts.clone())?.solve(rho)
}
