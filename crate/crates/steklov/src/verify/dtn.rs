//! Finite-difference Dirichlet-to-Neumann oracle for the rectangle
//! `[-1,1]×[-a,a]`, independent of the separated-variable catalogue.
//!
//! The five-point Laplacian is solved once per boundary node with unit data
//! at that node, using a sine transform in `x` and a tridiagonal solve per
//! mode in `y`. The discrete flux of each solution at every boundary node
//! fills one column of the DtN matrix, whose eigenvalues approximate the
//! Steklov spectrum.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::Serialize;
use steklov_core::{rect_spectrum, DEFAULT_MULT_TOL};

use super::VerifyError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DtnOracleResult {
    /// Cells per unit length.
    pub grid_n: usize,
    /// Half-height actually meshed, `round(2a·n)/(2n)`.
    pub a: f64,
    pub h: f64,
    /// Smallest eigenvalue after the one nearest zero.
    pub sigma1_fd: f64,
    /// Leading eigenvalues, ascending, including the trivial one.
    pub eigenvalues: Vec<f64>,
}

/// A boundary node `(i, j)` of the mesh.
type Node = (usize, usize);

struct Mesh {
    nx: usize,
    ny: usize,
    h: f64,
    /// Orthonormal sine basis `S[i-1][k-1] = √(2/nx)·sin(πik/nx)`.
    sine: Vec<Vec<f64>>,
    /// Eigenvalues `2 − 2cos(πk/nx)` of the 1-D second difference.
    alpha: Vec<f64>,
    /// Boundary nodes counter-clockwise from `(0, 0)`.
    nodes: Vec<Node>,
}

impl Mesh {
    fn new(nx: usize, ny: usize) -> Self {
        let m = nx - 1;
        let scale = (2.0 / nx as f64).sqrt();
        let sine = (1..=m)
            .map(|i| {
                (1..=m)
                    .map(|k| scale * (PI * (i * k) as f64 / nx as f64).sin())
                    .collect()
            })
            .collect();
        let alpha = (1..=m)
            .map(|k| 2.0 - 2.0 * (PI * k as f64 / nx as f64).cos())
            .collect();
        let mut nodes = Vec::with_capacity(2 * (nx + ny));
        nodes.extend((0..nx).map(|i| (i, 0)));
        nodes.extend((0..ny).map(|j| (nx, j)));
        nodes.extend((1..=nx).rev().map(|i| (i, ny)));
        nodes.extend((1..=ny).rev().map(|j| (0, j)));
        Mesh {
            nx,
            ny,
            h: 2.0 / nx as f64,
            sine,
            alpha,
            nodes,
        }
    }

    fn is_interior(&self, (i, j): Node) -> bool {
        i > 0 && j > 0 && i < self.nx && j < self.ny
    }

    /// Interior neighbour of a non-corner boundary node.
    fn inward(&self, (i, j): Node) -> Option<Node> {
        let nb = if j == 0 {
            (i, 1)
        } else if j == self.ny {
            (i, self.ny - 1)
        } else if i == 0 {
            (1, j)
        } else {
            (self.nx - 1, j)
        };
        self.is_interior(nb).then_some(nb)
    }

    /// Discrete harmonic extension of unit data at `node`, evaluated at the
    /// given interior nodes. Corners feed no interior stencil.
    fn extension_at(&self, node: Node, targets: &[Node]) -> Result<Vec<f64>, VerifyError> {
        let Some((si, sj)) = self.inward(node) else {
            return Ok(vec![0.0; targets.len()]);
        };
        let m = self.nx - 1;
        let rows = self.ny - 1;
        // Transformed solution, one column of length `rows` per mode.
        let mut modes = vec![vec![0.0; rows]; m];
        for (k, mode) in modes.iter_mut().enumerate() {
            let mut rhs = vec![0.0; rows];
            rhs[sj - 1] = self.sine[si - 1][k];
            *mode = thomas(2.0 + self.alpha[k], &rhs)?;
        }
        Ok(targets
            .iter()
            .map(|&(i, j)| (0..m).map(|k| self.sine[i - 1][k] * modes[k][j - 1]).sum())
            .collect())
    }
}

/// Solves `d·u_j − u_{j−1} − u_{j+1} = b_j` with zero end values.
fn thomas(diag: f64, rhs: &[f64]) -> Result<Vec<f64>, VerifyError> {
    let n = rhs.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag;
    if pivot.abs() < 1e-14 {
        return Err(VerifyError::SingularSystem);
    }
    c[0] = -1.0 / pivot;
    d[0] = rhs[0] / pivot;
    for j in 1..n {
        pivot = diag + c[j - 1];
        if pivot.abs() < 1e-14 {
            return Err(VerifyError::SingularSystem);
        }
        c[j] = -1.0 / pivot;
        d[j] = (rhs[j] + d[j - 1]) / pivot;
    }
    let mut u = vec![0.0; n];
    u[n - 1] = d[n - 1];
    for j in (0..n - 1).rev() {
        u[j] = d[j] - c[j] * u[j + 1];
    }
    Ok(u)
}

/// Discrete DtN matrix before rounding asymmetry is averaged out.
fn assemble(mesh: &Mesh) -> Result<DMatrix<f64>, VerifyError> {
    let n = mesh.nodes.len();
    let targets: Vec<Node> = mesh.nodes.iter().filter_map(|&b| mesh.inward(b)).collect();
    let columns: Vec<Vec<f64>> = mesh
        .nodes
        .par_iter()
        .enumerate()
        .map(|(c, &node)| {
            let u = mesh.extension_at(node, &targets)?;
            let mut inner = u.into_iter();
            Ok((0..n)
                .map(|r| {
                    let here = f64::from(r == c);
                    let prev = f64::from((r + n - 1) % n == c);
                    let next = f64::from((r + 1) % n == c);
                    let mut flux = 0.5 * (2.0 * here - prev - next);
                    if mesh.inward(mesh.nodes[r]).is_some() {
                        flux += here - inner.next().unwrap_or(0.0);
                    }
                    flux / mesh.h
                })
                .collect())
        })
        .collect::<Result<_, VerifyError>>()?;
    Ok(DMatrix::from_fn(n, n, |r, c| columns[c][r]))
}

/// Assembles the discrete DtN matrix of `[-1,1]×[-a,a]` with `grid_n` cells
/// per unit length and returns its `k_eigs` smallest eigenvalues.
///
/// The flux at a boundary node is the five-point stencil with half weights
/// on boundary edges, divided by the node's boundary length `h`, which makes
/// the matrix symmetric. `a` is snapped to the mesh; at least four cells are
/// required across the short side.
pub fn fd_dtn_rect(a: f64, grid_n: usize, k_eigs: usize) -> Result<DtnOracleResult, VerifyError> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(VerifyError::InvalidInput(format!(
            "half-height {a} outside (0, 1]"
        )));
    }
    if grid_n < 16 {
        return Err(VerifyError::InvalidInput(
            "oracle grid must be at least 16".into(),
        ));
    }
    let nx = 2 * grid_n;
    let ny = (2.0 * a * grid_n as f64).round() as usize;
    if ny < 4 {
        return Err(VerifyError::InvalidInput(format!(
            "half-height {a} needs a finer grid than {grid_n}"
        )));
    }
    let mesh = Mesh::new(nx, ny);
    let raw = assemble(&mesh)?;
    let dtn = (&raw + raw.transpose()) * 0.5;
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(dtn)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    eigenvalues.sort_by(f64::total_cmp);
    eigenvalues.truncate(k_eigs.max(2));
    Ok(DtnOracleResult {
        grid_n,
        a: ny as f64 / nx as f64,
        h: mesh.h,
        sigma1_fd: eigenvalues[1],
        eigenvalues,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub grid_n: usize,
    pub sigma1_fd: f64,
    /// `|σ₁(fd) − σ₁|` against the separated-variable value.
    pub error: f64,
    /// `log(e_prev/e)/log(n/n_prev)` against the previous row.
    pub order: Option<f64>,
}

/// Runs the oracle on ascending grids and compares with the closed-form
/// `σ₁` of the meshed half-height.
pub fn convergence_study(a: f64, grids: &[usize]) -> Result<Vec<ConvergenceRow>, VerifyError> {
    if grids.windows(2).any(|w| w[1] <= w[0]) {
        return Err(VerifyError::InvalidInput(
            "grids must be strictly ascending".into(),
        ));
    }
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(grids.len());
    for &grid_n in grids {
        let fd = fd_dtn_rect(a, grid_n, 2)?;
        let exact = rect_spectrum(fd.a, DEFAULT_MULT_TOL)?.sigma1;
        let error = (fd.sigma1_fd - exact).abs();
        let order = rows
            .last()
            .map(|prev| (prev.error / error).ln() / (grid_n as f64 / prev.grid_n as f64).ln());
        rows.push(ConvergenceRow {
            grid_n,
            sigma1_fd: fd.sigma1_fd,
            error,
            order,
        });
    }
    Ok(rows)
}
