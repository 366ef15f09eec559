//! Independent checks of computed eigenpairs.

mod dtn;
pub mod quadrature;
mod residual;

pub use dtn::{convergence_study, fd_dtn_rect, ConvergenceRow, DtnOracleResult};
pub use residual::{residual_check, ResidualReport, FD_STEP};

use steklov_core::{box_eigenfunction_eval, rect_eigenfunction_eval, BoxCandidate, RectCandidate};

/// Residual gate applied to every candidate.
pub const RESIDUAL_GATE: f64 = 1e-5;

/// Allowed distance between the oracle's and the closed-form `σ₁`.
pub const ORACLE_GATE: f64 = 0.01;

/// Default samples per unit length for rectangles.
pub const DEFAULT_DENSITY_2D: usize = 64;

/// Default samples per unit length for boxes.
pub const DEFAULT_DENSITY_3D: usize = 16;

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("function vanishes on every sample")]
    DegenerateFunction,
    #[error("singular Dirichlet system")]
    SingularSystem,
    #[error("{0}")]
    InvalidInput(String),
    #[error(transparent)]
    Solver(#[from] steklov_core::Error),
}

/// [`residual_check`] for a rectangle candidate on `[-1,1]×[-a,a]`.
pub fn check_rect_candidate(
    cand: &RectCandidate,
    sigma: f64,
    density: usize,
) -> Result<ResidualReport, VerifyError> {
    residual_check(
        |[x, y]| rect_eigenfunction_eval(cand, x, y),
        sigma,
        [1.0, cand.a],
        density,
    )
}

/// [`residual_check`] for a box candidate.
pub fn check_box_candidate(
    cand: &BoxCandidate,
    half: [f64; 3],
    sigma: f64,
    density: usize,
) -> Result<ResidualReport, VerifyError> {
    residual_check(|p| box_eigenfunction_eval(cand, p), sigma, half, density)
}
