//! Steklov eigenvalues on rectangles and rectangular boxes.
//!
//! The Steklov problem asks for harmonic `u` with `∂u/∂n = σ u` on the
//! boundary. On axis-aligned rectangles and boxes every eigenfunction found by
//! separation of variables is a product of one-dimensional factors, and the
//! eigenvalue is fixed by a transcendental *determining equation*. This crate
//! encodes those families, solves the determining equations with guaranteed
//! bracketing, and picks out the first nontrivial eigenvalue `σ₁`, its
//! eigenspace and the scale-invariant normalisation of `σ₁`.
//!
//! The crate is `no_std` (it needs `alloc`); IO, verification against a
//! finite-difference oracle and the command line live in the `steklov` crate.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
mod math;

pub mod cuboid;
pub mod rect;
pub mod rootfind;
pub mod sweep;

pub use cuboid::{
    box_eigenfunction_eval, box_invariant, box_spectrum, box_spectrum_with_tol, enumerate_families,
    solve_coupled, solve_linear_family, Axis, BoxCandidate, BoxDomain, BoxSpectrum, CoupledProblem,
    Diagnostic, FactorKind, Family, Layout, LinearFamily, LinearOutcome, Parity, SeparatedFamily,
};
pub use error::Error;
pub use rect::{
    determining_residual, first_branch_bracket, first_candidate, first_candidate_with_tol,
    rect_eigenfunction_eval, rect_invariant, rect_spectrum, rect_spectrum_with_tol, RectCandidate,
    RectClass, RectDomain, RectSpectrum,
};
pub use rootfind::{invert_monotone_map, solve_monotone, Bracket, MonotoneMap, RootResult};
pub use sweep::{
    box_sweep_row, sweep_box, sweep_rect, BoxSweepRow, RectSweepRow, LONG_AXIS_FAMILY,
};

/// Relative tolerance under which two eigenvalues are reported as one.
pub const DEFAULT_MULT_TOL: f64 = 1e-9;

pub type Result<T, E = Error> = core::result::Result<T, E>;
