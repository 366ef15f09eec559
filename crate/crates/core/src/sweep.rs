//! Parameter sweeps over rectangle aspect ratios and box shapes.

use alloc::vec::Vec;

use crate::cuboid::{
    box_spectrum, Axis, BoxDomain, BoxSpectrum, Family, Layout, Parity, SeparatedFamily,
};
use crate::rect::{rect_spectrum, RectSpectrum};
use crate::Result;

/// One row of a rectangle sweep: the half-height and its spectrum, or the
/// error it produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RectSweepRow {
    pub a: f64,
    pub outcome: Result<RectSpectrum>,
}

/// One row of a box sweep over `[-a,a]×[-b,b]×[-1,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSweepRow {
    pub a: f64,
    pub b: f64,
    pub outcome: Result<BoxSpectrum>,
}

/// `cosh(λ₁x)·cosh(λ₂y)·sin(μz)`, the family expected to attain `σ₁` when
/// `z` is the longest axis.
pub const LONG_AXIS_FAMILY: SeparatedFamily = SeparatedFamily {
    parity: match Parity::new(0b001) {
        Some(p) => p,
        None => unreachable!(),
    },
    layout: Layout::Trig(Axis::Z),
};

impl BoxSweepRow {
    /// Whether `σ₁` is attained by [`LONG_AXIS_FAMILY`]; `None` for failed
    /// rows.
    pub fn long_axis_family_attains(&self) -> Option<bool> {
        self.outcome
            .as_ref()
            .ok()
            .map(|s| s.eigenspace.contains(&Family::Separated(LONG_AXIS_FAMILY)))
    }
}

/// Solves each half-height independently; rows keep the input order.
pub fn sweep_rect(a_grid: &[f64], mult_tol: f64) -> Vec<RectSweepRow> {
    a_grid
        .iter()
        .map(|&a| RectSweepRow {
            a,
            outcome: rect_spectrum(a, mult_tol),
        })
        .collect()
}

/// Solves every `(a, b)` with `b ≥ a`, iterating `a` in the outer loop.
pub fn sweep_box(a_grid: &[f64], b_grid: &[f64], mult_tol: f64) -> Vec<BoxSweepRow> {
    let mut rows = Vec::new();
    for &a in a_grid {
        for &b in b_grid.iter().filter(|&&b| b >= a) {
            rows.push(box_sweep_row(a, b, mult_tol));
        }
    }
    rows
}

/// A single cell of [`sweep_box`].
pub fn box_sweep_row(a: f64, b: f64, mult_tol: f64) -> BoxSweepRow {
    let outcome = if a > 1.0 || b > 1.0 {
        Err(crate::Error::InvalidInput(
            "sweep half-lengths must lie in (0, 1]",
        ))
    } else {
        BoxDomain::new(a, b, 1.0).and_then(|d| box_spectrum(&d, mult_tol))
    };
    BoxSweepRow { a, b, outcome }
}
