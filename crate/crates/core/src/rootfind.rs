//! Bracketed root finding for continuous functions with a single sign change.
//!
//! Every determining equation in this crate reduces to a scalar equation that
//! is strictly monotone on a known interval, so plain bisection is used: it is
//! deterministic, cannot leave the bracket and needs no derivative.

use crate::error::Error;
use crate::math::{nu_coth, nu_tanh};
use crate::Result;

/// Default absolute tolerance on the final bracket width.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Iteration cap for [`solve_monotone`].
pub const MAX_ITERATIONS: usize = 200;

/// Relative inset used to probe open endpoints where the function is singular.
pub const ENDPOINT_INSET: f64 = 1e-9;

/// `|σ·s − 1|` below which `ν·coth(ν s) = σ` is read as the `ν → 0` limit.
pub const DEGENERATE_COTH_TOL: f64 = 1e-9;

/// An interval on which a function changes sign.
///
/// `lo` and `hi` are the points the function was actually evaluated at; for
/// [`Bracket::open`] they sit slightly inside the requested interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo_sign: i8,
    pub f_hi_sign: i8,
}

fn sign_of(v: f64) -> Result<i8> {
    if v.is_nan() {
        Err(Error::InvalidInput("function returned NaN"))
    } else if v > 0.0 {
        Ok(1)
    } else if v < 0.0 {
        Ok(-1)
    } else {
        Ok(0)
    }
}

impl Bracket {
    /// Bracket on the closed interval `[lo, hi]`.
    pub fn closed<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInput("bracket requires finite lo < hi"));
        }
        let f_lo_sign = sign_of(f(lo))?;
        let f_hi_sign = sign_of(f(hi))?;
        if f_lo_sign == f_hi_sign {
            return Err(Error::NoSignChange { lo, hi });
        }
        Ok(Bracket {
            lo,
            hi,
            f_lo_sign,
            f_hi_sign,
        })
    }

    /// Bracket on the open interval `(lo, hi)`, probing at `lo + ε` and
    /// `hi − ε` with `ε = 1e-9·(hi − lo)`.
    pub fn open<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInput("bracket requires finite lo < hi"));
        }
        let eps = ENDPOINT_INSET * (hi - lo);
        Self::closed(f, lo + eps, hi - eps)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub root: f64,
    /// `f(root)`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Finds the root of `f` inside `bracket` by bisection until the bracket is
/// narrower than `tol`.
///
/// `f` must be continuous with a single sign change on the bracket. The
/// endpoint signs stored in `bracket` are trusted, so it must have been built
/// from the same `f`.
pub fn solve_monotone<F: Fn(f64) -> f64>(f: F, bracket: &Bracket, tol: f64) -> Result<RootResult> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidInput("tolerance must be positive"));
    }
    bisect(f, bracket, tol, MAX_ITERATIONS)
}

/// Bisection with `tol >= 0`; `tol = 0` runs until the midpoint is no longer
/// representable strictly inside the bracket.
pub(crate) fn bisect<F: Fn(f64) -> f64>(
    f: F,
    bracket: &Bracket,
    tol: f64,
    max_iter: usize,
) -> Result<RootResult> {
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let lo_sign = bracket.f_lo_sign;
    if lo_sign == 0 {
        return Ok(RootResult {
            root: lo,
            residual: 0.0,
            iterations: 0,
            converged: true,
        });
    }
    if bracket.f_hi_sign == 0 {
        return Ok(RootResult {
            root: hi,
            residual: 0.0,
            iterations: 0,
            converged: true,
        });
    }
    let mut iterations = 0;
    loop {
        let mid = lo + 0.5 * (hi - lo);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            let residual = f(mid);
            return Ok(RootResult {
                root: mid,
                residual,
                iterations,
                converged: true,
            });
        }
        if iterations == max_iter {
            return Err(Error::MaxIterations {
                iterations,
                width: hi - lo,
            });
        }
        iterations += 1;
        let fm = f(mid);
        match sign_of(fm)? {
            0 => {
                return Ok(RootResult {
                    root: mid,
                    residual: fm,
                    iterations,
                    converged: true,
                })
            }
            s if s == lo_sign => lo = mid,
            _ => hi = mid,
        }
    }
}

/// The increasing maps `ν ↦ ν·tanh(ν s)` and `ν ↦ ν·coth(ν s)` on `ν > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MonotoneMap {
    /// `ν·tanh(ν s)`, range `(0, ∞)`.
    NuTanh,
    /// `ν·coth(ν s)`, range `(1/s, ∞)`.
    NuCoth,
}

impl MonotoneMap {
    pub fn eval(self, nu: f64, scale: f64) -> f64 {
        match self {
            MonotoneMap::NuTanh => nu_tanh(nu, scale),
            MonotoneMap::NuCoth => nu_coth(nu, scale),
        }
    }

    /// Infimum of the range over `ν > 0`.
    pub fn range_floor(self, scale: f64) -> f64 {
        match self {
            MonotoneMap::NuTanh => 0.0,
            MonotoneMap::NuCoth => 1.0 / scale,
        }
    }
}

/// Solves `map(ν, scale) = target_sigma` for the unique `ν ≥ 0`.
///
/// For [`MonotoneMap::NuCoth`] a target within `1e-9` (relative to `1/s`) of
/// the range floor returns `ν = 0`, the limit in which the hyperbolic factor
/// degenerates to a linear one. Targets below the floor have no solution.
pub fn invert_monotone_map(map: MonotoneMap, scale: f64, target_sigma: f64) -> Result<f64> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidInput("scale must be positive"));
    }
    if !(target_sigma > 0.0) || !target_sigma.is_finite() {
        return Err(Error::InvalidInput("target sigma must be positive"));
    }
    if map == MonotoneMap::NuCoth {
        let gap = target_sigma * scale - 1.0;
        if gap.abs() <= DEGENERATE_COTH_TOL {
            return Ok(0.0);
        }
        if gap < 0.0 {
            return Err(Error::NoSolution);
        }
    }
    let f = |nu: f64| map.eval(nu, scale) - target_sigma;
    let mut hi = 1.0;
    // Both maps are unbounded, so doubling terminates well before overflow.
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    let bracket = Bracket::closed(f, 0.0, hi)?;
    Ok(bisect(f, &bracket, 0.0, 4 * MAX_ITERATIONS)?.root)
}
