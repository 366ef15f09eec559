//! Separated Steklov eigenfunctions of the rectangle `[-1,1]×[-a,a]`.
//!
//! Each eigenfunction is a product of a trigonometric factor along one axis
//! and a hyperbolic factor along the other, sharing a frequency `ν`. Parity
//! in `x` and `y` splits them into four classes with two members each; the
//! square additionally carries `xy` with `σ = 1`.

use alloc::vec::Vec;

use crate::error::Error;
use crate::math::{cos, cosh, sin, sinh, tan, tanh, FRAC_PI_2, PI};
use crate::rootfind::{bisect, Bracket, MonotoneMap, DEFAULT_TOL, MAX_ITERATIONS};
use crate::Result;

/// `|a − 1|` below which the rectangle is treated as the square.
pub const SQUARE_TOL: f64 = 1e-12;

/// The rectangle `[-1,1]×[-a,a]` with `0 < a ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectDomain {
    a: f64,
}

impl RectDomain {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidInput("half-height a must be positive"));
        }
        if a > 1.0 + SQUARE_TOL {
            return Err(Error::InvalidInput("half-height a must not exceed 1"));
        }
        Ok(RectDomain { a: a.min(1.0) })
    }

    /// Normalises a `width × height` rectangle. Returns the domain and the
    /// scale `s` (half the longer side); eigenvalues of the original
    /// rectangle are those of the normalised one divided by `s`.
    pub fn from_sides(width: f64, height: f64) -> Result<(Self, f64)> {
        if !(width > 0.0 && height > 0.0) || !width.is_finite() || !height.is_finite() {
            return Err(Error::InvalidInput("side lengths must be positive"));
        }
        let (long, short) = if width >= height {
            (width, height)
        } else {
            (height, width)
        };
        Ok((RectDomain::new(short / long)?, 0.5 * long))
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn is_square(&self) -> bool {
        (self.a - 1.0).abs() <= SQUARE_TOL
    }

    /// Perimeter `4(1 + a)`.
    pub fn perimeter(&self) -> f64 {
        4.0 * (1.0 + self.a)
    }
}

/// Form of a determining equation with the tangent isolated on the left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrigKind {
    /// `tan(θ) + tanh(·) = 0`
    TanPlusTanh,
    /// `tan(θ) = tanh(·)`
    TanEqTanh,
    /// `tan(θ) = coth(·)`
    TanEqCoth,
    /// `tan(θ) + coth(·) = 0`
    TanPlusCoth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis2 {
    X,
    Y,
}

/// The eight rectangle eigenfunction classes, plus `xy` on the square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RectClass {
    /// `cosh(νx)·cos(νy)`
    IOne,
    /// `cos(νx)·cosh(νy)`
    ITwo,
    /// `sinh(νx)·sin(νy)`
    IIOne,
    /// `sin(νx)·sinh(νy)`
    IITwo,
    /// `cosh(νx)·sin(νy)`
    IIIOne,
    /// `cos(νx)·sinh(νy)`
    IIITwo,
    /// `sinh(νx)·cos(νy)`
    IVOne,
    /// `sin(νx)·cosh(νy)`
    IVTwo,
    /// `xy`, square only.
    Xy,
}

impl RectClass {
    /// The eight separated classes, in table order.
    pub const SEPARATED: [RectClass; 8] = [
        RectClass::IOne,
        RectClass::ITwo,
        RectClass::IIOne,
        RectClass::IITwo,
        RectClass::IIIOne,
        RectClass::IIITwo,
        RectClass::IVOne,
        RectClass::IVTwo,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            RectClass::IOne => "I_i",
            RectClass::ITwo => "I_ii",
            RectClass::IIOne => "II_i",
            RectClass::IITwo => "II_ii",
            RectClass::IIIOne => "III_i",
            RectClass::IIITwo => "III_ii",
            RectClass::IVOne => "IV_i",
            RectClass::IVTwo => "IV_ii",
            RectClass::Xy => "XY",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        RectClass::SEPARATED
            .into_iter()
            .chain(core::iter::once(RectClass::Xy))
            .find(|c| c.tag() == tag)
    }

    /// Human-readable eigenfunction.
    pub fn formula(self) -> &'static str {
        match self {
            RectClass::IOne => "cosh(nu x) cos(nu y)",
            RectClass::ITwo => "cos(nu x) cosh(nu y)",
            RectClass::IIOne => "sinh(nu x) sin(nu y)",
            RectClass::IITwo => "sin(nu x) sinh(nu y)",
            RectClass::IIIOne => "cosh(nu x) sin(nu y)",
            RectClass::IIITwo => "cos(nu x) sinh(nu y)",
            RectClass::IVOne => "sinh(nu x) cos(nu y)",
            RectClass::IVTwo => "sin(nu x) cosh(nu y)",
            RectClass::Xy => "x y",
        }
    }

    /// Axis carrying the trigonometric factor (`None` for `xy`).
    pub fn trig_axis(self) -> Option<Axis2> {
        match self {
            RectClass::IOne | RectClass::IIOne | RectClass::IIIOne | RectClass::IVOne => {
                Some(Axis2::Y)
            }
            RectClass::Xy => None,
            _ => Some(Axis2::X),
        }
    }

    pub fn trig_kind(self) -> Option<TrigKind> {
        match self {
            RectClass::IOne | RectClass::ITwo => Some(TrigKind::TanPlusTanh),
            RectClass::IIOne | RectClass::IITwo => Some(TrigKind::TanEqTanh),
            RectClass::IIIOne | RectClass::IVTwo => Some(TrigKind::TanEqCoth),
            RectClass::IIITwo | RectClass::IVOne => Some(TrigKind::TanPlusCoth),
            RectClass::Xy => None,
        }
    }

    /// The eigenvalue map `σ = map(ν, scale)` with its scale.
    pub fn sigma_kind(self, a: f64) -> Option<(MonotoneMap, f64)> {
        let kind = self.trig_kind()?;
        let map = match kind {
            TrigKind::TanPlusTanh | TrigKind::TanEqCoth => MonotoneMap::NuTanh,
            TrigKind::TanEqTanh | TrigKind::TanPlusCoth => MonotoneMap::NuCoth,
        };
        Some((map, self.scales(a)?.1))
    }

    /// `(tan argument scale, hyperbolic argument scale)`: the half-lengths of
    /// the trigonometric and hyperbolic axes.
    fn scales(self, a: f64) -> Option<(f64, f64)> {
        match self.trig_axis()? {
            Axis2::X => Some((1.0, a)),
            Axis2::Y => Some((a, 1.0)),
        }
    }
}

impl core::fmt::Display for RectClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.tag())
    }
}

/// Signed residual of the class's determining equation at `ν`, written with
/// the tangent isolated: e.g. `tan(ν) − coth(νa)` for `IV_ii`.
pub fn determining_residual(class: RectClass, a: f64, nu: f64) -> Result<f64> {
    let kind = class
        .trig_kind()
        .ok_or(Error::InvalidInput("xy has no determining equation"))?;
    let (p, q) = class.scales(a).unwrap();
    let theta = nu * p;
    if cos(theta).abs() < 1e-12 {
        return Err(Error::Singular { nu });
    }
    Ok(raw_residual(kind, theta, nu * q))
}

fn raw_residual(kind: TrigKind, theta: f64, hyp_arg: f64) -> f64 {
    let t = tan(theta);
    match kind {
        TrigKind::TanPlusTanh => t + tanh(hyp_arg),
        TrigKind::TanEqTanh => t - tanh(hyp_arg),
        TrigKind::TanEqCoth => t - 1.0 / tanh(hyp_arg),
        TrigKind::TanPlusCoth => t + 1.0 / tanh(hyp_arg),
    }
}

/// Open `ν`-interval holding the smallest positive root of the class's
/// determining equation.
pub fn first_branch_interval(class: RectClass, a: f64) -> Result<(f64, f64)> {
    let kind = class
        .trig_kind()
        .ok_or(Error::InvalidInput("xy has no determining equation"))?;
    let (p, q) = class.scales(a).unwrap();
    let (lo, hi) = match kind {
        // tan must be negative.
        TrigKind::TanPlusTanh | TrigKind::TanPlusCoth => (FRAC_PI_2, PI),
        TrigKind::TanEqCoth => (0.0, FRAC_PI_2),
        // tan(νp) − tanh(νq) ≈ ν(p − q) near 0 and is convex on the first
        // quarter period, so it has a root there iff p < q. Otherwise
        // tan θ > θ ≥ tanh on (0, π/2) and the root sits in (π, 3π/2).
        TrigKind::TanEqTanh if p < q - SQUARE_TOL => (0.0, FRAC_PI_2),
        TrigKind::TanEqTanh => (PI, PI + FRAC_PI_2),
    };
    Ok((lo / p, hi / p))
}

/// Sign-checked bracket for the first branch of the class's determining
/// equation.
pub fn first_branch_bracket(class: RectClass, a: f64) -> Result<Bracket> {
    let RectClassEquation { kind, p, q } = RectClassEquation::of(class, a)?;
    let (lo, hi) = first_branch_interval(class, a)?;
    Bracket::open(|nu| raw_residual(kind, nu * p, nu * q), lo, hi)
}

struct RectClassEquation {
    kind: TrigKind,
    p: f64,
    q: f64,
}

impl RectClassEquation {
    fn of(class: RectClass, a: f64) -> Result<Self> {
        let kind = class
            .trig_kind()
            .ok_or(Error::InvalidInput("xy has no determining equation"))?;
        let (p, q) = class.scales(a).unwrap();
        Ok(RectClassEquation { kind, p, q })
    }
}

/// A solved first candidate of one class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectCandidate {
    pub class: RectClass,
    /// Half-height of the rectangle the candidate was solved on.
    pub a: f64,
    /// Frequency; `NaN` for `xy`.
    pub nu: f64,
    pub sigma: f64,
    /// Determining-equation residual at `nu`.
    pub residual: f64,
}

/// Smallest positive root of the class's determining equation and the
/// corresponding eigenvalue.
pub fn first_candidate(class: RectClass, a: f64) -> Result<RectCandidate> {
    first_candidate_with_tol(class, a, DEFAULT_TOL)
}

/// [`first_candidate`] with an explicit bracket-width tolerance on `ν`.
pub fn first_candidate_with_tol(class: RectClass, a: f64, tol: f64) -> Result<RectCandidate> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::InvalidInput("tolerance must be positive"));
    }
    let domain = RectDomain::new(a)?;
    let a = domain.a();
    if class == RectClass::Xy {
        if !domain.is_square() {
            return Err(Error::InvalidInput(
                "xy is an eigenfunction of the square only",
            ));
        }
        return Ok(RectCandidate {
            class,
            a,
            nu: f64::NAN,
            sigma: 1.0,
            residual: 0.0,
        });
    }
    let RectClassEquation { kind, p, q } = RectClassEquation::of(class, a)?;
    let f = |nu: f64| raw_residual(kind, nu * p, nu * q);
    let bracket = first_branch_bracket(class, a)?;
    let root = bisect(f, &bracket, tol, MAX_ITERATIONS)?;
    let (map, scale) = class.sigma_kind(a).unwrap();
    Ok(RectCandidate {
        class,
        a,
        nu: root.root,
        sigma: map.eval(root.root, scale),
        residual: root.residual,
    })
}

/// Every admissible first candidate, the minimum `σ₁`, and its eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct RectSpectrum {
    pub a: f64,
    pub candidates: Vec<RectCandidate>,
    pub sigma1: f64,
    /// Classes whose candidate lies within `mult_tol·max(1, σ₁)` of `σ₁`.
    pub eigenspace: Vec<RectClass>,
    /// `σ₁ · perimeter = 4σ₁(1 + a)`.
    pub invariant: f64,
}

impl RectSpectrum {
    pub fn candidate(&self, class: RectClass) -> Option<&RectCandidate> {
        self.candidates.iter().find(|c| c.class == class)
    }

    pub fn multiplicity(&self) -> usize {
        self.eigenspace.len()
    }
}

pub fn rect_spectrum(a: f64, mult_tol: f64) -> Result<RectSpectrum> {
    rect_spectrum_with_tol(a, mult_tol, DEFAULT_TOL)
}

/// [`rect_spectrum`] with an explicit root tolerance for every class.
pub fn rect_spectrum_with_tol(a: f64, mult_tol: f64, tol: f64) -> Result<RectSpectrum> {
    if !(mult_tol >= 0.0) {
        return Err(Error::InvalidInput(
            "multiplicity tolerance must be non-negative",
        ));
    }
    let domain = RectDomain::new(a)?;
    let mut candidates = RectClass::SEPARATED
        .iter()
        .map(|&class| first_candidate_with_tol(class, domain.a(), tol))
        .collect::<Result<Vec<_>>>()?;
    if domain.is_square() {
        candidates.push(first_candidate(RectClass::Xy, domain.a())?);
    }
    let sigma1 = candidates
        .iter()
        .map(|c| c.sigma)
        .fold(f64::INFINITY, f64::min);
    let window = mult_tol * sigma1.max(1.0);
    let eigenspace = candidates
        .iter()
        .filter(|c| (c.sigma - sigma1).abs() <= window)
        .map(|c| c.class)
        .collect();
    Ok(RectSpectrum {
        a: domain.a(),
        candidates,
        sigma1,
        eigenspace,
        invariant: sigma1 * domain.perimeter(),
    })
}

/// `4σ₁(a)(1 + a)`, the first eigenvalue times the perimeter.
pub fn rect_invariant(a: f64) -> Result<f64> {
    Ok(rect_spectrum(a, crate::DEFAULT_MULT_TOL)?.invariant)
}

/// Evaluates the candidate's eigenfunction at `(x, y)`.
pub fn rect_eigenfunction_eval(candidate: &RectCandidate, x: f64, y: f64) -> f64 {
    let nu = candidate.nu;
    match candidate.class {
        RectClass::IOne => cosh(nu * x) * cos(nu * y),
        RectClass::ITwo => cos(nu * x) * cosh(nu * y),
        RectClass::IIOne => sinh(nu * x) * sin(nu * y),
        RectClass::IITwo => sin(nu * x) * sinh(nu * y),
        RectClass::IIIOne => cosh(nu * x) * sin(nu * y),
        RectClass::IIITwo => cos(nu * x) * sinh(nu * y),
        RectClass::IVOne => sinh(nu * x) * cos(nu * y),
        RectClass::IVTwo => sin(nu * x) * cosh(nu * y),
        RectClass::Xy => x * y,
    }
}
