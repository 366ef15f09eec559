//! Separated Steklov eigenfunctions of the box `[-a,a]×[-b,b]×[-c,c]`.
//!
//! Each eigenfunction is even or odd in every coordinate, giving eight
//! parity classes. Within a class the separated eigenfunctions come in three
//! shapes:
//!
//! * two-parameter families, where one axis carries a factor of frequency
//!   `μ = √(λ₁² + λ₂²)` and the other two carry `λ₁`, `λ₂`. Either the
//!   `μ`-axis is trigonometric and the others hyperbolic, or the reverse.
//!   Six per class.
//! * linear families `x·trig(λ ·)·hyp(λ ·)` (and rotations), with `σ` pinned
//!   to the reciprocal half-length of the linear axis. They exist only when
//!   two scalar conditions on one unknown `λ` happen to agree.
//! * `xyz` on the cube, and the constant function with `σ = 0`.
//!
//! On a face `t = d` every factor `f` has `f'(d)/f(d)` equal to its *flux*:
//! `−λ tan(λd)` for `cos`, `λ cot(λd)` for `sin`, `λ tanh(λd)` for `cosh`,
//! `λ coth(λd)` for `sinh` and `1/d` for the bare coordinate. The Steklov
//! condition asks all three fluxes to equal `σ`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::math::{
    cos, cosh, hypot, neg_nu_tan, nu_cot, nu_coth, nu_tanh, sin, sinh, sqrt, FRAC_PI_2, PI,
};
use crate::rootfind::{bisect, invert_monotone_map, Bracket, MonotoneMap, MAX_ITERATIONS};
use crate::Result;

/// Default acceptance threshold for the second condition of a linear family.
pub const DEFAULT_CONSISTENCY_TOL: f64 = 1e-8;

/// Number of trigonometric branches scanned for linear families.
pub const LINEAR_BRANCHES: usize = 8;

/// Number of trigonometric branches scanned for two-parameter families.
const COUPLED_BRANCHES: usize = 64;

/// Relative tolerance under which two half-lengths count as equal.
const EQUAL_SIDE_TOL: f64 = 1e-12;

const INNER_MAX_ITER: usize = 4 * MAX_ITERATIONS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> char {
        match self {
            Axis::X => 'x',
            Axis::Y => 'y',
            Axis::Z => 'z',
        }
    }

    /// The other two axes in increasing order.
    pub fn others(self) -> [Axis; 2] {
        match self {
            Axis::X => [Axis::Y, Axis::Z],
            Axis::Y => [Axis::X, Axis::Z],
            Axis::Z => [Axis::X, Axis::Y],
        }
    }
}

/// Parity class as three bits `xyz`, 1 meaning odd: `Parity(0b001)` is even
/// in `x` and `y`, odd in `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Parity(u8);

impl Parity {
    pub const fn new(bits: u8) -> Option<Self> {
        if bits < 8 {
            Some(Parity(bits))
        } else {
            None
        }
    }

    pub fn all() -> [Parity; 8] {
        core::array::from_fn(|i| Parity(i as u8))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn is_odd(self, axis: Axis) -> bool {
        self.0 & (0b100 >> axis.index()) != 0
    }

    fn from_odd(odd: [bool; 3]) -> Self {
        Parity(((odd[0] as u8) << 2) | ((odd[1] as u8) << 1) | odd[2] as u8)
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:03b}", self.0)
    }
}

/// One-dimensional factor of a separated eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FactorKind {
    Cos,
    Sin,
    Cosh,
    Sinh,
    Linear,
}

impl FactorKind {
    fn trig(odd: bool) -> Self {
        if odd {
            FactorKind::Sin
        } else {
            FactorKind::Cos
        }
    }

    fn hyperbolic(odd: bool) -> Self {
        if odd {
            FactorKind::Sinh
        } else {
            FactorKind::Cosh
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FactorKind::Cos => "cos",
            FactorKind::Sin => "sin",
            FactorKind::Cosh => "cosh",
            FactorKind::Sinh => "sinh",
            FactorKind::Linear => "lin",
        }
    }

    pub fn eval(self, freq: f64, t: f64) -> f64 {
        match self {
            FactorKind::Cos => cos(freq * t),
            FactorKind::Sin => sin(freq * t),
            FactorKind::Cosh => cosh(freq * t),
            FactorKind::Sinh => sinh(freq * t),
            FactorKind::Linear => t,
        }
    }

    /// Outward log-derivative `f'(d)/f(d)` on the face at half-length `d`.
    pub fn flux(self, freq: f64, half: f64) -> f64 {
        match self {
            FactorKind::Cos => neg_nu_tan(freq, half),
            FactorKind::Sin => nu_cot(freq, half),
            FactorKind::Cosh => nu_tanh(freq, half),
            FactorKind::Sinh => nu_coth(freq, half),
            FactorKind::Linear => 1.0 / half,
        }
    }

    fn monotone_map(self) -> Option<MonotoneMap> {
        match self {
            FactorKind::Cosh => Some(MonotoneMap::NuTanh),
            FactorKind::Sinh => Some(MonotoneMap::NuCoth),
            _ => None,
        }
    }

    /// `k`-th interval of frequencies on which the flux of a trigonometric
    /// factor is positive, as `(lo, hi)` with the flux decreasing from its
    /// value at `lo` to 0 at `hi`.
    fn positive_branch(self, k: usize, half: f64) -> (f64, f64) {
        let k = k as f64;
        match self {
            FactorKind::Sin if k == 0.0 => (0.0, FRAC_PI_2 / half),
            FactorKind::Sin => (k * PI / half, (k * PI + FRAC_PI_2) / half),
            FactorKind::Cos => ((k * PI + FRAC_PI_2) / half, (k + 1.0) * PI / half),
            _ => unreachable!("only trigonometric factors have branches"),
        }
    }
}

/// Which axis carries the frequency `μ`, and whether its factor is
/// trigonometric or hyperbolic. The other two axes then carry the other
/// kind of factor with frequencies `λ₁`, `λ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layout {
    Trig(Axis),
    Hyperbolic(Axis),
}

impl Layout {
    pub fn axis(self) -> Axis {
        match self {
            Layout::Trig(a) | Layout::Hyperbolic(a) => a,
        }
    }
}

/// A two-parameter separated family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeparatedFamily {
    pub parity: Parity,
    pub layout: Layout,
}

impl SeparatedFamily {
    /// Axis carrying `μ`.
    pub fn mu_axis(&self) -> Axis {
        self.layout.axis()
    }

    /// Axes carrying `λ₁` and `λ₂`, in that order.
    pub fn lambda_axes(&self) -> [Axis; 2] {
        self.mu_axis().others()
    }

    /// Axis carrying the trigonometric factor of argument `μ`, if any.
    pub fn trig_axis(&self) -> Option<Axis> {
        match self.layout {
            Layout::Trig(a) => Some(a),
            Layout::Hyperbolic(_) => None,
        }
    }

    pub fn factor(&self, axis: Axis) -> FactorKind {
        let odd = self.parity.is_odd(axis);
        let mu_is_trig = matches!(self.layout, Layout::Trig(_));
        if (axis == self.mu_axis()) == mu_is_trig {
            FactorKind::trig(odd)
        } else {
            FactorKind::hyperbolic(odd)
        }
    }

    /// Factor of the `μ`-axis and the sorted factors of the `λ`-axes.
    /// Families related by a permutation of the axes share a category.
    pub fn category(&self) -> (FactorKind, [FactorKind; 2]) {
        let [p, q] = self.lambda_axes().map(|ax| self.factor(ax));
        (
            self.factor(self.mu_axis()),
            if p <= q { [p, q] } else { [q, p] },
        )
    }

    /// The family obtained by sending axis `i` to axis `perm[i]`.
    pub fn permuted(&self, perm: [Axis; 3]) -> Self {
        let mut odd = [false; 3];
        for ax in Axis::ALL {
            odd[perm[ax.index()].index()] = self.parity.is_odd(ax);
        }
        let layout = match self.layout {
            Layout::Trig(a) => Layout::Trig(perm[a.index()]),
            Layout::Hyperbolic(a) => Layout::Hyperbolic(perm[a.index()]),
        };
        SeparatedFamily {
            parity: Parity::from_odd(odd),
            layout,
        }
    }

    fn frequency_label(&self, axis: Axis) -> &'static str {
        if axis == self.mu_axis() {
            "mu"
        } else if axis == self.lambda_axes()[0] {
            "l1"
        } else {
            "l2"
        }
    }
}

impl fmt::Display for SeparatedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, ax) in Axis::ALL.into_iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(
                f,
                "{}({} {})",
                self.factor(ax).name(),
                self.frequency_label(ax),
                ax.name()
            )?;
        }
        Ok(())
    }
}

/// A family `t·trig(λ ·)·hyp(λ ·)` with a bare coordinate along
/// `linear_axis`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearFamily {
    pub parity: Parity,
    pub linear_axis: Axis,
    pub trig_axis: Axis,
    pub hyp_axis: Axis,
}

impl LinearFamily {
    pub fn trig_kind(&self) -> FactorKind {
        FactorKind::trig(self.parity.is_odd(self.trig_axis))
    }

    pub fn hyp_kind(&self) -> FactorKind {
        FactorKind::hyperbolic(self.parity.is_odd(self.hyp_axis))
    }

    pub fn factor(&self, axis: Axis) -> FactorKind {
        if axis == self.linear_axis {
            FactorKind::Linear
        } else if axis == self.trig_axis {
            self.trig_kind()
        } else {
            self.hyp_kind()
        }
    }

    /// The pinned eigenvalue `1/d` of the linear axis.
    pub fn sigma(&self, dims: &BoxDomain) -> f64 {
        1.0 / dims.half(self.linear_axis)
    }
}

impl fmt::Display for LinearFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.linear_axis.name())?;
        for ax in Axis::ALL {
            if ax != self.linear_axis {
                write!(f, " {}(l {})", self.factor(ax).name(), ax.name())?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `s = 1`, `σ = 0`.
    Constant,
    Separated(SeparatedFamily),
    Linear(LinearFamily),
    /// `s = xyz` on the cube.
    Xyz,
}

impl Family {
    pub fn parity(&self) -> Parity {
        match self {
            Family::Constant => Parity(0),
            Family::Separated(s) => s.parity,
            Family::Linear(l) => l.parity,
            Family::Xyz => Parity(0b111),
        }
    }

    pub fn factor(&self, axis: Axis) -> FactorKind {
        match self {
            Family::Constant => FactorKind::Cosh,
            Family::Separated(s) => s.factor(axis),
            Family::Linear(l) => l.factor(axis),
            Family::Xyz => FactorKind::Linear,
        }
    }

    /// Axis used to break ties in eigenspace listings.
    fn sort_axis(&self) -> Axis {
        match self {
            Family::Separated(s) => s.mu_axis(),
            Family::Linear(l) => l.linear_axis,
            Family::Constant | Family::Xyz => Axis::X,
        }
    }

    pub fn label(&self) -> String {
        format!("{self}")
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Constant => f.write_str("1"),
            Family::Separated(s) => s.fmt(f),
            Family::Linear(l) => l.fmt(f),
            Family::Xyz => f.write_str("x y z"),
        }
    }
}

/// The box `[-a,a]×[-b,b]×[-c,c]`, stored by half-lengths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxDomain {
    half: [f64; 3],
}

impl BoxDomain {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let half = [a, b, c];
        if half.iter().any(|h| !(*h > 0.0) || !h.is_finite()) {
            return Err(Error::InvalidInput("box half-lengths must be positive"));
        }
        Ok(BoxDomain { half })
    }

    pub fn cube() -> Self {
        BoxDomain { half: [1.0; 3] }
    }

    pub fn half(&self, axis: Axis) -> f64 {
        self.half[axis.index()]
    }

    pub fn half_lengths(&self) -> [f64; 3] {
        self.half
    }

    /// Sorts the half-lengths ascending and rescales so the longest is 1.
    /// Returns the normalised box and the scale; eigenvalues of `self` are
    /// those of the normalised box divided by the scale.
    pub fn normalized(&self) -> (BoxDomain, f64) {
        let mut h = self.half;
        h.sort_by(f64::total_cmp);
        let scale = h[2];
        (
            BoxDomain {
                half: h.map(|x| x / scale),
            },
            scale,
        )
    }

    /// Surface area `8(ab + bc + ca)`.
    pub fn surface_area(&self) -> f64 {
        let [a, b, c] = self.half;
        8.0 * (a * b + b * c + c * a)
    }

    pub fn is_cube(&self) -> bool {
        let [a, b, c] = self.half;
        let tol = EQUAL_SIDE_TOL * a.max(b).max(c);
        (a - b).abs() <= tol && (b - c).abs() <= tol
    }

    /// The same box with axis `i` moved to axis `perm[i]`.
    pub fn permuted(&self, perm: [Axis; 3]) -> Self {
        let mut half = [0.0; 3];
        for ax in Axis::ALL {
            half[perm[ax.index()].index()] = self.half(ax);
        }
        BoxDomain { half }
    }
}

/// The full catalogue of separated eigenfunction families of the box, in
/// parity-class order. `xyz` is listed only for the cube.
pub fn enumerate_families(dims: &BoxDomain) -> Vec<Family> {
    let mut out = Vec::with_capacity(1 + 8 * 6 + 24 + 1);
    for parity in Parity::all() {
        if parity.bits() == 0 {
            out.push(Family::Constant);
        }
        if parity.bits() == 0b111 && dims.is_cube() {
            out.push(Family::Xyz);
        }
        for layout in [Layout::Trig, Layout::Hyperbolic] {
            for ax in Axis::ALL {
                out.push(Family::Separated(SeparatedFamily {
                    parity,
                    layout: layout(ax),
                }));
            }
        }
        for linear_axis in Axis::ALL.into_iter().filter(|&ax| parity.is_odd(ax)) {
            let [p, q] = linear_axis.others();
            for (trig_axis, hyp_axis) in [(p, q), (q, p)] {
                out.push(Family::Linear(LinearFamily {
                    parity,
                    linear_axis,
                    trig_axis,
                    hyp_axis,
                }));
            }
        }
    }
    out
}

/// A solved eigenfunction of the box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxCandidate {
    pub family: Family,
    /// Frequency on the first `λ`-axis; the shared `λ` for linear families.
    pub lambda1: f64,
    /// Frequency on the second `λ`-axis; 0 for linear families.
    pub lambda2: f64,
    /// `√(λ₁² + λ₂²)`.
    pub mu: f64,
    pub sigma: f64,
    /// Flux minus `σ` on each determining equation, divided by `max(1, σ)`.
    /// For two-parameter families: `λ₁`-axis, `λ₂`-axis, `μ`-axis. For
    /// linear families: trigonometric axis, hyperbolic axis, `σ·d − 1` on
    /// the linear axis.
    pub residuals: [f64; 3],
}

impl BoxCandidate {
    /// Frequency of the factor along `axis` (0 for bare coordinates).
    pub fn frequency(&self, axis: Axis) -> f64 {
        match &self.family {
            Family::Separated(s) if axis == s.mu_axis() => self.mu,
            Family::Separated(s) if axis == s.lambda_axes()[0] => self.lambda1,
            Family::Separated(_) => self.lambda2,
            Family::Linear(l) if axis == l.linear_axis => 0.0,
            Family::Linear(_) => self.lambda1,
            Family::Constant | Family::Xyz => 0.0,
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Evaluates the candidate's eigenfunction at `p = (x, y, z)`.
pub fn box_eigenfunction_eval(candidate: &BoxCandidate, p: [f64; 3]) -> f64 {
    if candidate.family == Family::Constant {
        return 1.0;
    }
    Axis::ALL
        .into_iter()
        .map(|ax| {
            candidate
                .family
                .factor(ax)
                .eval(candidate.frequency(ax), p[ax.index()])
        })
        .product()
}

/// Frequency of a hyperbolic factor with flux `σ`; 0 at or below the floor
/// of `ν coth(νd)`.
fn hyperbolic_frequency(kind: FactorKind, half: f64, sigma: f64) -> Result<f64> {
    let map = kind.monotone_map().expect("hyperbolic factor");
    if sigma <= map.range_floor(half) {
        return Ok(0.0);
    }
    invert_monotone_map(map, half, sigma)
}

/// `|σd − 1|` below which a `sin` factor is read as its `λ → 0` limit.
const SIN_DEGENERATE_TOL: f64 = 1e-12;

/// Root of `flux(λ) = σ` on the `k`-th positive branch of a trigonometric
/// factor, if there is one. The pole end of the branch is probed just inside
/// it; `λ = 0` is never returned.
fn trig_branch_root(kind: FactorKind, k: usize, half: f64, sigma: f64) -> Result<Option<f64>> {
    let (lo, hi) = kind.positive_branch(k, half);
    let lo = if kind == FactorKind::Sin && k == 0 {
        if sigma * half >= 1.0 - SIN_DEGENERATE_TOL {
            return Ok(None);
        }
        lo
    } else {
        lo * (1.0 + 1e-14)
    };
    let f = |lam: f64| kind.flux(lam, half) - sigma;
    match Bracket::closed(f, lo, hi) {
        Ok(bracket) => Ok(Some(bisect(f, &bracket, 0.0, INNER_MAX_ITER)?.root)),
        Err(Error::NoSignChange { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Smallest positive frequency of a trigonometric factor with flux `σ > 0`.
fn trig_frequency(kind: FactorKind, half: f64, sigma: f64) -> Result<f64> {
    let branch = match kind {
        FactorKind::Cos => 0,
        FactorKind::Sin => {
            let gap = sigma * half - 1.0;
            if gap.abs() <= SIN_DEGENERATE_TOL {
                return Ok(0.0);
            }
            usize::from(gap > 0.0)
        }
        _ => unreachable!("trigonometric factor"),
    };
    trig_branch_root(kind, branch, half, sigma)?.ok_or(Error::NoSolution)
}

/// Finds the `σ` at which an increasing function `g` of `σ ≥ lo` reaches
/// `target`, given `g(lo) < target`.
fn increasing_preimage<G: Fn(f64) -> Result<f64>>(g: G, lo: f64, target: f64) -> Result<f64> {
    let mut hi = if lo > 0.0 { 2.0 * lo } else { 1.0 };
    let mut doublings = 0;
    while g(hi)? < target {
        hi *= 2.0;
        doublings += 1;
        if doublings > 2000 {
            return Err(Error::NoSolution);
        }
    }
    let f = |s: f64| g(s).map(|v| v - target).unwrap_or(f64::NAN);
    let bracket = Bracket::closed(f, lo, hi)?;
    Ok(bisect(f, &bracket, 0.0, INNER_MAX_ITER)?.root)
}

/// The scalar equation in `σ` that a two-parameter family reduces to.
///
/// For a trigonometric `μ`-axis, `λ₁(σ)`, `λ₂(σ)` come from inverting the
/// increasing hyperbolic fluxes and the residual is `flux_μ(μ(σ)) − σ`. For
/// a hyperbolic `μ`-axis, `μ(σ)` is the inverted flux, `λᵢ(σ)` are the
/// smallest positive trigonometric frequencies, and the residual is
/// `λ₁² + λ₂² − μ²`. In both cases the residual is continuous and strictly
/// decreasing on each of the intervals returned by [`Self::pieces`].
#[derive(Debug, Clone, Copy)]
pub struct CoupledProblem {
    family: SeparatedFamily,
    half: [f64; 3],
}

impl CoupledProblem {
    pub fn new(family: SeparatedFamily, dims: &BoxDomain) -> Self {
        CoupledProblem {
            family,
            half: dims.half_lengths(),
        }
    }

    fn half(&self, axis: Axis) -> f64 {
        self.half[axis.index()]
    }

    /// Smallest admissible `σ`: the largest `coth` floor among the
    /// hyperbolic axes.
    pub fn sigma_floor(&self) -> f64 {
        Axis::ALL
            .into_iter()
            .filter_map(|ax| {
                self.family
                    .factor(ax)
                    .monotone_map()
                    .map(|m| m.range_floor(self.half(ax)))
            })
            .fold(0.0, f64::max)
    }

    /// `(λ₁, λ₂, μ)` implied by `σ` through the two equations that are solved
    /// exactly for the layout.
    pub fn frequencies(&self, sigma: f64) -> Result<(f64, f64, f64)> {
        let [ax1, ax2] = self.family.lambda_axes();
        let (k1, k2) = (self.family.factor(ax1), self.family.factor(ax2));
        match self.family.layout {
            Layout::Trig(_) => {
                let l1 = hyperbolic_frequency(k1, self.half(ax1), sigma)?;
                let l2 = hyperbolic_frequency(k2, self.half(ax2), sigma)?;
                Ok((l1, l2, hypot(l1, l2)))
            }
            Layout::Hyperbolic(m) => {
                let l1 = trig_frequency(k1, self.half(ax1), sigma)?;
                let l2 = trig_frequency(k2, self.half(ax2), sigma)?;
                let mu = hyperbolic_frequency(self.family.factor(m), self.half(m), sigma)?;
                Ok((l1, l2, mu))
            }
        }
    }

    /// The scalar residual whose root is the eigenvalue.
    pub fn residual(&self, sigma: f64) -> Result<f64> {
        let (l1, l2, mu) = self.frequencies(sigma)?;
        Ok(match self.family.layout {
            Layout::Trig(m) => self.family.factor(m).flux(mu, self.half(m)) - sigma,
            Layout::Hyperbolic(_) => l1 * l1 + l2 * l2 - mu * mu,
        })
    }

    /// Open `σ`-intervals, in increasing order, on which the residual is
    /// continuous and strictly decreasing. The last interval of the
    /// hyperbolic layout is unbounded and reported with `hi = ∞`; the
    /// trigonometric layout lists at most `COUPLED_BRANCHES` intervals, one per
    /// branch of positive flux of the `μ`-axis factor.
    pub fn pieces(&self) -> Box<dyn Iterator<Item = Result<(f64, f64)>> + '_> {
        let floor = self.sigma_floor();
        match self.family.layout {
            Layout::Trig(m) => {
                let (kind, half) = (self.family.factor(m), self.half(m));
                let mu_of = move |s: f64| self.frequencies(s).map(|f| f.2);
                let mu_floor = match mu_of(floor) {
                    Ok(v) => v,
                    Err(e) => return Box::new(core::iter::once(Err(e))),
                };
                Box::new((0..COUPLED_BRANCHES).filter_map(move |k| {
                    let (u, v) = kind.positive_branch(k, half);
                    if v <= mu_floor {
                        return None;
                    }
                    let piece = (|| {
                        let start = if u <= mu_floor {
                            floor
                        } else {
                            increasing_preimage(mu_of, floor, u)?
                        };
                        Ok((start, increasing_preimage(mu_of, floor, v)?))
                    })();
                    match piece {
                        Ok((start, end)) if end <= start => None,
                        other => Some(other),
                    }
                }))
            }
            Layout::Hyperbolic(_) => {
                let mut bounds: Vec<f64> = self
                    .family
                    .lambda_axes()
                    .into_iter()
                    .filter(|&ax| self.family.factor(ax) == FactorKind::Sin)
                    .map(|ax| 1.0 / self.half(ax))
                    .filter(|&b| b > floor)
                    .collect();
                bounds.sort_by(f64::total_cmp);
                bounds.dedup();
                bounds.insert(0, floor);
                bounds.push(f64::INFINITY);
                let pieces: Vec<_> = bounds.windows(2).map(|w| Ok((w[0], w[1]))).collect();
                Box::new(pieces.into_iter())
            }
        }
    }
}

/// Solves a two-parameter family for its smallest positive eigenvalue.
///
/// Returns [`Error::NoSolution`] if no piece of the `σ`-parametrisation
/// carries a sign change.
pub fn solve_coupled(family: &SeparatedFamily, dims: &BoxDomain) -> Result<BoxCandidate> {
    let problem = CoupledProblem::new(*family, dims);
    let g = |s: f64| problem.residual(s).unwrap_or(f64::NAN);
    for piece in problem.pieces() {
        let (lo, hi) = piece?;
        let hi = if hi.is_finite() {
            hi
        } else {
            // The residual tends to −∞ with σ on the unbounded piece.
            let mut hi = if lo > 0.0 { 2.0 * lo } else { 1.0 };
            let mut doublings = 0;
            while !(g(hi) < 0.0) {
                hi *= 2.0;
                doublings += 1;
                if doublings > 2000 {
                    return Err(Error::NoSolution);
                }
            }
            hi
        };
        let bracket = match Bracket::open(g, lo, hi) {
            Ok(b) => b,
            Err(Error::NoSignChange { .. }) => continue,
            Err(e) => return Err(e),
        };
        let sigma = bisect(g, &bracket, 0.0, INNER_MAX_ITER)?.root;
        return coupled_candidate(family, dims, sigma);
    }
    Err(Error::NoSolution)
}

fn coupled_candidate(
    family: &SeparatedFamily,
    dims: &BoxDomain,
    sigma: f64,
) -> Result<BoxCandidate> {
    let problem = CoupledProblem::new(*family, dims);
    let (l1, l2, _) = problem.frequencies(sigma)?;
    let mu = hypot(l1, l2);
    let [ax1, ax2] = family.lambda_axes();
    let m = family.mu_axis();
    let scale = sigma.max(1.0);
    let res = |ax: Axis, freq: f64| (family.factor(ax).flux(freq, dims.half(ax)) - sigma) / scale;
    Ok(BoxCandidate {
        family: Family::Separated(*family),
        lambda1: l1,
        lambda2: l2,
        mu,
        sigma,
        residuals: [res(ax1, l1), res(ax2, l2), res(m, mu)],
    })
}

/// Result of a linear family: accepted candidates and the smallest residual
/// of the second condition over all scanned branches.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOutcome {
    pub candidates: Vec<BoxCandidate>,
    pub best_residual: f64,
}

/// Solves a linear family with `σ = 1/d` on the linear axis.
///
/// The trigonometric condition is solved on each of its first
/// [`LINEAR_BRANCHES`] positive branches; a root is accepted when the
/// hyperbolic condition holds there to `consistency_tol` (relative to
/// `max(1, σ)`). Generic boxes yield no candidates.
pub fn solve_linear_family(
    family: &LinearFamily,
    dims: &BoxDomain,
    consistency_tol: f64,
) -> LinearOutcome {
    let sigma = family.sigma(dims);
    let (tk, td) = (family.trig_kind(), dims.half(family.trig_axis));
    let (hk, hd) = (family.hyp_kind(), dims.half(family.hyp_axis));
    let scale = sigma.max(1.0);
    let mut candidates = Vec::new();
    let mut best_residual = f64::INFINITY;
    for k in 0..LINEAR_BRANCHES {
        let Ok(Some(lam)) = trig_branch_root(tk, k, td, sigma) else {
            continue;
        };
        let hyp_res = (hk.flux(lam, hd) - sigma) / scale;
        best_residual = best_residual.min(hyp_res.abs());
        if hyp_res.abs() <= consistency_tol {
            candidates.push(BoxCandidate {
                family: Family::Linear(*family),
                lambda1: lam,
                lambda2: 0.0,
                mu: lam,
                sigma,
                residuals: [
                    (tk.flux(lam, td) - sigma) / scale,
                    hyp_res,
                    sigma * dims.half(family.linear_axis) - 1.0,
                ],
            });
        }
    }
    LinearOutcome {
        candidates,
        best_residual,
    }
}

/// Note attached to a family that produced no candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub family: Family,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxSpectrum {
    pub dims: BoxDomain,
    /// Every solved candidate in catalogue order, including the constant.
    pub candidates: Vec<BoxCandidate>,
    pub sigma1: f64,
    /// Families attaining `σ₁`, sorted by `(σ, parity, axis)`.
    pub eigenspace: Vec<Family>,
    /// `σ₁·√(surface area)`.
    pub invariant: f64,
    pub diagnostics: Vec<Diagnostic>,
}

impl BoxSpectrum {
    pub fn multiplicity(&self) -> usize {
        self.eigenspace.len()
    }

    pub fn candidate(&self, family: &Family) -> Option<&BoxCandidate> {
        self.candidates.iter().find(|c| &c.family == family)
    }
}

/// Solves every family of the catalogue and collects `σ₁` and its
/// eigenspace. Families without a solution are skipped and noted in the
/// diagnostics.
pub fn box_spectrum(dims: &BoxDomain, mult_tol: f64) -> Result<BoxSpectrum> {
    box_spectrum_with_tol(dims, mult_tol, DEFAULT_CONSISTENCY_TOL)
}

/// [`box_spectrum`] with an explicit consistency tolerance for the linear
/// families.
pub fn box_spectrum_with_tol(
    dims: &BoxDomain,
    mult_tol: f64,
    consistency_tol: f64,
) -> Result<BoxSpectrum> {
    if !(consistency_tol > 0.0) {
        return Err(Error::InvalidInput(
            "consistency tolerance must be positive",
        ));
    }
    if !(mult_tol >= 0.0) {
        return Err(Error::InvalidInput(
            "multiplicity tolerance must be non-negative",
        ));
    }
    let mut candidates = Vec::new();
    let mut diagnostics = Vec::new();
    for family in enumerate_families(dims) {
        match family {
            Family::Constant => candidates.push(BoxCandidate {
                family,
                lambda1: 0.0,
                lambda2: 0.0,
                mu: 0.0,
                sigma: 0.0,
                residuals: [0.0; 3],
            }),
            Family::Xyz => {
                let sigma = 1.0 / dims.half(Axis::X);
                let res = Axis::ALL.map(|ax| sigma * dims.half(ax) - 1.0);
                candidates.push(BoxCandidate {
                    family,
                    lambda1: 0.0,
                    lambda2: 0.0,
                    mu: 0.0,
                    sigma,
                    residuals: res,
                });
            }
            Family::Separated(s) => match solve_coupled(&s, dims) {
                Ok(c) => candidates.push(c),
                Err(e) => diagnostics.push(Diagnostic {
                    family,
                    message: format!("{e}"),
                }),
            },
            Family::Linear(l) => {
                let outcome = solve_linear_family(&l, dims, consistency_tol);
                if outcome.candidates.is_empty() {
                    diagnostics.push(Diagnostic {
                        family,
                        message: format!(
                            "no consistent root on the first {LINEAR_BRANCHES} branches (best residual {:.3e})",
                            outcome.best_residual
                        ),
                    });
                }
                candidates.extend(outcome.candidates);
            }
        }
    }
    let sigma1 = candidates
        .iter()
        .map(|c| c.sigma)
        .filter(|&s| s > 0.0)
        .fold(f64::INFINITY, f64::min);
    if !sigma1.is_finite() {
        return Err(Error::NoSolution);
    }
    let window = mult_tol * sigma1.max(1.0);
    let mut attaining: Vec<&BoxCandidate> = candidates
        .iter()
        .filter(|c| c.sigma > 0.0 && (c.sigma - sigma1).abs() <= window)
        .collect();
    attaining.sort_by(|p, q| {
        p.sigma
            .total_cmp(&q.sigma)
            .then(p.family.parity().cmp(&q.family.parity()))
            .then(p.family.sort_axis().cmp(&q.family.sort_axis()))
            .then(p.family.cmp(&q.family))
    });
    let eigenspace = attaining.into_iter().map(|c| c.family).collect();
    Ok(BoxSpectrum {
        dims: *dims,
        candidates,
        sigma1,
        eigenspace,
        invariant: sigma1 * sqrt(dims.surface_area()),
        diagnostics,
    })
}

/// `σ₁·√(8(ab + bc + ca))`.
pub fn box_invariant(dims: &BoxDomain) -> Result<f64> {
    Ok(box_spectrum(dims, crate::DEFAULT_MULT_TOL)?.invariant)
}
