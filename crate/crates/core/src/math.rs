//! Thin wrappers over `libm` so the rest of the crate reads like ordinary
//! float code without `std`.

pub(crate) use core::f64::consts::{FRAC_PI_2, PI};

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn tan(x: f64) -> f64 {
    libm::tan(x)
}

#[inline]
pub(crate) fn sinh(x: f64) -> f64 {
    libm::sinh(x)
}

#[inline]
pub(crate) fn cosh(x: f64) -> f64 {
    libm::cosh(x)
}

#[inline]
pub(crate) fn tanh(x: f64) -> f64 {
    libm::tanh(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    sqrt(x * x + y * y)
}

/// `ν·tanh(ν s)`.
#[inline]
pub(crate) fn nu_tanh(nu: f64, s: f64) -> f64 {
    nu * tanh(nu * s)
}

/// `ν·coth(ν s)`, continuous at `ν = 0` where it equals `1/s`.
#[inline]
pub(crate) fn nu_coth(nu: f64, s: f64) -> f64 {
    if nu == 0.0 {
        1.0 / s
    } else {
        nu / tanh(nu * s)
    }
}

/// `ν·cot(ν s)`, continuous at `ν = 0` where it equals `1/s`.
#[inline]
pub(crate) fn nu_cot(nu: f64, s: f64) -> f64 {
    if nu == 0.0 {
        1.0 / s
    } else {
        nu * cos(nu * s) / sin(nu * s)
    }
}

/// `-ν·tan(ν s)`.
#[inline]
pub(crate) fn neg_nu_tan(nu: f64, s: f64) -> f64 {
    -nu * tan(nu * s)
}
