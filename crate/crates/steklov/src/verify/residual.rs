//! Pointwise and integral checks that a function is a Steklov eigenfunction
//! of a box `[-h₁,h₁]×…×[-h_D,h_D]` with a given eigenvalue.

use serde::Serialize;

use super::quadrature::scaled_rule;
use super::VerifyError;

/// Finite-difference step for the Laplacian and the normal derivative.
pub const FD_STEP: f64 = 1e-4;

/// Step of the central differences used for the Rayleigh gradient.
const GRADIENT_STEP: f64 = 1e-3;

/// Smallest quadrature rule used per axis.
const MIN_NODES: usize = 16;

const DEGENERATE_MAX: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    /// `max |Δs| / max |s|` over interior samples.
    pub interior_residual: f64,
    /// `max |∂s/∂n − σs| / (max |s|·max(1, σ))` over boundary samples.
    pub boundary_residual: f64,
    /// `|R(s) − σ| / σ` with `R` the Rayleigh quotient.
    pub rayleigh_gap: f64,
}

impl ResidualReport {
    pub fn worst(&self) -> f64 {
        self.interior_residual
            .max(self.boundary_residual)
            .max(self.rayleigh_gap)
    }

    pub fn passes(&self, gate: f64) -> bool {
        self.worst() < gate
    }
}

/// Calls `visit` with every multi-index below `counts`, last index fastest.
fn for_each_index(counts: &[usize], mut visit: impl FnMut(&[usize])) {
    if counts.contains(&0) {
        return;
    }
    let mut idx = vec![0; counts.len()];
    loop {
        visit(&idx);
        let mut k = counts.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < counts[k] {
                break;
            }
            idx[k] = 0;
        }
    }
}

fn shifted<const D: usize>(p: [f64; D], axis: usize, by: f64) -> [f64; D] {
    let mut q = p;
    q[axis] += by;
    q
}

/// Checks harmonicity, the Steklov boundary condition and the Rayleigh
/// quotient of `f` on the box with half-lengths `half`.
///
/// Interior samples are cell centres of a grid with `density` cells per unit
/// length; boundary samples are face-cell centres, so edges and corners are
/// never sampled. The Laplacian uses the fourth-order central stencil with
/// step [`FD_STEP`], the normal derivative the one-sided four-point stencil.
/// The Rayleigh quotient uses tensor Gauss–Legendre rules with at least
/// `density` nodes per unit length.
pub fn residual_check<const D: usize, F>(
    f: F,
    sigma: f64,
    half: [f64; D],
    density: usize,
) -> Result<ResidualReport, VerifyError>
where
    F: Fn([f64; D]) -> f64,
{
    if density < 8 {
        return Err(VerifyError::InvalidInput(
            "sample density must be at least 8".into(),
        ));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(VerifyError::InvalidInput(
            "eigenvalue must be positive".into(),
        ));
    }
    if half.iter().any(|h| !(*h > 0.0)) {
        return Err(VerifyError::InvalidInput(
            "half-lengths must be positive".into(),
        ));
    }
    let cells: [usize; D] = half.map(|h| ((density as f64) * 2.0 * h).ceil() as usize);
    let centre = |axis: usize, k: usize| {
        -half[axis] + (k as f64 + 0.5) * 2.0 * half[axis] / cells[axis] as f64
    };

    let h = FD_STEP;
    let mut max_abs = 0.0f64;
    let mut max_lap = 0.0f64;
    for_each_index(&cells, |idx| {
        let p: [f64; D] = core::array::from_fn(|k| centre(k, idx[k]));
        let f0 = f(p);
        let mut lap = 0.0;
        for axis in 0..D {
            let s = |m: f64| f(shifted(p, axis, m * h));
            lap +=
                (-s(2.0) + 16.0 * s(1.0) - 30.0 * f0 + 16.0 * s(-1.0) - s(-2.0)) / (12.0 * h * h);
        }
        max_abs = max_abs.max(f0.abs());
        max_lap = max_lap.max(lap.abs());
    });

    let mut max_flux = 0.0f64;
    for axis in 0..D {
        let mut face_cells = cells;
        face_cells[axis] = 1;
        for side in [-1.0, 1.0] {
            for_each_index(&face_cells, |idx| {
                let mut p: [f64; D] = core::array::from_fn(|k| centre(k, idx[k]));
                p[axis] = side * half[axis];
                let inward = |m: f64| f(shifted(p, axis, -side * m * h));
                let f0 = inward(0.0);
                let dn = (11.0 * f0 - 18.0 * inward(1.0) + 9.0 * inward(2.0) - 2.0 * inward(3.0))
                    / (6.0 * h);
                max_abs = max_abs.max(f0.abs());
                max_flux = max_flux.max((dn - sigma * f0).abs());
            });
        }
    }
    if max_abs < DEGENERATE_MAX {
        return Err(VerifyError::DegenerateFunction);
    }

    let rules: Vec<(Vec<f64>, Vec<f64>)> = half
        .iter()
        .map(|&h| {
            scaled_rule(
                MIN_NODES.max(((density as f64) * 2.0 * h).ceil() as usize),
                h,
            )
        })
        .collect();
    let counts: [usize; D] = core::array::from_fn(|k| rules[k].0.len());
    let g = GRADIENT_STEP;
    let mut dirichlet = 0.0;
    for_each_index(&counts, |idx| {
        let p: [f64; D] = core::array::from_fn(|k| rules[k].0[idx[k]]);
        let w: f64 = (0..D).map(|k| rules[k].1[idx[k]]).product();
        let mut grad2 = 0.0;
        for axis in 0..D {
            let s = |m: f64| f(shifted(p, axis, m * g));
            let d = (-s(2.0) + 8.0 * s(1.0) - 8.0 * s(-1.0) + s(-2.0)) / (12.0 * g);
            grad2 += d * d;
        }
        dirichlet += w * grad2;
    });
    let mut boundary = 0.0;
    for axis in 0..D {
        let mut face_counts = counts;
        face_counts[axis] = 1;
        for side in [-1.0, 1.0] {
            for_each_index(&face_counts, |idx| {
                let mut p: [f64; D] = core::array::from_fn(|k| rules[k].0[idx[k]]);
                p[axis] = side * half[axis];
                let w: f64 = (0..D)
                    .filter(|&k| k != axis)
                    .map(|k| rules[k].1[idx[k]])
                    .product();
                let v = f(p);
                boundary += w * v * v;
            });
        }
    }
    let rayleigh = dirichlet / boundary;

    Ok(ResidualReport {
        interior_residual: max_lap / max_abs,
        boundary_residual: max_flux / (max_abs * sigma.max(1.0)),
        rayleigh_gap: (rayleigh - sigma).abs() / sigma,
    })
}
