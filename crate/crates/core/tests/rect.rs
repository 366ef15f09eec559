use std::f64::consts::{FRAC_PI_2, PI};

use steklov_core::rect::first_branch_interval;
use steklov_core::*;

const TOL: f64 = DEFAULT_MULT_TOL;

fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

/// Determining equations and eigenvalues written out directly, so the scan
/// below shares no code with the library.
fn raw_equation(class: RectClass, a: f64, nu: f64) -> (f64, f64) {
    let (x, y) = (nu, nu * a);
    match class {
        RectClass::IOne => (y.tan() + x.tanh(), nu * x.tanh()),
        RectClass::ITwo => (x.tan() + y.tanh(), nu * y.tanh()),
        RectClass::IIOne => (y.tan() - x.tanh(), nu * coth(x)),
        RectClass::IITwo => (x.tan() - y.tanh(), nu * coth(y)),
        RectClass::IIIOne => (y.tan() - coth(x), nu * x.tanh()),
        RectClass::IIITwo => (x.tan() + coth(y), nu * coth(y)),
        RectClass::IVOne => (y.tan() + coth(x), nu * coth(x)),
        RectClass::IVTwo => (x.tan() - coth(y), nu * y.tanh()),
        RectClass::Xy => unreachable!(),
    }
}

/// Smallest positive ν where the equation crosses zero, by a dense scan with
/// step 1e-4 (skipping sign flips across poles of tan) and bisection.
fn dense_scan_first_root(class: RectClass, a: f64) -> f64 {
    let f = |nu: f64| raw_equation(class, a, nu).0;
    let step = 1e-4;
    let mut lo = step;
    let mut f_lo = f(lo);
    loop {
        let hi = lo + step;
        let f_hi = f(hi);
        if f_lo.signum() != f_hi.signum() && (f_hi - f_lo).abs() < 1e3 {
            let (mut l, mut h) = (lo, hi);
            for _ in 0..100 {
                let m = 0.5 * (l + h);
                if f(m).signum() == f_lo.signum() {
                    l = m;
                } else {
                    h = m;
                }
            }
            return 0.5 * (l + h);
        }
        lo = hi;
        f_lo = f_hi;
        assert!(lo < 50.0, "no root found");
    }
}

#[test]
fn square_table_values() {
    let s = rect_spectrum(1.0, TOL).unwrap();
    let sigma = |c| s.candidate(c).unwrap().sigma;
    let nu = |c| s.candidate(c).unwrap().nu;
    assert!((nu(RectClass::IVTwo) - 0.9375520).abs() < 1e-7);
    assert!((sigma(RectClass::IVTwo) - 0.6882527).abs() < 1e-7);
    assert!((nu(RectClass::IVOne) - 2.3470455).abs() < 1e-7);
    assert!((sigma(RectClass::IVOne) - 2.3903892).abs() < 1e-7);
    assert!((sigma(RectClass::IOne) - 2.3236377).abs() < 1e-7);
    assert!((sigma(RectClass::IIOne) - 3.9296545).abs() < 1e-7);
    assert_eq!(sigma(RectClass::Xy), 1.0);
    assert!((s.invariant - 5.506).abs() < 1e-3);
    assert_eq!(s.eigenspace, [RectClass::IIIOne, RectClass::IVTwo]);
}

#[test]
fn square_multiplicity_pairs() {
    let s = rect_spectrum(1.0, TOL).unwrap();
    let sigma = |c| s.candidate(c).unwrap().sigma;
    use RectClass::*;
    for (p, q) in [
        (IOne, ITwo),
        (IIOne, IITwo),
        (IIIOne, IVTwo),
        (IIITwo, IVOne),
    ] {
        assert!((sigma(p) - sigma(q)).abs() <= 1e-9, "{p} {q}");
    }
    let mut distinct: Vec<f64> = s.candidates.iter().map(|c| c.sigma).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup_by(|x, y| (*x - *y).abs() <= 1e-9);
    assert_eq!(distinct.len(), 5);
}

#[test]
fn reference_values_off_square() {
    // 30-digit reference roots of tan(ν) = coth(νa).
    for (a, nu, sigma) in [
        (0.25, 1.272242594156252, 0.391535581992681),
        (0.5, 1.105182754557297, 0.555309988958193),
        (0.75, 1.003742112969473, 0.639203390850361),
    ] {
        let s = rect_spectrum(a, TOL).unwrap();
        let c = s.candidate(RectClass::IVTwo).unwrap();
        assert!((c.nu - nu).abs() < 1e-11, "a={a}: {}", c.nu);
        assert!((s.sigma1 - sigma).abs() < 1e-11, "a={a}: {}", s.sigma1);
        assert_eq!(s.eigenspace, [RectClass::IVTwo]);
    }
    let inv = rect_invariant(0.5).unwrap();
    assert!((inv - 3.331859933749161).abs() < 1e-10);
    assert!(inv > 0.0 && inv < 5.506);
}

#[test]
fn candidates_match_dense_scan() {
    for a in [0.25, 0.5, 0.75, 1.0] {
        for class in RectClass::SEPARATED {
            let oracle = dense_scan_first_root(class, a);
            let c = first_candidate(class, a).unwrap();
            assert!(
                (c.nu - oracle).abs() < 1e-10,
                "{class} a={a}: {} vs {oracle}",
                c.nu
            );
            let sigma = raw_equation(class, a, oracle).1;
            assert!(
                (c.sigma - sigma).abs() < 1e-9 * sigma.max(1.0),
                "{class} a={a}"
            );
        }
    }
}

#[test]
fn determining_residual_examples() {
    assert!(
        determining_residual(RectClass::IVTwo, 1.0, 0.9375520)
            .unwrap()
            .abs()
            < 1e-6
    );
    assert!(
        determining_residual(RectClass::IIOne, 1.0, 3.9266023)
            .unwrap()
            .abs()
            < 1e-6
    );
    assert!(determining_residual(RectClass::IVTwo, 0.5, 1e-6).unwrap() < 0.0);
}

#[test]
fn bracket_examples() {
    let b = first_branch_interval(RectClass::IVTwo, 0.5).unwrap();
    assert_eq!(b, (0.0, FRAC_PI_2));
    let b = first_branch_interval(RectClass::IOne, 1.0).unwrap();
    assert_eq!(b, (FRAC_PI_2, PI));
    let b = first_branch_interval(RectClass::IIIOne, 0.5).unwrap();
    assert_eq!(b, (0.0, PI));
    let br = first_branch_bracket(RectClass::IOne, 1.0).unwrap();
    assert!(br.lo > FRAC_PI_2 && br.hi < PI && br.f_lo_sign != br.f_hi_sign);
}

fn sample_grid() -> Vec<f64> {
    (1..=49).map(|k| 0.02 * k as f64).collect()
}

#[test]
fn long_side_sine_is_strictly_lowest() {
    for a in sample_grid() {
        let s = rect_spectrum(a, TOL).unwrap();
        let target = s.candidate(RectClass::IVTwo).unwrap().sigma;
        assert_eq!(s.sigma1, target, "a={a}");
        assert_eq!(s.eigenspace, [RectClass::IVTwo], "a={a}");
        for c in s.candidates.iter().filter(|c| c.class != RectClass::IVTwo) {
            assert!(
                c.sigma - target > 1e-8,
                "a={a} {}: {}",
                c.class,
                c.sigma - target
            );
        }
    }
}

#[test]
fn short_side_cosh_sine_below_sinh_sine() {
    let mut grid: Vec<f64> = sample_grid().into_iter().filter(|&a| a > 0.05).collect();
    grid.push(1.0);
    for a in grid {
        let s = rect_spectrum(a, TOL).unwrap();
        let iii = s.candidate(RectClass::IIIOne).unwrap().sigma;
        let ii = s.candidate(RectClass::IIOne).unwrap().sigma;
        assert!(iii < ii, "a={a}");
    }
}

/// `σ(II_i) − σ(III_i)` to first order, without cancellation. Both classes
/// share the `y`-equation `σ = h(ν) = ν·cot(νa)`; in `x` they use
/// `f = ν·tanh ν` and `f + δ` with `δ = ν·coth ν − ν·tanh ν = 2ν/sinh 2ν`.
fn short_side_gap(a: f64) -> f64 {
    let nu = first_candidate(RectClass::IIIOne, a).unwrap().nu;
    let (s, c) = (nu * a).sin_cos();
    let dh = c / s - nu * a / (s * s);
    let df = nu.tanh() + nu / nu.cosh().powi(2);
    let delta = 2.0 * nu / (2.0 * nu).sinh();
    delta * dh / (dh - df)
}

#[test]
fn short_side_gap_below_double_precision() {
    // 80-digit values of σ(II_i) − σ(III_i): smaller than one ulp of σ, so
    // the two f64 candidates coincide and the order shows only in the gap.
    for (a, gap) in [(0.02, 4.4368e-33), (0.04, 2.5162e-16)] {
        let s = rect_spectrum(a, TOL).unwrap();
        let iii = s.candidate(RectClass::IIIOne).unwrap().sigma;
        let ii = s.candidate(RectClass::IIOne).unwrap().sigma;
        assert!(gap < 0.5 * f64::EPSILON * iii);
        assert!(iii <= ii, "a={a}");
        assert!(ii - iii <= 4.0 * f64::EPSILON * iii, "a={a}");
        let est = short_side_gap(a);
        assert!((est - gap).abs() <= 1e-3 * gap, "a={a}: {est:e}");
    }
}

#[test]
fn short_side_gap_matches_direct_difference() {
    for a in sample_grid() {
        let est = short_side_gap(a);
        assert!(est > 0.0, "a={a}");
        let s = rect_spectrum(a, TOL).unwrap();
        let direct = s.candidate(RectClass::IIOne).unwrap().sigma
            - s.candidate(RectClass::IIIOne).unwrap().sigma;
        if est > 1e-8 && est < 1e-3 {
            assert!(
                (direct - est).abs() <= 1e-2 * est,
                "a={a}: {direct:e} vs {est:e}"
            );
        }
    }
}

#[test]
fn long_and_short_side_coincide_only_on_square() {
    let mut grid = sample_grid();
    grid.push(1.0);
    for a in grid {
        let s = rect_spectrum(a, TOL).unwrap();
        let iv = s.candidate(RectClass::IVTwo).unwrap().sigma;
        let iii = s.candidate(RectClass::IIIOne).unwrap().sigma;
        assert!(iv <= iii, "a={a}");
        assert_eq!((iii - iv).abs() <= 1e-9, a == 1.0, "a={a}");
    }
}

#[test]
fn invariant_increases_and_vanishes() {
    let grid: Vec<f64> = (1..=100).map(|k| 0.01 * k as f64).collect();
    let inv: Vec<f64> = grid.iter().map(|&a| rect_invariant(a).unwrap()).collect();
    for w in inv.windows(2) {
        assert!(w[1] > w[0]);
    }
    assert!(rect_invariant(1e-4).unwrap() < 0.05);
}

#[test]
fn scaled_rectangle() {
    // [-1/s,1/s]×[-a/s,a/s] has the same eigenfunctions with ν scaled by s.
    for a in [0.3, 0.6, 1.0] {
        let s = rect_spectrum(a, TOL).unwrap();
        let c = s.candidate(RectClass::IVTwo).unwrap();
        let (map, scale) = RectClass::IVTwo.sigma_kind(a).unwrap();
        for k in [0.5, 2.0, 7.3] {
            let scaled_sigma = map.eval(c.nu * k, scale / k);
            assert!((scaled_sigma - k * c.sigma).abs() <= 1e-10 * k * c.sigma);
            let scaled_invariant = scaled_sigma * RectDomain::new(a).unwrap().perimeter() / k;
            assert!((scaled_invariant - s.invariant).abs() <= 1e-10 * s.invariant);
        }
    }
    let (d, scale) = RectDomain::from_sides(6.0, 3.0).unwrap();
    assert_eq!((d.a(), scale), (0.5, 3.0));
}

#[test]
fn eigenfunction_examples() {
    let c = first_candidate(RectClass::IVTwo, 1.0).unwrap();
    for y in [-1.0, -0.3, 0.0, 0.8] {
        assert_eq!(rect_eigenfunction_eval(&c, 0.0, y), 0.0);
    }
    let v = rect_eigenfunction_eval(&c, 1.0, 1.0);
    assert_eq!(v, c.nu.sin() * c.nu.cosh());
    assert!((v - 0.9375520f64.sin() * 0.9375520f64.cosh()).abs() < 1e-6);
    let xy = first_candidate(RectClass::Xy, 1.0).unwrap();
    assert_eq!(rect_eigenfunction_eval(&xy, 0.5, 0.5), 0.25);
    assert!(first_candidate(RectClass::Xy, 0.9).is_err());
}

#[test]
fn sweep_examples() {
    let grid: Vec<f64> = (1..=10).map(|k| 0.1 * k as f64).collect();
    let rows = sweep_rect(&grid, TOL);
    let inv: Vec<f64> = rows
        .iter()
        .map(|r| r.outcome.as_ref().unwrap().invariant)
        .collect();
    assert!(inv.windows(2).all(|w| w[1] > w[0]));
    for row in sweep_rect(&[0.25, 0.5, 0.75], TOL) {
        assert_eq!(row.outcome.unwrap().eigenspace, [RectClass::IVTwo]);
    }
    let one = sweep_rect(&[1.0], TOL);
    assert_eq!(one.len(), 1);
    assert_eq!(
        one[0].outcome.as_ref().unwrap().sigma1,
        rect_spectrum(1.0, TOL).unwrap().sigma1
    );
}

#[test]
fn invalid_half_heights() {
    for a in [0.0, -0.2, 1.5, f64::NAN] {
        assert!(rect_spectrum(a, TOL).is_err(), "{a}");
    }
}
