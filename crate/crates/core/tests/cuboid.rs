use std::collections::BTreeMap;

use steklov_core::*;

const TOL: f64 = DEFAULT_MULT_TOL;

fn sep(bits: u8, layout: Layout) -> SeparatedFamily {
    SeparatedFamily {
        parity: Parity::new(bits).unwrap(),
        layout,
    }
}

fn dims(a: f64, b: f64, c: f64) -> BoxDomain {
    BoxDomain::new(a, b, c).unwrap()
}

fn separated(s: &BoxSpectrum) -> impl Iterator<Item = (&SeparatedFamily, &BoxCandidate)> {
    s.candidates.iter().filter_map(|c| match &c.family {
        Family::Separated(f) => Some((f, c)),
        _ => None,
    })
}

type CubeRow = ((FactorKind, [FactorKind; 2]), (f64, f64), f64);

/// Cube reference: (μ-axis factor, λ-axis factors, λ pair, σ).
fn cube_table() -> Vec<CubeRow> {
    use FactorKind::*;
    vec![
        ((Cos, [Cosh, Cosh]), (1.8041319, 1.8041319), 1.7089319),
        ((Cosh, [Cos, Cos]), (2.1882115, 2.1882115), 3.0819274),
        ((Cos, [Cosh, Sinh]), (1.883677, 1.677149), 1.7985693),
        ((Sin, [Cosh, Cosh]), (0.80025167, 0.80025167), 0.5315091),
        ((Cosh, [Cos, Sin]), (2.0017440, 3.8679675), 4.3538085),
        ((Sinh, [Cos, Cos]), (2.1843218, 2.1843218), 3.1019388),
        ((Sin, [Cosh, Sinh]), (2.9145019, 2.8791763), 2.8974090),
        ((Cos, [Sinh, Sinh]), (1.7665698, 1.7665698), 1.8728895),
        ((Sinh, [Cos, Sin]), (2.0014790, 3.8676451), 4.3562732),
        ((Cosh, [Sin, Sin]), (0.7371448, 0.7371448), 0.8119520),
        ((Sin, [Sinh, Sinh]), (2.8949112, 2.8949112), 2.9126739),
        ((Sinh, [Sin, Sin]), (3.7570495, 3.7570495), 5.3135282),
    ]
}

#[test]
fn cube_table_values() {
    let s = box_spectrum(&BoxDomain::cube(), TOL).unwrap();
    let mut by_category: BTreeMap<_, Vec<&BoxCandidate>> = BTreeMap::new();
    for (f, c) in separated(&s) {
        by_category.entry(f.category()).or_default().push(c);
    }
    assert_eq!(by_category.len(), 12);
    for (category, (l1, l2), sigma) in cube_table() {
        let rotations = &by_category[&category];
        let orientations = if category.1[0] == category.1[1] { 3 } else { 6 };
        assert_eq!(rotations.len(), orientations, "{category:?}");
        for c in rotations {
            assert!((c.sigma - sigma).abs() < 1e-6, "{category:?}: {}", c.sigma);
            let (p, q) = (c.lambda1.min(c.lambda2), c.lambda1.max(c.lambda2));
            let (ep, eq) = (l1.min(l2), l1.max(l2));
            assert!(
                (p - ep).abs() < 1e-6 && (q - eq).abs() < 1e-6,
                "{category:?}: {p} {q}"
            );
            assert!((c.sigma - rotations[0].sigma).abs() <= 1e-10);
        }
    }
    let mut distinct: Vec<f64> = separated(&s).map(|(_, c)| c.sigma).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup_by(|x, y| (*x - *y).abs() <= 1e-9);
    assert_eq!(distinct.len(), 12);
}

#[test]
fn cube_first_eigenvalue() {
    let s = box_spectrum(&BoxDomain::cube(), TOL).unwrap();
    assert!((s.sigma1 - 0.5315091).abs() < 1e-7);
    assert!((s.invariant - 2.603).abs() < 1e-3);
    assert!((s.invariant - 2.603852207102983).abs() < 1e-10);
    let expected: Vec<Family> = [
        sep(0b001, Layout::Trig(Axis::Z)),
        sep(0b010, Layout::Trig(Axis::Y)),
        sep(0b100, Layout::Trig(Axis::X)),
    ]
    .into_iter()
    .map(Family::Separated)
    .collect();
    assert_eq!(s.eigenspace, expected);
    assert_eq!(s.candidate(&Family::Xyz).unwrap().sigma, 1.0);
    assert_eq!(s.candidate(&Family::Constant).unwrap().sigma, 0.0);
    assert_eq!(box_invariant(&BoxDomain::cube()).unwrap(), s.invariant);
}

/// Bisection on an interval where `f` changes sign.
fn bisection(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let s_lo = f(lo).signum();
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if f(m).signum() == s_lo {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

/// Independent oracle for `cosh(λ₁x)cosh(λ₂y)sin(μz)`: scan `λ₁` on a grid,
/// recover `λ₂` from the equal-flux condition, and locate the first sign
/// change of `μ·cot(μc) − σ`, skipping poles.
fn cosh_cosh_sin_oracle(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    let lambda2 = |sigma: f64| {
        let mut hi = 1.0;
        while hi * (hi * b).tanh() < sigma {
            hi *= 2.0;
        }
        bisection(|l| l * (l * b).tanh() - sigma, 0.0, hi)
    };
    let g = |l1: f64| {
        let sigma = l1 * (l1 * a).tanh();
        let l2 = lambda2(sigma);
        let mu = (l1 * l1 + l2 * l2).sqrt();
        mu / (mu * c).tan() - sigma
    };
    let step = 1e-3;
    let mut lo = step;
    let mut g_lo = g(lo);
    loop {
        let hi = lo + step;
        let g_hi = g(hi);
        if g_lo > 0.0 && g_hi < 0.0 {
            let l1 = bisection(g, lo, hi);
            let sigma = l1 * (l1 * a).tanh();
            return (l1, lambda2(sigma), sigma);
        }
        lo = hi;
        g_lo = g_hi;
        assert!(lo < 20.0);
    }
}

#[test]
fn long_axis_family_matches_scan_oracle() {
    for (a, b, c) in [
        (1.0, 1.0, 1.0),
        (0.5, 0.75, 1.0),
        (0.3, 0.7, 1.0),
        (0.2, 0.9, 1.0),
    ] {
        let (l1, l2, sigma) = cosh_cosh_sin_oracle(a, b, c);
        let cand = solve_coupled(&sep(0b001, Layout::Trig(Axis::Z)), &dims(a, b, c)).unwrap();
        assert!(
            (cand.sigma - sigma).abs() < 1e-9,
            "{a} {b}: {} vs {sigma}",
            cand.sigma
        );
        assert!((cand.lambda1 - l1).abs() < 1e-8 && (cand.lambda2 - l2).abs() < 1e-8);
    }
    let (l1, l2, sigma) = cosh_cosh_sin_oracle(1.0, 1.0, 1.0);
    assert!((l1 - 0.800251667491458).abs() < 1e-10 && (l2 - l1).abs() < 1e-10);
    assert!((sigma - 0.531509106085175).abs() < 1e-10);
}

fn sample_boxes() -> Vec<BoxDomain> {
    vec![
        BoxDomain::cube(),
        dims(0.5, 0.75, 1.0),
        dims(0.3, 0.7, 1.0),
        dims(0.2, 0.9, 1.0),
        dims(0.05, 0.4, 1.0),
        dims(1.0, 0.6, 0.6),
    ]
}

#[test]
fn every_candidate_satisfies_its_equations() {
    for d in sample_boxes() {
        let s = box_spectrum(&d, TOL).unwrap();
        for c in &s.candidates {
            assert!(c.max_residual() < 1e-9, "{}: {:?}", c.family, c.residuals);
            if let Family::Separated(f) = &c.family {
                let mismatch = c.mu * c.mu - c.lambda1 * c.lambda1 - c.lambda2 * c.lambda2;
                assert!(mismatch.abs() < 1e-12, "{f}: {mismatch}");
                for ax in Axis::ALL {
                    if f.factor(ax) == FactorKind::Sinh {
                        assert!(c.sigma > 1.0 / d.half(ax), "{f}");
                    }
                }
            }
        }
    }
}

#[test]
fn residual_has_one_sign_change_on_root_piece() {
    for d in [BoxDomain::cube(), dims(0.3, 0.7, 1.0), dims(0.5, 0.75, 1.0)] {
        for fam in enumerate_families(&d) {
            let Family::Separated(f) = fam else { continue };
            let cand = solve_coupled(&f, &d).unwrap();
            let problem = CoupledProblem::new(f, &d);
            let (lo, hi) = problem
                .pieces()
                .map(Result::unwrap)
                .find(|&(lo, hi)| lo < cand.sigma && cand.sigma < hi)
                .unwrap();
            let hi = hi.min(2.0 * cand.sigma + 1.0);
            let step = 1e-3;
            let mut s = lo + 1e-9 * (hi - lo).min(1.0);
            let mut changes = 0;
            let mut prev = problem.residual(s).unwrap();
            while s + step < hi {
                s += step;
                let r = problem.residual(s).unwrap();
                if r.signum() != prev.signum() {
                    changes += 1;
                }
                prev = r;
            }
            assert_eq!(changes, 1, "{f} on {:?}", d.half_lengths());
        }
    }
}

fn permutations() -> Vec<[Axis; 3]> {
    use Axis::*;
    vec![
        [X, Y, Z],
        [X, Z, Y],
        [Y, X, Z],
        [Y, Z, X],
        [Z, X, Y],
        [Z, Y, X],
    ]
}

#[test]
fn axis_permutation() {
    let d = dims(0.3, 0.7, 1.0);
    let base = box_spectrum(&d, TOL).unwrap();
    for perm in permutations() {
        let pd = d.permuted(perm);
        let ps = box_spectrum(&pd, TOL).unwrap();
        assert!((ps.sigma1 - base.sigma1).abs() <= 1e-10);
        for (f, c) in separated(&base) {
            let pc = ps.candidate(&Family::Separated(f.permuted(perm))).unwrap();
            assert!((pc.sigma - c.sigma).abs() <= 1e-10, "{f} {perm:?}");
        }
    }
}

#[test]
fn flat_box_has_small_first_eigenvalue() {
    let s = box_spectrum(&dims(0.01, 1.0, 1.0), TOL).unwrap();
    assert!(s.sigma1 < 0.1, "{}", s.sigma1);
}

#[test]
fn shapes_below_cube() {
    let cube = box_invariant(&BoxDomain::cube()).unwrap();
    let inv = box_invariant(&dims(0.5, 0.75, 1.0)).unwrap();
    assert!(inv > 0.0 && inv < cube);
    let s = box_spectrum(&dims(0.2, 0.9, 1.0), TOL).unwrap();
    assert!(s.sigma1 < 0.5315091);
    let s = box_spectrum(&dims(0.3, 0.7, 1.0), TOL).unwrap();
    assert_eq!(s.eigenspace, [Family::Separated(LONG_AXIS_FAMILY)]);
}

#[test]
fn scaling_and_normalisation() {
    let d = dims(0.6, 1.4, 0.9);
    let inv = box_invariant(&d).unwrap();
    for s in [0.25, 3.0, 17.0] {
        let [a, b, c] = d.half_lengths();
        let scaled = box_invariant(&dims(a * s, b * s, c * s)).unwrap();
        assert!((scaled - inv).abs() <= 1e-10 * inv, "{s}");
    }
    let (n, scale) = d.normalized();
    assert_eq!(scale, 1.4);
    let sn = box_spectrum(&n, TOL).unwrap();
    let so = box_spectrum(&d, TOL).unwrap();
    assert!((sn.sigma1 / scale - so.sigma1).abs() <= 1e-10 * so.sigma1);
}

#[test]
fn linear_families() {
    // λ = 2 with c = 1: b puts −2·tan(2b) = 1 on its first negative branch
    // and a puts 2·tanh(2a) = 1.
    let b = (std::f64::consts::PI - 0.5f64.atan()) / 2.0;
    let a = 0.5f64.atanh() / 2.0;
    let d = dims(a, b, 1.0);
    let lin = LinearFamily {
        parity: Parity::new(0b001).unwrap(),
        linear_axis: Axis::Z,
        trig_axis: Axis::Y,
        hyp_axis: Axis::X,
    };
    let out = solve_linear_family(&lin, &d, 1e-8);
    assert_eq!(out.candidates.len(), 1);
    assert!((out.candidates[0].lambda1 - 2.0).abs() < 1e-12);
    assert_eq!(out.candidates[0].sigma, 1.0);
    let s = box_spectrum(&d, TOL).unwrap();
    assert!(s.candidate(&Family::Linear(lin)).is_some());

    let cube_lin = LinearFamily {
        parity: Parity::new(0b111).unwrap(),
        linear_axis: Axis::X,
        trig_axis: Axis::Z,
        hyp_axis: Axis::Y,
    };
    assert!(solve_linear_family(&cube_lin, &BoxDomain::cube(), 1e-8)
        .candidates
        .is_empty());

    let s = box_spectrum(&dims(0.3, 0.7, 1.0), TOL).unwrap();
    assert!(s
        .candidates
        .iter()
        .all(|c| !matches!(c.family, Family::Linear(_))));
    let linear_notes = s
        .diagnostics
        .iter()
        .filter(|n| matches!(n.family, Family::Linear(_)))
        .count();
    assert_eq!(linear_notes, 24);
    assert!(s
        .diagnostics
        .iter()
        .all(|n| n.message.contains("best residual")));
}

#[test]
fn eigenfunction_values() {
    let s = box_spectrum(&BoxDomain::cube(), TOL).unwrap();
    let first = s.candidate(&s.eigenspace[0]).unwrap();
    assert_eq!(box_eigenfunction_eval(first, [0.0, 0.0, 0.0]), 0.0);
    let v = box_eigenfunction_eval(first, [1.0, 1.0, 1.0]);
    let (l1, l2) = (first.lambda1, first.lambda2);
    assert_eq!(v, l1.cosh() * l2.cosh() * (l1 * l1 + l2 * l2).sqrt().sin());
    let xyz = s.candidate(&Family::Xyz).unwrap();
    assert_eq!(box_eigenfunction_eval(xyz, [1.0, 1.0, 1.0]), 1.0);
    assert_eq!(box_eigenfunction_eval(xyz, [0.5, -1.0, 0.5]), -0.25);
}

#[test]
fn box_sweeps() {
    let rows = sweep_box(&[1.0], &[1.0], TOL);
    assert_eq!(rows.len(), 1);
    let cube = box_spectrum(&BoxDomain::cube(), TOL).unwrap();
    assert_eq!(rows[0].outcome.as_ref().unwrap().sigma1, cube.sigma1);
    let g: Vec<f64> = (1..=5).map(|k| k as f64 / 5.0).collect();
    let rows = sweep_box(&g, &g, TOL);
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().all(|r| r.b >= r.a));
    assert!(box_sweep_row(0.5, 1.5, TOL).outcome.is_err());
}

#[test]
fn invalid_boxes() {
    assert!(BoxDomain::new(0.0, 1.0, 1.0).is_err());
    assert!(BoxDomain::new(1.0, -1.0, 1.0).is_err());
    assert!(BoxDomain::new(1.0, 1.0, f64::INFINITY).is_err());
    assert!(box_spectrum(&BoxDomain::cube(), -1.0).is_err());
}
