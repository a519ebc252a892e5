use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::elliptic::tests::{generic, random_point, square};
use crate::quadrature;
use crate::scalar::cx;

type C64 = Complex<f64>;

fn generic_spec() -> BakerSpec<f64> {
    let lat = generic();
    BakerSpec::new(cx(0.21, 0.33), lat).unwrap()
}

#[test]
fn pole_normalization_at_origin() {
    let spec = generic_spec();
    let x = cx::<f64>(1e-5, 0.7e-5);
    let v = baker_eval(&spec, x).unwrap();
    assert!((v * x - cx(1.0, 0.0)).norm() < 1e-8);
}

#[test]
fn monodromy_formula_matches_translation_ratios() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for lat in [square(), generic()] {
        for _ in 0..10 {
            let alpha = random_point(&lat, &mut rng);
            let spec = BakerSpec::new(alpha, lat.clone()).unwrap();
            let h = baker_monodromy(&spec).unwrap();
            let x = random_point(&lat, &mut rng);
            let v = baker_eval(&spec, x).unwrap();
            let (p1, p3) = lat.periods();
            let r1 = baker_eval(&spec, x + p1).unwrap() / v;
            let r3 = baker_eval(&spec, x + p3).unwrap() / v;
            assert!((r1 - h.h1).norm() < tol::BAKER_MONODROMY * h.h1.norm());
            assert!((r3 - h.h3).norm() < tol::BAKER_MONODROMY * h.h3.norm());
        }
    }
}

#[test]
fn half_period_points_have_sign_monodromy() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for lat in [square(), generic()] {
        for k in 1..=3usize {
            let spec = half_period_spec(&lat, k).unwrap();
            let h = baker_monodromy(&spec).unwrap();
            let expect1 = cx::<f64>(half_period_sign(k, 1), 0.0);
            let expect3 = cx::<f64>(half_period_sign(k, 3), 0.0);
            assert!((h.h1 - expect1).norm() < tol::BAKER_MONODROMY, "k={k} h1={}", h.h1);
            assert!((h.h3 - expect3).norm() < tol::BAKER_MONODROMY, "k={k} h3={}", h.h3);
            // And the translation ratio itself lands on the same sign.
            let x = random_point(&lat, &mut rng);
            let (p1, _) = lat.periods();
            let ratio = baker_eval(&spec, x + p1).unwrap() / baker_eval(&spec, x).unwrap();
            assert!((ratio - expect1).norm() < tol::BAKER_MONODROMY);
        }
    }
}

#[test]
fn monodromy_reciprocity_under_alpha_negation() {
    let lat = generic();
    let alpha = cx::<f64>(0.27, 0.41);
    let plus = baker_monodromy(&BakerSpec::new(alpha, lat.clone()).unwrap()).unwrap();
    let minus = baker_monodromy(&BakerSpec::new(-alpha, lat).unwrap()).unwrap();
    assert!((plus.h1 * minus.h1 - cx(1.0, 0.0)).norm() < tol::BAKER_MONODROMY);
    assert!((plus.h3 * minus.h3 - cx(1.0, 0.0)).norm() < tol::BAKER_MONODROMY);
}

#[test]
fn laurent_coefficients_analytic_and_by_contour() {
    let spec = generic_spec();
    let (cm1, c0, c1, c2) = baker_laurent(&spec).unwrap();
    assert_eq!(cm1, cx(1.0, 0.0));
    assert_eq!(c0, cx(0.0, 0.0));

    let f = |z: C64| baker_eval(&spec, z);
    let radius = 1e-2 * spec.lat.scale();
    let got_m1 = quadrature::laurent_coefficient(&f, cx(0.0, 0.0), -1, radius).unwrap();
    let got_0 = quadrature::laurent_coefficient(&f, cx(0.0, 0.0), 0, radius).unwrap();
    let got_1 = quadrature::laurent_coefficient(&f, cx(0.0, 0.0), 1, radius).unwrap();
    let got_2 = quadrature::laurent_coefficient(&f, cx(0.0, 0.0), 2, radius).unwrap();
    assert!((got_m1 - cm1).norm() < 1e-9);
    assert!(got_0.norm() < 1e-9);
    assert!((got_1 - c1).norm() < tol::LAURENT_EXTRACTION);
    assert!((got_2 - c2).norm() < tol::LAURENT_EXTRACTION);
}

#[test]
fn hill_equation_residual_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let lat = generic();
    for alpha in [cx(0.21, 0.33), lat.omega1()] {
        let spec = BakerSpec::new(alpha, lat.clone()).unwrap();
        for _ in 0..100 {
            let x = random_point(&lat, &mut rng);
            if lat.distance_to_lattice(x).unwrap() < 5e-2 {
                continue;
            }
            let r = hill_residual(&spec, x).unwrap();
            assert!(r < tol::HILL_RESIDUAL, "residual {r:.3e} at {x}");
        }
    }
}

#[test]
fn hill_residual_shows_fourth_order_convergence() {
    let lat = generic();
    let spec = BakerSpec::new(cx(0.21, 0.33), lat.clone()).unwrap();
    // A point comfortably away from the poles, in the truncation regime.
    let x = lat.omega1() * 0.52 + lat.omega3() * 0.46;
    let r1 = hill_residual_with_step(&spec, x, 5e-3).unwrap();
    let r2 = hill_residual_with_step(&spec, x, 1e-2).unwrap();
    let ratio = r2 / r1;
    assert!(
        (10.0..=24.0).contains(&ratio),
        "expected ~16x for step doubling, got {ratio:.2} ({r1:.3e} -> {r2:.3e})"
    );
}

fn random_multiplier(lat: &crate::elliptic::Lattice<f64>, rng: &mut impl Rng) -> Multiplier<f64> {
    let (p1, p3) = lat.periods();
    let l1 = cx::<f64>(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5) * 2.0;
    let l3 = cx::<f64>(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5) * 2.0;
    Multiplier::new(l1.exp(), l3.exp(), p1, p3)
}

#[test]
fn multiplier_basis_has_requested_multiplier_and_unit_residues() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let lat = generic();
    let ends = [cx::<f64>(0.0, 0.0), lat.omega2()];
    for _ in 0..5 {
        let h = random_multiplier(&lat, &mut rng);
        let basis = multiplier_basis(&h, &ends, &lat).unwrap();
        assert_eq!(basis.len(), 2);
        for f in &basis {
            let x = random_point(&lat, &mut rng);
            let v = f.eval(x).unwrap();
            let r1 = f.eval(x + h.gamma1).unwrap() / v;
            let r3 = f.eval(x + h.gamma3).unwrap() / v;
            assert!((r1 - h.h1).norm() < tol::BASIS_MULTIPLIER * h.h1.norm());
            assert!((r3 - h.h3).norm() < tol::BASIS_MULTIPLIER * h.h3.norm());
            // Residue 1 at the function's own pole.
            let p = f.pole().unwrap();
            let res = quadrature::contour_residue(&|z| f.eval(z), p, 1e-2 * lat.scale()).unwrap();
            assert!((res - cx(1.0, 0.0)).norm() < 1e-9, "residue {res}");
        }
        assert!(spanning_ratio(&basis, &lat).unwrap() > 1e-6);
    }
}

#[test]
fn multiplier_basis_spans_half_period_baker_translates() {
    // For the sign multiplier (-1, -1) on the two ends {0, w2} the span
    // must contain the Baker function at the half period w2 and its
    // translate by w2.
    let lat = generic();
    let ends = [cx::<f64>(0.0, 0.0), lat.omega2()];
    let spec = half_period_spec(&lat, 2).unwrap();
    let h = baker_monodromy(&spec).unwrap();
    let basis = multiplier_basis(&h, &ends, &lat).unwrap();

    let shifted = lat.omega2();
    let spec2 = spec.clone();
    let targets: [Box<dyn Fn(C64) -> crate::Result<C64> + '_>; 2] = [
        Box::new(|x: C64| baker_eval(&spec, x)),
        Box::new(move |x: C64| baker_eval(&spec2, x - shifted)),
    ];
    for target in targets {
        // Least-squares fit of the target in the basis span at probe points.
        let (p1, p3) = lat.periods();
        let probes: Vec<C64> = [(0.13, 0.22), (0.41, 0.09), (0.27, 0.39), (0.08, 0.45)]
            .iter()
            .map(|(a, b)| p1 * *a + p3 * *b)
            .collect();
        let mut a = crate::linalg::CMat::<f64>::zeros(probes.len(), 2);
        let mut rhs = Vec::new();
        for (r, x) in probes.iter().enumerate() {
            for (c, f) in basis.iter().enumerate() {
                a.set(r, c, f.eval(*x).unwrap());
            }
            rhs.push(target(*x).unwrap());
        }
        // Normal equations A^H A c = A^H b.
        let mut g = [[cx::<f64>(0.0, 0.0); 2]; 2];
        let mut v = [cx::<f64>(0.0, 0.0); 2];
        for i in 0..2 {
            for j in 0..2 {
                for r in 0..probes.len() {
                    g[i][j] += a.at(r, i).conj() * a.at(r, j);
                }
            }
            for r in 0..probes.len() {
                v[i] += a.at(r, i).conj() * rhs[r];
            }
        }
        let (c0, c1) = crate::linalg::solve2(g[0][0], g[0][1], g[1][0], g[1][1], v[0], v[1]);
        // Check the fit at an independent point.
        let x = p1 * 0.33 + p3 * 0.18;
        let fit = basis[0].eval(x).unwrap() * c0 + basis[1].eval(x).unwrap() * c1;
        let want = target(x).unwrap();
        assert!(
            (fit - want).norm() < 1e-9 * want.norm().max(1.0),
            "projection residual {:.3e}",
            (fit - want).norm()
        );
    }
}

#[test]
fn multiplier_basis_rejects_trivial_and_degenerate() {
    let lat = generic();
    let (p1, p3) = lat.periods();
    let ends = [cx::<f64>(0.0, 0.0), lat.omega2()];
    let trivial = Multiplier::new(cx(1.0, 0.0), cx(1.0, 0.0), p1, p3);
    assert!(matches!(
        multiplier_basis(&trivial, &ends, &lat),
        Err(Error::TrivialMultiplier)
    ));
    let wrong_gen = Multiplier::new(cx(2.0, 0.0), cx(3.0, 0.0), p1 * 2.0, p3 * 2.0);
    assert!(matches!(
        multiplier_basis(&wrong_gen, &ends, &lat),
        Err(Error::MismatchedGenerators)
    ));
    // A multiplier of the pure form h_j = exp(c * period_j) solves to
    // alpha = 0 on the lattice.
    let c = cx::<f64>(0.3, 0.2);
    let degenerate = Multiplier::new((c * p1).exp(), (c * p3).exp(), p1, p3);
    assert!(matches!(
        multiplier_basis(&degenerate, &ends, &lat),
        Err(Error::DegenerateAlpha)
    ));
}

#[test]
fn zeta_difference_basis_is_elliptic_with_unit_residues() {
    let lat = generic();
    let p = lat.omega1() * 0.62 + lat.omega3() * 0.34;
    let ends = [cx::<f64>(0.0, 0.0), p];
    let basis = zeta_difference_basis(&ends, &lat);
    assert_eq!(basis.len(), 2);
    let f = &basis[0];
    let x = lat.omega1() * 0.31 + lat.omega3() * 0.52;
    let v = f.eval(x).unwrap();
    let (p1, p3) = lat.periods();
    assert!((f.eval(x + p1).unwrap() - v).norm() < 1e-12 * v.norm().max(1.0));
    assert!((f.eval(x + p3).unwrap() - v).norm() < 1e-12 * v.norm().max(1.0));
    let r0 = quadrature::contour_residue(&|z| f.eval(z), cx(0.0, 0.0), 1e-2).unwrap();
    let rp = quadrature::contour_residue(&|z| f.eval(z), p, 1e-2).unwrap();
    assert!((r0 - cx(1.0, 0.0)).norm() < 1e-9);
    assert!((rp + cx(1.0, 0.0)).norm() < 1e-9);
    // Order zero of zeta(x) - zeta(x-p) at 0 is -zeta(-p) = zeta(p), so the
    // admissible combinations a*f + b satisfy a*zeta(p) + b = 0.
    let a0 = f.order_zero_at_own_pole().unwrap();
    assert!((a0 - lat.zeta(p).unwrap()).norm() < 1e-12 * a0.norm().max(1.0));
}

#[test]
fn additive_monodromy_constant() {
    let lat = generic();
    let (p1, p3) = lat.periods();
    // a_gamma = 0 gives b = 0.
    let h = Multiplier::new(cx(2.0, 0.0), cx(3.0, 0.0), p1, p3);
    assert_eq!(
        fix_additive_monodromy(cx(0.0, 0.0), cx(0.0, 0.0), &h).unwrap(),
        cx(0.0, 0.0)
    );
    // h1 = 2, a1 = 1 forces b = 1 when a3 is compatible: a3 = a1(h3-1)/(h1-1).
    let b = fix_additive_monodromy(cx(1.0, 0.0), cx(2.0, 0.0), &h).unwrap();
    assert!((b - cx(1.0, 0.0)).norm() < 1e-12);
    assert!(matches!(
        fix_additive_monodromy(cx(1.0, 0.0), cx(7.0, 0.0), &h),
        Err(Error::InconsistentPeriods { .. })
    ));
    let trivial = Multiplier::new(cx(1.0, 0.0), cx(1.0, 0.0), p1, p3);
    assert!(matches!(
        fix_additive_monodromy(cx(0.0, 0.0), cx(0.0, 0.0), &trivial),
        Err(Error::TrivialMultiplier)
    ));
}

#[test]
fn additive_monodromy_round_trip_with_quadrature() {
    // Integrate d(Phi) numerically with a deliberate constant offset and
    // recover Phi through the unique monodromy-fixing constant.
    let lat = generic();
    let spec = BakerSpec::new(cx(0.21, 0.33), lat.clone()).unwrap();
    let h = baker_monodromy(&spec).unwrap();
    let (p1, p3) = lat.periods();
    let x0 = p1 * 0.31 + p3 * 0.27;

    let derivative = |z: C64| -> crate::Result<C64> {
        let phi = baker_eval(&spec, z)?;
        let za = lat.zeta(spec.alpha)?;
        Ok(phi * (za - lat.zeta(z)? - lat.zeta(spec.alpha - z)?))
    };
    let v0 = baker_eval(&spec, x0).unwrap() + cx(1.0, 0.0);

    let int1 = quadrature::segment(&derivative, x0, x0 + p1, 24).unwrap();
    let int3 = quadrature::segment(&derivative, x0, x0 + p3, 24).unwrap();
    let a1 = (v0 + int1) - v0 * h.h1;
    let a3 = (v0 + int3) - v0 * h.h3;
    let b = fix_additive_monodromy(a1, a3, &h).unwrap();
    assert!((b + cx(1.0, 0.0)).norm() < 1e-8, "b = {b}");

    let x1 = x0 + p1 * 0.23 + p3 * 0.11;
    let f_x1 = v0 + quadrature::segment(&derivative, x0, x1, 24).unwrap() + b;
    let want = baker_eval(&spec, x1).unwrap();
    assert!((f_x1 - want).norm() < 1e-8 * want.norm().max(1.0));
}
