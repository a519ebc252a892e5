use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle;
use super::Lattice;
use crate::scalar::cx;
use crate::tol;

type C64 = Complex<f64>;

pub(crate) fn square() -> Lattice<f64> {
    Lattice::new(cx(0.5, 0.0), cx(0.0, 0.5)).unwrap()
}

pub(crate) fn generic() -> Lattice<f64> {
    Lattice::new(cx(0.53, 0.08), cx(-0.11, 0.62)).unwrap()
}

/// Random lattice with moderate modulus, good for double precision.
pub(crate) fn random_lattice(rng: &mut impl Rng) -> Lattice<f64> {
    let r = 0.7 + 0.6 * rng.gen::<f64>();
    let phi = 0.6 * (rng.gen::<f64>() - 0.5);
    let omega1 = C64::from_polar(r, phi);
    let tau = cx::<f64>(0.8 * (rng.gen::<f64>() - 0.5), 0.6 + 1.2 * rng.gen::<f64>());
    Lattice::new(omega1, omega1 * tau).unwrap()
}

/// Random point staying away from the lattice.
pub(crate) fn random_point(lat: &Lattice<f64>, rng: &mut impl Rng) -> C64 {
    let (p1, p3) = lat.periods();
    loop {
        let a = rng.gen::<f64>() - 0.5;
        let b = rng.gen::<f64>() - 0.5;
        let x = p1 * a + p3 * b;
        if lat.distance_to_lattice(x).unwrap() > 0.05 * lat.scale() {
            return x;
        }
    }
}

#[test]
fn rejects_bad_lattices() {
    assert!(Lattice::<f64>::new(cx(0.0, 0.0), cx(0.0, 0.5)).is_err());
    // Wrong orientation.
    assert!(Lattice::<f64>::new(cx(0.0, 0.5), cx(0.5, 0.0)).is_err());
    assert!(Lattice::<f64>::new(cx(f64::NAN, 0.0), cx(0.0, 0.5)).is_err());
}

#[test]
fn reduce_identity_and_single_step() {
    let lat = generic();
    let r = lat.reduce(cx(0.0, 0.0)).unwrap();
    assert_eq!((r.m, r.n), (0, 0));
    assert_eq!(r.base, cx(0.0, 0.0));

    let r = lat.reduce(lat.omega1() * 2.0).unwrap();
    assert_eq!((r.m, r.n), (1, 0));
    assert!(r.base.norm() < 1e-15);
}

#[test]
fn reduce_round_trip_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let lat = generic();
    for _ in 0..100 {
        let x = cx::<f64>(40.0 * (rng.gen::<f64>() - 0.5), 40.0 * (rng.gen::<f64>() - 0.5));
        let r = lat.reduce(x).unwrap();
        let back = r.base + lat.point(r.m, r.n);
        assert!((back - x).norm() <= 1e-14 * x.norm().max(1.0));
        let (a, b) = lat.coordinates(r.base);
        assert!(a.abs() <= 0.5 + 1e-12 && b.abs() <= 0.5 + 1e-12);
    }
}

#[test]
fn wp_is_even_and_periodic() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for lat in [square(), generic()] {
        for _ in 0..50 {
            let x = random_point(&lat, &mut rng);
            let w = lat.wp(x).unwrap();
            let weven = lat.wp(-x).unwrap();
            assert!((w - weven).norm() < 1e-12 * w.norm().max(1.0));
            let (p1, p3) = lat.periods();
            for p in [p1, p3] {
                let wp = lat.wp(x + p).unwrap();
                assert!((w - wp).norm() < 1e-12 * w.norm().max(1.0));
            }
        }
    }
}

#[test]
fn wp_pole_asymptotics() {
    // |wp(x) - 1/x^2| <= C |x|^2 with the same C at two radii.
    let lat = generic();
    let dir = cx::<f64>(0.6, 0.8);
    let fit_c = |r: f64| {
        let x = dir * r;
        let res = (lat.wp(x).unwrap() - (x * x).inv()).norm();
        res / (x.norm().powi(2))
    };
    let c2 = fit_c(1e-2);
    let c3 = fit_c(1e-3);
    // The constant is g2/20 = O(1); both estimates must agree with it.
    assert!(c2.is_finite() && c3.is_finite());
    assert!((c2 - c3).abs() < 0.05 * c2.max(1e-3), "c2={c2}, c3={c3}");
}

#[test]
fn wp_prime_satisfies_cubic() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for lat in [square(), generic()] {
        let k = lat.constants();
        for _ in 0..50 {
            let x = random_point(&lat, &mut rng);
            let w = lat.wp(x).unwrap();
            let wp = lat.wp_prime(x).unwrap();
            let rhs = (w - k.e1) * (w - k.e2) * (w - k.e3) * 4.0;
            let lhs = wp * wp;
            assert!(
                (lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0),
                "cubic residual {:.3e}",
                (lhs - rhs).norm() / lhs.norm().max(1.0)
            );
        }
    }
}

#[test]
fn wp_prime_vanishes_at_half_periods_and_is_odd() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let lat = generic();
    for hp in [lat.omega1(), lat.omega2(), lat.omega3()] {
        assert!(lat.wp_prime(hp).unwrap().norm() < 1e-10);
    }
    for _ in 0..20 {
        let x = random_point(&lat, &mut rng);
        let a = lat.wp_prime(x).unwrap();
        let b = lat.wp_prime(-x).unwrap();
        assert!((a + b).norm() < 1e-12 * a.norm().max(1.0));
    }
}

#[test]
fn zeta_is_odd_and_quasi_periodic() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for lat in [square(), generic()] {
        let k = lat.constants();
        for _ in 0..50 {
            let x = random_point(&lat, &mut rng);
            let z = lat.zeta(x).unwrap();
            assert!((z + lat.zeta(-x).unwrap()).norm() < 1e-12 * z.norm().max(1.0));
            let (p1, p3) = lat.periods();
            let r1 = lat.zeta(x + p1).unwrap() - z - k.eta1 * 2.0;
            let r3 = lat.zeta(x + p3).unwrap() - z - k.eta3 * 2.0;
            let scale = z.norm().max(1.0);
            assert!(r1.norm() < tol::QUASI_PERIOD * scale);
            assert!(r3.norm() < tol::QUASI_PERIOD * scale);
        }
    }
}

#[test]
fn zeta_derivative_is_minus_wp() {
    let lat = generic();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let h = cx::<f64>(1e-5, 0.0);
    for _ in 0..20 {
        let x = random_point(&lat, &mut rng);
        let d = (lat.zeta(x + h).unwrap() - lat.zeta(x - h).unwrap()) / (h * 2.0);
        let w = lat.wp(x).unwrap();
        assert!((d + w).norm() < tol::FINITE_DIFFERENCE * w.norm().max(1.0));
    }
}

#[test]
fn sigma_zero_oddness_and_normalization() {
    let lat = generic();
    assert_eq!(lat.sigma(cx(0.0, 0.0)).unwrap(), cx(0.0, 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let x = random_point(&lat, &mut rng);
        let s = lat.sigma(x).unwrap();
        assert!((s + lat.sigma(-x).unwrap()).norm() < 1e-12 * s.norm());
    }
    // sigma(x)/x -> 1
    let x = cx::<f64>(1e-4, 0.5e-4);
    let ratio = lat.sigma(x).unwrap() / x;
    assert!((ratio - cx(1.0, 0.0)).norm() < 1e-7);
}

#[test]
fn sigma_monodromy_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for lat in [square(), generic()] {
        let k = lat.constants();
        for _ in 0..50 {
            let x = random_point(&lat, &mut rng);
            let s = lat.sigma(x).unwrap();
            for (p, eta, omega) in [
                (lat.omega1() * 2.0, k.eta1, lat.omega1()),
                (lat.omega3() * 2.0, k.eta3, lat.omega3()),
            ] {
                let lhs = lat.sigma(x + p).unwrap();
                let rhs = -s * ((x + omega) * eta * 2.0).exp();
                assert!(
                    (lhs - rhs).norm() < tol::QUASI_PERIOD * lhs.norm(),
                    "sigma law residual {:.3e}",
                    (lhs - rhs).norm() / lhs.norm()
                );
            }
        }
    }
}

#[test]
fn sigma_log_derivative_is_zeta() {
    let lat = generic();
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let h = cx::<f64>(1e-5, 0.0);
    for _ in 0..20 {
        let x = random_point(&lat, &mut rng);
        let d = (lat.sigma(x + h).unwrap() - lat.sigma(x - h).unwrap()) / (h * 2.0);
        let z = lat.zeta(x).unwrap();
        let s = lat.sigma(x).unwrap();
        assert!((d / s - z).norm() < tol::FINITE_DIFFERENCE * z.norm().max(1.0));
    }
}

#[test]
fn constants_identities_on_random_lattices() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..20 {
        let lat = random_lattice(&mut rng);
        let k = lat.constants();
        let legendre = k.eta1 * lat.omega3() - k.eta3 * lat.omega1()
            - cx::<f64>(0.0, std::f64::consts::FRAC_PI_2);
        assert!(legendre.norm() < tol::CONST_IDENTITY, "legendre {:.3e}", legendre.norm());
        assert!((k.e1 + k.e2 + k.e3).norm() < tol::CONST_IDENTITY);
        assert!((k.eta2 - k.eta1 - k.eta3).norm() < tol::CONST_IDENTITY);
    }
}

#[test]
fn square_lattice_has_vanishing_e2_and_matches_oracle() {
    let lat = square();
    let k = lat.constants();
    assert!(k.e2.norm() < tol::CONST_IDENTITY, "e2 = {}", k.e2);
    // Cross-check e2 = wp(omega2) against the lattice-sum oracle.
    let osum = oracle::wp_lattice_sum(lat.omega1(), lat.omega3(), lat.omega2());
    assert!((osum - k.e2).norm() < tol::ORACLE_AGREEMENT);
}

#[test]
fn nome_series_agrees_with_lattice_sum_oracle_on_grid() {
    for lat in [square(), generic()] {
        let (p1, p3) = lat.periods();
        for i in 0..10 {
            for j in 0..10 {
                let a = (i as f64 + 0.5) / 10.0 - 0.5;
                let b = (j as f64 + 0.5) / 10.0 - 0.5;
                let x = p1 * a + p3 * b;
                if lat.distance_to_lattice(x).unwrap() < 0.1 * lat.scale() {
                    continue;
                }
                let scale = lat.wp(x).unwrap().norm().max(1.0);
                let dwp = (lat.wp(x).unwrap()
                    - oracle::wp_lattice_sum(lat.omega1(), lat.omega3(), x))
                .norm();
                let dwpp = (lat.wp_prime(x).unwrap()
                    - oracle::wp_prime_lattice_sum(lat.omega1(), lat.omega3(), x))
                .norm();
                let dz = (lat.zeta(x).unwrap()
                    - oracle::zeta_lattice_sum(lat.omega1(), lat.omega3(), x))
                .norm();
                assert!(dwp < tol::ORACLE_AGREEMENT * scale, "wp mismatch {dwp:.3e}");
                assert!(dwpp < tol::ORACLE_AGREEMENT * scale.powf(1.5), "wp' mismatch {dwpp:.3e}");
                assert!(dz < tol::ORACLE_AGREEMENT, "zeta mismatch {dz:.3e}");
            }
        }
    }
}

#[test]
fn operations_are_pure() {
    let lat = generic();
    let x = cx::<f64>(0.31, 0.17);
    let a = lat.wp(x).unwrap();
    let b = lat.wp(x).unwrap();
    assert_eq!(a, b);
    let lat2 = Lattice::new(lat.omega1(), lat.omega3()).unwrap();
    assert_eq!(lat2.wp(x).unwrap(), a);
}

#[test]
fn pole_rejection() {
    let lat = generic();
    assert!(matches!(
        lat.wp(cx(0.0, 0.0)),
        Err(crate::error::Error::PoleAtLatticePoint)
    ));
    assert!(matches!(
        lat.zeta(lat.point(1, 0)),
        Err(crate::error::Error::PoleAtLatticePoint)
    ));
    // sigma stays defined on the lattice.
    assert!(lat.sigma(lat.point(1, -2)).unwrap().norm() < 1e-12);
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn reduce_round_trip(re in -20.0f64..20.0, im in -20.0f64..20.0) {
            let lat = generic();
            let x = cx::<f64>(re, im);
            let r = lat.reduce(x).unwrap();
            let back = r.base + lat.point(r.m, r.n);
            prop_assert!((back - x).norm() <= 1e-13 * x.norm().max(1.0));
        }

        #[test]
        fn zeta_quasi_periodicity_holds_everywhere(a in -0.45f64..0.45, b in -0.45f64..0.45) {
            let lat = generic();
            let (p1, p3) = lat.periods();
            let x = p1 * a + p3 * b;
            prop_assume!(lat.distance_to_lattice(x).unwrap() > 0.03 * lat.scale());
            let k = lat.constants();
            let z = lat.zeta(x).unwrap();
            let r = lat.zeta(x + p1 + p3).unwrap() - z - (k.eta1 + k.eta3) * 2.0;
            prop_assert!(r.norm() < 1e-11 * z.norm().max(1.0));
        }
    }
}
