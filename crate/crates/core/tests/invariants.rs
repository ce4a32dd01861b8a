use nlse_forge::lossgain::{eta_metric, p1_closed_form, p1_definition, p1_factor, u_matrix};
use nlse_forge::specfun::{complete_elliptic_k, erf, erfc, jacobi_elliptic};
use nlse_forge::{AmplitudeVector, Complex, CouplingConfig, EllipticModulus, Mu0Family};
use proptest::prelude::*;

fn coupling(gamma: f64, beta: f64, theta3: f64) -> CouplingConfig {
    CouplingConfig::new(gamma, beta, theta3, Mu0Family::Constant(1.0)).unwrap()
}

fn amplitude() -> impl Strategy<Value = AmplitudeVector> {
    (0.1f64..2.0, 0.1f64..2.0, -3.0f64..3.0, -3.0f64..3.0)
        .prop_map(|(w1, w2, a, b)| AmplitudeVector::new(w1, w2, a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn transform_has_unit_determinant(g in 0.0f64..1.5, b in 0.0f64..1.5, th in -3.0f64..3.0, t in -20.0f64..20.0) {
        let u = u_matrix(&coupling(g, b, th), t).unwrap();
        prop_assert!((u.det() - Complex::new(1.0, 0.0)).norm() < 1e-9 * (1.0 + u.norm().powi(2)));
    }

    #[test]
    fn power_closed_form_matches_matrix(g in 0.0f64..1.0, extra in 0.05f64..1.0, th in -3.0f64..3.0,
                                        w in amplitude(), t in 0.0f64..30.0) {
        let c = coupling(g, g + extra, th);
        let a = p1_closed_form(&c, &w, t).unwrap();
        let d = p1_definition(&c, &w, t).unwrap();
        prop_assert!((a - d).abs() < 1e-10 * (1.0 + d), "{a} vs {d}");
    }

    #[test]
    fn power_factor_is_non_negative(g in 0.0f64..1.5, b in 0.0f64..1.5, w in amplitude(), t in 0.0f64..10.0) {
        prop_assert!(p1_factor(&coupling(g, b, 1.0), &w, t).unwrap() >= -1e-12);
    }

    #[test]
    fn metric_is_preserved(g in 0.0f64..1.0, extra in 0.05f64..1.0, th in -3.0f64..3.0, t in -10.0f64..10.0) {
        let c = coupling(g, g + extra, th);
        let eta = eta_metric(&c).unwrap();
        let u = u_matrix(&c, t).unwrap();
        let moved = u.adjoint() * eta * u;
        prop_assert!(moved.max_abs_diff(&eta) < 1e-10 * (1.0 + u.norm().powi(2)));
    }

    #[test]
    fn jacobi_identities(u in -60.0f64..60.0, m in 0.0f64..=1.0) {
        let j = jacobi_elliptic(u, EllipticModulus::new(m).unwrap()).unwrap();
        prop_assert!((j.sn * j.sn + j.cn * j.cn - 1.0).abs() < 1e-14);
        prop_assert!((j.dn * j.dn + m * j.sn * j.sn - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_real_period(u in -5.0f64..5.0, m in 0.0f64..0.95) {
        let k = EllipticModulus::new(m).unwrap();
        let p = 4.0 * complete_elliptic_k(k);
        let a = jacobi_elliptic(u, k).unwrap();
        let b = jacobi_elliptic(u + p, k).unwrap();
        prop_assert!((a.sn - b.sn).abs() < 1e-12 && (a.cn - b.cn).abs() < 1e-12 && (a.dn - b.dn).abs() < 1e-12);
    }

    #[test]
    fn quarter_period_is_a_maximum(m in 0.0f64..0.999) {
        let k = EllipticModulus::new(m).unwrap();
        let j = jacobi_elliptic(complete_elliptic_k(k), k).unwrap();
        prop_assert!((j.sn - 1.0).abs() < 1e-12);
        prop_assert!((j.dn - (1.0 - m).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn erf_is_odd_and_complementary(x in -8.0f64..8.0) {
        prop_assert!((erf(x) + erf(-x)).abs() < 1e-15);
        prop_assert!((erf(x) + erfc(x) - 1.0).abs() < 1e-15);
        prop_assert!(erf(x).abs() <= 1.0);
    }

    #[test]
    fn complete_integral_increases(m in 0.0f64..0.99, dm in 1e-4f64..0.009) {
        let a = complete_elliptic_k(EllipticModulus::new(m).unwrap());
        let b = complete_elliptic_k(EllipticModulus::new(m + dm).unwrap());
        prop_assert!(b > a && a >= std::f64::consts::FRAC_PI_2 - 1e-15);
    }
}
