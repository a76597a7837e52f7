use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;
use slag_forge::specfun::{
    elliptic_e, elliptic_k, eta1_closed, eta1_quadrature, jacobi_sn, omega1_quadrature, weierstrass_p,
    weierstrass_p_shifted, EllipticData,
};
use slag_forge::Error;

// A&S table 17.1 at m = k^2 = 0.5
#[test]
fn k_and_e_at_m_one_half() {
    let k = 0.5f64.sqrt();
    assert!((elliptic_k(k).unwrap() - 1.854_074_677_301_372).abs() < 1e-14);
    assert!((elliptic_e(k).unwrap() - 1.350_643_881_047_675).abs() < 1e-14);
}

#[test]
fn modulus_outside_unit_interval_is_rejected() {
    for k in [1.0, 1.5, -0.2, f64::NAN] {
        assert!(matches!(elliptic_k(k), Err(Error::Domain(_))), "k = {k}");
    }
    assert!(matches!(EllipticData::new(0.5, 0.0), Err(Error::Domain(_))));
}

#[test]
fn p_has_a_pole_on_the_lattice() {
    let d = EllipticData::new(0.4, 1.0).unwrap();
    assert!(matches!(weierstrass_p(2.0 * d.omega1, &d), Err(Error::Pole(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn legendre_relation(k in 0.01f64..0.99) {
        let kp = (1.0 - k * k).sqrt();
        let lhs = elliptic_e(k).unwrap() * elliptic_k(kp).unwrap() + elliptic_e(kp).unwrap() * elliptic_k(k).unwrap()
            - elliptic_k(k).unwrap() * elliptic_k(kp).unwrap();
        prop_assert!((lhs - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn sn_is_bounded_and_odd(u in -10.0f64..10.0, k in 0.0f64..0.99) {
        let s = jacobi_sn(u, k).unwrap();
        prop_assert!(s.abs() <= 1.0 + 1e-15);
        prop_assert!((s + jacobi_sn(-u, k).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn roots_sum_to_zero_and_are_ordered(k in 0.02f64..0.98, rho in 0.1f64..10.0) {
        let d = EllipticData::new(k, rho).unwrap();
        prop_assert!(d.e1 > d.e2 && d.e2 > d.e3);
        prop_assert!((d.e1 + d.e2 + d.e3).abs() < 1e-13 * rho);
    }

    #[test]
    fn p_takes_the_root_values_at_half_periods(k in 0.02f64..0.98, rho in 0.1f64..10.0) {
        let d = EllipticData::new(k, rho).unwrap();
        prop_assert!((weierstrass_p(d.omega1, &d).unwrap() - d.e1).abs() < 1e-10 * rho);
        prop_assert!((weierstrass_p_shifted(d.omega1, &d).unwrap() - d.e2).abs() < 1e-10 * rho);
        prop_assert!((weierstrass_p_shifted(0.0, &d).unwrap() - d.e3).abs() < 1e-10 * rho);
    }

    #[test]
    fn p_is_even_and_periodic(k in 0.05f64..0.95, s in 0.05f64..0.95) {
        let d = EllipticData::new(k, 1.0).unwrap();
        let u = s * d.omega1;
        let p = weierstrass_p(u, &d).unwrap();
        prop_assert!((weierstrass_p(-u, &d).unwrap() - p).abs() < 1e-10 * p.abs().max(1.0));
        prop_assert!((weierstrass_p(u + 2.0 * d.omega1, &d).unwrap() - p).abs() < 1e-9 * p.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn periods_match_quadrature(k in 0.05f64..0.95, rho in 0.2f64..5.0) {
        let d = EllipticData::new(k, rho).unwrap();
        prop_assert!((omega1_quadrature(&d).unwrap() - d.omega1).abs() < 1e-10 * d.omega1);
        let eta = eta1_closed(k, rho).unwrap();
        prop_assert!((eta1_quadrature(&d).unwrap() - eta).abs() < 1e-9 * eta.abs().max(1.0));
    }
}
