use std::f64::consts::PI;

use proptest::prelude::*;
use slag_forge::atiyah_hitchin::{ah_from_spherical, ah_point_from_state, ah_zvx, AHParams, AHSphericalPoint};
use slag_forge::multiplets::{ah_in_contour_oracle, o4_eval, o4_labellings, o4_modulus};
use slag_forge::specfun::{elliptic_k, EllipticData};
use slag_forge::Error;

const GUARD: f64 = 1e-3;

#[test]
fn modulus_range_is_enforced() {
    for k in [0.0, 1.0, 1.2] {
        match AHSphericalPoint::new(k, 1.0, 0.0, 0.0) {
            Err(Error::Domain(msg)) => assert!(msg.contains("(0, 1)"), "{msg}"),
            other => panic!("k = {k}: {other:?}"),
        }
    }
}

#[test]
fn i0_contour_matches_complete_integral() {
    let pt = AHSphericalPoint::new(0.6, 1.2, 0.3, 0.7).unwrap();
    let (z, v, x) = ah_zvx(&pt).unwrap();
    let kk = elliptic_k(pt.k).unwrap();
    let rho = 16.0 * kk * kk;
    let data = EllipticData::new(pt.k, rho).unwrap();
    let mut matched = 0;
    for m in o4_labellings(z, v, x).unwrap() {
        for root in [m.alpha, m.beta] {
            assert!(o4_eval(&m, root).unwrap().norm() < 1e-8 * (1.0 + z.norm() + v.norm() + x.abs()));
        }
        if (o4_modulus(&m) - pt.k).abs() < 1e-8 && (m.rho - rho).abs() < 1e-8 * rho {
            let i0 = ah_in_contour_oracle(&data, &m, 0).unwrap();
            assert!((i0.re - 2.0 * kk / rho.sqrt()).abs() < 1e-8 && i0.im.abs() < 1e-8);
            matched += 1;
        }
    }
    assert!(matched > 0);
}

fn regular_point() -> impl Strategy<Value = AHSphericalPoint> {
    (0.05f64..0.95, 0.05f64..PI - 0.05, 0.0f64..2.0 * PI, 0.0f64..PI)
        .prop_map(|(k, t, f, s)| AHSphericalPoint::new(k, t, f, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn monge_ampere_and_positivity(pt in regular_point()) {
        let p = AHParams::default();
        let s = ah_from_spherical(&pt, &p).unwrap();
        prop_assume!(s.is_regular(GUARD));
        let a = ah_point_from_state(s, &p).unwrap();
        prop_assert!((a.metric.det() - 1.0).norm() < 1e-8);
        prop_assert!(a.metric.is_positive_definite());
        prop_assert!(a.metric.hermiticity_defect() < 1e-10);
    }

    #[test]
    fn roots_straddle_the_middle_root(pt in regular_point()) {
        let s = ah_from_spherical(&pt, &AHParams::default()).unwrap();
        let d = &s.elliptic;
        prop_assert!(s.xplus > d.e2 && s.xplus <= d.e1 * (1.0 + 1e-12));
        prop_assert!(s.xminus >= d.e3 * (1.0 + 1e-12) && s.xminus <= d.e2);
        // Z^2 = 4z
        let a = ah_point_from_state(s, &AHParams::default()).unwrap();
        prop_assert!((a.cap_z * a.cap_z - 4.0 * s.z).norm() < 1e-12 * (1.0 + s.z.norm()));
    }
}
