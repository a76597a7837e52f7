use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C;
use proptest::prelude::*;
use slag_forge::multiplets::{o2_roots, tn_fxx_contour_oracle, O2Multiplet};
use slag_forge::taub_nut::{
    tn_calabi_yau_residual, tn_chart_holo_to_spherical, tn_chart_spherical_to_holo, tn_metric_holo,
    tn_metric_spherical, tn_pullback_spherical, tn_re_u, tn_solve_x, TNHoloPoint, TNParams, TNSphericalPoint,
};
use slag_forge::Error;

#[test]
fn equator_point_has_closed_form_block() {
    let p = TNParams::new(1.0, 1.0).unwrap();
    let pt = TNSphericalPoint::new(2.0, FRAC_PI_2, 0.0, 0.0).unwrap();
    let h = tn_chart_spherical_to_holo(&pt, &p).unwrap();
    assert!(h.u.norm() < 1e-15);
    let b = tn_metric_holo(&h, &p).unwrap();
    // V = 2 at r = 2
    assert!((b.kuubar.re - 0.25).abs() < 1e-15);
    assert!((b.kzzbar.re - 4.0).abs() < 1e-14);
}

#[test]
fn psi_sets_imaginary_part_of_u() {
    let p = TNParams::new(1.0, 0.5).unwrap();
    let h = tn_chart_spherical_to_holo(&TNSphericalPoint::new(1.0, 1.0, 0.0, PI).unwrap(), &p).unwrap();
    assert!((h.u.im + 2.0 * 0.5 * PI).abs() < 1e-15);
}

#[test]
fn solver_inverts_at_zero() {
    let p = TNParams::new(1.0, 1.0).unwrap();
    assert!(tn_solve_x(0.0, 0.7, &p).unwrap().abs() < 1e-14);
}

#[test]
fn axis_is_outside_the_chart() {
    let p = TNParams::new(1.0, 1.0).unwrap();
    let pt = TNSphericalPoint::new(1.0, 0.0, 0.0, 0.0).unwrap();
    assert!(matches!(tn_chart_spherical_to_holo(&pt, &p), Err(Error::Chart(_))));
    assert!(TNParams::new(0.0, 1.0).is_err());
}

#[test]
fn o2_roots_are_antipodal() {
    let eta = O2Multiplet::new(C::new(0.3, -0.4), 1.2);
    let (zp, zm) = o2_roots(&eta).unwrap();
    assert!((zm + 1.0 / zp.conj()).norm() < 1e-14);
}

#[test]
fn fxx_contour_matches_potential() {
    for (z, x, h, m) in [(C::new(0.5, 0.5), 0.2, 1.0, 1.0), (C::new(-1.0, 0.3), -1.5, 2.0, 0.5)] {
        let eta = O2Multiplet::new(z, x);
        let exact = -2.0 * (1.0 / h + 2.0 * m / eta.r());
        let got = tn_fxx_contour_oracle(&eta, h, m).unwrap();
        assert!(((got - exact) / exact).abs() < 1e-5, "{got} vs {exact}");
    }
}

fn point() -> impl Strategy<Value = (TNSphericalPoint, TNParams)> {
    (0.05f64..50.0, 0.05f64..PI - 0.05, 0.0f64..2.0 * PI, 0.0f64..2.0 * PI, 0.5f64..2.0, 0.1f64..2.0).prop_map(
        |(r, th, ph, ps, h, m)| (TNSphericalPoint::new(r, th, ph, ps).unwrap(), TNParams::new(h, m).unwrap()),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn monge_ampere((pt, p) in point()) {
        let h = tn_chart_spherical_to_holo(&pt, &p).unwrap();
        prop_assert!(tn_calabi_yau_residual(&h, &p).unwrap() < 1e-10);
        let b = tn_metric_holo(&h, &p).unwrap();
        prop_assert!(b.is_positive_definite());
        prop_assert!(b.hermiticity_defect() < 1e-14);
    }

    #[test]
    fn chart_round_trip((pt, p) in point()) {
        let h = tn_chart_spherical_to_holo(&pt, &p).unwrap();
        let back = tn_chart_holo_to_spherical(&h, &p).unwrap();
        let again = TNHoloPoint::new(h.u, h.z, &p).unwrap();
        prop_assert!((back.r - pt.r).abs() < 1e-9 * pt.r);
        prop_assert!((back.theta - pt.theta).abs() < 1e-9);
        prop_assert!((again.x - h.x).abs() < 1e-9 * pt.r);
    }

    #[test]
    fn re_u_is_inverted(x in -20.0f64..20.0, a in 0.01f64..10.0, m in 0.1f64..2.0) {
        let p = TNParams::new(1.0, m).unwrap();
        let got = tn_solve_x(tn_re_u(x, a, &p), a, &p).unwrap();
        prop_assert!((got - x).abs() < 1e-9 * x.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn pullback_is_the_spherical_line_element((pt, _) in point(), m in 0.2f64..2.0) {
        let p = TNParams::new(1.0, m).unwrap();
        let a = tn_pullback_spherical(&pt, &p).unwrap();
        let b = tn_metric_spherical(&pt, &p);
        let scale = b.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
        for i in 0..4 {
            for j in 0..4 {
                prop_assert!((a[i][j] - b[i][j]).abs() < 1e-8 * scale);
            }
        }
    }
}
