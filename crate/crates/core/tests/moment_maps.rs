use std::f64::consts::PI;

use num_complex::Complex64 as C;
use proptest::prelude::*;
use slag_forge::atiyah_hitchin::{ah_from_spherical, AHParams, AHSphericalPoint};
use slag_forge::moment_maps::{
    moment_tn_so2, moment_tn_u1, orbit_mu_variation, so3_cotangent_moment, symplecticity_residual,
    verify_hamiltonian, ActionPoint, ActionSpec,
};
use slag_forge::taub_nut::{tn_chart_spherical_to_holo, TNParams, TNSphericalPoint};

fn tn_point() -> impl Strategy<Value = ActionPoint> {
    (0.2f64..20.0, 0.1f64..PI - 0.1, 0.0f64..2.0 * PI, 0.0f64..2.0 * PI, 0.2f64..2.0).prop_map(|(r, t, f, s, m)| {
        let p = TNParams::new(1.0, m).unwrap();
        let h = tn_chart_spherical_to_holo(&TNSphericalPoint::new(r, t, f, s).unwrap(), &p).unwrap();
        ActionPoint::TaubNut(h, p)
    })
}

#[test]
fn moments_in_spherical_terms() {
    let p = TNParams::new(1.0, 1.0).unwrap();
    let (r, t) = (3.0, 0.8);
    let h = tn_chart_spherical_to_holo(&TNSphericalPoint::new(r, t, 0.2, 0.0).unwrap(), &p).unwrap();
    assert!((moment_tn_u1(&h) - 0.5 * r * t.cos()).abs() < 1e-14);
    let z2 = (0.5 * r * t.sin()).powi(2);
    assert!((moment_tn_so2(&h, &p) - (2.0 * r + 2.0 * z2)).abs() < 1e-12);
}

#[test]
fn cotangent_moment_is_angular_momentum() {
    let l = so3_cotangent_moment([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
    assert_eq!(l, [0.0, 0.0, 1.0]);
}

#[test]
fn atiyah_hitchin_is_hamiltonian() {
    let p = AHParams::default();
    for (k, t, f, s) in [(0.3, 1.0, 0.4, 0.2), (0.7, 2.0, 1.1, 1.3), (0.5, 0.6, 5.0, 2.5)] {
        let pt = AHSphericalPoint::new(k, t, f, s).unwrap();
        assert!(ah_from_spherical(&pt, &p).unwrap().is_regular(1e-3));
        let rep = verify_hamiltonian(&ActionSpec::ah_so2(), &ActionPoint::AtiyahHitchin(pt, p), 1e-5).unwrap();
        assert!(rep.residual < 1e-4, "{rep:?}");
    }
}

#[test]
fn bad_step_is_rejected() {
    let p = TNParams::new(1.0, 1.0).unwrap();
    let h = slag_forge::taub_nut::TNHoloPoint::new(C::new(0.1, 0.2), C::new(1.0, 0.0), &p).unwrap();
    assert!(verify_hamiltonian(&ActionSpec::tn_u1(), &ActionPoint::TaubNut(h, p), 0.5).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn taub_nut_actions_are_hamiltonian(pt in tn_point()) {
        for a in [ActionSpec::tn_u1(), ActionSpec::tn_so2()] {
            let rep = verify_hamiltonian(&a, &pt, 1e-5).unwrap();
            prop_assert!(rep.residual < 1e-5, "{:?}", rep);
        }
    }

    #[test]
    fn moment_is_constant_on_orbits(pt in tn_point()) {
        let ActionPoint::TaubNut(h, p) = pt else { unreachable!() };
        for (a, mu) in [(ActionSpec::tn_u1(), moment_tn_u1(&h)), (ActionSpec::tn_so2(), moment_tn_so2(&h, &p))] {
            prop_assert!(orbit_mu_variation(&a, &pt, 20, 0.05).unwrap() < 1e-8 * mu.abs().max(1.0));
        }
    }

    #[test]
    fn flow_is_symplectic(pt in tn_point()) {
        // second differences need a step below the scale |z| on which the metric varies
        let ActionPoint::TaubNut(h, _) = pt else { unreachable!() };
        let step = 1e-3 * h.z.norm().min(1.0);
        prop_assert!(symplecticity_residual(&ActionSpec::tn_so2(), &pt, step).unwrap() < 1e-3);
    }
}
