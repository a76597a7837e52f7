use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use slag_forge::slag::{
    tn_so2_curve, tn_so2_radius, tn_u1_case1, tn_u1_case2, trace_zero_set, verify_slag, ImplicitGrid, SO2Branch,
};
use slag_forge::taub_nut::TNParams;
use slag_forge::Error;

fn unit() -> TNParams {
    TNParams::new(1.0, 1.0).unwrap()
}

#[test]
fn case1_passes_tightly() {
    for t in tn_u1_case1(1.0, 0.5, (0.0, 10.0), 1601, unit()).unwrap() {
        let s = verify_slag(&t, 0.0).unwrap().summary;
        assert!(s.worst() < 1e-6, "{} {s:?}", t.branch);
        assert!(s.transversal);
    }
}

#[test]
fn case1_starts_at_the_fold() {
    let traces = tn_u1_case1(1.0, 0.5, (0.0, 10.0), 101, unit()).unwrap();
    let first = traces[0].samples[0];
    assert!((first.a - 2f64.sqrt()).abs() < 1e-15);
    assert!(first.phi.abs() < 1e-12);
}

#[test]
fn perturbed_curve_fails() {
    let t = &tn_u1_case1(1.0, 0.5, (0.0, 10.0), 401, unit()).unwrap()[0];
    let s = verify_slag(&t.perturbed_phi(0.1), 0.0).unwrap().summary;
    assert!(s.im_omega > 1e-2, "{s:?}");
}

#[test]
fn empty_range_is_reported() {
    assert!(matches!(tn_u1_case1(1.0, 0.5, (0.0, 1.0), 101, unit()), Err(Error::EmptyDomain(_))));
}

#[test]
fn so2_equator_radius_is_the_quadratic_root() {
    let p = unit();
    for c1 in 1..=10 {
        let c1 = c1 as f64;
        let exact = p.h * (-2.0 * p.m + (4.0 * p.m * p.m + 2.0 * c1 / p.h).sqrt());
        assert!((tn_so2_radius(c1, FRAC_PI_2, &p).unwrap() - exact).abs() < 1e-12 * exact);
        for t in tn_so2_curve(c1, p, SO2Branch::Plane, 401).unwrap() {
            let mid = t.samples.iter().min_by(|a, b| (a.theta - FRAC_PI_2).abs().total_cmp(&(b.theta - FRAC_PI_2).abs()));
            let mid = mid.unwrap();
            assert!((mid.a - tn_so2_radius(c1, mid.theta, &p).unwrap()).abs() < 1e-12 * exact);
        }
    }
}

#[test]
fn so2_axis_branch_has_vanishing_residual() {
    for t in tn_so2_curve(2.0, unit(), SO2Branch::Axis, 201).unwrap() {
        let s = verify_slag(&t, 0.0).unwrap().summary;
        assert!(s.worst() < 1e-8, "{s:?}");
        assert!(s.degenerate);
    }
}

#[test]
fn case2_family_passes() {
    for c in 1..=5 {
        for t in tn_u1_case2(c as f64, 1.0, (0.0, 0.01f64.acos()), 801, unit()).unwrap() {
            let s = verify_slag(&t, 0.0).unwrap().summary;
            assert!(s.passes(t.threshold()), "c = {c} {s:?}");
        }
    }
}

#[test]
fn marching_squares_finds_a_circle() {
    let grid = ImplicitGrid::new(-1.0, 1.0, -1.0, 1.0, 64).unwrap();
    let f = |x: f64, y: f64| x * x + y * y - 0.25;
    let lines = trace_zero_set(&grid, &f, 1e-12);
    assert_eq!(lines.len(), 1);
    assert!(lines[0].closed);
    for &(x, y) in &lines[0].points {
        assert!((x.hypot(y) - 0.5).abs() < 1e-10);
    }
}

#[test]
fn zero_set_order_is_deterministic() {
    let grid = ImplicitGrid::new(0.0, 2.0 * PI, 0.0, PI, 96).unwrap();
    let f = |x: f64, y: f64| x.sin() * y.cos() - 0.3;
    let a = trace_zero_set(&grid, &f, 1e-10);
    let b = trace_zero_set(&grid, &f, 1e-10);
    assert_eq!(a, b);
    for w in a.windows(2) {
        let (p, q) = (w[0].points[0], w[1].points[0]);
        assert!(p.0 < q.0 || (p.0 == q.0 && p.1 <= q.1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    // for c2 << c1 the fold sits next to the axis and needs far more samples
    fn case1_level_sets_hold(c1 in 0.2f64..5.0, ratio in 0.1f64..2.0, m in 0.2f64..2.0) {
        let p = TNParams::new(1.0, m).unwrap();
        let c2 = ratio * c1;
        let r0 = (c1 * c1 + 4.0 * c2 * c2).sqrt();
        for t in tn_u1_case1(c1, c2, (0.0, 10.0 * r0), 1601, p).unwrap() {
            let s = verify_slag(&t, 0.0).unwrap().summary;
            prop_assert!(s.passes(t.threshold()), "{:?}", s);
            prop_assert!(s.mu < 1e-6 * (0.5 * c1).abs().max(1.0));
        }
    }

    #[test]
    fn so2_plane_curves_pass(c1 in 0.3f64..20.0, m in 0.2f64..2.0) {
        let p = TNParams::new(1.0, m).unwrap();
        for t in tn_so2_curve(c1, p, SO2Branch::Plane, 801).unwrap() {
            let s = verify_slag(&t, 0.0).unwrap().summary;
            prop_assert!(s.passes(t.threshold()), "{:?}", s);
        }
    }
}
