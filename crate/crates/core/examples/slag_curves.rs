//! Special Lagrangian curves on both manifolds, checked by verify_slag.
//! The Taub-NUT families pass; the Atiyah-Hitchin ones are Lagrangian but
//! their Im Omega residual is of order one.

use slag_forge::atiyah_hitchin::AHParams;
use slag_forge::slag::{ah_trace_theta_phi, tn_so2_curve, tn_u1_case1, verify_slag, CurveTrace, SO2Branch, SinSign};
use slag_forge::taub_nut::TNParams;

fn report(traces: &[CurveTrace]) -> slag_forge::Result<()> {
    for t in traces {
        let s = verify_slag(t, 0.0)?.summary;
        println!(
            "{:<14} {:<4} n={:<5} omega={:.1e} imOmega={:.1e} mu={:.1e} {}",
            t.family,
            t.branch,
            t.samples.len(),
            s.omega,
            s.im_omega,
            s.mu,
            if s.passes(t.threshold()) { "pass" } else { "fail" }
        );
    }
    Ok(())
}

fn main() -> slag_forge::Result<()> {
    let p = TNParams::new(1.0, 1.0)?;
    report(&tn_u1_case1(1.0, 0.5, (0.0, 10.0), 801, p)?)?;
    report(&tn_so2_curve(3.0, p, SO2Branch::Plane, 801)?)?;

    let traces = ah_trace_theta_phi(0.5, -5.0, SinSign::Plus, AHParams::new(1.0, 1)?, 128)?;
    report(&traces[..traces.len().min(2)])?;
    Ok(())
}
