//! Atiyah-Hitchin from spherical coordinates (k, theta, phi, psi): the curve
//! data, the Kahler potential and the (U, Z) metric block.

use slag_forge::atiyah_hitchin::{ah_kahler_potential, ah_point, AHParams, AHSphericalPoint};

fn main() -> slag_forge::Result<()> {
    let p = AHParams::new(1.0, 1)?;
    println!("{:>5} {:>12} {:>12} {:>14} {:>10}", "k", "x+", "x-", "K", "|det-1|");
    for k in [0.2, 0.4, 0.6, 0.8, 0.95] {
        let pt = AHSphericalPoint::new(k, 1.0, 0.5, 0.3)?;
        let a = ah_point(&pt, &p)?;
        let det = (a.metric.det() - 1.0).norm();
        println!(
            "{k:>5} {:>12.6} {:>12.6} {:>14.8} {det:>10.2e}",
            a.state.xplus,
            a.state.xminus,
            ah_kahler_potential(&a.state)
        );
    }
    let a = ah_point(&AHSphericalPoint::new(0.5, 1.0, 0.5, 0.3)?, &p)?;
    println!("U = {:.10}, Z = {:.10}, mu = {:.10}", a.cap_u, a.cap_z, a.mu);
    println!("metric positive definite: {}", a.metric.is_positive_definite());
    Ok(())
}
