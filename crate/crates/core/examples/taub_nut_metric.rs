//! Taub-NUT in holomorphic coordinates: the metric block, the Monge-Ampere
//! determinant and the pullback to the familiar spherical line element.

use slag_forge::taub_nut::{
    tn_calabi_yau_residual, tn_chart_holo_to_spherical, tn_chart_spherical_to_holo, tn_metric_holo,
    tn_metric_spherical, tn_pullback_spherical, TNParams, TNSphericalPoint,
};

fn main() -> slag_forge::Result<()> {
    let p = TNParams::new(1.0, 0.7)?;
    let pt = TNSphericalPoint::new(2.5, 1.1, 0.4, 0.9)?;
    let holo = tn_chart_spherical_to_holo(&pt, &p)?;
    println!("u = {:.10}, z = {:.10}", holo.u, holo.z);

    let b = tn_metric_holo(&holo, &p)?;
    println!("K_uubar = {:.12}  K_zzbar = {:.12}  |K_uzbar| = {:.12}", b.kuubar.re, b.kzzbar.re, b.kuzbar.norm());
    println!("|det - 1| = {:.2e}", tn_calabi_yau_residual(&holo, &p)?);

    let back = tn_chart_holo_to_spherical(&holo, &p)?;
    println!("round trip: dr={:.1e} dtheta={:.1e}", back.r - pt.r, back.theta - pt.theta);

    let pulled = tn_pullback_spherical(&pt, &p)?;
    let exact = tn_metric_spherical(&pt, &p);
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((pulled[i][j] - exact[i][j]).abs());
        }
    }
    println!("pullback vs spherical line element: max entry error {worst:.2e}");
    Ok(())
}
