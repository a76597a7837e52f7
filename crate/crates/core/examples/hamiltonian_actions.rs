//! The U(1) and SO(2) actions and their moment maps: i_X omega = d mu, and mu
//! constant along orbits.

use num_complex::Complex64 as C;
use slag_forge::atiyah_hitchin::{AHParams, AHSphericalPoint};
use slag_forge::moment_maps::{orbit_mu_variation, verify_hamiltonian, ActionPoint, ActionSpec};
use slag_forge::taub_nut::{TNHoloPoint, TNParams};

fn main() -> slag_forge::Result<()> {
    let p = TNParams::new(1.0, 1.0)?;
    let tn = ActionPoint::TaubNut(TNHoloPoint::new(C::new(-0.4, 1.3), C::new(0.6, -0.8), &p)?, p);
    let ah = ActionPoint::AtiyahHitchin(AHSphericalPoint::new(0.5, 1.0, 0.5, 0.3)?, AHParams::new(1.0, 1)?);
    for (name, action, pt, eps) in [
        ("tn u(1)", ActionSpec::tn_u1(), tn, 1e-5),
        ("tn so(2)", ActionSpec::tn_so2(), tn, 1e-5),
        ("ah so(2)", ActionSpec::ah_so2(), ah, 1e-5),
    ] {
        let rep = verify_hamiltonian(&action, &pt, eps)?;
        let drift = orbit_mu_variation(&action, &pt, 16, 0.2)?;
        println!("{name:<9} |i_X omega - d mu| = {:.2e}  orbit drift of mu = {drift:.2e}", rep.residual);
    }
    Ok(())
}
