//! O(2) and O(4) multiplets and the contour integrals behind both metrics:
//! the Taub-NUT F_xx against -2V and the Atiyah-Hitchin I_0 against 2K/sqrt(rho).

use num_complex::Complex64 as C;
use slag_forge::atiyah_hitchin::{ah_zvx, AHSphericalPoint};
use slag_forge::multiplets::{
    ah_in_contour_oracle, o2_roots, o4_labellings, o4_modulus, tn_fxx_contour_oracle, O2Multiplet,
};
use slag_forge::specfun::{elliptic_k, EllipticData};

fn main() -> slag_forge::Result<()> {
    let (h, m) = (1.0, 1.0);
    for (z, x) in [(C::new(0.5, 0.2), 0.3), (C::new(1.0, -1.0), -2.0), (C::new(0.1, 0.0), 4.0)] {
        let eta = O2Multiplet::new(z, x);
        let (zp, zm) = o2_roots(&eta)?;
        let r = eta.r();
        let exact = -2.0 * (1.0 / h + 2.0 * m / r);
        let fxx = tn_fxx_contour_oracle(&eta, h, m)?;
        println!("r={r:.4} roots |zeta+|={:.4} |zeta-|={:.4} Fxx={fxx:.10} -2V={exact:.10}", zp.norm(), zm.norm());
    }

    let pt = AHSphericalPoint::new(0.5, 1.0, 0.4, 0.3)?;
    let (z, v, x) = ah_zvx(&pt)?;
    let kk = elliptic_k(pt.k)?;
    let rho = 16.0 * kk * kk;
    let data = EllipticData::new(pt.k, rho)?;
    for mult in o4_labellings(z, v, x)? {
        if (o4_modulus(&mult) - pt.k).abs() > 1e-8 || (mult.rho - rho).abs() > 1e-8 * rho {
            continue;
        }
        let i0 = ah_in_contour_oracle(&data, &mult, 0)?;
        println!("I0 = {:.12} {:+.2e}i, 2K/sqrt(rho) = {:.12}", i0.re, i0.im, 2.0 * kk / rho.sqrt());
    }
    Ok(())
}
