//! Complete elliptic integrals, the Legendre relation and the Weierstrass
//! function of the curve Y^2 = 4(X - e1)(X - e2)(X - e3).

use std::f64::consts::FRAC_PI_2;

use slag_forge::specfun::{
    elliptic_e, elliptic_k, eta1_closed, eta1_quadrature, jacobi_sn, omega1_quadrature, weierstrass_p, EllipticData,
};

fn main() -> slag_forge::Result<()> {
    println!("{:>6} {:>20} {:>20} {:>12}", "k", "K(k)", "E(k)", "legendre");
    for k in [0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
        let kp = (1.0f64 - k * k).sqrt();
        let (kk, ek) = (elliptic_k(k)?, elliptic_e(k)?);
        let (kkp, ekp) = (elliptic_k(kp)?, elliptic_e(kp)?);
        let legendre = ek * kkp + ekp * kk - kk * kkp - FRAC_PI_2;
        println!("{k:>6} {kk:>20.15} {ek:>20.15} {legendre:>12.2e}");
    }

    // sn(K) = 1
    let k = 0.8;
    println!("sn(K(0.8)) - 1 = {:.2e}", jacobi_sn(elliptic_k(k)?, k)? - 1.0);

    let d = EllipticData::new(0.6, 2.0)?;
    println!("roots e1={:.12} e2={:.12} e3={:.12}", d.e1, d.e2, d.e3);
    println!("omega1 closed {:.15} quadrature {:.15}", d.omega1, omega1_quadrature(&d)?);
    println!("eta1   closed {:.15} quadrature {:.15}", eta1_closed(d.k, d.rho)?, eta1_quadrature(&d)?);
    println!("p(omega1) - e1 = {:.2e}", weierstrass_p(d.omega1, &d)? - d.e1);
    Ok(())
}
