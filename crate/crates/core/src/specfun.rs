//! Complete elliptic integrals, Jacobi sn, Weierstrass p on the real period
//! segment, and the period / quasi-period data of the curve
//! Y^2 = 4X^3 - g2 X - g3 with roots e3 < e2 < e1.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::quad::quad_adaptive;

const AGM_MAX_ITER: usize = 60;
/// Tolerance used for the period and quasi-period quadratures.
pub const PERIOD_QUAD_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus {
    pub k: f64,
    pub kprime: f64,
}

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k) {
            return Err(Error::Domain(format!("modulus k = {k} outside [0, 1)")));
        }
        Ok(Self { k, kprime: complementary(k) })
    }
}

fn complementary(k: f64) -> f64 {
    ((1.0 - k) * (1.0 + k)).sqrt()
}

/// AGM sequences (a_n, c_n) starting from a0 = 1, b0 = k', c0 = k.
fn agm_sequence(k: f64) -> (Vec<f64>, Vec<f64>) {
    let mut a = 1.0;
    let mut b = complementary(k);
    let mut av = vec![a];
    let mut cv = vec![k];
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() < 1e-16 * a {
            break;
        }
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        cv.push(0.5 * (a - b));
        a = an;
        b = bn;
        av.push(a);
    }
    (av, cv)
}

/// Complete elliptic integral of the first kind K(k), 0 <= k < 1.
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("K(k) requires 0 <= k < 1, got k = {k}")));
    }
    let (a, _) = agm_sequence(k);
    Ok(PI / (2.0 * a[a.len() - 1]))
}

/// Complete elliptic integral of the second kind E(k), 0 <= k <= 1.
pub fn elliptic_e(k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::Domain(format!("E(k) requires 0 <= k <= 1, got k = {k}")));
    }
    if k == 1.0 {
        return Ok(1.0);
    }
    let (a, c) = agm_sequence(k);
    let mut s = 0.5 * c[0] * c[0];
    let mut p = 1.0;
    for cn in &c[1..] {
        s += p * cn * cn;
        p *= 2.0;
    }
    Ok(PI / (2.0 * a[a.len() - 1]) * (1.0 - s))
}

/// Jacobi sn(u, k) by the descending Landen (AGM) scheme.
pub fn jacobi_sn(u: f64, k: f64) -> Result<f64> {
    if !u.is_finite() {
        return Err(Error::Domain("sn of a non-finite argument".into()));
    }
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("sn requires 0 <= k < 1, got k = {k}")));
    }
    if k == 0.0 {
        return Ok(u.sin());
    }
    // sn has period 4K; reducing first keeps 2^N a_N u small
    let kk = elliptic_k(k)?;
    let period = 4.0 * kk;
    let mut w = u.rem_euclid(period);
    if w > 2.0 * kk {
        w -= period;
    }
    let (a, c) = agm_sequence(k);
    let n = a.len() - 1;
    let mut phi = 2f64.powi(n as i32) * a[n] * w;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    Ok(phi.sin().clamp(-1.0, 1.0))
}

/// Curve data for a modulus k and scale rho = e1 - e3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticData {
    pub k: f64,
    pub kprime: f64,
    pub rho: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub g2: f64,
    pub g3: f64,
    pub delta: f64,
    pub omega1: f64,
    pub eta1: f64,
    /// K(k), cached
    pub kk: f64,
    /// E(k), cached
    pub ek: f64,
}

impl EllipticData {
    pub fn new(k: f64, rho: f64) -> Result<Self> {
        let m = EllipticModulus::new(k)?;
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::Domain(format!("rho = {rho} must be positive")));
        }
        let k2 = k * k;
        let kk = elliptic_k(k)?;
        let ek = elliptic_e(k)?;
        let e1 = -rho * (k2 - 2.0) / 3.0;
        let e2 = rho * (2.0 * k2 - 1.0) / 3.0;
        let e3 = -rho * (k2 + 1.0) / 3.0;
        let g2 = 4.0 / 3.0 * rho * rho * (1.0 - k2 + k2 * k2);
        let g3 = 4.0 / 27.0 * rho.powi(3) * (k2 - 2.0) * (2.0 * k2 - 1.0) * (k2 + 1.0);
        let kp2 = m.kprime * m.kprime;
        let delta = 16.0 * rho.powi(6) * k2 * k2 * kp2 * kp2;
        let sr = rho.sqrt();
        Ok(Self {
            k,
            kprime: m.kprime,
            rho,
            e1,
            e2,
            e3,
            g2,
            g3,
            delta,
            omega1: kk / sr,
            eta1: -(e1 * kk - rho * ek) / sr,
            kk,
            ek,
        })
    }

    /// Imaginary part of the second half period, omega3 = i K(k') / sqrt(rho).
    pub fn omega3_im(&self) -> Result<f64> {
        Ok(elliptic_k(self.kprime)? / self.rho.sqrt())
    }

    /// 4X^3 - g2 X - g3
    pub fn cubic(&self, x: f64) -> f64 {
        4.0 * x * x * x - self.g2 * x - self.g3
    }
}

/// Closed form eta1 = -(e1 K - rho E)/sqrt(rho); defined for 0 <= k < 1.
pub fn eta1_closed(k: f64, rho: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("rho = {rho} must be positive")));
    }
    let e1 = -rho * (k * k - 2.0) / 3.0;
    Ok(-(e1 * elliptic_k(k)? - rho * elliptic_e(k)?) / rho.sqrt())
}

/// X on [e3, e2] as a function of t in [0, pi/2]; dX/Y = dt / sqrt(e1 - X).
fn lower_cycle_x(d: &EllipticData, t: f64) -> f64 {
    let s = t.sin();
    d.e3 + (d.e2 - d.e3) * s * s
}

/// X on [e2, e1]; dX/|Y| = dt / sqrt(X - e3).
fn upper_cycle_x(d: &EllipticData, t: f64) -> f64 {
    let s = t.sin();
    d.e2 + (d.e1 - d.e2) * s * s
}

/// Integral of dX/Y over [e3, e2] (equals omega1).
pub fn omega1_quadrature(d: &EllipticData) -> Result<f64> {
    quad_adaptive(|t| 1.0 / (d.e1 - lower_cycle_x(d, t)).sqrt(), 0.0, FRAC_PI_2, PERIOD_QUAD_TOL)
}

/// -Integral of X dX/Y over [e3, e2].
pub fn eta1_quadrature(d: &EllipticData) -> Result<f64> {
    let v = quad_adaptive(
        |t| {
            let x = lower_cycle_x(d, t);
            x / (d.e1 - x).sqrt()
        },
        0.0,
        FRAC_PI_2,
        PERIOD_QUAD_TOL,
    )?;
    Ok(-v)
}

/// Imaginary part of eta3 = -i * integral of X dX/|Y| over [e2, e1].
pub fn eta3_im_quadrature(d: &EllipticData) -> Result<f64> {
    let v = quad_adaptive(
        |t| {
            let x = upper_cycle_x(d, t);
            x / (x - d.e3).sqrt()
        },
        0.0,
        FRAC_PI_2,
        PERIOD_QUAD_TOL,
    )?;
    Ok(-v)
}

/// Imaginary part of omega3 by quadrature of dX/|Y| over [e2, e1].
pub fn omega3_im_quadrature(d: &EllipticData) -> Result<f64> {
    quad_adaptive(|t| 1.0 / (upper_cycle_x(d, t) - d.e3).sqrt(), 0.0, FRAC_PI_2, PERIOD_QUAD_TOL)
}

/// Weierstrass p(u) for real u, via p = e3 + (e1 - e3)/sn^2(u sqrt(e1 - e3)).
pub fn weierstrass_p(u: f64, d: &EllipticData) -> Result<f64> {
    if !u.is_finite() {
        return Err(Error::Domain("p of a non-finite argument".into()));
    }
    let period = 2.0 * d.omega1;
    let r = u.rem_euclid(period);
    if r.min(period - r) < 1e-12 {
        return Err(Error::Pole(format!("u = {u} lies on the period lattice")));
    }
    let sn = jacobi_sn(u * d.rho.sqrt(), d.k)?;
    Ok(d.e3 + d.rho / (sn * sn))
}

/// p(u + omega3) for real u: the real branch on the shifted line, with values in [e3, e2].
pub fn weierstrass_p_shifted(u: f64, d: &EllipticData) -> Result<f64> {
    let sn = jacobi_sn(u * d.rho.sqrt(), d.k)?;
    Ok(d.e3 + d.rho * d.k * d.k * sn * sn)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
        assert_eq!(elliptic_e(0.0).unwrap(), FRAC_PI_2);
        assert_eq!(elliptic_e(1.0).unwrap(), 1.0);
        assert!(matches!(elliptic_k(1.0), Err(Error::Domain(_))));
        assert!(matches!(elliptic_k(-0.1), Err(Error::Domain(_))));
        assert!(matches!(elliptic_e(1.1), Err(Error::Domain(_))));
        for u in [-3.0, 0.2, 1.0, 7.5] {
            assert_eq!(jacobi_sn(u, 0.0).unwrap(), f64::sin(u));
        }
    }

    #[test]
    fn sn_at_quarter_period() {
        for k in [0.1, 0.5, 0.9, 0.999] {
            let kk = elliptic_k(k).unwrap();
            assert!((jacobi_sn(kk, k).unwrap() - 1.0).abs() < 1e-14);
            assert!(jacobi_sn(2.0 * kk, k).unwrap().abs() < 1e-13);
        }
    }

    #[test]
    fn eta1_limit_k0() {
        let v = eta1_closed(0.0, 1.0).unwrap();
        assert!((v - PI / 6.0).abs() < 1e-15);
    }

    #[test]
    fn g3_vanishes_at_k2_half() {
        let d = EllipticData::new(0.5f64.sqrt(), 1.0).unwrap();
        assert!(d.g3.abs() < 1e-15);
    }

    #[test]
    fn p_pole_and_anchor() {
        let d = EllipticData::new(0.5, 1.0).unwrap();
        assert!(matches!(weierstrass_p(0.0, &d), Err(Error::Pole(_))));
        assert!(matches!(weierstrass_p(2.0 * d.omega1, &d), Err(Error::Pole(_))));
        assert!((weierstrass_p(d.omega1, &d).unwrap() - d.e1).abs() < 1e-12);
        assert!((weierstrass_p_shifted(d.omega1, &d).unwrap() - d.e2).abs() < 1e-12);
        assert!((weierstrass_p_shifted(0.0, &d).unwrap() - d.e3).abs() < 1e-15);
    }
}
