//! Taub-NUT in the holomorphic chart (u, z) and in spherical coordinates.
//!
//! Chart: z = r sin(theta) e^{i phi} / 2, x = r cos(theta),
//! Re u = -x/h - 2m ln((1 + cos theta)/sin theta), Im u = -2m psi,
//! so that u + conj(u) = F_x with F_xx = -2V.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kahler::MetricBlock;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TNParams {
    pub h: f64,
    pub m: f64,
}

impl TNParams {
    /// m = 0 is accepted as the flat limit.
    pub fn new(h: f64, m: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Domain(format!("h = {h} must be positive")));
        }
        if !(m >= 0.0 && m.is_finite()) {
            return Err(Error::Domain(format!("NUT charge m = {m} must be non-negative")));
        }
        Ok(Self { h, m })
    }

    pub fn v(&self, r: f64) -> f64 {
        1.0 / self.h + 2.0 * self.m / r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TNHoloPoint {
    pub u: C,
    pub z: C,
    pub x: f64,
    pub r: f64,
}

impl TNHoloPoint {
    /// Solves for the cached x; requires z != 0.
    pub fn new(u: C, z: C, p: &TNParams) -> Result<Self> {
        let a = z.norm();
        if !(a > 0.0) {
            return Err(Error::Chart("z = 0 is outside the holomorphic chart".into()));
        }
        let x = tn_solve_x(u.re, a, p)?;
        Ok(Self { u, z, x, r: x.hypot(2.0 * a) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TNSphericalPoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
}

impl TNSphericalPoint {
    pub fn new(r: f64, theta: f64, phi: f64, psi: f64) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Domain(format!("r = {r} must be positive")));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain(format!("theta = {theta} outside [0, pi]")));
        }
        if !phi.is_finite() || !psi.is_finite() {
            return Err(Error::Domain("non-finite angle".into()));
        }
        Ok(Self { r, theta, phi, psi })
    }
}

/// Re u as a function of (x, |z|): -x/h - 2m asinh(x / (2|z|)).
pub fn tn_re_u(x: f64, absz: f64, p: &TNParams) -> f64 {
    -x / p.h - 2.0 * p.m * (x / (2.0 * absz)).asinh()
}

/// Unique x with tn_re_u(x, |z|) = re_u (the map is strictly decreasing).
pub fn tn_solve_x(re_u: f64, absz: f64, p: &TNParams) -> Result<f64> {
    if !(absz > 0.0 && absz.is_finite()) || !re_u.is_finite() {
        return Err(Error::Chart(format!("x solver needs |z| > 0 and finite Re u (|z| = {absz})")));
    }
    let g = |x: f64| tn_re_u(x, absz, p) - re_u;
    let dg = |x: f64| -1.0 / p.h - 2.0 * p.m / x.hypot(2.0 * absz);
    let mut half = 10.0 * (re_u.abs() * p.h / 2.0 + 2.0 * absz + 1.0);
    let (mut lo, mut hi) = (-half, half);
    let mut widen = 0;
    while !(g(lo) > 0.0 && g(hi) < 0.0) {
        half *= 4.0;
        lo = -half;
        hi = half;
        widen += 1;
        if widen > 200 || !half.is_finite() {
            return Err(Error::BracketFailure(format!("no bracket for Re u = {re_u}, |z| = {absz}")));
        }
    }
    let scale = re_u.abs().max(1.0);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let gx = g(x);
        if gx.abs() <= 1e-14 * scale {
            return Ok(x);
        }
        if gx > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - gx / dg(x);
        x = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= 4.0 * f64::EPSILON * x.abs().max(1e-300) {
            break;
        }
    }
    if g(x).abs() <= 1e-12 * scale {
        Ok(x)
    } else {
        Err(Error::BracketFailure(format!("x solver stalled with residual {:e}", g(x))))
    }
}

pub fn tn_metric_holo(pt: &TNHoloPoint, p: &TNParams) -> Result<MetricBlock> {
    let a = pt.z.norm();
    if !(a > 0.0) || !(pt.r > 0.0) {
        return Err(Error::Chart("metric undefined at z = 0".into()));
    }
    let v = p.v(pt.r);
    let vi = 1.0 / v;
    let mx_r = p.m * pt.x / pt.r;
    Ok(MetricBlock {
        kuubar: C::new(0.5 * vi, 0.0),
        kuzbar: -mx_r / pt.z.conj() * vi,
        kzubar: -mx_r / pt.z * vi,
        kzzbar: C::new(2.0 * v + 2.0 * mx_r * mx_r / (a * a) * vi, 0.0),
    })
}

/// |det(K) - 1|
pub fn tn_calabi_yau_residual(pt: &TNHoloPoint, p: &TNParams) -> Result<f64> {
    Ok((tn_metric_holo(pt, p)?.det() - 1.0).norm())
}

/// V(dr^2 + r^2 dtheta^2 + r^2 sin^2 dphi^2) + 4m^2 V^{-1} (dpsi + cos theta dphi)^2
/// in the order (r, theta, phi, psi); V = 1/h + 2m/r.
pub fn tn_metric_spherical(pt: &TNSphericalPoint, p: &TNParams) -> [[f64; 4]; 4] {
    let v = p.v(pt.r);
    let w = 4.0 * p.m * p.m / v;
    let (s, c) = pt.theta.sin_cos();
    let r2 = pt.r * pt.r;
    let mut g = [[0.0; 4]; 4];
    g[0][0] = v;
    g[1][1] = v * r2;
    g[2][2] = v * r2 * s * s + w * c * c;
    g[3][3] = w;
    g[2][3] = w * c;
    g[3][2] = w * c;
    g
}

pub fn tn_chart_spherical_to_holo(pt: &TNSphericalPoint, p: &TNParams) -> Result<TNHoloPoint> {
    let (s, c) = pt.theta.sin_cos();
    if s.abs() < 1e-15 {
        return Err(Error::Chart(format!("theta = {} lies on the axis", pt.theta)));
    }
    let z = C::from_polar(0.5 * pt.r * s, pt.phi);
    let x = pt.r * c;
    let re_u = -x / p.h - 2.0 * p.m * (c / s).asinh();
    Ok(TNHoloPoint { u: C::new(re_u, -2.0 * p.m * pt.psi), z, x, r: pt.r })
}

/// Inverse chart; angles reduced to phi in [0, 2pi), psi in [0, 4pi). Requires m > 0 for psi.
pub fn tn_chart_holo_to_spherical(pt: &TNHoloPoint, p: &TNParams) -> Result<TNSphericalPoint> {
    let theta = (2.0 * pt.z.norm()).atan2(pt.x);
    let phi = pt.z.arg().rem_euclid(2.0 * PI);
    let psi = if p.m > 0.0 { (-pt.u.im / (2.0 * p.m)).rem_euclid(4.0 * PI) } else { 0.0 };
    TNSphericalPoint::new(pt.r, theta, phi, psi)
}

/// d(u, z)/d(r, theta, phi, psi): entry [i] holds (du/ds_i, dz/ds_i).
pub fn tn_chart_jacobian(pt: &TNSphericalPoint, p: &TNParams) -> Result<[[C; 2]; 4]> {
    let (s, c) = pt.theta.sin_cos();
    if s.abs() < 1e-15 {
        return Err(Error::Chart("Jacobian undefined on the axis".into()));
    }
    let e = C::from_polar(1.0, pt.phi);
    let z = 0.5 * pt.r * s * e;
    Ok([
        [C::new(-c / p.h, 0.0), 0.5 * s * e],
        [C::new(pt.r * s / p.h + 2.0 * p.m / s, 0.0), 0.5 * pt.r * c * e],
        [C::new(0.0, 0.0), C::new(0.0, 1.0) * z],
        [C::new(0.0, -2.0 * p.m), C::new(0.0, 0.0)],
    ])
}

/// 2 Re(K_{a bbar} J^a_i conj(J^b_j)): the holomorphic metric in spherical coordinates.
pub fn tn_pullback_spherical(pt: &TNSphericalPoint, p: &TNParams) -> Result<[[f64; 4]; 4]> {
    let hp = tn_chart_spherical_to_holo(pt, p)?;
    let k = tn_metric_holo(&hp, p)?;
    let j = tn_chart_jacobian(pt, p)?;
    let mut g = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            g[a][b] = 2.0 * k.hermitian(j[a], j[b]).re;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn unit() -> TNParams {
        TNParams::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn solver_examples() {
        let p = unit();
        assert_eq!(tn_solve_x(0.0, 1.0, &p).unwrap(), 0.0);
        let a = tn_solve_x(-5.0, 1.0, &p).unwrap();
        let b = tn_solve_x(-50.0, 1.0, &p).unwrap();
        assert!(a > 0.0 && b > a);
        let ru = tn_re_u(1.0, 1.0, &p);
        assert!((tn_solve_x(ru, 1.0, &p).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn metric_at_equator() {
        let p = unit();
        let pt = TNHoloPoint::new(C::new(0.0, 0.0), C::new(1.0, 0.0), &p).unwrap();
        assert_eq!(pt.x, 0.0);
        assert_eq!(pt.r, 2.0);
        let k = tn_metric_holo(&pt, &p).unwrap();
        assert!((k.kuubar.re - 0.25).abs() < 1e-15 && (k.kzzbar.re - 4.0).abs() < 1e-15);
        assert!(k.kuzbar.norm() == 0.0 && k.kzubar.norm() == 0.0);
    }

    #[test]
    fn flat_limit() {
        let p = TNParams::new(1.0, 0.0).unwrap();
        let pt = TNHoloPoint::new(C::new(-0.4, 0.3), C::new(0.2, -0.9), &p).unwrap();
        let k = tn_metric_holo(&pt, &p).unwrap();
        assert_eq!(k.kzzbar.re, 2.0);
        assert_eq!(k.kuubar.re, 0.5);
        assert_eq!(tn_calabi_yau_residual(&pt, &p).unwrap(), 0.0);
    }

    #[test]
    fn spherical_examples() {
        let p = unit();
        let g = tn_metric_spherical(&TNSphericalPoint::new(2.0, FRAC_PI_2, 0.3, 0.0).unwrap(), &p);
        assert!((g[0][0] - 2.0).abs() < 1e-15 && (g[3][3] - 2.0).abs() < 1e-15 && g[2][3].abs() < 1e-15);
        let g = tn_metric_spherical(&TNSphericalPoint::new(2.0, 0.0, 0.3, 0.0).unwrap(), &p);
        assert!((g[2][3] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn chart_examples() {
        let p = unit();
        let h = tn_chart_spherical_to_holo(&TNSphericalPoint::new(2.0, FRAC_PI_2, 0.0, 0.0).unwrap(), &p).unwrap();
        assert!((h.z - 1.0).norm() < 1e-15 && h.u.norm() < 1e-15);
        let h = tn_chart_spherical_to_holo(&TNSphericalPoint::new(2.0, FRAC_PI_2, FRAC_PI_2, 0.0).unwrap(), &p).unwrap();
        assert!((h.z - C::new(0.0, 1.0)).norm() < 1e-15);
        let h = tn_chart_spherical_to_holo(&TNSphericalPoint::new(2.0, 1.0, 0.0, PI).unwrap(), &p).unwrap();
        assert!((h.u.im + 2.0 * PI).abs() < 1e-15);
        let axis = TNSphericalPoint::new(2.0, 0.0, 0.0, 0.0).unwrap();
        assert!(matches!(tn_chart_spherical_to_holo(&axis, &p), Err(Error::Chart(_))));
    }
}
