//! Atiyah-Hitchin in the holomorphic chart (U, Z) = (u sqrt z, 2 sqrt z),
//! built from the spherical parametrisation of the O(4) multiplet.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kahler::AHMetricBlock;
use crate::quad::{principal_value, quad_adaptive};
use crate::specfun::{elliptic_k, EllipticData};

type C = Complex64;

/// Default regularity guard: |y_pm| > DEGENERACY_GUARD * rho^{3/2}.
pub const DEGENERACY_GUARD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AHParams {
    pub h: f64,
    pub a_int: i64,
}

impl Default for AHParams {
    fn default() -> Self {
        Self { h: 1.0, a_int: 1 }
    }
}

impl AHParams {
    pub fn new(h: f64, a_int: i64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Domain(format!("h = {h} must be positive")));
        }
        Ok(Self { h, a_int })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AHSphericalPoint {
    pub k: f64,
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
}

impl AHSphericalPoint {
    pub fn new(k: f64, theta: f64, phi: f64, psi: f64) -> Result<Self> {
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::Domain(format!("modulus k = {k} outside (0, 1)")));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain(format!("theta = {theta} outside [0, pi]")));
        }
        if !phi.is_finite() || !psi.is_finite() {
            return Err(Error::Domain("non-finite angle".into()));
        }
        Ok(Self { k, theta, phi, psi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AHGeomState {
    pub z: C,
    pub v: C,
    pub x: f64,
    /// principal square root of z
    pub sqrt_z: C,
    pub xplus: f64,
    pub xminus: f64,
    /// purely imaginary
    pub yplus: C,
    pub yminus: f64,
    pub vplus: f64,
    pub vminus: f64,
    pub elliptic: EllipticData,
}

/// A_pm, B_pm and the ratio V of the d pi formula. A_+, B_+ come out
/// imaginary and A_-, B_- real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AHCoeffs {
    pub aplus: C,
    pub aminus: C,
    pub bplus: C,
    pub bminus: C,
    pub vcap: f64,
}

/// z, v, x of the spherical parametrisation (before any square roots).
pub fn ah_zvx(pt: &AHSphericalPoint) -> Result<(C, C, f64)> {
    let kk = elliptic_k(pt.k)?;
    let k2 = kk * kk;
    let q = 2.0 * pt.k * pt.k - 1.0;
    let (s2, c2) = (2.0 * pt.psi).sin_cos();
    let (st, ct) = pt.theta.sin_cos();
    let z = 2.0 * C::from_polar(1.0, 2.0 * pt.phi) * C::new(c2 * (1.0 + ct * ct) + q * st * st, 2.0 * s2 * ct) * k2;
    let v = 8.0 * C::from_polar(1.0, pt.phi) * st * C::new(s2, -c2 * ct + q * ct) * k2;
    let x = 4.0 * (-3.0 * c2 * st * st + q * (1.0 - 3.0 * ct * ct)) * k2;
    Ok((z, v, x))
}

pub fn ah_from_spherical(pt: &AHSphericalPoint, p: &AHParams) -> Result<AHGeomState> {
    let (z, v, x) = ah_zvx(pt)?;
    if z.norm() == 0.0 {
        return Err(Error::Chart("z = 0: sqrt(z) based coordinates degenerate".into()));
    }
    let kk = elliptic_k(pt.k)?;
    let rho = 16.0 * p.h * p.h * kk * kk;
    let elliptic = EllipticData::new(pt.k, rho)?;
    let sqrt_z = z.sqrt();
    let w = v / sqrt_z;
    let az = z.norm();
    let xplus = (x + 6.0 * az) / 3.0;
    let xminus = (x - 6.0 * az) / 3.0;
    Ok(AHGeomState {
        z,
        v,
        x,
        sqrt_z,
        xplus,
        xminus,
        yplus: C::new(0.0, w.im * (xplus - xminus)),
        yminus: w.re * (xminus - xplus),
        vplus: w.im,
        vminus: w.re,
        elliptic,
    })
}

impl AHGeomState {
    /// Same point with the other square root of z: v_pm, y_pm, U and Z flip sign.
    pub fn with_flipped_root(&self) -> Self {
        Self {
            sqrt_z: -self.sqrt_z,
            yplus: -self.yplus,
            yminus: -self.yminus,
            vplus: -self.vplus,
            vminus: -self.vminus,
            ..*self
        }
    }

    pub fn is_regular(&self, guard: f64) -> bool {
        let s = guard * self.elliptic.rho.powf(1.5);
        self.yplus.norm() > s && self.yminus.abs() > s
    }
}

pub fn ah_coeffs(state: &AHGeomState) -> Result<AHCoeffs> {
    if state.yplus.norm() == 0.0 || state.yminus == 0.0 {
        return Err(Error::Degenerate("y_+ or y_- vanishes".into()));
    }
    let d = &state.elliptic;
    let den = 12.0 * d.eta1 * d.eta1 - d.g2 * d.omega1 * d.omega1;
    if den == 0.0 {
        return Err(Error::Degenerate("12 eta1^2 - g2 omega1^2 vanishes".into()));
    }
    let vcap = (-3.0 * d.g3 * d.omega1 + 2.0 * d.g2 * d.eta1) / den;
    let yp = state.yplus;
    let ym = C::new(state.yminus, 0.0);
    Ok(AHCoeffs {
        aplus: (state.xplus * d.omega1 + d.eta1) / yp,
        aminus: (state.xminus * d.omega1 + d.eta1) / ym,
        bplus: (state.xplus + vcap * d.omega1) / yp,
        bminus: (state.xminus + vcap * d.omega1) / ym,
        vcap,
    })
}

/// Integral of dX/((X - xp) Y) over [e3, e2]; a principal value when xp lies inside.
pub fn ah_cycle_integral(d: &EllipticData, xp: f64) -> Result<f64> {
    let span = d.e2 - d.e3;
    let tol = 1e-14 / d.rho.powf(1.5);
    let edge = 1e-9 * d.rho;
    if (xp - d.e3).abs() <= edge || (xp - d.e2).abs() <= edge {
        return Err(Error::PoleOnPath(format!("x = {xp} at a branch point")));
    }
    let xt = |t: f64| {
        let s = t.sin();
        d.e3 + span * s * s
    };
    if xp > d.e3 && xp < d.e2 {
        let t0 = ((xp - d.e3) / span).sqrt().asin();
        let g = |t: f64| {
            let dt = t - t0;
            let ratio = if dt.abs() < 1e-8 { 1.0 + dt * dt / 6.0 } else { dt / dt.sin() };
            ratio / ((d.e1 - xt(t)).sqrt() * span * (t + t0).sin())
        };
        principal_value(g, 0.0, FRAC_PI_2, t0, tol)
    } else {
        // X - x written without cancellation on either side of the cycle
        let below = d.e3 - xp;
        let above = d.e2 - xp;
        let diff = |t: f64| {
            let (s, c) = t.sin_cos();
            if xp < d.e3 { below + span * s * s } else { above - span * c * c }
        };
        quad_adaptive(|t| 1.0 / ((d.e1 - xt(t)).sqrt() * diff(t)), 0.0, FRAC_PI_2, tol)
    }
}

/// (pi(x_+), pi(x_-)) with pi(x) = -2 y integral of dX/((X - x) Y) over [e3, e2].
pub fn ah_pi_xpm(state: &AHGeomState) -> Result<(C, f64)> {
    let d = &state.elliptic;
    let pp = if state.yplus.norm() == 0.0 {
        C::new(0.0, 0.0)
    } else {
        -2.0 * state.yplus * ah_cycle_integral(d, state.xplus)?
    };
    let pm = if state.yminus == 0.0 { 0.0 } else { -2.0 * state.yminus * ah_cycle_integral(d, state.xminus)? };
    Ok((C::new(0.0, pp.im), pm))
}

/// K = -8 eta1 + 2 (x_+ + x_-) omega1
pub fn ah_kahler_potential(state: &AHGeomState) -> f64 {
    let d = &state.elliptic;
    -8.0 * d.eta1 + 2.0 * (state.xplus + state.xminus) * d.omega1
}

#[allow(non_snake_case)]
pub fn ah_metric_UZ(state: &AHGeomState, p: &AHParams) -> Result<AHMetricBlock> {
    let d = &state.elliptic;
    if (4.0 * d.omega1 * p.h - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("1/h = 4 omega1 violated (h = {}, omega1 = {})", p.h, d.omega1)));
    }
    let c = ah_coeffs(state)?;
    let zc = 2.0 * state.sqrt_z;
    if zc.norm() == 0.0 {
        return Err(Error::Chart("Z = 0".into()));
    }
    let den = c.aminus * c.bplus - c.aplus * c.bminus;
    if den.norm() == 0.0 {
        return Err(Error::Degenerate("A_- B_+ - A_+ B_- vanishes".into()));
    }
    let w = d.omega1;
    let kzz = -(2.0 * c.aplus * c.aminus + 2.0 * (c.aminus * c.bplus + c.aplus * c.bminus) * w) / den;
    let kuz = -(1.0 / (2.0 * zc.conj())) * (c.aminus - c.aplus + 2.0 * (c.bminus - c.bplus) * w) / den;
    let kzu = (1.0 / (2.0 * zc)) * (c.aminus + c.aplus + 2.0 * (c.bplus + c.bminus) * w) / den;
    let kuu = (1.0 + kzu * kuz) / kzz;
    Ok(AHMetricBlock { kuubar: kuu, kuzbar: kuz, kzubar: kzu, kzzbar: kzz })
}

/// (u, U, Z) with u = -(pi_+ + pi_-)/(2 sqrt z) - pi i (a - 1)/sqrt z.
pub fn ah_u_coordinate(state: &AHGeomState, p: &AHParams) -> Result<(C, C, C)> {
    let (pp, pm) = ah_pi_xpm(state)?;
    let sz = state.sqrt_z;
    let u = -(pp + pm) / (2.0 * sz) - C::new(0.0, PI * (p.a_int - 1) as f64) / sz;
    Ok((u, u * sz, 2.0 * sz))
}

/// Everything needed at one chart point.
#[derive(Debug, Clone, Copy)]
pub struct AHPoint {
    pub state: AHGeomState,
    /// U = u sqrt z
    pub cap_u: C,
    /// Z = 2 sqrt z
    pub cap_z: C,
    pub metric: AHMetricBlock,
    pub mu: f64,
}

pub fn ah_point(pt: &AHSphericalPoint, p: &AHParams) -> Result<AHPoint> {
    let state = ah_from_spherical(pt, p)?;
    ah_point_from_state(state, p)
}

pub fn ah_point_from_state(state: AHGeomState, p: &AHParams) -> Result<AHPoint> {
    let (_, uu, zz) = ah_u_coordinate(&state, p)?;
    let metric = ah_metric_UZ(&state, p)?;
    let d = &state.elliptic;
    let mu = -4.0 * d.eta1 - 2.0 * (state.xplus + state.xminus) * d.omega1;
    Ok(AHPoint { state, cap_u: uu, cap_z: zz, metric, mu })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equator_x_value() {
        for k in [0.2, 0.5, 0.8] {
            let pt = AHSphericalPoint::new(k, FRAC_PI_2, 0.4, 0.0).unwrap();
            let (_, _, x) = ah_zvx(&pt).unwrap();
            let kk = elliptic_k(k).unwrap();
            assert!((x - (8.0 * k * k - 16.0) * kk * kk).abs() < 1e-12 * x.abs());
        }
    }

    #[test]
    fn pole_axis_v_vanishes_and_pi_zero() {
        let pt = AHSphericalPoint::new(0.5, 0.0, 0.3, 0.2).unwrap();
        let s = ah_from_spherical(&pt, &AHParams::default()).unwrap();
        assert_eq!(s.v.norm(), 0.0);
        let (pp, pm) = ah_pi_xpm(&s).unwrap();
        assert_eq!((pp.norm(), pm), (0.0, 0.0));
        let (u, _, _) = ah_u_coordinate(&s, &AHParams::default()).unwrap();
        assert_eq!(u.norm(), 0.0);
    }

    #[test]
    fn potential_at_k2_half() {
        let d = EllipticData::new(0.5f64.sqrt(), 1.0).unwrap();
        let s = AHGeomState {
            z: C::new(1.0, 0.0),
            v: C::new(0.0, 0.0),
            x: 0.0,
            sqrt_z: C::new(1.0, 0.0),
            xplus: 2.0,
            xminus: -2.0,
            yplus: C::new(0.0, 1.0),
            yminus: 1.0,
            vplus: 0.0,
            vminus: 0.0,
            elliptic: d,
        };
        assert_eq!(ah_kahler_potential(&s), -8.0 * d.eta1);
        let c = ah_coeffs(&s).unwrap();
        let want = 2.0 * d.g2 * d.eta1 / (12.0 * d.eta1 * d.eta1 - d.g2 * d.omega1 * d.omega1);
        assert!((c.vcap - want).abs() < 1e-14 * want.abs());
    }
}
