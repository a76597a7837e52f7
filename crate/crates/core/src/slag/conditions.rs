//! Scalar special Lagrangian conditions in spherical coordinates.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::{elliptic_e, elliptic_k};

type C = Complex64;

/// Sign of sin(2 psi) chosen when recovering psi from cos(2 psi).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SinSign {
    Plus,
    Minus,
}

impl SinSign {
    pub fn value(self) -> f64 {
        match self {
            SinSign::Plus => 1.0,
            SinSign::Minus => -1.0,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            SinSign::Plus => "+",
            SinSign::Minus => "-",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "+" => Some(SinSign::Plus),
            "-" => Some(SinSign::Minus),
            _ => None,
        }
    }
}

/// cos 2psi on the level set mu = c1:
/// (q(1 - 3cos^2) + (3h/4K^2)(c1 + 16hK((k^2-2)K/3 + E))) / (3 sin^2), q = 2k^2 - 1.
pub fn ah_cos2psi_unchecked(theta: f64, k: f64, c1: f64, h: f64) -> Result<f64> {
    let st = theta.sin();
    if st.abs() < 1e-15 {
        return Err(Error::Domain("cos 2psi undefined at sin(theta) = 0".into()));
    }
    let kk = elliptic_k(k)?;
    let ek = elliptic_e(k)?;
    let q = 2.0 * k * k - 1.0;
    let ct = theta.cos();
    let inner = c1 + 16.0 * h * kk * ((k * k - 2.0) * kk / 3.0 + ek);
    Ok((q * (1.0 - 3.0 * ct * ct) + 3.0 * h / (4.0 * kk * kk) * inner) / (3.0 * st * st))
}

pub fn ah_cos2psi(theta: f64, k: f64, c1: f64, h: f64) -> Result<f64> {
    let c = ah_cos2psi_unchecked(theta, k, c1, h)?;
    if c.abs() > 1.0 {
        return Err(Error::OutOfRange(format!("cos 2psi = {c} (theta = {theta}, k = {k}, c1 = {c1})")));
    }
    Ok(c)
}

/// psi in [0, pi) with the requested sign of sin 2psi.
pub fn ah_psi(theta: f64, k: f64, c1: f64, h: f64, sign: SinSign) -> Result<f64> {
    let half = 0.5 * ah_cos2psi(theta, k, c1, h)?.acos();
    Ok(match sign {
        SinSign::Plus => half,
        SinSign::Minus => std::f64::consts::PI - half,
    })
}

/// W with z = 2 e^{2i phi} W K^2.
pub fn ah_w(theta: f64, k: f64, cos2psi: f64, sin2psi: f64) -> C {
    let q = 2.0 * k * k - 1.0;
    let (st, ct) = theta.sin_cos();
    C::new(cos2psi * (1.0 + ct * ct) + q * st * st, 2.0 * sin2psi * ct)
}

/// Re(e^{i phi} K(k) sqrt(W)) with the principal root; zero iff z is real and non-positive.
pub fn ah_condition(theta: f64, phi: f64, k: f64, c1: f64, h: f64, sign: SinSign) -> Result<f64> {
    let c = ah_cos2psi(theta, k, c1, h)?;
    let s = sign.value() * (1.0 - c * c).max(0.0).sqrt();
    let w = ah_w(theta, k, c, s);
    Ok((C::from_polar(elliptic_k(k)?, phi) * w.sqrt()).re)
}

/// Right-hand side of the level-set equation, mu as a function of (theta, k, psi).
pub fn ah_level_value(theta: f64, k: f64, psi: f64, h: f64) -> Result<f64> {
    let kk = elliptic_k(k)?;
    let ek = elliptic_e(k)?;
    let q = 2.0 * k * k - 1.0;
    let (st, ct) = theta.sin_cos();
    let x = 4.0 * (-3.0 * (2.0 * psi).cos() * st * st + q * (1.0 - 3.0 * ct * ct)) * kk * kk;
    Ok(-16.0 * h * kk * ((k * k - 2.0) * kk / 3.0 + ek) - x / (3.0 * h))
}
