//! O(2) and O(4) multiplets and brute-force contour oracles for the
//! F-function derivatives.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::quad_adaptive_complex;
use crate::specfun::EllipticData;

type C = Complex64;

const I: C = C::new(0.0, 1.0);

/// Trapezoid nodes per contour loop.
pub const CONTOUR_NODES: usize = 4096;

/// eta(zeta) = conj(z)/zeta + x - z zeta
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct O2Multiplet {
    pub z: C,
    pub x: f64,
}

impl O2Multiplet {
    pub fn new(z: C, x: f64) -> Self {
        Self { z, x }
    }

    pub fn r(&self) -> f64 {
        self.x.hypot(2.0 * self.z.norm())
    }
}

pub fn o2_eval(m: &O2Multiplet, zeta: C) -> Result<C> {
    if zeta == C::new(0.0, 0.0) {
        return Err(Error::Pole("O(2) multiplet evaluated at zeta = 0".into()));
    }
    Ok(m.z.conj() / zeta + m.x - m.z * zeta)
}

/// (zeta_+, zeta_-) = ((x + r)/(2z), (x - r)/(2z))
pub fn o2_roots(m: &O2Multiplet) -> Result<(C, C)> {
    if m.z.norm() == 0.0 {
        return Err(Error::Degenerate("O(2) multiplet with z = 0 has a double root at infinity".into()));
    }
    let r = m.r();
    // the smaller-magnitude root via Vieta avoids cancellation in x - r
    let zz = 2.0 * m.z;
    if m.x >= 0.0 {
        let zp = (m.x + r) / zz;
        Ok((zp, -m.z.conj() / (m.z * zp)))
    } else {
        let zm = (m.x - r) / zz;
        Ok((-m.z.conj() / (m.z * zm), zm))
    }
}

/// conj(z)/zeta^2 + conj(v)/zeta + x - v zeta + z zeta^2, parametrised by its roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct O4Multiplet {
    pub z: C,
    pub v: C,
    pub x: f64,
    pub alpha: C,
    pub beta: C,
    pub rho: f64,
}

pub fn o4_from_roots(alpha: C, beta: C, rho: f64) -> O4Multiplet {
    let na = alpha.norm_sqr();
    let nb = beta.norm_sqr();
    let den = (1.0 + na) * (1.0 + nb);
    let (ac, bc) = (alpha.conj(), beta.conj());
    let z = rho * ac * bc / den;
    let v = -rho * (ac + bc - na * bc - ac * nb) / den;
    let x = rho * (-(ac * beta) - alpha * bc + (1.0 - na) * (1.0 - nb)) / den;
    O4Multiplet { z, v, x: x.re, alpha, beta, rho }
}

pub fn o4_eval(m: &O4Multiplet, zeta: C) -> Result<C> {
    if zeta == C::new(0.0, 0.0) {
        return Err(Error::Pole("O(4) multiplet evaluated at zeta = 0".into()));
    }
    let zi = 1.0 / zeta;
    Ok(m.z.conj() * zi * zi + m.v.conj() * zi + m.x - m.v * zeta + m.z * zeta * zeta)
}

/// The four roots alpha, -1/conj(alpha), beta, -1/conj(beta).
pub fn o4_roots(m: &O4Multiplet) -> [C; 4] {
    [m.alpha, -1.0 / m.alpha.conj(), m.beta, -1.0 / m.beta.conj()]
}

/// Roots of a polynomial with coefficients from the highest degree down (Aberth iteration).
pub fn polynomial_roots(coeffs: &[C]) -> Result<Vec<C>> {
    let n = coeffs.len() - 1;
    if n == 0 || coeffs[0].norm() == 0.0 {
        return Err(Error::Degenerate("leading coefficient vanishes".into()));
    }
    let a: Vec<C> = coeffs.iter().map(|c| c / coeffs[0]).collect();
    let bound = 1.0 + a[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut roots: Vec<C> = (0..n)
        .map(|j| C::from_polar(0.5 * bound, 2.0 * PI * (j as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    let eval = |t: C| {
        let mut p = a[0];
        let mut dp = C::new(0.0, 0.0);
        for c in &a[1..] {
            dp = dp * t + p;
            p = p * t + c;
        }
        (p, dp)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = eval(roots[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = C::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    s += 1.0 / (roots[i] - roots[j]);
                }
            }
            let w = ratio / (1.0 - ratio * s);
            roots[i] -= w;
            moved = moved.max(w.norm() / roots[i].norm().max(1e-300));
        }
        if moved < 1e-15 {
            return Ok(roots);
        }
    }
    Err(Error::Convergence("Aberth iteration for polynomial roots".into()))
}

/// All labellings (alpha, beta) of the roots of the quartic with real positive rho.
pub fn o4_labellings(z: C, v: C, x: f64) -> Result<Vec<O4Multiplet>> {
    let roots = polynomial_roots(&[z, -v, C::new(x, 0.0), v.conj(), z.conj()])?;
    let mut out = Vec::new();
    for (i, &alpha) in roots.iter().enumerate() {
        for (j, &beta) in roots.iter().enumerate() {
            if i == j || (beta + 1.0 / alpha.conj()).norm() < 1e-8 * (1.0 + beta.norm()) {
                continue;
            }
            let rho = z * (1.0 + alpha.norm_sqr()) * (1.0 + beta.norm_sqr()) / (alpha.conj() * beta.conj());
            if rho.re > 0.0 && rho.im.abs() < 1e-8 * rho.re {
                out.push(O4Multiplet { z, v, x, alpha, beta, rho: rho.re });
            }
        }
    }
    Ok(out)
}

/// Modulus associated with a labelling: |1 + conj(alpha) beta| / sqrt((1+|alpha|^2)(1+|beta|^2)).
pub fn o4_modulus(m: &O4Multiplet) -> f64 {
    (1.0 + m.alpha.conj() * m.beta).norm() / ((1.0 + m.alpha.norm_sqr()) * (1.0 + m.beta.norm_sqr())).sqrt()
}

/// Trapezoid estimate of the closed-loop integral of g(zeta) d zeta on a circle.
fn circle_trapezoid<F: Fn(C) -> C>(centre: C, radius: f64, nodes: usize, g: F) -> C {
    let h = 2.0 * PI / nodes as f64;
    let mut s = C::new(0.0, 0.0);
    for j in 0..nodes {
        let e = C::from_polar(1.0, j as f64 * h);
        s += g(centre + radius * e) * I * radius * e;
    }
    s * h
}

/// Integral of eta ln(eta) / zeta around one circle with ln(eta) continued
/// along the loop (starting on the principal branch), closed with the
/// half-weight trapezoid rule so that the jump of the logarithm enters exactly
/// as an endpoint term.
fn log_loop(m: &O2Multiplet, centre: C, radius: f64, nodes: usize, ccw: bool) -> Result<C> {
    let dir = if ccw { 1.0 } else { -1.0 };
    let h = 2.0 * PI / nodes as f64;
    let mut total = C::new(0.0, 0.0);
    let mut prev_arg = 0.0;
    let mut winding = 0.0;
    for j in 0..=nodes {
        let e = C::from_polar(1.0, dir * j as f64 * h);
        let zeta = centre + radius * e;
        let eta = o2_eval(m, zeta)?;
        let arg = eta.arg();
        if j > 0 {
            let mut d = arg - prev_arg;
            while d > PI {
                d -= 2.0 * PI;
            }
            while d < -PI {
                d += 2.0 * PI;
            }
            winding += d;
        } else {
            winding = arg;
        }
        prev_arg = arg;
        let log_eta = C::new(eta.norm().ln(), winding);
        let dzeta = I * dir * radius * e;
        let w = if j == 0 || j == nodes { 0.5 } else { 1.0 };
        total += w * eta * log_eta / zeta * dzeta;
    }
    Ok(total * h)
}

/// F(x, z) for Taub-NUT with fixed contours (centres and radius chosen at a base point).
fn tn_f_fixed(m: &O2Multiplet, h: f64, mcharge: f64, c_minus: C, c_plus: C, radii: (f64, f64), nodes: usize) -> Result<C> {
    let f2 = circle_trapezoid(C::new(0.0, 0.0), 1.0, nodes, |zeta| {
        let eta = m.z.conj() / zeta + m.x - m.z * zeta;
        eta * eta / zeta
    });
    let f2 = -f2 / (2.0 * PI * I * h);
    if mcharge == 0.0 {
        return Ok(f2);
    }
    let gamma = log_loop(m, c_minus, radii.1, nodes, true)? + log_loop(m, c_plus, radii.0, nodes, false)?;
    Ok(f2 - 2.0 * mcharge / (2.0 * PI * I) * gamma)
}

/// F_xx of the Taub-NUT F-function by second central differences in x of
/// the contour integrals; the Gamma contour is a counter-clockwise loop about
/// zeta_- joined with a clockwise loop about zeta_+.
pub fn tn_fxx_contour_oracle(m: &O2Multiplet, h: f64, mcharge: f64) -> Result<f64> {
    tn_fxx_contour_oracle_with(m, h, mcharge, CONTOUR_NODES)
}

pub fn tn_fxx_contour_oracle_with(m: &O2Multiplet, h: f64, mcharge: f64, nodes: usize) -> Result<f64> {
    let r = m.r();
    if !(r > 0.0) || m.z.norm() == 0.0 {
        return Err(Error::Degenerate("contour oracle needs z != 0".into()));
    }
    let (zp, zm) = o2_roots(m)?;
    if (zp - zm).norm() < 1e-6 {
        return Err(Error::ContourCollision(format!("zeta_+ and zeta_- within 1e-6 ({zp}, {zm})")));
    }
    // each loop keeps away from zeta = 0 and from the other root
    let gap = (zp - zm).norm();
    let radii = (0.4 * zp.norm().min(gap), 0.4 * zm.norm().min(gap));
    let step = 1e-4 * r;
    let at = |dx: f64| tn_f_fixed(&O2Multiplet::new(m.z, m.x + dx), h, mcharge, zm, zp, radii, nodes);
    let fxx = (at(step)? - 2.0 * at(0.0)? + at(-step)?) / (step * step);
    Ok(fxx.re)
}

/// X_0 and X_inf of the birational map zeta = beta (X - X_0)/(X - X_inf).
pub fn o4_x_images(data: &EllipticData, mult: &O4Multiplet) -> (C, C) {
    let common = data.rho * (1.0 + mult.alpha.conj() * mult.beta) / (1.0 + mult.alpha.norm_sqr());
    (data.e3 + common * mult.alpha / mult.beta, data.e3 + common)
}

/// I_n(Gamma_m) = 2 * integral over [e3, e2] of (beta (X - X0)/(X - X_inf))^n dX / Y.
pub fn ah_in_contour_oracle(data: &EllipticData, mult: &O4Multiplet, n: u32) -> Result<C> {
    if n > 2 {
        return Err(Error::Domain(format!("I_n oracle supports n = 0, 1, 2 (got {n})")));
    }
    if !(data.delta > 0.0) {
        return Err(Error::Degenerate("singular curve".into()));
    }
    let (x0, xinf) = o4_x_images(data, mult);
    let scale = data.rho;
    if n > 0 && xinf.im.abs() <= 1e-9 * scale && xinf.re >= data.e3 - 1e-9 * scale && xinf.re <= data.e2 + 1e-9 * scale {
        return Err(Error::PoleOnPath(format!("X_inf = {xinf} lies on [e3, e2]")));
    }
    let v = quad_adaptive_complex(
        |t| {
            let s = t.sin();
            let x = data.e3 + (data.e2 - data.e3) * s * s;
            let w = 1.0 / (data.e1 - x).sqrt();
            let ratio = mult.beta * (x - x0) / (x - xinf);
            ratio.powu(n) * w
        },
        0.0,
        FRAC_PI_2,
        1e-13 * (1.0 + data.omega1),
    )?;
    Ok(2.0 * v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn o2_examples() {
        let m = O2Multiplet::new(I, 0.0);
        assert!((o2_eval(&m, C::new(1.0, 0.0)).unwrap() - C::new(0.0, -2.0)).norm() < 1e-15);
        let m = O2Multiplet::new(C::new(1.0, 0.0), 0.0);
        let (p, q) = o2_roots(&m).unwrap();
        assert!((p - 1.0).norm() < 1e-15 && (q + 1.0).norm() < 1e-15);
        let m = O2Multiplet::new(C::new(1.0, 0.0), 3.0);
        let (p, q) = o2_roots(&m).unwrap();
        let s = 13f64.sqrt();
        assert!((p - (3.0 + s) / 2.0).norm() < 1e-14 && (q - (3.0 - s) / 2.0).norm() < 1e-14);
        assert!(matches!(o2_eval(&m, C::new(0.0, 0.0)), Err(Error::Pole(_))));
        assert!(matches!(o2_roots(&O2Multiplet::new(C::new(0.0, 0.0), 1.0)), Err(Error::Degenerate(_))));
    }

    #[test]
    fn o4_examples() {
        let m = o4_from_roots(C::new(0.0, 0.0), C::new(0.0, 0.0), 2.0);
        assert_eq!((m.z, m.v, m.x), (C::new(0.0, 0.0), C::new(0.0, 0.0), 2.0));
        let m = o4_from_roots(C::new(1.0, 0.0), C::new(0.0, 0.0), 2.0);
        assert!(m.z.norm() < 1e-16 && (m.v + 1.0).norm() < 1e-15 && m.x.abs() < 1e-15);
    }

    #[test]
    fn quartic_solver_recovers_roots() {
        let want = [C::new(1.0, 2.0), C::new(-0.5, 0.1), C::new(0.3, -0.7), C::new(-2.0, -1.0)];
        let mut c = vec![C::new(1.0, 0.0)];
        for r in want {
            let mut next = vec![C::new(0.0, 0.0); c.len() + 1];
            for (i, ci) in c.iter().enumerate() {
                next[i] += ci;
                next[i + 1] -= ci * r;
            }
            c = next;
        }
        let got = polynomial_roots(&c).unwrap();
        for w in want {
            assert!(got.iter().any(|g| (g - w).norm() < 1e-12));
        }
    }

    #[test]
    fn flat_limit_fxx() {
        let m = O2Multiplet::new(C::new(0.7, -0.2), 0.4);
        let f = tn_fxx_contour_oracle(&m, 2.0, 0.0).unwrap();
        assert!((f + 1.0).abs() < 1e-7, "{f}");
    }
}
