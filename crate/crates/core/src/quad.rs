//! Adaptive Gauss-Legendre quadrature.
//!
//! Every panel is integrated with an n-point rule and compared against the
//! same rule applied to its two halves; panels whose difference exceeds their
//! share of the tolerance are bisected again.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_DEPTH: u32 = 40;
const ORDER: usize = 12;

/// Values a quadrature can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn is_finite_value(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn is_finite_value(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, t);
            dp = d;
            let dt = p / d;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, t);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = t;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let p2 = ((2 * j - 1) as f64 * t * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, d)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

fn panel<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> (T, f64) {
    let (x, w) = rule();
    let c = 0.5 * (a + b);
    let hw = 0.5 * (b - a);
    let mut s = T::zero();
    let mut abs_sum = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        let v = f(c + hw * xi);
        abs_sum += wi * v.magnitude();
        s = s + v * *wi;
    }
    (s * hw, abs_sum * hw.abs())
}

/// Generic adaptive driver; `max_depth` bounds the bisection depth.
pub fn integrate<T: QuadValue, F: Fn(f64) -> T>(f: F, a: f64, b: f64, tol: f64, max_depth: u32) -> Result<T> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("non-finite integration limits".into()));
    }
    if a == b {
        return Ok(T::zero());
    }
    let len = (b - a).abs();
    let mut total = T::zero();
    let (whole, whole_abs) = panel(&f, a, b);
    let mut stack = vec![(a, b, whole, whole_abs, 0u32)];
    while let Some((lo, hi, est, est_abs, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let (left, la) = panel(&f, lo, mid);
        let (right, ra) = panel(&f, mid, hi);
        let refined = left + right;
        if !refined.is_finite_value() {
            return Err(Error::Convergence(format!("non-finite integrand on [{lo}, {hi}]")));
        }
        let err = (refined - est).magnitude();
        let share = tol * (hi - lo).abs() / len;
        // panels at the noise floor of the integrand (abscissa rounding included) are accepted
        let roundoff = 1024.0 * f64::EPSILON * (la + ra).max(est_abs);
        if err <= share || err <= roundoff {
            total = total + refined;
            continue;
        }
        if depth + 1 >= max_depth {
            return Err(Error::Convergence(format!(
                "panel depth limit {max_depth} reached on [{lo}, {hi}] (error estimate {err:e})"
            )));
        }
        stack.push((mid, hi, right, ra, depth + 1));
        stack.push((lo, mid, left, la, depth + 1));
    }
    Ok(total)
}

/// Adaptive Gauss-Legendre integral of a real function with absolute tolerance `tol`.
pub fn quad_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate(f, a, b, tol, DEFAULT_MAX_DEPTH)
}

pub fn quad_adaptive_complex<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: f64) -> Result<Complex64> {
    integrate(f, a, b, tol, DEFAULT_MAX_DEPTH)
}

/// Principal value of the integral of g(t)/(t - t0) over [a, b] for smooth g.
///
/// The part symmetric about t0 is folded onto (g(t0+s) - g(t0-s))/s, the rest
/// is an ordinary integral.
pub fn principal_value<F: Fn(f64) -> f64>(g: F, a: f64, b: f64, t0: f64, tol: f64) -> Result<f64> {
    if !(a < t0 && t0 < b) {
        return Err(Error::Domain(format!("principal value pole {t0} not inside ({a}, {b})")));
    }
    let d = (t0 - a).min(b - t0);
    // On [delta, d] the fold is integrated in v = ln(s / delta), where the
    // integrand g(t0 + s) - g(t0 - s) carries absolute noise ~ eps |g(t0)|;
    // below delta the difference quotient is replaced by its value at delta,
    // an O(delta^3 g''') change.
    let delta = 1e-5 * (t0.abs() + d);
    let sym = if d > delta {
        let span = (d / delta).ln();
        let floor = 256.0 * f64::EPSILON * g(t0).abs() * span;
        let head = (g(t0 + delta) - g(t0 - delta)) / delta * delta;
        let body = quad_adaptive(
            |v| {
                let s = delta * v.exp();
                g(t0 + s) - g(t0 - s)
            },
            0.0,
            span,
            (tol / 2.0).max(floor),
        )?;
        head + body
    } else {
        quad_adaptive(|s| (g(t0 + s) - g(t0 - s)) / s, 0.0, d, tol / 2.0)?
    };
    let rest = if t0 - a > b - t0 {
        quad_adaptive(|t| g(t) / (t - t0), a, t0 - d, tol / 2.0)?
    } else if b - t0 > t0 - a {
        quad_adaptive(|t| g(t) / (t - t0), t0 + d, b, tol / 2.0)?
    } else {
        0.0
    };
    Ok(sym + rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(ORDER);
        for p in 0..(2 * ORDER) {
            let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(p as i32)).sum();
            let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
            assert!((s - exact).abs() < 1e-14, "degree {p}: {s} vs {exact}");
        }
    }

    #[test]
    fn polynomial_and_sine() {
        let v = quad_adaptive(|x| x * x, 0.0, 1.0, 1e-14).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
        let v = quad_adaptive(f64::sin, 0.0, PI, 1e-14).unwrap();
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn depth_limit_reports_convergence_error() {
        let r = integrate(|x: f64| 1.0 / x.abs().sqrt().max(1e-300), -1.0, 1.0 + 1e-9, 1e-15, 5);
        assert!(matches!(r, Err(Error::Convergence(_))));
    }

    #[test]
    fn principal_value_of_log_kernel() {
        // PV of 1/(t - 0.3) on [0, 1] is ln(0.7/0.3)
        let v = principal_value(|_| 1.0, 0.0, 1.0, 0.3, 1e-14).unwrap();
        assert!((v - (0.7f64 / 0.3).ln()).abs() < 1e-13);
        // PV of t/(t - 0.5) on [0, 1] is 1 + 0.5 ln(1) = 1
        let v = principal_value(|t| t, 0.0, 1.0, 0.5, 1e-14).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
    }

    #[test]
    fn complex_integrand() {
        let v = quad_adaptive_complex(|t| Complex64::new(0.0, t).exp(), 0.0, PI, 1e-13).unwrap();
        assert!((v - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }
}
