//! Solution curves: closed forms for Taub-NUT, implicit traces for Atiyah-Hitchin.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::atiyah_hitchin::{ah_point, AHParams, AHSphericalPoint, DEGENERACY_GUARD};
use crate::error::{Error, Result};
use crate::moment_maps::ActionSpec;
use crate::taub_nut::TNParams;

use super::conditions::{ah_condition, ah_psi, SinSign};
use super::marching::{densify, densify_ends, thin_polyline, trace_zero_set, ImplicitGrid, Polyline};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceChart {
    TaubNut(TNParams),
    AtiyahHitchin(AHParams),
}

impl TraceChart {
    pub fn tag(&self) -> &'static str {
        match self {
            TraceChart::TaubNut(_) => "tn",
            TraceChart::AtiyahHitchin(_) => "ah",
        }
    }
}

/// One point of a trace; `a` is r on Taub-NUT and k on Atiyah-Hitchin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub t: f64,
    pub a: f64,
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSummary {
    /// max |omega(v1, v2)| / (|v1| |v2|)
    pub omega: f64,
    /// max |Im(e^{i phase} Omega(v1, v2))| / (|v1| |v2|)
    pub im_omega: f64,
    /// max |mu - median mu|
    pub mu: f64,
    pub mu_median: f64,
    /// total variation of |w2| along the trace
    pub abs_w2_variation: f64,
    /// min over samples of the normalised Gram determinant of (v1, v2)
    pub gram: f64,
    pub transversal: bool,
    /// X vanishes or is tangent along the trace; checked in spherical form
    pub degenerate: bool,
}

impl ResidualSummary {
    pub fn worst(&self) -> f64 {
        self.omega.max(self.im_omega).max(self.mu)
    }

    pub fn passes(&self, threshold: f64) -> bool {
        self.worst() < threshold && (self.transversal || self.degenerate)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveTrace {
    pub family: String,
    pub branch: String,
    pub chart: TraceChart,
    pub action: ActionSpec,
    /// target moment level
    pub level: f64,
    pub params: Vec<(String, f64)>,
    pub samples: Vec<TraceSample>,
    pub closed: bool,
    pub summary: Option<ResidualSummary>,
}

impl CurveTrace {
    /// Module threshold for a passing trace.
    pub fn threshold(&self) -> f64 {
        match self.chart {
            TraceChart::TaubNut(_) => 1e-5,
            TraceChart::AtiyahHitchin(_) => 1e-4,
        }
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    /// `family=..;branch=..;key=value;..` as used in CSV headers.
    pub fn param_string(&self) -> String {
        let mut s = format!("family={};branch={}", self.family, self.branch);
        for (k, v) in &self.params {
            s.push_str(&format!(";{k}={v}"));
        }
        s
    }

    /// Same trace with phi shifted, used as a negative control.
    pub fn perturbed_phi(&self, delta: f64) -> Self {
        let mut out = self.clone();
        for s in &mut out.samples {
            s.phi += delta;
        }
        out.branch = format!("{}~dphi", self.branch);
        out.summary = None;
        out
    }
}

/// s in [0, 1] mapped quadratically so the sqrt-type endpoint of arccos is resolved.
fn quadratic_nodes(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| {
        let s = i as f64 / (n - 1) as f64;
        lo + (hi - lo) * s * s
    })
}

fn branches() -> [(&'static str, f64); 2] {
    [("+", 1.0), ("-", -1.0)]
}

fn check_n(n: usize) -> Result<()> {
    if n < 5 {
        return Err(Error::Domain(format!("need at least 5 samples, got {n}")));
    }
    Ok(())
}

/// U(1) level x = c1 with Re z = c2: theta = acos(c1/r), cos phi = 2c2/sqrt(r^2 - c1^2).
///
/// `r_range` is clipped to the admissible half-line r >= sqrt(c1^2 + 4c2^2);
/// the + branch takes phi in [0, pi], the - branch 2pi - phi.
pub fn tn_u1_case1(c1: f64, c2: f64, r_range: (f64, f64), n: usize, p: TNParams) -> Result<Vec<CurveTrace>> {
    check_n(n)?;
    let rmin = c1.hypot(2.0 * c2);
    let r0 = r_range.0.max(rmin);
    let r1 = r_range.1;
    if !(r1 > r0) || rmin == 0.0 {
        return Err(Error::EmptyDomain(format!(
            "r range [{}, {}] misses the admissible set r > {rmin} (c1 = {c1}, c2 = {c2})",
            r_range.0, r_range.1
        )));
    }
    let mut out = Vec::new();
    for (tag, sgn) in branches() {
        let samples = quadratic_nodes(r0, r1, n)
            .map(|r| {
                let theta = (c1 / r).clamp(-1.0, 1.0).acos();
                let cphi = (2.0 * c2 / (r * r - c1 * c1).max(0.0).sqrt()).clamp(-1.0, 1.0);
                let phi = if r == rmin { if c2 >= 0.0 { 0.0 } else { PI } } else { cphi.acos() };
                let phi = if sgn > 0.0 { phi } else { (2.0 * PI - phi).rem_euclid(2.0 * PI) };
                TraceSample { t: r, a: r, theta, phi, psi: 0.0 }
            })
            .collect();
        out.push(CurveTrace {
            family: "tn-u1-case1".into(),
            branch: tag.into(),
            chart: TraceChart::TaubNut(p),
            action: ActionSpec::tn_u1(),
            level: 0.5 * c1,
            params: vec![("c1".into(), c1), ("c2".into(), c2), ("m".into(), p.m), ("h".into(), p.h)],
            samples,
            closed: false,
            summary: None,
        });
    }
    Ok(out)
}

/// U(1) level r cos(theta) = c1 parametrised by theta: cos phi = c / tan(theta).
///
/// Requires c1 != 0; theta is clipped to the side of pi/2 where r = c1/cos(theta) > 0
/// and to |c / tan(theta)| <= 1.
pub fn tn_u1_case2(c: f64, c1: f64, theta_range: (f64, f64), n: usize, p: TNParams) -> Result<Vec<CurveTrace>> {
    check_n(n)?;
    if c1 == 0.0 {
        return Err(Error::EmptyDomain("c1 = 0 puts the level set on theta = pi/2".into()));
    }
    let edge = c.abs().atan();
    let (lo, hi) = if c1 > 0.0 { (edge, FRAC_PI_2) } else { (FRAC_PI_2, PI - edge) };
    let t0 = theta_range.0.max(lo);
    let t1 = theta_range.1.min(hi);
    if !(t1 > t0) || t1 == FRAC_PI_2 && t0 == FRAC_PI_2 {
        return Err(Error::EmptyDomain(format!(
            "theta range [{}, {}] misses the admissible set [{lo}, {hi}] for c = {c}",
            theta_range.0, theta_range.1
        )));
    }
    // approach the endpoint with cos phi = +-1 quadratically
    let (start, end) = if c1 > 0.0 { (t0, t1.min(FRAC_PI_2 - 1e-9)) } else { (t1, t0.max(FRAC_PI_2 + 1e-9)) };
    let mut out = Vec::new();
    for (tag, sgn) in branches() {
        let mut samples: Vec<TraceSample> = quadratic_nodes(start, end, n)
            .map(|theta| {
                let phi = (c / theta.tan()).clamp(-1.0, 1.0).acos();
                let phi = if sgn > 0.0 { phi } else { (2.0 * PI - phi).rem_euclid(2.0 * PI) };
                TraceSample { t: theta, a: c1 / theta.cos(), theta, phi, psi: 0.0 }
            })
            .collect();
        if c1 < 0.0 {
            samples.reverse();
        }
        out.push(CurveTrace {
            family: "tn-u1-case2".into(),
            branch: tag.into(),
            chart: TraceChart::TaubNut(p),
            action: ActionSpec::tn_u1(),
            level: 0.5 * c1,
            params: vec![("c".into(), c), ("c1".into(), c1), ("m".into(), p.m), ("h".into(), p.h)],
            samples,
            closed: false,
            summary: None,
        });
    }
    Ok(out)
}

/// Positive root of 2mr + r^2 sin^2(theta) / (2h) = c1, in rationalised form.
pub fn tn_so2_radius(c1: f64, theta: f64, p: &TNParams) -> Result<f64> {
    if !(c1 > 0.0) {
        return Err(Error::Domain(format!("c1 = {c1} must be positive")));
    }
    let s2 = theta.sin().powi(2);
    let disc = 4.0 * p.m * p.m + 2.0 * c1 * s2 / p.h;
    assert!(disc >= 0.0, "negative discriminant with c1 > 0");
    let den = disc.sqrt() + 2.0 * p.m;
    if den == 0.0 {
        return Err(Error::Domain("m = 0 on the axis has no finite root".into()));
    }
    Ok(2.0 * c1 / den)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SO2Branch {
    /// phi = pi/2 (+) or 3pi/2 (-), psi = 0, theta varies
    Plane,
    /// theta = 0 (+) or pi (-), r = c1/(2m), phi varies
    Axis,
    /// u' = i c: (r, theta) fixed at theta_star, phi in {0, pi}, psi = -(c/2m) t
    Imaginary { rate: f64, theta_star: f64 },
}

/// SO(2) level 2mr + 2|z|^2/h = c1 with u' = const.
pub fn tn_so2_curve(c1: f64, p: TNParams, branch: SO2Branch, n: usize) -> Result<Vec<CurveTrace>> {
    check_n(n)?;
    if !(c1 > 0.0) {
        return Err(Error::Domain(format!("c1 = {c1} must be positive")));
    }
    let mut params = vec![("c1".to_string(), c1), ("m".to_string(), p.m), ("h".to_string(), p.h)];
    let mut out = Vec::new();
    let family;
    match branch {
        SO2Branch::Plane => {
            family = "tn-so2-plane";
            for (tag, phi) in [("+", FRAC_PI_2), ("-", 3.0 * FRAC_PI_2)] {
                // uniform in ln tan(theta/2), along which Re u moves at a steady rate near the axis
                let edge = (0.025f64).tan().ln();
                let samples = (0..n)
                    .map(|i| {
                        let tau = edge - 2.0 * edge * i as f64 / (n - 1) as f64;
                        let theta = 2.0 * tau.exp().atan();
                        let r = tn_so2_radius(c1, theta, &p)?;
                        Ok(TraceSample { t: theta, a: r, theta, phi, psi: 0.0 })
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.push((tag, samples));
            }
        }
        SO2Branch::Axis => {
            family = "tn-so2-axis";
            if !(p.m > 0.0) {
                return Err(Error::Domain("the axis branch needs m > 0".into()));
            }
            let r = c1 / (2.0 * p.m);
            for (tag, theta) in [("+", 0.0), ("-", PI)] {
                let samples = (0..n)
                    .map(|i| {
                        let phi = 2.0 * PI * i as f64 / (n - 1) as f64;
                        TraceSample { t: phi, a: r, theta, phi, psi: 0.0 }
                    })
                    .collect();
                out.push((tag, samples));
            }
        }
        SO2Branch::Imaginary { rate, theta_star } => {
            family = "tn-so2-imag";
            if !(p.m > 0.0) || rate == 0.0 {
                return Err(Error::Domain("the imaginary branch needs m > 0 and a nonzero rate".into()));
            }
            if !(theta_star > 0.0 && theta_star < PI) {
                return Err(Error::Domain(format!("theta* = {theta_star} must lie in (0, pi)")));
            }
            params.push(("c".into(), rate));
            params.push(("theta_star".into(), theta_star));
            let r = tn_so2_radius(c1, theta_star, &p)?;
            // t spans one turn of psi
            let tmax = 2.0 * PI * 2.0 * p.m / rate.abs();
            for (tag, phi) in [("+", 0.0), ("-", PI)] {
                let samples = (0..n)
                    .map(|i| {
                        let t = tmax * i as f64 / (n - 1) as f64;
                        TraceSample { t, a: r, theta: theta_star, phi, psi: -(rate / (2.0 * p.m)) * t }
                    })
                    .collect();
                out.push((tag, samples));
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|(tag, samples)| CurveTrace {
            family: family.into(),
            branch: tag.into(),
            chart: TraceChart::TaubNut(p),
            action: ActionSpec::tn_so2(),
            level: c1,
            params: params.clone(),
            samples,
            closed: false,
            summary: None,
        })
        .collect())
}

/// Fixed-k section of the Atiyah-Hitchin level set, traced in the (theta, phi) plane.
pub fn ah_trace_theta_phi(k: f64, c1: f64, sign: SinSign, p: AHParams, n: usize) -> Result<Vec<CurveTrace>> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::Domain(format!("k = {k} outside (0, 1)")));
    }
    let grid = ImplicitGrid::new(0.01, PI - 0.01, 0.0, 2.0 * PI, n)?;
    let f = |theta: f64, phi: f64| ah_condition(theta, phi, k, c1, p.h, sign).unwrap_or(f64::NAN);
    let lines = refined_zero_set(&grid, &f);
    let params = vec![("k".to_string(), k), ("c1".to_string(), c1), ("h".to_string(), p.h)];
    Ok(assemble_ah(&lines, "ah-theta-phi", sign, c1, p, params, |x, y| (x, y, k)))
}

/// Fixed-phi section of the Atiyah-Hitchin level set, traced in the (theta, k) plane.
pub fn ah_trace_theta_k(phi: f64, c1: f64, sign: SinSign, p: AHParams, n: usize) -> Result<Vec<CurveTrace>> {
    let grid = ImplicitGrid::new(0.01, PI - 0.01, 0.02, 0.98, n)?;
    let f = |theta: f64, k: f64| ah_condition(theta, phi, k, c1, p.h, sign).unwrap_or(f64::NAN);
    let lines = refined_zero_set(&grid, &f);
    let params = vec![("phi".to_string(), phi), ("c1".to_string(), c1), ("h".to_string(), p.h)];
    Ok(assemble_ah(&lines, "ah-theta-k", sign, c1, p, params, |x, y| (x, phi, y)))
}

/// Levels of midpoint densification applied to Atiyah-Hitchin traces.
pub const AH_DENSIFY_LEVELS: usize = 3;
/// Further levels applied to the last few segments at each open end.
pub const AH_END_LEVELS: usize = 4;
const AH_END_SEGMENTS: usize = 4;

fn refined_zero_set<F: Fn(f64, f64) -> f64 + Sync>(grid: &ImplicitGrid, f: &F) -> Vec<Polyline> {
    trace_zero_set(grid, f, 1e-10)
        .iter()
        .map(|l| {
            let d = densify(&thin_polyline(l, grid, 0.1), grid, f, AH_DENSIFY_LEVELS, 1e-10);
            densify_ends(&d, grid, f, AH_END_SEGMENTS, AH_END_LEVELS, 1e-10)
        })
        .collect()
}

/// Turns polylines into traces, splitting wherever the chart degenerates
/// and dropping pieces too short for five-point differences.
#[allow(clippy::too_many_arguments)]
fn assemble_ah<M: Fn(f64, f64) -> (f64, f64, f64)>(
    lines: &[Polyline],
    family: &str,
    sign: SinSign,
    c1: f64,
    p: AHParams,
    params: Vec<(String, f64)>,
    map: M,
) -> Vec<CurveTrace> {
    let mut out = Vec::new();
    for line in lines {
        let mut pieces: Vec<Vec<TraceSample>> = vec![Vec::new()];
        for &(x, y) in &line.points {
            let (theta, phi, k) = map(x, y);
            let ok = ah_psi(theta, k, c1, p.h, sign).ok().and_then(|psi| {
                let sp = AHSphericalPoint::new(k, theta, phi, psi).ok()?;
                let pt = ah_point(&sp, &p).ok()?;
                pt.state.is_regular(DEGENERACY_GUARD).then_some(TraceSample { t: 0.0, a: k, theta, phi, psi })
            });
            match ok {
                Some(s) => pieces.last_mut().unwrap().push(s),
                None => {
                    if !pieces.last().unwrap().is_empty() {
                        pieces.push(Vec::new());
                    }
                }
            }
        }
        let whole = pieces.len() == 1 && pieces[0].len() == line.points.len();
        for mut samples in pieces.into_iter().filter(|s| s.len() >= 5) {
            let mut t = 0.0;
            for i in 0..samples.len() {
                if i > 0 {
                    let (a, b) = (samples[i - 1], samples[i]);
                    t += (b.theta - a.theta).hypot(b.phi - a.phi).hypot(b.a - a.a);
                }
                samples[i].t = t;
            }
            out.push(CurveTrace {
                family: family.into(),
                branch: format!("sin{}#{}", sign.tag(), out.len()),
                chart: TraceChart::AtiyahHitchin(p),
                action: ActionSpec::ah_so2(),
                level: c1,
                params: params.clone(),
                samples,
                closed: line.closed && whole,
                summary: None,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> TNParams {
        TNParams::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn case1_endpoint() {
        let tr = tn_u1_case1(1.0, 0.5, (0.0, 10.0), 101, unit()).unwrap();
        assert_eq!(tr.len(), 2);
        let s0 = tr[0].samples[0];
        assert!((s0.a - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(s0.phi, 0.0);
    }

    #[test]
    fn case1_flat_c2() {
        let tr = tn_u1_case1(1.0, 0.0, (2.0, 5.0), 11, unit()).unwrap();
        assert!(tr[0].samples.iter().all(|s| (s.phi - FRAC_PI_2).abs() < 1e-15));
    }

    #[test]
    fn case1_empty() {
        assert!(matches!(tn_u1_case1(1.0, 0.5, (0.1, 1.2), 11, unit()), Err(Error::EmptyDomain(_))));
    }

    #[test]
    fn case2_examples() {
        let tr = tn_u1_case2(1.0, 1.0, (0.0, 1.5), 51, unit()).unwrap();
        let s0 = tr[0].samples[0];
        assert!((s0.theta - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!(s0.phi.abs() < 1e-7);
    }

    #[test]
    fn so2_radius_examples() {
        let p = unit();
        assert!((tn_so2_radius(3.0, FRAC_PI_2, &p).unwrap() - (10f64.sqrt() - 2.0)).abs() < 1e-15);
        assert!((tn_so2_radius(3.0, 0.0, &p).unwrap() - 1.5).abs() < 1e-15);
    }
}
