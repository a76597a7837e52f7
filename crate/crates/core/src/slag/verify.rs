//! End-to-end Lagrangian and special Lagrangian residuals along a trace.

use num_complex::Complex64;

use crate::atiyah_hitchin::{ah_point, AHSphericalPoint};
use crate::error::{Error, Result};
use crate::kahler::{holomorphic_volume, MetricBlock};
use crate::moment_maps::moment_tn;
use crate::taub_nut::{tn_chart_spherical_to_holo, TNSphericalPoint};

use super::curves::{CurveTrace, ResidualSummary, TraceChart, TraceSample};

type C = Complex64;

/// Per-sample data behind a residual summary.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    /// holomorphic coordinates (u, z) or (U, Z)
    pub holo: Vec<[C; 2]>,
    pub omega_res: Vec<f64>,
    pub im_omega_res: Vec<f64>,
    pub mu: Vec<f64>,
    pub summary: ResidualSummary,
}

/// Derivative at nodes[at] of the Lagrange interpolant through (nodes, values).
fn lagrange_derivative(nodes: &[f64], values: &[[C; 2]], at: usize) -> [C; 2] {
    let x = nodes[at];
    let n = nodes.len();
    let mut d = [C::new(0.0, 0.0); 2];
    for j in 0..n {
        let mut wj = 0.0;
        for k in 0..n {
            if k == j {
                continue;
            }
            let mut prod = 1.0 / (nodes[j] - nodes[k]);
            for l in 0..n {
                if l != j && l != k {
                    prod *= (x - nodes[l]) / (nodes[j] - nodes[l]);
                }
            }
            wj += prod;
        }
        d[0] += values[j][0] * wj;
        d[1] += values[j][1] * wj;
    }
    d
}

/// Tangent vectors by five-point differences in the chord length of w.
pub fn tangents(w: &[[C; 2]], closed: bool) -> Result<Vec<[C; 2]>> {
    let n = w.len();
    if n < 5 {
        return Err(Error::Degenerate(format!("{n} samples are too few for five-point differences")));
    }
    let dist = |a: &[C; 2], b: &[C; 2]| ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt();
    let mut s = vec![0.0; n];
    for i in 1..n {
        s[i] = s[i - 1] + dist(&w[i - 1], &w[i]);
    }
    let total = s[n - 1] + if closed { dist(&w[n - 1], &w[0]) } else { 0.0 };
    for i in 1..n {
        if !(s[i] > s[i - 1]) {
            return Err(Error::Degenerate(format!("repeated sample at index {i}")));
        }
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut nodes = [0.0; 5];
        let mut vals = [[C::new(0.0, 0.0); 2]; 5];
        let at;
        if closed {
            for (slot, off) in (-2i64..=2).enumerate() {
                let j = (i as i64 + off).rem_euclid(n as i64) as usize;
                let mut sj = s[j];
                if off < 0 && j > i {
                    sj -= total;
                } else if off > 0 && j < i {
                    sj += total;
                }
                nodes[slot] = sj;
                vals[slot] = w[j];
            }
            at = 2;
        } else {
            let start = i.saturating_sub(2).min(n - 5);
            for slot in 0..5 {
                nodes[slot] = s[start + slot];
                vals[slot] = w[start + slot];
            }
            at = i - start;
        }
        out.push(lagrange_derivative(&nodes, &vals, at));
    }
    Ok(out)
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = s.len();
    if n % 2 == 1 { s[n / 2] } else { 0.5 * (s[n / 2 - 1] + s[n / 2]) }
}

fn tn_spherical(s: &TraceSample) -> Result<TNSphericalPoint> {
    TNSphericalPoint::new(s.a, s.theta, s.phi, s.psi)
}

/// Holomorphic coordinates, metric blocks and moment values of all samples.
fn holo_samples(trace: &CurveTrace) -> Result<(Vec<[C; 2]>, Vec<MetricBlock>, Vec<f64>)> {
    let n = trace.samples.len();
    let mut w = Vec::with_capacity(n);
    let mut k = Vec::with_capacity(n);
    let mut mu = Vec::with_capacity(n);
    match trace.chart {
        TraceChart::TaubNut(p) => {
            for s in &trace.samples {
                let hp = tn_chart_spherical_to_holo(&tn_spherical(s)?, &p)?;
                w.push([hp.u, hp.z]);
                k.push(crate::taub_nut::tn_metric_holo(&hp, &p)?);
                mu.push(moment_tn(&trace.action, &hp, &p)?);
            }
        }
        TraceChart::AtiyahHitchin(p) => {
            let mut prev: Option<C> = None;
            for s in &trace.samples {
                let sp = AHSphericalPoint::new(s.a, s.theta, s.phi, s.psi)?;
                let a = ah_point(&sp, &p)?;
                let (mut uu, mut zz) = (a.cap_u, a.cap_z);
                // keep sqrt(z) continuous along the trace
                if let Some(r) = prev {
                    if (zz - r).norm() > (zz + r).norm() {
                        uu = -uu;
                        zz = -zz;
                    }
                }
                prev = Some(zz);
                w.push([uu, zz]);
                k.push(a.metric);
                mu.push(a.mu);
            }
        }
    }
    Ok((w, k, mu))
}

/// Spherical form for traces on the Taub-NUT axis, where z = 0 and X vanishes:
/// omega(X, l') = d mu(l') is measured directly and Re(z u') is identically zero.
fn verify_axis(trace: &CurveTrace) -> Result<VerifyReport> {
    let p = match trace.chart {
        TraceChart::TaubNut(p) => p,
        _ => unreachable!(),
    };
    let n = trace.samples.len();
    let mu: Vec<f64> = trace
        .samples
        .iter()
        .map(|s| {
            let absz = 0.5 * s.a * s.theta.sin();
            2.0 * p.m * s.a + 2.0 * absz * absz / p.h
        })
        .collect();
    let mut omega_res = vec![0.0; n];
    for i in 0..n {
        let (a, b) = (i.saturating_sub(1), (i + 1).min(n - 1));
        omega_res[i] = ((mu[b] - mu[a]) / (trace.samples[b].t - trace.samples[a].t)).abs();
    }
    let im_omega_res: Vec<f64> = trace
        .samples
        .iter()
        .map(|s| 0.5 * s.a * s.theta.sin())
        .collect();
    let med = median(&mu);
    let summary = ResidualSummary {
        omega: omega_res.iter().cloned().fold(0.0, f64::max),
        im_omega: im_omega_res.iter().cloned().fold(0.0, f64::max),
        mu: mu.iter().map(|m| (m - med).abs()).fold(0.0, f64::max),
        mu_median: med,
        abs_w2_variation: 0.0,
        gram: 0.0,
        transversal: false,
        degenerate: true,
    };
    Ok(VerifyReport { holo: Vec::new(), omega_res, im_omega_res, mu, summary })
}

fn on_axis(trace: &CurveTrace) -> bool {
    matches!(trace.chart, TraceChart::TaubNut(_)) && trace.samples.iter().all(|s| s.theta.sin().abs() < 1e-15)
}

/// Normalised residuals |omega(v1, v2)| and |Im(e^{i phase} Omega(v1, v2))| with
/// v1 the generator and v2 the tangent, plus the spread of mu and transversality.
pub fn verify_slag(trace: &CurveTrace, phase: f64) -> Result<VerifyReport> {
    if trace.samples.len() < 3 {
        return Err(Error::Degenerate(format!("trace has {} samples", trace.samples.len())));
    }
    if on_axis(trace) {
        return verify_axis(trace);
    }
    let (w, metric, mu) = holo_samples(trace)?;
    let v2 = tangents(&w, trace.closed)?;
    let rot = C::from_polar(1.0, phase);
    let n = w.len();
    let mut omega_res = Vec::with_capacity(n);
    let mut im_omega_res = Vec::with_capacity(n);
    let mut gram = f64::INFINITY;
    for i in 0..n {
        let v1 = trace.action.field(w[i][1]);
        let k = &metric[i];
        let (n1, n2) = (k.norm(v1), k.norm(v2[i]));
        let scale = n1 * n2;
        if !(scale > 0.0) {
            return Err(Error::Degenerate(format!("vanishing generator or tangent at sample {i}")));
        }
        omega_res.push(k.omega(v1, v2[i]).abs() / scale);
        im_omega_res.push((rot * holomorphic_volume(v1, v2[i])).im.abs() / scale);
        let g12 = k.hermitian(v1, v2[i]).re;
        gram = gram.min(1.0 - g12 * g12 / (scale * scale));
    }
    let abs_w2_variation: f64 = w.windows(2).map(|p| (p[1][1].norm() - p[0][1].norm()).abs()).sum();
    let wmax = w.iter().map(|x| x[1].norm()).fold(0.0, f64::max);
    let transversal = abs_w2_variation > 1e-8 * (1.0 + wmax) || gram > 1e-6;
    let med = median(&mu);
    let summary = ResidualSummary {
        omega: omega_res.iter().cloned().fold(0.0, f64::max),
        im_omega: im_omega_res.iter().cloned().fold(0.0, f64::max),
        mu: mu.iter().map(|m| (m - med).abs()).fold(0.0, f64::max),
        mu_median: med,
        abs_w2_variation,
        gram,
        transversal,
        degenerate: false,
    };
    Ok(VerifyReport { holo: w, omega_res, im_omega_res, mu, summary })
}

/// Runs verify_slag and stores the summary on the trace.
pub fn verify_in_place(trace: &mut CurveTrace, phase: f64) -> Result<VerifyReport> {
    let r = verify_slag(trace, phase)?;
    trace.summary = Some(r.summary);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lagrange_exact_on_quartic() {
        let nodes = [0.0, 0.3, 0.35, 1.0, 1.7];
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x.powi(3) + x.powi(4);
        let df = |x: f64| -2.0 + 1.5 * x * x + 4.0 * x.powi(3);
        let vals: Vec<[C; 2]> = nodes.iter().map(|&x| [C::new(f(x), 0.0), C::new(0.0, x)]).collect();
        for at in 0..5 {
            let d = lagrange_derivative(&nodes, &vals, at);
            assert!((d[0].re - df(nodes[at])).abs() < 1e-11);
            assert!((d[1].im - 1.0).abs() < 1e-12);
        }
    }
}
