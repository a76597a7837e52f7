//! CSV and SVG output for traces.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::atiyah_hitchin::AHParams;
use crate::error::{Error, Result};
use crate::moment_maps::ActionSpec;
use crate::slag::{CurveTrace, TraceChart, TraceSample, VerifyReport};
use crate::taub_nut::TNParams;

type C = Complex64;

pub const TN_COLUMNS: &str = "t,r,theta,phi,psi,re_u,im_u,re_z,im_z,omega_res,imOmega_res,mu";
pub const AH_COLUMNS: &str = "t,k,theta,phi,psi,re_U,im_U,re_Z,im_Z,omega_res,imOmega_res,mu";

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Holomorphic coordinates of an axis sample, where Re u diverges and z = 0.
fn axis_holo(s: &TraceSample, p: &TNParams) -> [C; 2] {
    let re_u = if s.theta.cos() > 0.0 { f64::NEG_INFINITY } else { f64::INFINITY };
    [C::new(re_u, -2.0 * p.m * s.psi), C::new(0.0, 0.0)]
}

/// One CSV document: header, column names, one row per sample.
pub fn trace_to_csv(trace: &CurveTrace, report: &VerifyReport) -> Result<String> {
    let n = trace.samples.len();
    if report.mu.len() != n || report.omega_res.len() != n {
        return Err(Error::Domain("report does not belong to this trace".into()));
    }
    let mut out = String::new();
    let mut params = trace.param_string();
    if trace.closed {
        params.push_str(";closed=1");
    }
    writeln!(out, "# slag-forge v1, manifold={}, params={}", trace.chart.tag(), params).unwrap();
    let cols = match trace.chart {
        TraceChart::TaubNut(_) => TN_COLUMNS,
        TraceChart::AtiyahHitchin(_) => AH_COLUMNS,
    };
    writeln!(out, "{cols}").unwrap();
    for (i, s) in trace.samples.iter().enumerate() {
        let w = match (report.holo.get(i), trace.chart) {
            (Some(w), _) => *w,
            (None, TraceChart::TaubNut(p)) => axis_holo(s, &p),
            (None, TraceChart::AtiyahHitchin(_)) => return Err(Error::Domain("missing chart coordinates".into())),
        };
        let row = [
            s.t,
            s.a,
            s.theta,
            s.phi,
            s.psi,
            w[0].re,
            w[0].im,
            w[1].re,
            w[1].im,
            report.omega_res[i],
            report.im_omega_res[i],
            report.mu[i],
        ];
        let cells: Vec<String> = row.iter().map(|&x| fmt(x)).collect();
        writeln!(out, "{}", cells.join(",")).unwrap();
    }
    Ok(out)
}

fn action_for(family: &str) -> Result<ActionSpec> {
    if family.starts_with("tn-u1") {
        Ok(ActionSpec::tn_u1())
    } else if family.starts_with("tn-so2") {
        Ok(ActionSpec::tn_so2())
    } else if family.starts_with("ah-") {
        Ok(ActionSpec::ah_so2())
    } else {
        Err(Error::Parse(format!("unknown family '{family}'")))
    }
}

/// Rebuilds a trace (without summary) from CSV text written by `trace_to_csv`.
pub fn trace_from_csv(text: &str) -> Result<CurveTrace> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))?;
    let rest = header
        .strip_prefix("# slag-forge v1, manifold=")
        .ok_or_else(|| Error::Parse(format!("bad header '{header}'")))?;
    let (tag, params) = rest
        .split_once(", params=")
        .ok_or_else(|| Error::Parse(format!("bad header '{header}'")))?;
    let mut family = None;
    let mut branch = None;
    let mut closed = false;
    let mut kv: Vec<(String, f64)> = Vec::new();
    for item in params.split(';') {
        let (k, v) = item.split_once('=').ok_or_else(|| Error::Parse(format!("bad parameter '{item}'")))?;
        match k {
            "family" => family = Some(v.to_string()),
            "branch" => branch = Some(v.to_string()),
            "closed" => closed = v == "1",
            _ => {
                let x: f64 = v.parse().map_err(|_| Error::Parse(format!("bad value in '{item}'")))?;
                kv.push((k.to_string(), x));
            }
        }
    }
    let family = family.ok_or_else(|| Error::Parse("header lacks family".into()))?;
    let branch = branch.ok_or_else(|| Error::Parse("header lacks branch".into()))?;
    let get = |key: &str| kv.iter().find(|(k, _)| k == key).map(|(_, v)| *v);
    let (chart, expected) = match tag {
        "tn" => {
            let p = TNParams::new(get("h").unwrap_or(1.0), get("m").unwrap_or(1.0))?;
            (TraceChart::TaubNut(p), TN_COLUMNS)
        }
        "ah" => (TraceChart::AtiyahHitchin(AHParams::new(get("h").unwrap_or(1.0), 1)?), AH_COLUMNS),
        _ => return Err(Error::Parse(format!("unknown manifold tag '{tag}'"))),
    };
    let cols = lines.next().ok_or_else(|| Error::Parse("missing column line".into()))?;
    if cols != expected {
        return Err(Error::Parse(format!("unexpected columns '{cols}'")));
    }
    let mut samples = Vec::new();
    for (ln, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|c| c.parse::<f64>().map_err(|_| Error::Parse(format!("row {}: bad number '{c}'", ln + 1))))
            .collect::<Result<_>>()?;
        if vals.len() != 12 {
            return Err(Error::Parse(format!("row {}: {} columns", ln + 1, vals.len())));
        }
        samples.push(TraceSample { t: vals[0], a: vals[1], theta: vals[2], phi: vals[3], psi: vals[4] });
    }
    let action = action_for(&family)?;
    let c1 = get("c1").unwrap_or(0.0);
    let level = if family.starts_with("tn-u1") { 0.5 * c1 } else { c1 };
    Ok(CurveTrace { family, branch, chart, action, level, params: kv, samples, closed, summary: None })
}

/// Plot coordinates of a trace sample for the family's figure plane.
pub fn plot_axes(trace: &CurveTrace) -> (&'static str, &'static str, fn(&TraceSample) -> (f64, f64)) {
    match trace.family.as_str() {
        "tn-u1-case1" => ("r", "phi", |s| (s.a, s.phi)),
        "tn-so2-plane" | "tn-so2-axis" | "tn-so2-imag" => ("theta", "r", |s| (s.theta, s.a)),
        "ah-theta-k" => ("theta", "k", |s| (s.theta, s.a)),
        _ => ("theta", "phi", |s| (s.theta, s.phi)),
    }
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) {
        return vec![lo];
    }
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| span / s <= 6.0).unwrap_or(10.0 * mag);
    let mut v = Vec::new();
    let mut x = (lo / step).ceil() * step;
    while x <= hi + 1e-12 * span {
        v.push(x);
        x += step;
    }
    v
}

/// Plain polyline overlay of several traces with axis ticks.
pub fn traces_to_svg(title: &str, traces: &[CurveTrace]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const M: f64 = 50.0;
    let (xl, yl) = traces.first().map(|t| {
        let (a, b, _) = plot_axes(t);
        (a, b)
    }).unwrap_or(("x", "y"));
    let mut pts: Vec<Vec<(f64, f64)>> = Vec::new();
    for t in traces {
        let (_, _, f) = plot_axes(t);
        pts.push(t.samples.iter().map(f).filter(|p| p.0.is_finite() && p.1.is_finite()).collect());
    }
    let all = pts.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| M + (x - x0) / (x1 - x0) * (W - 2.0 * M);
    let sy = |y: f64| H - M - (y - y0) / (y1 - y0) * (H - 2.0 * M);
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#).unwrap();
    writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{title}</text>"#, W / 2.0).unwrap();
    writeln!(
        s,
        r#"<rect x="{M}" y="{M}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * M,
        H - 2.0 * M
    )
    .unwrap();
    for x in ticks(x0, x1) {
        let px = sx(x);
        writeln!(s, r#"<line x1="{px:.2}" y1="{}" x2="{px:.2}" y2="{}" stroke="black"/>"#, H - M, H - M + 5.0).unwrap();
        writeln!(s, r#"<text x="{px:.2}" y="{}" text-anchor="middle" font-size="10">{x:.3}</text>"#, H - M + 18.0)
            .unwrap();
    }
    for y in ticks(y0, y1) {
        let py = sy(y);
        writeln!(s, r#"<line x1="{}" y1="{py:.2}" x2="{M}" y2="{py:.2}" stroke="black"/>"#, M - 5.0).unwrap();
        writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end" font-size="10">{y:.3}</text>"#, M - 8.0, py + 3.0)
            .unwrap();
    }
    writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{xl}</text>"#, W / 2.0, H - 12.0).unwrap();
    writeln!(s, r#"<text x="14" y="{}" text-anchor="middle" font-size="12">{yl}</text>"#, H / 2.0).unwrap();
    for line in &pts {
        if line.len() < 2 {
            continue;
        }
        let coords: Vec<String> = line.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        writeln!(s, r#"<polyline fill="none" stroke="black" stroke-width="1" points="{}"/>"#, coords.join(" ")).unwrap();
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tick_steps_are_round() {
        assert_eq!(ticks(0.0, 10.0), vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        let t = ticks(0.013, 0.98);
        assert!(t.len() >= 4 && t.len() <= 6);
    }
}
