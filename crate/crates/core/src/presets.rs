//! Parameter families behind the figure presets.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::atiyah_hitchin::AHParams;
use crate::error::{Error, Result};
use crate::slag::{
    ah_trace_theta_k, ah_trace_theta_phi, tn_so2_curve, tn_u1_case1, tn_u1_case2, verify_in_place, CurveTrace,
    SO2Branch, SinSign, VerifyReport,
};
use crate::taub_nut::TNParams;

pub const PRESETS: [&str; 5] = ["fig5", "fig6", "fig7", "fig8", "fig9"];

/// Samples per closed-form Taub-NUT trace.
pub const TN_SAMPLES: usize = 1601;
/// Marching-squares resolution for Atiyah-Hitchin traces.
pub const AH_GRID: usize = 256;

pub const FIG5_R_MAX: f64 = 10.0;
/// fig6 runs along r = 1/cos(theta) up to this radius.
pub const FIG6_R_MAX: f64 = 100.0;

/// c1 in {0, +-1, .., +-10}
pub fn ah_c1_values() -> Vec<f64> {
    let mut v = vec![0.0];
    for i in 1..=10 {
        v.push(i as f64);
        v.push(-(i as f64));
    }
    v
}

pub fn fig5_parameters() -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = (1..=5).map(|c1| (c1 as f64, 0.5)).collect();
    v.extend((1..=5).map(|i| (1.0, 0.2 * i as f64)));
    v
}

/// Traces of one preset, in a fixed order, not yet verified.
pub fn preset_traces(name: &str) -> Result<Vec<CurveTrace>> {
    let unit = TNParams::new(1.0, 1.0)?;
    let ah = AHParams::new(1.0, 1)?;
    let mut out = Vec::new();
    match name {
        "fig5" => {
            for (c1, c2) in fig5_parameters() {
                out.extend(tn_u1_case1(c1, c2, (0.0, FIG5_R_MAX), TN_SAMPLES, unit)?);
            }
        }
        "fig6" => {
            for c in 1..=5 {
                out.extend(tn_u1_case2(c as f64, 1.0, (0.0, (1.0 / FIG6_R_MAX).acos()), TN_SAMPLES, unit)?);
            }
        }
        "fig7" => {
            for c1 in 1..=10 {
                out.extend(tn_so2_curve(c1 as f64, unit, SO2Branch::Plane, TN_SAMPLES)?);
            }
        }
        "fig8" | "fig9" => {
            let sections: Vec<f64> =
                if name == "fig8" { vec![0.3, 0.5, 0.7] } else { vec![PI / 6.0, PI / 4.0, PI / 3.0] };
            let mut jobs = Vec::new();
            for &s in &sections {
                for c1 in ah_c1_values() {
                    for sign in [SinSign::Plus, SinSign::Minus] {
                        jobs.push((s, c1, sign));
                    }
                }
            }
            let traced: Vec<Vec<CurveTrace>> = jobs
                .par_iter()
                .map(|&(s, c1, sign)| {
                    if name == "fig8" {
                        ah_trace_theta_phi(s, c1, sign, ah, AH_GRID)
                    } else {
                        ah_trace_theta_k(s, c1, sign, ah, AH_GRID)
                    }
                })
                .collect::<Result<_>>()?;
            out.extend(traced.into_iter().flatten());
        }
        _ => return Err(Error::Domain(format!("unknown preset '{name}' (expected one of {})", PRESETS.join(", ")))),
    }
    Ok(out)
}

/// Verifies every trace (phase 0) in parallel and stores the summaries.
pub fn verify_all(traces: &mut [CurveTrace]) -> Vec<Result<VerifyReport>> {
    traces.par_iter_mut().map(|t| verify_in_place(t, 0.0)).collect()
}
