//! Command-line surface. Each command returns an exit code and the text to print,
//! so the binary stays a thin wrapper and everything here is testable in-process.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::atiyah_hitchin::{ah_point, AHParams, AHSphericalPoint};
use crate::error::{Error, Result};
use crate::io::{trace_to_csv, traces_to_svg};
use crate::kahler::MetricBlock;
use crate::presets::{preset_traces, verify_all, PRESETS, TN_SAMPLES};
use crate::slag::{
    ah_trace_theta_k, ah_trace_theta_phi, tn_so2_curve, tn_u1_case1, tn_u1_case2, CurveTrace, SO2Branch, SinSign,
};
use crate::suite::{run_checks, Ctx, Kind, Scope, Selection};
use crate::taub_nut::{tn_chart_spherical_to_holo, tn_metric_holo, TNParams, TNSphericalPoint};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const THREADS_ENV: &str = "SLAG_FORGE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "slag-forge", version, about = "Hyperkahler metrics, moment maps and special Lagrangian curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the holomorphic metric block at one point
    Metric(MetricArgs),
    /// Run the invariant suites
    Verify(SuiteArgs),
    /// Write solution curves as CSV (and optionally SVG)
    Trace(TraceArgs),
    /// Cross-check closed forms against contour integrals
    Oracle(SuiteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ManifoldArg {
    Tn,
    Ah,
}

#[derive(Debug, Clone, Args)]
pub struct MetricArgs {
    #[arg(long, value_enum)]
    pub manifold: ManifoldArg,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    #[arg(long, default_value_t = FRAC_PI_2)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.0)]
    pub psi: f64,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    /// Atiyah-Hitchin modulus, 0 < k < 1
    #[arg(long, default_value_t = 0.5)]
    pub k: f64,
    /// Monge-Ampere tolerance (default 1e-10 on tn, 1e-8 on ah)
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated check names
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    /// Random draws per sampled check
    #[arg(long)]
    pub samples: Option<usize>,
    /// Restrict to one manifold's checks
    #[arg(long, value_enum)]
    pub manifold: Option<ManifoldArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SO2BranchArg {
    Plane,
    Axis,
    Imag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Args)]
pub struct TraceArgs {
    #[arg(long)]
    pub preset: Option<String>,
    /// U(1) level with real c2: cos phi = 2 c2 / sqrt(r^2 - c1^2)
    #[arg(long)]
    pub tn_u1_case1: bool,
    /// U(1) level with imaginary c2: cos phi = c / tan theta
    #[arg(long)]
    pub tn_u1_case2: bool,
    /// SO(2) level 2mr + 2|z|^2/h = c1
    #[arg(long)]
    pub tn_so2: bool,
    /// Atiyah-Hitchin curve in the (theta, phi) plane at fixed k
    #[arg(long)]
    pub ah_theta_phi: bool,
    /// Atiyah-Hitchin curve in the (theta, k) plane at fixed phi
    #[arg(long)]
    pub ah_theta_k: bool,
    #[arg(long)]
    pub c1: Option<f64>,
    #[arg(long)]
    pub c2: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long, default_value_t = 1.0)]
    pub h: f64,
    #[arg(long, default_value_t = 10.0)]
    pub r_max: f64,
    #[arg(long, value_enum, default_value_t = SO2BranchArg::Plane)]
    pub branch: SO2BranchArg,
    /// u' = i rate on the imaginary SO(2) branch
    #[arg(long, default_value_t = 1.0)]
    pub rate: f64,
    #[arg(long, default_value_t = FRAC_PI_2)]
    pub theta_star: f64,
    #[arg(long, value_enum)]
    pub sign: Option<SignArg>,
    #[arg(long, default_value_t = TN_SAMPLES)]
    pub samples: usize,
    /// Marching-squares resolution for Atiyah-Hitchin traces
    #[arg(long, default_value_t = 256)]
    pub grid: usize,
    #[arg(long, short, default_value = ".")]
    pub out: PathBuf,
    /// Also write one SVG overlay of all traces
    #[arg(long)]
    pub svg: bool,
}

/// Builds the global worker pool from `SLAG_FORGE_THREADS`, if set.
pub fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().map_err(|_| Error::Parse(format!("{THREADS_ENV}='{v}' is not a count")))?;
        if n == 0 {
            return Err(Error::Domain(format!("{THREADS_ENV} must be at least 1")));
        }
        // a pool built earlier in the same process is kept
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

pub fn run(cli: &Cli) -> (i32, String) {
    match &cli.command {
        Command::Metric(a) => cmd_metric(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Trace(a) => cmd_trace(a),
        Command::Oracle(a) => cmd_oracle(a),
    }
}

fn usage(e: Error) -> (i32, String) {
    (EXIT_USAGE, format!("error: {e}\n"))
}

fn metric_table(b: &MetricBlock, names: [&str; 2]) -> String {
    let [a, z] = names;
    let mut s = String::new();
    for (label, v) in [
        (format!("K_{a}{a}bar"), b.kuubar),
        (format!("K_{a}{z}bar"), b.kuzbar),
        (format!("K_{z}{a}bar"), b.kzubar),
        (format!("K_{z}{z}bar"), b.kzzbar),
        ("det".to_string(), b.det()),
    ] {
        writeln!(s, "{label:<10} {:>24.16e} {:>+24.16e}i", v.re, v.im).unwrap();
    }
    s
}

pub fn cmd_metric(a: &MetricArgs) -> (i32, String) {
    let res = (|| -> Result<(String, f64, f64)> {
        match a.manifold {
            ManifoldArg::Tn => {
                let p = TNParams::new(a.h, a.m)?;
                let pt = TNSphericalPoint::new(a.r, a.theta, a.phi, a.psi)?;
                let holo = tn_chart_spherical_to_holo(&pt, &p)?;
                let b = tn_metric_holo(&holo, &p)?;
                Ok((metric_table(&b, ["u", "z"]), (b.det() - 1.0).norm(), a.tol.unwrap_or(1e-10)))
            }
            ManifoldArg::Ah => {
                let p = AHParams::new(a.h, 1)?;
                let pt = AHSphericalPoint::new(a.k, a.theta, a.phi, a.psi)?;
                let b = ah_point(&pt, &p)?.metric;
                Ok((metric_table(&b, ["U", "Z"]), (b.det() - 1.0).norm(), a.tol.unwrap_or(1e-8)))
            }
        }
    })();
    match res {
        Err(e) => usage(e),
        Ok((mut table, resid, tol)) => {
            let ok = resid < tol;
            writeln!(table, "monge-ampere residual {resid:.3e} (tolerance {tol:.1e}) {}", if ok { "PASS" } else { "FAIL" })
                .unwrap();
            (if ok { EXIT_PASS } else { EXIT_FAIL }, table)
        }
    }
}

fn run_suite(a: &SuiteArgs, kind: Kind) -> (i32, String) {
    let sel = Selection {
        kind: Some(kind),
        scope: a.manifold.map(|m| match m {
            ManifoldArg::Tn => Scope::TaubNut,
            ManifoldArg::Ah => Scope::AtiyahHitchin,
        }),
        only: a.only.clone(),
    };
    if a.samples == Some(0) {
        return usage(Error::Domain("--samples must be at least 1".into()));
    }
    let mut ctx = Ctx::new(a.seed, a.samples);
    match run_checks(&sel, &mut ctx) {
        Err(e) => usage(e),
        Ok(results) if results.is_empty() => usage(Error::Domain("selection matches no check".into())),
        Ok(results) => {
            let mut s = String::new();
            for r in &results {
                writeln!(s, "{}", r.line()).unwrap();
            }
            let ok = results.iter().all(|r| r.passed);
            (if ok { EXIT_PASS } else { EXIT_FAIL }, s)
        }
    }
}

pub fn cmd_verify(a: &SuiteArgs) -> (i32, String) {
    run_suite(a, Kind::Invariant)
}

pub fn cmd_oracle(a: &SuiteArgs) -> (i32, String) {
    run_suite(a, Kind::Oracle)
}

fn need(v: Option<f64>, flag: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Domain(format!("--{flag} is required for this family")))
}

fn signs(a: &TraceArgs) -> Vec<SinSign> {
    match a.sign {
        Some(SignArg::Plus) => vec![SinSign::Plus],
        Some(SignArg::Minus) => vec![SinSign::Minus],
        None => vec![SinSign::Plus, SinSign::Minus],
    }
}

/// The traces selected by a trace invocation, and the stem for their file names.
pub fn trace_request(a: &TraceArgs) -> Result<(String, Vec<CurveTrace>)> {
    let families = [a.preset.is_some(), a.tn_u1_case1, a.tn_u1_case2, a.tn_so2, a.ah_theta_phi, a.ah_theta_k];
    match families.iter().filter(|&&f| f).count() {
        0 => {
            return Err(Error::Domain(format!(
                "choose --preset ({}) or one explicit family flag",
                PRESETS.join("|")
            )))
        }
        1 => {}
        _ => return Err(Error::Domain("choose exactly one of --preset and the family flags".into())),
    }
    if let Some(name) = &a.preset {
        return Ok((name.clone(), preset_traces(name)?));
    }
    let tn = || TNParams::new(a.h, a.m);
    let ah = || AHParams::new(a.h, 1);
    let (stem, traces) = if a.tn_u1_case1 {
        ("tn-u1-case1", tn_u1_case1(need(a.c1, "c1")?, need(a.c2, "c2")?, (0.0, a.r_max), a.samples, tn()?)?)
    } else if a.tn_u1_case2 {
        let c1 = a.c1.unwrap_or(1.0);
        let theta_max = if a.r_max > c1.abs() { (c1.abs() / a.r_max).acos() } else { FRAC_PI_2 };
        ("tn-u1-case2", tn_u1_case2(need(a.c, "c")?, c1, (0.0, theta_max), a.samples, tn()?)?)
    } else if a.tn_so2 {
        let branch = match a.branch {
            SO2BranchArg::Plane => SO2Branch::Plane,
            SO2BranchArg::Axis => SO2Branch::Axis,
            SO2BranchArg::Imag => SO2Branch::Imaginary { rate: a.rate, theta_star: a.theta_star },
        };
        ("tn-so2", tn_so2_curve(need(a.c1, "c1")?, tn()?, branch, a.samples)?)
    } else {
        let c1 = need(a.c1, "c1")?;
        let mut out = Vec::new();
        for sign in signs(a) {
            if a.ah_theta_phi {
                out.extend(ah_trace_theta_phi(need(a.k, "k")?, c1, sign, ah()?, a.grid)?);
            } else {
                let phi = need(a.phi, "phi")?;
                if !(0.0..=2.0 * PI).contains(&phi) {
                    return Err(Error::Domain(format!("phi = {phi} outside [0, 2pi]")));
                }
                out.extend(ah_trace_theta_k(phi, c1, sign, ah()?, a.grid)?);
            }
        }
        (if a.ah_theta_phi { "ah-theta-phi" } else { "ah-theta-k" }, out)
    };
    if traces.is_empty() {
        return Err(Error::EmptyDomain(format!("{stem}: no admissible points for these parameters")));
    }
    Ok((stem.to_string(), traces))
}

pub fn cmd_trace(a: &TraceArgs) -> (i32, String) {
    let (stem, mut traces) = match trace_request(a) {
        Ok(v) => v,
        Err(e) => return usage(e),
    };
    let reports = verify_all(&mut traces);
    // everything is computed before the first file is written
    let mut files = Vec::new();
    let mut text = String::new();
    let mut failed = 0;
    for (i, (t, r)) in traces.iter().zip(&reports).enumerate() {
        let name = format!("{stem}_{i:03}.csv");
        match r {
            Ok(rep) => {
                let s = rep.summary;
                let pass = s.passes(t.threshold());
                failed += usize::from(!pass);
                writeln!(
                    text,
                    "{} {name} {} omega={:.2e} imOmega={:.2e} mu={:.2e}",
                    if pass { "PASS" } else { "FAIL" },
                    t.param_string(),
                    s.omega,
                    s.im_omega,
                    s.mu
                )
                .unwrap();
                match trace_to_csv(t, rep) {
                    Ok(csv) => files.push((name, csv)),
                    Err(e) => return usage(e),
                }
            }
            Err(e) => {
                failed += 1;
                writeln!(text, "FAIL {name} {} error: {e}", t.param_string()).unwrap();
            }
        }
    }
    if a.svg {
        files.push((format!("{stem}.svg"), traces_to_svg(&stem, &traces)));
    }
    if let Err(e) = std::fs::create_dir_all(&a.out) {
        return usage(e.into());
    }
    for (name, body) in &files {
        if let Err(e) = std::fs::write(a.out.join(name), body) {
            return usage(e.into());
        }
    }
    writeln!(text, "{} traces, {} failing, {} files in {}", traces.len(), failed, files.len(), a.out.display()).unwrap();
    (if failed == 0 { EXIT_PASS } else { EXIT_FAIL }, text)
}
