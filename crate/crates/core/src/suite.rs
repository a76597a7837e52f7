//! Named invariant checks and oracle cross-checks, each reduced to one
//! number compared against a bound.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::atiyah_hitchin::{
    ah_coeffs, ah_cycle_integral, ah_from_spherical, ah_pi_xpm, ah_point, ah_zvx, AHGeomState, AHParams, AHSphericalPoint,
    DEGENERACY_GUARD,
};
use crate::error::{Error, Result};
use crate::moment_maps::{
    orbit_mu_variation, symplecticity_residual, verify_hamiltonian, ActionPoint, ActionSpec,
};
use crate::multiplets::{
    ah_in_contour_oracle, o2_eval, o2_roots, o4_eval, o4_from_roots, o4_labellings, o4_modulus, o4_roots,
    tn_fxx_contour_oracle, O2Multiplet,
};
use crate::presets::{preset_traces, verify_all, PRESETS};
use crate::slag::{
    ah_condition, ah_psi, sample_grid, tn_so2_curve, tn_so2_radius, tn_u1_case1, tn_u1_case2, trace_zero_set,
    verify_slag, CurveTrace, ImplicitGrid, ResidualSummary, SO2Branch, SinSign, TraceChart,
};
use crate::specfun::{
    elliptic_e, elliptic_k, eta1_closed, eta1_quadrature, omega1_quadrature, weierstrass_p,
    weierstrass_p_shifted, EllipticData,
};
use crate::taub_nut::{
    tn_chart_holo_to_spherical, tn_chart_spherical_to_holo, tn_metric_holo, tn_metric_spherical,
    tn_pullback_spherical, TNParams, TNSphericalPoint,
};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Invariant,
    Oracle,
}

/// Which manifold a check exercises; `General` checks run under any filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    General,
    TaubNut,
    AtiyahHitchin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Below(f64),
    AtLeast(f64),
}

impl Bound {
    pub fn holds(&self, v: f64) -> bool {
        match *self {
            Bound::Below(t) => v < t,
            Bound::AtLeast(t) => v >= t,
        }
    }
}

pub struct Measure {
    pub value: f64,
    pub detail: String,
}

fn measure(value: f64, detail: impl Into<String>) -> Result<Measure> {
    Ok(Measure { value, detail: detail.into() })
}

/// Per-run state: the seeded generator and verified preset traces shared between checks.
pub struct Ctx {
    pub seed: u64,
    pub samples: Option<usize>,
    rng: ChaCha8Rng,
    presets: HashMap<String, Vec<(CurveTrace, std::result::Result<ResidualSummary, String>)>>,
}

impl Ctx {
    pub fn new(seed: u64, samples: Option<usize>) -> Self {
        Self { seed, samples, rng: ChaCha8Rng::seed_from_u64(seed), presets: HashMap::new() }
    }

    fn reseed(&mut self, stream: u64) {
        self.rng = ChaCha8Rng::seed_from_u64(self.seed);
        self.rng.set_stream(stream);
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.uniform(lo.ln(), hi.ln()).exp()
    }

    fn count(&self, default: usize) -> usize {
        self.samples.unwrap_or(default).max(1)
    }

    /// Traces of a preset with their verification summaries, computed once per run.
    pub fn preset(&mut self, name: &str) -> Result<&[(CurveTrace, std::result::Result<ResidualSummary, String>)]> {
        if !self.presets.contains_key(name) {
            let mut traces = preset_traces(name)?;
            let reports = verify_all(&mut traces);
            let rows = traces
                .into_iter()
                .zip(reports)
                .map(|(t, r)| (t, r.map(|r| r.summary).map_err(|e| e.to_string())))
                .collect();
            self.presets.insert(name.to_string(), rows);
        }
        Ok(&self.presets[name])
    }

    pub fn random_tn_point(&mut self, r_range: (f64, f64), unit: bool) -> Result<(TNSphericalPoint, TNParams)> {
        let (h, m) = if unit { (1.0, self.uniform(0.5, 2.0)) } else { (self.uniform(0.5, 2.0), self.uniform(0.1, 2.0)) };
        let r = self.log_uniform(r_range.0, r_range.1);
        let theta = self.uniform(0.05, PI - 0.05);
        let phi = self.uniform(0.0, 2.0 * PI);
        let psi = self.uniform(0.0, 2.0 * PI);
        Ok((TNSphericalPoint::new(r, theta, phi, psi)?, TNParams::new(h, m)?))
    }

    /// Spherical Atiyah-Hitchin point away from the degenerate loci (h = 1).
    pub fn random_ah_point(&mut self) -> Result<(AHSphericalPoint, AHGeomState)> {
        let p = AHParams::default();
        for _ in 0..1000 {
            let k = self.uniform(0.05, 0.95);
            let theta = self.uniform(0.05, PI - 0.05);
            let phi = self.uniform(0.0, 2.0 * PI);
            let psi = self.uniform(0.0, PI);
            let pt = AHSphericalPoint::new(k, theta, phi, psi)?;
            if let Ok(s) = ah_from_spherical(&pt, &p) {
                if s.is_regular(DEGENERACY_GUARD) {
                    return Ok((pt, s));
                }
            }
        }
        Err(Error::Degenerate("no regular Atiyah-Hitchin point in 1000 draws".into()))
    }

    fn random_elliptic(&mut self) -> Result<EllipticData> {
        let k = self.uniform(0.02, 0.98);
        let rho = self.log_uniform(0.1, 10.0);
        EllipticData::new(k, rho)
    }
}

pub struct Check {
    pub name: &'static str,
    pub kind: Kind,
    pub scope: Scope,
    pub bound: Bound,
    run: fn(&mut Ctx) -> Result<Measure>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CheckResult {
    /// `PASS name value=.. bound=.. time=..s detail`
    pub fn line(&self) -> String {
        let b = match self.bound {
            Bound::Below(t) => format!("<{t:.1e}"),
            Bound::AtLeast(t) => format!(">={t:.1e}"),
        };
        format!(
            "{} {} value={:.3e} bound={} time={:.2}s {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            b,
            self.seconds,
            self.detail
        )
    }
}

fn run_one(check: &Check, index: usize, ctx: &mut Ctx) -> CheckResult {
    ctx.reseed(index as u64);
    let start = Instant::now();
    let (value, detail) = match (check.run)(ctx) {
        Ok(m) => (m.value, m.detail),
        Err(e) => (f64::NAN, format!("error: {e}")),
    };
    CheckResult {
        name: check.name.to_string(),
        value,
        bound: check.bound,
        passed: value.is_finite() && check.bound.holds(value),
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Selection of checks for one run.
#[derive(Debug, Clone, Default)]
pub struct Selection {
    pub kind: Option<Kind>,
    /// restrict to one manifold (general checks are kept)
    pub scope: Option<Scope>,
    pub only: Vec<String>,
}

pub fn select(sel: &Selection) -> Result<Vec<(usize, &'static Check)>> {
    for name in &sel.only {
        if !CHECKS.iter().any(|c| c.name == name) {
            let names: Vec<&str> = CHECKS.iter().map(|c| c.name).collect();
            return Err(Error::Domain(format!("unknown check '{name}' (known: {})", names.join(", "))));
        }
    }
    Ok(CHECKS
        .iter()
        .enumerate()
        .filter(|(_, c)| sel.kind.is_none_or(|k| c.kind == k))
        .filter(|(_, c)| sel.scope.is_none_or(|s| c.scope == s || c.scope == Scope::General))
        .filter(|(_, c)| sel.only.is_empty() || sel.only.iter().any(|n| n == c.name))
        .collect())
}

/// Runs the selected checks in table order. The stream of each check's
/// generator is its table index, so results do not depend on the selection.
pub fn run_checks(sel: &Selection, ctx: &mut Ctx) -> Result<Vec<CheckResult>> {
    Ok(select(sel)?.into_iter().map(|(i, c)| run_one(c, i, ctx)).collect())
}

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |a: f64, b| if b.is_nan() || a.is_nan() { f64::NAN } else { a.max(b) })
}

fn wrap(a: f64) -> f64 {
    (a + PI).rem_euclid(2.0 * PI) - PI
}

macro_rules! check {
    ($name:expr, $kind:ident, $scope:ident, $bound:expr, $f:expr) => {
        Check { name: $name, kind: Kind::$kind, scope: Scope::$scope, bound: $bound, run: $f }
    };
}

pub static CHECKS: &[Check] = &[
    check!("legendre-relation", Invariant, General, Bound::Below(1e-12), legendre_relation),
    check!("p-half-periods", Invariant, General, Bound::Below(1e-10), p_half_periods),
    check!("p-differential-equation", Invariant, General, Bound::Below(1e-8), p_differential_equation),
    check!("omega1-quadrature", Invariant, General, Bound::Below(1e-10), omega1_check),
    check!("elliptic-data-invariants", Invariant, General, Bound::Below(1e-12), elliptic_invariants),
    check!("o2-roots-reality", Invariant, General, Bound::Below(1e-12), o2_roots_reality),
    check!("o4-roots", Invariant, General, Bound::Below(1e-10), o4_roots_check),
    check!("tn-monge-ampere", Invariant, TaubNut, Bound::Below(1e-10), tn_monge_ampere),
    check!("tn-hermitian-positive", Invariant, TaubNut, Bound::Below(1e-12), tn_hermitian_positive),
    check!("tn-chart-roundtrip", Invariant, TaubNut, Bound::Below(1e-9), tn_chart_roundtrip),
    check!("tn-pullback", Invariant, TaubNut, Bound::Below(1e-8), tn_pullback),
    check!("tn-legendre-transform", Invariant, TaubNut, Bound::Below(1e-5), tn_legendre_transform),
    check!("ah-monge-ampere", Invariant, AtiyahHitchin, Bound::Below(1e-8), ah_monge_ampere),
    check!("ah-hermitian-positive", Invariant, AtiyahHitchin, Bound::Below(1e-10), ah_hermitian_positive),
    check!("ah-z-identity", Invariant, AtiyahHitchin, Bound::Below(1e-12), ah_z_identity),
    check!("ah-dpi", Invariant, AtiyahHitchin, Bound::Below(1e-4), ah_dpi),
    check!("hamiltonian-tn-u1", Invariant, TaubNut, Bound::Below(1e-5), hamiltonian_tn_u1),
    check!("hamiltonian-tn-so2", Invariant, TaubNut, Bound::Below(1e-5), hamiltonian_tn_so2),
    check!("hamiltonian-ah", Invariant, AtiyahHitchin, Bound::Below(1e-4), hamiltonian_ah),
    check!("orbit-constancy", Invariant, General, Bound::Below(1e-8), orbit_constancy),
    check!("symplecticity", Invariant, General, Bound::Below(1e-3), symplecticity),
    check!("tn-u1-implicit-equivalence", Invariant, TaubNut, Bound::Below(2.0), tn_u1_equivalence),
    check!("ah-condition-direct-set", Invariant, AtiyahHitchin, Bound::Below(0.5), ah_direct_set),
    check!("slag-fig5", Invariant, TaubNut, Bound::Below(1e-5), |c| preset_check(c, "fig5")),
    check!("fig5-asymptote", Invariant, TaubNut, Bound::Below(5e-3), fig5_asymptote),
    check!("slag-fig6", Invariant, TaubNut, Bound::Below(1e-5), |c| preset_check(c, "fig6")),
    check!("slag-fig7", Invariant, TaubNut, Bound::Below(1e-5), |c| preset_check(c, "fig7")),
    check!("fig7-equator-radius", Invariant, TaubNut, Bound::Below(1e-12), fig7_equator),
    check!("tn-so2-axis", Invariant, TaubNut, Bound::Below(1e-8), tn_so2_axis),
    check!("tn-so2-imaginary", Invariant, TaubNut, Bound::Below(1e-5), tn_so2_imaginary),
    check!("slag-fig8", Invariant, AtiyahHitchin, Bound::Below(1e-4), |c| preset_check(c, "fig8")),
    check!("slag-fig9", Invariant, AtiyahHitchin, Bound::Below(1e-4), |c| preset_check(c, "fig9")),
    check!("slag-level-set", Invariant, General, Bound::Below(1e-6), slag_level_set),
    check!("slag-transversality", Invariant, General, Bound::Below(0.5), slag_transversality),
    check!("negative-controls", Invariant, TaubNut, Bound::AtLeast(1e3), negative_controls),
    check!("tn-fxx", Oracle, TaubNut, Bound::Below(1e-5), tn_fxx_oracle),
    check!("ah-i0", Oracle, AtiyahHitchin, Bound::Below(1e-8), ah_i0_oracle),
    check!("ah-i1-i2", Oracle, AtiyahHitchin, Bound::Below(1e-9), ah_i12_oracle),
    check!("eta1-pair", Oracle, General, Bound::Below(1e-9), eta1_pair),
    check!("pi-typing", Oracle, AtiyahHitchin, Bound::Below(1e-10), pi_typing),
];

// special functions

fn legendre_relation(_: &mut Ctx) -> Result<Measure> {
    let mut worst: f64 = 0.0;
    for i in 1..=95 {
        let k = i as f64 / 100.0;
        let kp = (1.0 - k * k).sqrt();
        let (kk, ek, kkp, ekp) = (elliptic_k(k)?, elliptic_e(k)?, elliptic_k(kp)?, elliptic_e(kp)?);
        worst = worst.max((ek * kkp + ekp * kk - kk * kkp - FRAC_PI_2).abs());
    }
    measure(worst, "k = 0.01..0.95")
}

fn p_half_periods(ctx: &mut Ctx) -> Result<Measure> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let d = ctx.random_elliptic()?;
        let at1 = weierstrass_p(d.omega1, &d)?;
        let at3 = weierstrass_p_shifted(0.0, &d)?;
        let at13 = weierstrass_p_shifted(d.omega1, &d)?;
        worst = worst.max(max_of([(at1 - d.e1).abs(), (at13 - d.e2).abs(), (at3 - d.e3).abs()]) / d.rho);
    }
    measure(worst, "100 curves, error relative to rho")
}

fn p_differential_equation(ctx: &mut Ctx) -> Result<Measure> {
    let step = 1e-6;
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let d = ctx.random_elliptic()?;
        for _ in 0..5 {
            let u = ctx.uniform(0.05, 1.95) * d.omega1;
            let pv = weierstrass_p(u, &d)?;
            let dp = (weierstrass_p(u + step, &d)? - weierstrass_p(u - step, &d)?) / (2.0 * step);
            let rhs = d.cubic(pv);
            worst = worst.max((dp * dp - rhs).abs() / (dp * dp).max(rhs.abs()).max(d.rho.powi(3)));
        }
    }
    measure(worst, "100 arguments in (0, 2 omega1), relative")
}

fn omega1_check(ctx: &mut Ctx) -> Result<Measure> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let d = ctx.random_elliptic()?;
        worst = worst.max((omega1_quadrature(&d)? - d.omega1).abs() / d.omega1);
    }
    measure(worst, "100 curves, relative")
}

fn elliptic_invariants(ctx: &mut Ctx) -> Result<Measure> {
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let d = ctx.random_elliptic()?;
        let r = d.rho;
        let sum = (d.e1 + d.e2 + d.e3).abs() / r;
        let pairs = (d.e1 * d.e2 + d.e2 * d.e3 + d.e3 * d.e1 + d.g2 / 4.0).abs() / (r * r);
        let prod = (d.e1 * d.e2 * d.e3 - d.g3 / 4.0).abs() / r.powi(3);
        let disc = (d.delta - (d.g2.powi(3) - 27.0 * d.g3 * d.g3)).abs() / r.powi(6);
        worst = worst.max(max_of([sum, pairs, prod, disc]));
    }
    measure(worst, "1000 draws, scaled by powers of rho")
}

// multiplets

fn o2_roots_reality(ctx: &mut Ctx) -> Result<Measure> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let m = O2Multiplet::new(C::new(ctx.uniform(-3.0, 3.0), ctx.uniform(-3.0, 3.0)), ctx.uniform(-3.0, 3.0));
        let scale = m.r();
        let (a, b) = o2_roots(&m)?;
        worst = worst.max(o2_eval(&m, a)?.norm().max(o2_eval(&m, b)?.norm()) / scale);
        for _ in 0..16 {
            let zeta = C::from_polar(ctx.log_uniform(0.1, 10.0), ctx.uniform(0.0, 2.0 * PI));
            let lhs = o2_eval(&m, -1.0 / zeta.conj())?;
            let rhs = o2_eval(&m, zeta)?.conj();
            worst = worst.max((lhs - rhs).norm() / (rhs.norm() + scale));
        }
    }
    measure(worst, "100 multiplets, 16 points each")
}

fn o4_roots_check(ctx: &mut Ctx) -> Result<Measure> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let alpha = C::from_polar(ctx.log_uniform(0.2, 5.0), ctx.uniform(0.0, 2.0 * PI));
        let beta = C::from_polar(ctx.log_uniform(0.2, 5.0), ctx.uniform(0.0, 2.0 * PI));
        let rho = ctx.log_uniform(0.1, 10.0);
        let m = o4_from_roots(alpha, beta, rho);
        for r in o4_roots(&m) {
            worst = worst.max(o4_eval(&m, r)?.norm() / rho);
        }
    }
    measure(worst, "100 multiplets, |eta| / rho at the claimed roots")
}

// Taub-NUT

fn tn_points(ctx: &mut Ctx, n: usize, r_range: (f64, f64), unit: bool) -> Result<Vec<(TNSphericalPoint, TNParams)>> {
    (0..n).map(|_| ctx.random_tn_point(r_range, unit)).collect()
}

fn tn_monge_ampere(ctx: &mut Ctx) -> Result<Measure> {
    let mut worst: f64 = 0.0;
    for (sp, p) in tn_points(ctx, 1000, (0.1, 100.0), false)? {
        let k = tn_metric_holo(&tn_chart_spherical_to_holo(&sp, &p)?, &p)?;
        worst = worst.max((k.det() - 1.0).norm());
    }
    measure(worst, "1000 points, r in [0.1, 100]")
}

fn tn_hermitian_positive(ctx: &mut Ctx) -> Result<Measure> {
    let mut worst: f64 = 0.0;
    let mut indefinite = 0;
    for (sp, p) in tn_points(ctx, 1000, (0.1, 100.0), false)? {
        let k = tn_metric_holo(&tn_chart_spherical_to_holo(&sp, &p)?, &p)?;
        worst = worst.max(k.hermiticity_defect());
        if !k.is_positive_definite() {
            indefinite += 1;
        }
    }
    let value = if indefinite > 0 { f64::INFINITY } else { worst };
    measure(value, format!("1000 points, {indefinite} not positive definite"))
}

fn tn_chart_roundtrip(ctx: &mut Ctx) -> Result<Measure> {
    let mut worst: f64 = 0.0;
    for (sp, p) in tn_points(ctx, 1000, (0.1, 100.0), false)? {
        let back = tn_chart_holo_to_spherical(&tn_chart_spherical_to_holo(&sp, &p)?, &p)?;
        let e = max_of([
            (back.r - sp.r).abs() / sp.r,
            (back.theta - sp.theta).abs(),
            wrap(back.phi - sp.phi).abs(),
            wrap(back.psi - sp.psi).abs(),
        ]);
        worst = worst.max(e);
    }
    measure(worst, "1000 points")
}

fn tn_pullback(ctx: &mut Ctx) -> Result<Measure> {
    let mut worst: f64 = 0.0;
    for (sp, p) in tn_points(ctx, 20, (0.1, 100.0), true)? {
        let a = tn_pullback_spherical(&sp, &p)?;
        let b = tn_metric_spherical(&sp, &p);
        let scale = max_of(b.iter().flatten().map(|x| x.abs()));
        let diff = max_of((0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| (a[i][j] - b[i][j]).abs()));
        worst = worst.max(diff / scale);
    }
    measure(worst, "20 points, h = 1, relative to the largest entry")
}

fn tn_legendre_transform(ctx: &mut Ctx) -> Result<Measure> {
    let pts = tn_points(ctx, 20, (0.5, 20.0), false)?;
    let errs: Vec<f64> = pts
        .par_iter()
        .map(|(sp, p)| {
            let hp = tn_chart_spherical_to_holo(sp, p)?;
            let k = tn_metric_holo(&hp, p)?;
            let fxx = tn_fxx_contour_oracle(&O2Multiplet::new(hp.z, hp.x), p.h, p.m)?;
            let want = -1.0 / fxx;
            Ok((k.kuubar.re - want).abs() / want.abs())
        })
        .collect::<Result<_>>()?;
    measure(max_of(errs), "20 points, K_uubar against -1/F_xx from the contour oracle")
}

// Atiyah-Hitchin

fn ah_points(ctx: &mut Ctx, n: usize) -> Result<Vec<(AHSphericalPoint, AHGeomState)>> {
    (0..n).map(|_| ctx.random_ah_point()).collect()
}

fn ah_monge_ampere(ctx: &mut Ctx) -> Result<Measure> {
    let p = AHParams::default();
    let pts = ah_points(ctx, 500)?;
    let errs: Vec<f64> =
        pts.par_iter().map(|(sp, _)| Ok((ah_point(sp, &p)?.metric.det() - 1.0).norm())).collect::<Result<_>>()?;
    measure(max_of(errs), "500 regular points")
}

fn ah_hermitian_positive(ctx: &mut Ctx) -> Result<Measure> {
    let p = AHParams::default();
    let pts = ah_points(ctx, 200)?;
    let rows: Vec<(f64, bool)> = pts
        .par_iter()
        .map(|(sp, _)| {
            let k = ah_point(sp, &p)?.metric;
            Ok((k.hermiticity_defect() / k.kzzbar.norm().max(k.kuubar.norm()), k.is_positive_definite()))
        })
        .collect::<Result<_>>()?;
    let indefinite = rows.iter().filter(|r| !r.1).count();
    let value = if indefinite > 0 { f64::INFINITY } else { max_of(rows.iter().map(|r| r.0)) };
    measure(value, format!("200 regular points, {indefinite} not positive definite"))
}

fn ah_z_identity(ctx: &mut Ctx) -> Result<Measure> {
    let mut worst: f64 = 0.0;
    for (sp, s) in ah_points(ctx, 500)? {
        let (z, _, _) = ah_zvx(&sp)?;
        let big_z = 2.0 * z.sqrt();
        let gap = s.xplus - s.xminus;
        worst = worst.max((big_z.norm_sqr() - gap).abs() / gap);
    }
    measure(worst, "500 points, |Z|^2 against x_+ - x_-")
}

/// State at a nearby point with the square root of z aligned to a reference.
fn aligned_state(pt: &AHSphericalPoint, p: &AHParams, sref: C) -> Result<AHGeomState> {
    let s = ah_from_spherical(pt, p)?;
    Ok(if (s.sqrt_z - sref).norm() > (s.sqrt_z + sref).norm() { s.with_flipped_root() } else { s })
}

fn ah_dpi(ctx: &mut Ctx) -> Result<Measure> {
    let p = AHParams::default();
    let step = 1e-5;
    let pts = ah_points(ctx, 50)?;
    let errs: Vec<f64> = pts
        .par_iter()
        .map(|(sp, s)| {
            let c = ah_coeffs(s)?;
            let mut worst: f64 = 0.0;
            // k fixed, so omega1 and eta1 are fixed
            for dir in [(0.0, 1.0), (1.0, 0.0)] {
                let shift = |sg: f64| AHSphericalPoint { theta: sp.theta + sg * step * dir.0, psi: sp.psi + sg * step * dir.1, ..*sp };
                let a = aligned_state(&shift(1.0), &p, s.sqrt_z)?;
                let b = aligned_state(&shift(-1.0), &p, s.sqrt_z)?;
                let (pa, ma) = ah_pi_xpm(&a)?;
                let (pb, mb) = ah_pi_xpm(&b)?;
                let dpp = (pa - pb) / (2.0 * step);
                let dpm = (ma - mb) / (2.0 * step);
                let wp = 4.0 * c.aplus * (a.xplus - b.xplus) / (2.0 * step);
                let wm = 4.0 * c.aminus * (a.xminus - b.xminus) / (2.0 * step);
                worst = worst.max((dpp - wp).norm() / wp.norm().max(1e-3));
                worst = worst.max((dpm - wm).norm() / wm.norm().max(1e-3));
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    measure(max_of(errs), "50 points, theta and psi directions at fixed k")
}

// moment maps

fn tn_hamiltonian(ctx: &mut Ctx, action: ActionSpec) -> Result<Measure> {
    let mut worst: f64 = 0.0;
    for (sp, p) in tn_points(ctx, 100, (0.2, 20.0), false)? {
        let hp = tn_chart_spherical_to_holo(&sp, &p)?;
        worst = worst.max(verify_hamiltonian(&action, &ActionPoint::TaubNut(hp, p), 1e-5)?.residual);
    }
    measure(worst, "100 points")
}

fn hamiltonian_tn_u1(ctx: &mut Ctx) -> Result<Measure> {
    tn_hamiltonian(ctx, ActionSpec::tn_u1())
}

fn hamiltonian_tn_so2(ctx: &mut Ctx) -> Result<Measure> {
    tn_hamiltonian(ctx, ActionSpec::tn_so2())
}

fn hamiltonian_ah(ctx: &mut Ctx) -> Result<Measure> {
    let p = AHParams::default();
    let pts = ah_points(ctx, 100)?;
    let errs: Vec<f64> = pts
        .par_iter()
        .map(|(sp, _)| Ok(verify_hamiltonian(&ActionSpec::ah_so2(), &ActionPoint::AtiyahHitchin(*sp, p), 1e-5)?.residual))
        .collect::<Result<_>>()?;
    measure(max_of(errs), "100 regular points")
}

fn action_points(ctx: &mut Ctx, n: usize) -> Result<Vec<(ActionSpec, ActionPoint)>> {
    let mut out = Vec::new();
    for (sp, p) in tn_points(ctx, n, (0.2, 20.0), false)? {
        let hp = tn_chart_spherical_to_holo(&sp, &p)?;
        out.push((ActionSpec::tn_u1(), ActionPoint::TaubNut(hp, p)));
        out.push((ActionSpec::tn_so2(), ActionPoint::TaubNut(hp, p)));
    }
    for (sp, _) in ah_points(ctx, n)? {
        out.push((ActionSpec::ah_so2(), ActionPoint::AtiyahHitchin(sp, AHParams::default())));
    }
    Ok(out)
}

fn mu_scale(action: &ActionSpec, pt: &ActionPoint) -> Result<f64> {
    Ok(match pt {
        ActionPoint::TaubNut(hp, p) => crate::moment_maps::moment_tn(action, hp, p)?.abs().max(1.0),
        ActionPoint::AtiyahHitchin(sp, p) => ah_point(sp, p)?.mu.abs().max(1.0),
    })
}

fn per_action(pts: &[(ActionSpec, ActionPoint)], errs: &[f64]) -> String {
    let mut parts = Vec::new();
    for (tag, a) in [("tn-u1", ActionSpec::tn_u1()), ("tn-so2", ActionSpec::tn_so2()), ("ah-so2", ActionSpec::ah_so2())] {
        let m = max_of(pts.iter().zip(errs).filter(|(p, _)| p.0 == a).map(|(_, e)| *e));
        parts.push(format!("{tag} {m:.2e}"));
    }
    parts.join(", ")
}

fn orbit_constancy(ctx: &mut Ctx) -> Result<Measure> {
    let pts = action_points(ctx, 20)?;
    let errs: Vec<f64> = pts
        .par_iter()
        .map(|(a, pt)| Ok(orbit_mu_variation(a, pt, 20, 0.05)? / mu_scale(a, pt)?))
        .collect::<Result<_>>()?;
    measure(max_of(errs.iter().cloned()), format!("20 points per action, 20 orbit samples, relative, {}", per_action(&pts, &errs)))
}

fn symplecticity(ctx: &mut Ctx) -> Result<Measure> {
    let pts = action_points(ctx, 10)?;
    // second differences lose accuracy as the metric varies on the scale of |z|
    let step = |pt: &ActionPoint| match pt {
        ActionPoint::TaubNut(hp, _) => 1e-3 * hp.z.norm().min(1.0),
        ActionPoint::AtiyahHitchin(..) => 1e-4,
    };
    let errs: Vec<f64> =
        pts.par_iter().map(|(a, pt)| symplecticity_residual(a, pt, step(pt))).collect::<Result<_>>()?;
    measure(max_of(errs.iter().cloned()), format!("10 points per action, step 1e-3 min(1, |z|) or 1e-4 (Atiyah-Hitchin), {}", per_action(&pts, &errs)))
}

// solution curves

fn seg_dist(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    ((p.0 - a.0 - t * dx).powi(2) + (p.1 - a.1 - t * dy).powi(2)).sqrt()
}

fn directed(from: &[Vec<(f64, f64)>], to: &[Vec<(f64, f64)>]) -> f64 {
    let mut worst: f64 = 0.0;
    for line in from {
        for &p in line {
            let mut best = f64::INFINITY;
            for l in to {
                if l.len() == 1 {
                    best = best.min(seg_dist(p, l[0], l[0]));
                }
                for w in l.windows(2) {
                    best = best.min(seg_dist(p, w[0], w[1]));
                }
            }
            worst = worst.max(best);
        }
    }
    worst
}

/// Hausdorff distance in grid-cell units between polyline sets.
pub fn hausdorff_cells(a: &[Vec<(f64, f64)>], b: &[Vec<(f64, f64)>], grid: &ImplicitGrid) -> f64 {
    let scale = |s: &[Vec<(f64, f64)>]| -> Vec<Vec<(f64, f64)>> {
        s.iter().map(|l| l.iter().map(|&(x, y)| (x / grid.dx(), y / grid.dy())).collect()).collect()
    };
    let (a, b) = (scale(a), scale(b));
    directed(&a, &b).max(directed(&b, &a))
}

fn tn_u1_equivalence(_: &mut Ctx) -> Result<Measure> {
    let p = TNParams::new(1.0, 1.0)?;
    let n = 256;
    // case 1 in the (r, phi) plane
    let (c1, c2) = (1.0, 0.5);
    let g1 = ImplicitGrid::new(1.0, 10.0, 0.0, 2.0 * PI, n)?;
    let f1 = move |r: f64, phi: f64| (r * r - c1 * c1).sqrt() * phi.cos() - 2.0 * c2;
    let imp1: Vec<Vec<(f64, f64)>> = trace_zero_set(&g1, &f1, 1e-12).into_iter().map(|l| l.points).collect();
    let cf1: Vec<Vec<(f64, f64)>> =
        tn_u1_case1(c1, c2, (0.0, 10.0), 801, p)?.iter().map(|t| t.samples.iter().map(|s| (s.a, s.phi)).collect()).collect();
    let d1 = hausdorff_cells(&imp1, &cf1, &g1);
    // case 2 in the (theta, phi) plane
    let c = 1.0;
    let (t0, t1) = (0.05, FRAC_PI_2 - 0.05);
    let g2 = ImplicitGrid::new(t0, t1, 0.0, 2.0 * PI, n)?;
    let f2 = move |theta: f64, phi: f64| theta.sin() * phi.cos() - c * theta.cos();
    let imp2: Vec<Vec<(f64, f64)>> = trace_zero_set(&g2, &f2, 1e-12).into_iter().map(|l| l.points).collect();
    let cf2: Vec<Vec<(f64, f64)>> = tn_u1_case2(c, 1.0, (t0, t1), 801, p)?
        .iter()
        .map(|t| t.samples.iter().map(|s| (s.theta, s.phi)).collect())
        .collect();
    let d2 = hausdorff_cells(&imp2, &cf2, &g2);
    measure(d1.max(d2), format!("case1 {d1:.2e} cells, case2 {d2:.2e} cells, grid {n}"))
}

/// Grid edges where the principal-root condition has a true zero, compared with
/// edges crossed by {Im z = 0, Re z <= 0}. Returns unexplained mismatches.
fn direct_set_mismatches(k: f64, c1: f64, sign: SinSign, n: usize) -> Result<(usize, usize)> {
    let h = 1.0;
    let grid = ImplicitGrid::new(0.01, PI - 0.01, 0.0, 2.0 * PI, n)?;
    let cond = |t: f64, f: f64| ah_condition(t, f, k, c1, h, sign).unwrap_or(f64::NAN);
    let zfun = |t: f64, f: f64| -> Option<C> {
        let psi = ah_psi(t, k, c1, h, sign).ok()?;
        let pt = AHSphericalPoint::new(k, t, f, psi).ok()?;
        Some(ah_zvx(&pt).ok()?.0)
    };
    let cv = sample_grid(&grid, &cond);
    let idx = |i: usize, j: usize| j * n + i;
    let last = n - 1;
    let zv: Vec<Option<C>> =
        (0..n).flat_map(|j| (0..n).map(move |i| (i, j))).map(|(i, j)| {
            let (x, y) = grid.node(i, j);
            zfun(x, y)
        }).collect();
    let zmax = zv.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    let mut edges = Vec::new();
    for j in 0..n {
        for i in 0..n {
            if i < last {
                edges.push(((i, j), (i + 1, j)));
            }
            if j < last {
                edges.push(((i, j), (i, j + 1)));
            }
        }
    }
    let mut mismatches = 0;
    let mut crossings = 0;
    for ((ia, ja), (ib, jb)) in edges {
        let (fa, fb) = (cv[idx(ia, ja)], cv[idx(ib, jb)]);
        let (za, zb) = (zv[idx(ia, ja)], zv[idx(ib, jb)]);
        let near_edge = |i: usize, j: usize| i == 0 || j == 0 || i == last || j == last;
        // both cells next to the edge must lie inside the admissible domain
        let mut inside = true;
        for (di, dj) in [(-1i64, -1i64), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1), (0, 0)] {
            for &(ci, cj) in &[(ia, ja), (ib, jb)] {
                let (ni, nj) = (ci as i64 + di, cj as i64 + dj);
                if ni < 0 || nj < 0 || ni > last as i64 || nj > last as i64 {
                    continue;
                }
                if cv[idx(ni as usize, nj as usize)].is_nan() {
                    inside = false;
                }
            }
        }
        if !inside || near_edge(ia, ja) || near_edge(ib, jb) {
            continue;
        }
        let (Some(za), Some(zb)) = (za, zb) else { continue };
        let (pa, pb) = (grid.node(ia, ja), grid.node(ib, jb));
        let at = |s: f64| (pa.0 + s * (pb.0 - pa.0), pa.1 + s * (pb.1 - pa.1));
        let cond_zero = if fa * fb < 0.0 {
            let (mut lo, mut hi, mut flo) = (0.0, 1.0, fa);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let (x, y) = at(mid);
                let fm = cond(x, y);
                if (fm < 0.0) == (flo < 0.0) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            let (x, y) = at(0.5 * (lo + hi));
            cond(x, y).abs() < 1e-8 * (fa.abs() + fb.abs())
        } else {
            false
        };
        let mut ambiguous = false;
        let direct = if za.im * zb.im < 0.0 {
            let s = za.im / (za.im - zb.im);
            let (x, y) = at(s);
            match zfun(x, y) {
                Some(z) => {
                    // crossings where Re z is itself near zero sit on the end of the ray
                    ambiguous = z.re.abs() < 1e-3 * zmax;
                    z.re <= 0.0
                }
                None => false,
            }
        } else {
            false
        };
        if cond_zero || direct {
            crossings += 1;
        }
        if cond_zero != direct && !ambiguous {
            mismatches += 1;
        }
    }
    Ok((mismatches, crossings))
}

fn ah_direct_set(_: &mut Ctx) -> Result<Measure> {
    let cases = [(0.5, -5.0), (0.3, 2.0), (0.7, 0.0)];
    let mut jobs = Vec::new();
    for &(k, c1) in &cases {
        for sign in [SinSign::Plus, SinSign::Minus] {
            for n in [128, 256] {
                jobs.push((k, c1, sign, n));
            }
        }
    }
    let rows: Vec<(usize, usize)> =
        jobs.par_iter().map(|&(k, c1, s, n)| direct_set_mismatches(k, c1, s, n)).collect::<Result<_>>()?;
    let bad: usize = rows.iter().map(|r| r.0).sum();
    let total: usize = rows.iter().map(|r| r.1).sum();
    measure(bad as f64, format!("{} grids, {total} crossed edges, {bad} interior mismatches", jobs.len()))
}

fn summarize(rows: &[(CurveTrace, std::result::Result<ResidualSummary, String>)]) -> (f64, String) {
    let mut om: f64 = 0.0;
    let mut im: f64 = 0.0;
    let mut mu: f64 = 0.0;
    let mut failing = 0;
    let mut errors = 0;
    for (t, r) in rows {
        match r {
            Ok(s) => {
                om = om.max(s.omega);
                im = im.max(s.im_omega);
                mu = mu.max(s.mu);
                if !s.passes(t.threshold()) {
                    failing += 1;
                }
            }
            Err(_) => errors += 1,
        }
    }
    let worst = if errors > 0 { f64::INFINITY } else { om.max(im).max(mu) };
    (
        worst,
        format!(
            "traces={} failing={failing} errors={errors} omega={om:.2e} imOmega={im:.2e} mu={mu:.2e}",
            rows.len()
        ),
    )
}

fn preset_check(ctx: &mut Ctx, name: &str) -> Result<Measure> {
    let rows = ctx.preset(name)?;
    if rows.is_empty() {
        return Err(Error::EmptyDomain(format!("preset {name} produced no traces")));
    }
    let (worst, detail) = summarize(rows);
    // a trace that is not transversal fails even with small residuals
    let bad_guard = rows.iter().any(|(_, r)| matches!(r, Ok(s) if !(s.transversal || s.degenerate)));
    measure(if bad_guard { f64::INFINITY } else { worst }, detail)
}

fn fig5_asymptote(_: &mut Ctx) -> Result<Measure> {
    let p = TNParams::new(1.0, 1.0)?;
    let tr = tn_u1_case1(1.0, 0.5, (0.0, 1e3), 801, p)?;
    let last = tr[0].samples.last().ok_or_else(|| Error::EmptyDomain("empty trace".into()))?;
    measure((last.phi - FRAC_PI_2).abs(), format!("phi(r = {}) = {:.6}", last.a, last.phi))
}

fn fig7_equator(ctx: &mut Ctx) -> Result<Measure> {
    let rows = ctx.preset("fig7")?;
    let mut worst: f64 = 0.0;
    for (t, _) in rows {
        let TraceChart::TaubNut(p) = t.chart else { continue };
        let c1 = t.param("c1").unwrap_or(f64::NAN);
        let want = p.h * (-2.0 * p.m + (4.0 * p.m * p.m + 2.0 * c1 / p.h).sqrt());
        let mid = t.samples[t.samples.len() / 2];
        worst = worst.max((mid.theta - FRAC_PI_2).abs().max((mid.a - want).abs() / want));
        worst = worst.max((tn_so2_radius(c1, FRAC_PI_2, &p)? - want).abs() / want);
    }
    measure(worst, "r(pi/2) against the quadratic root, c1 = 1..10")
}

fn tn_so2_axis(_: &mut Ctx) -> Result<Measure> {
    let p = TNParams::new(1.0, 1.0)?;
    let mut worst: f64 = 0.0;
    for c1 in 1..=10 {
        for t in tn_so2_curve(c1 as f64, p, SO2Branch::Axis, 201)? {
            let s = verify_slag(&t, 0.0)?.summary;
            worst = worst.max(s.worst());
        }
    }
    measure(worst, "axis branch, c1 = 1..10, both poles")
}

fn tn_so2_imaginary(_: &mut Ctx) -> Result<Measure> {
    let p = TNParams::new(1.0, 1.0)?;
    let mut worst: f64 = 0.0;
    let mut guard = true;
    for c1 in [1.0, 4.0, 10.0] {
        for theta_star in [FRAC_PI_2, 1.0] {
            for t in tn_so2_curve(c1, p, SO2Branch::Imaginary { rate: 1.0, theta_star }, 401)? {
                let s = verify_slag(&t, 0.0)?.summary;
                worst = worst.max(s.worst());
                guard &= s.transversal;
            }
        }
    }
    measure(if guard { worst } else { f64::INFINITY }, "imaginary branch, c1 in {1, 4, 10}, theta* in {pi/2, 1}")
}

fn slag_level_set(ctx: &mut Ctx) -> Result<Measure> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for name in PRESETS {
        for (_, r) in ctx.preset(name)? {
            if let Ok(s) = r {
                worst = worst.max(s.mu / s.mu_median.abs().max(1.0));
                count += 1;
            }
        }
    }
    measure(worst, format!("{count} traces, |mu - median| / max(|median|, 1)"))
}

fn slag_transversality(ctx: &mut Ctx) -> Result<Measure> {
    let mut bad = 0;
    let mut count = 0;
    for name in PRESETS {
        for (_, r) in ctx.preset(name)? {
            if let Ok(s) = r {
                count += 1;
                if !(s.transversal || s.degenerate) {
                    bad += 1;
                }
            }
        }
    }
    measure(bad as f64, format!("{count} traces, {bad} with constant |w2| or tangent generator"))
}

fn negative_controls(ctx: &mut Ctx) -> Result<Measure> {
    let mut traces = Vec::new();
    for name in ["fig5", "fig6", "fig7"] {
        traces.extend(ctx.preset(name)?.iter().map(|(t, _)| t.perturbed_phi(0.1)));
    }
    let ratios: Vec<f64> = traces
        .par_iter()
        .map(|t| Ok(verify_slag(t, 0.0)?.summary.worst() / t.threshold()))
        .collect::<Result<_>>()?;
    let least = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    measure(least, format!("{} Taub-NUT traces with phi + 0.1, min residual / threshold", ratios.len()))
}

// oracles

fn tn_fxx_oracle(ctx: &mut Ctx) -> Result<Measure> {
    let n = ctx.count(50);
    let pts = tn_points(ctx, n, (0.5, 20.0), false)?;
    let errs: Vec<f64> = pts
        .par_iter()
        .map(|(sp, p)| {
            let hp = tn_chart_spherical_to_holo(sp, p)?;
            let want = -2.0 * p.v(hp.r);
            let got = tn_fxx_contour_oracle(&O2Multiplet::new(hp.z, hp.x), p.h, p.m)?;
            Ok((got - want).abs() / want.abs())
        })
        .collect::<Result<_>>()?;
    measure(max_of(errs), format!("{n} points, r in [0.5, 20], relative"))
}

fn ah_i0_oracle(ctx: &mut Ctx) -> Result<Measure> {
    let n = ctx.count(50);
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let d = ctx.random_elliptic()?;
        let alpha = C::from_polar(ctx.log_uniform(0.2, 5.0), ctx.uniform(0.0, 2.0 * PI));
        let beta = C::from_polar(ctx.log_uniform(0.2, 5.0), ctx.uniform(0.0, 2.0 * PI));
        let m = o4_from_roots(alpha, beta, d.rho);
        let got = ah_in_contour_oracle(&d, &m, 0)?;
        let want = 2.0 * d.kk / d.rho.sqrt();
        worst = worst.max((got - want).norm() / want);
    }
    measure(worst, format!("{n} draws of (k, rho), relative to 2K/sqrt(rho)"))
}

/// Closed forms of I_1 and I_2 for one branch integer a.
fn i12_closed(s: &AHGeomState, pcap: C, a: i64) -> (C, C) {
    let d = &s.elliptic;
    let q = pcap + C::new(0.0, 2.0 * PI * a as f64);
    let i1 = q / (4.0 * s.sqrt_z);
    let i2 = -(d.eta1 + d.omega1 * s.x / 3.0 - 0.125 * (s.v / s.sqrt_z) * q) / s.z;
    (i1, i2)
}

fn ah_i12_oracle(ctx: &mut Ctx) -> Result<Measure> {
    let n = ctx.count(50);
    let pts = ah_points(ctx, n)?;
    let rows: Vec<(f64, usize)> = pts
        .par_iter()
        .map(|(_, s)| {
            let (pp, pm) = ah_pi_xpm(s)?;
            let pcap = pp + pm;
            let d = &s.elliptic;
            let mut worst: f64 = 0.0;
            let mut used = 0;
            for m in o4_labellings(s.z, s.v, s.x)? {
                // only labellings reproducing the point's own curve are comparable
                if (o4_modulus(&m) - d.k).abs() > 1e-8 || (m.rho - d.rho).abs() > 1e-8 * d.rho {
                    continue;
                }
                let (Ok(i1), Ok(i2)) = (ah_in_contour_oracle(d, &m, 1), ah_in_contour_oracle(d, &m, 2)) else {
                    continue;
                };
                let err = (-4..=4)
                    .map(|a| {
                        let (c1, c2) = i12_closed(s, pcap, a);
                        ((i1 - c1).norm() / i1.norm()).max((i2 - c2).norm() / i2.norm())
                    })
                    .fold(f64::INFINITY, f64::min);
                worst = worst.max(err);
                used += 1;
            }
            if used == 0 {
                return Err(Error::Degenerate("no labelling reproduces the curve".into()));
            }
            Ok((worst, used))
        })
        .collect::<Result<_>>()?;
    let used: usize = rows.iter().map(|r| r.1).sum();
    measure(max_of(rows.iter().map(|r| r.0)), format!("{n} points, {used} labellings, best branch integer in -4..4"))
}

fn eta1_pair(ctx: &mut Ctx) -> Result<Measure> {
    let n = ctx.count(50);
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let d = ctx.random_elliptic()?;
        let closed = eta1_closed(d.k, d.rho)?;
        worst = worst.max((eta1_quadrature(&d)? - closed).abs() / closed.abs().max(d.rho.sqrt()));
    }
    measure(worst, format!("{n} draws, quadrature against closed form"))
}

fn pi_typing(ctx: &mut Ctx) -> Result<Measure> {
    let n = ctx.count(50);
    let pts = ah_points(ctx, n)?;
    let mut worst: f64 = 0.0;
    let mut mistyped = 0;
    for (_, s) in &pts {
        let d = &s.elliptic;
        let (cp, cm) = (d.cubic(s.xplus), d.cubic(s.xminus));
        // y_+^2 = cubic(x_+) < 0 makes y_+, hence pi(x_+), imaginary; y_- real needs cubic(x_-) >= 0
        if cp > 0.0 || cm < 0.0 {
            mistyped += 1;
        }
        let r3 = d.rho.powi(3);
        worst = worst.max((s.yplus * s.yplus - cp).norm() / r3).max((s.yminus * s.yminus - cm).abs() / r3);
        let raw = -2.0 * s.yplus * ah_cycle_integral(d, s.xplus)?;
        worst = worst.max(raw.re.abs() / raw.norm().max(f64::MIN_POSITIVE));
    }
    let value = if mistyped > 0 { f64::INFINITY } else { worst };
    measure(value, format!("{n} points, {mistyped} mistyped"))
}
