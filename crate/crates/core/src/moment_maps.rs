//! Fundamental vector fields, moment maps, and finite-difference checks of
//! i_X omega = d mu.

use num_complex::Complex64;

use crate::atiyah_hitchin::{ah_from_spherical, ah_point, AHGeomState, AHParams, AHSphericalPoint};
use crate::error::{Error, Result};
use crate::kahler::MetricBlock;
use crate::taub_nut::{tn_metric_holo, TNHoloPoint, TNParams};

type C = Complex64;

const I: C = C::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Manifold {
    TaubNut,
    AtiyahHitchin,
    CotangentR3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    U1Triholo,
    SO2Rot,
    SO3Rot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActionSpec {
    pub manifold: Manifold,
    pub generator: Generator,
}

impl ActionSpec {
    pub fn new(manifold: Manifold, generator: Generator) -> Result<Self> {
        let ok = matches!(
            (manifold, generator),
            (Manifold::TaubNut, Generator::U1Triholo)
                | (Manifold::TaubNut, Generator::SO2Rot)
                | (Manifold::AtiyahHitchin, Generator::SO2Rot)
                | (Manifold::CotangentR3, Generator::SO3Rot)
        );
        if !ok {
            return Err(Error::Domain(format!("{generator:?} does not act on {manifold:?}")));
        }
        Ok(Self { manifold, generator })
    }

    pub fn tn_u1() -> Self {
        Self { manifold: Manifold::TaubNut, generator: Generator::U1Triholo }
    }

    pub fn tn_so2() -> Self {
        Self { manifold: Manifold::TaubNut, generator: Generator::SO2Rot }
    }

    pub fn ah_so2() -> Self {
        Self { manifold: Manifold::AtiyahHitchin, generator: Generator::SO2Rot }
    }

    /// Holomorphic components of X at a point with second coordinate w2:
    /// i(d_u - d_ubar) or -2i(w2 d_w2 - conj(w2) d_w2bar).
    pub fn field(&self, w2: C) -> [C; 2] {
        match self.generator {
            Generator::U1Triholo => [I, C::new(0.0, 0.0)],
            _ => [C::new(0.0, 0.0), -2.0 * I * w2],
        }
    }
}

pub fn moment_tn_u1(pt: &TNHoloPoint) -> f64 {
    0.5 * pt.x
}

pub fn moment_tn_so2(pt: &TNHoloPoint, p: &TNParams) -> f64 {
    2.0 * p.m * pt.r + 2.0 * pt.z.norm_sqr() / p.h
}

/// mu = -4 eta1 - 2 (x_+ + x_-) omega1
pub fn moment_ah_so2(state: &AHGeomState) -> f64 {
    let d = &state.elliptic;
    -4.0 * d.eta1 - 2.0 * (state.xplus + state.xminus) * d.omega1
}

pub fn moment_tn(action: &ActionSpec, pt: &TNHoloPoint, p: &TNParams) -> Result<f64> {
    match (action.manifold, action.generator) {
        (Manifold::TaubNut, Generator::U1Triholo) => Ok(moment_tn_u1(pt)),
        (Manifold::TaubNut, Generator::SO2Rot) => Ok(moment_tn_so2(pt, p)),
        _ => Err(Error::Domain(format!("{action:?} is not a Taub-NUT action"))),
    }
}

/// mu(q, p) = q x p
pub fn so3_cotangent_moment(q: [f64; 3], p: [f64; 3]) -> [f64; 3] {
    [q[1] * p[2] - q[2] * p[1], q[2] * p[0] - q[0] * p[2], q[0] * p[1] - q[1] * p[0]]
}

/// Point on which an action is checked.
#[derive(Debug, Clone, Copy)]
pub enum ActionPoint {
    TaubNut(TNHoloPoint, TNParams),
    AtiyahHitchin(AHSphericalPoint, AHParams),
}

#[derive(Debug, Clone, Copy)]
pub struct HamiltonianReport {
    /// max over the four real directions of |omega(X, e_j) - d_j mu|
    pub residual: f64,
    pub iota: [f64; 4],
    pub dmu: [f64; 4],
}

fn fd_step(eps: f64, coord: f64) -> f64 {
    (eps * coord.abs()).max(eps).max(1e-7)
}

fn tn_real_coords(pt: &TNHoloPoint) -> [f64; 4] {
    [pt.u.re, pt.u.im, pt.z.re, pt.z.im]
}

fn tn_from_real(w: [f64; 4], p: &TNParams) -> Result<TNHoloPoint> {
    TNHoloPoint::new(C::new(w[0], w[1]), C::new(w[2], w[3]), p)
}

const REAL_DIRS: [[C; 2]; 4] = [
    [C::new(1.0, 0.0), C::new(0.0, 0.0)],
    [C::new(0.0, 1.0), C::new(0.0, 0.0)],
    [C::new(0.0, 0.0), C::new(1.0, 0.0)],
    [C::new(0.0, 0.0), C::new(0.0, 1.0)],
];

/// (U, Z) with sqrt(z) chosen closest to a reference Z.
fn ah_holo_aligned(pt: &AHSphericalPoint, p: &AHParams, zref: Option<C>) -> Result<(C, C, f64, MetricBlock)> {
    let a = ah_point(pt, p)?;
    let (mut u, mut z) = (a.cap_u, a.cap_z);
    if let Some(r) = zref {
        if (z - r).norm() > (z + r).norm() {
            u = -u;
            z = -z;
        }
    }
    Ok((u, z, a.mu, a.metric))
}

fn ah_coords(pt: &AHSphericalPoint) -> [f64; 4] {
    [pt.k, pt.theta, pt.phi, pt.psi]
}

fn ah_from_coords(s: [f64; 4]) -> Result<AHSphericalPoint> {
    AHSphericalPoint::new(s[0], s[1], s[2], s[3])
}

/// d(U, Z)/ds_j and d mu/ds_j in the spherical chart, by central differences.
pub fn ah_chart_derivatives(pt: &AHSphericalPoint, p: &AHParams, eps: f64) -> Result<([[C; 2]; 4], [f64; 4])> {
    let (_, z0, _, _) = ah_holo_aligned(pt, p, None)?;
    let s0 = ah_coords(pt);
    let mut jac = [[C::new(0.0, 0.0); 2]; 4];
    let mut dmu = [0.0; 4];
    for j in 0..4 {
        let h = fd_step(eps, s0[j]);
        let mut sp = s0;
        let mut sm = s0;
        sp[j] += h;
        sm[j] -= h;
        let (up, zp, mp, _) = ah_holo_aligned(&ah_from_coords(sp)?, p, Some(z0))?;
        let (um, zm, mm, _) = ah_holo_aligned(&ah_from_coords(sm)?, p, Some(z0))?;
        jac[j] = [(up - um) / (2.0 * h), (zp - zm) / (2.0 * h)];
        dmu[j] = (mp - mm) / (2.0 * h);
    }
    Ok((jac, dmu))
}

pub fn verify_hamiltonian(action: &ActionSpec, pt: &ActionPoint, eps: f64) -> Result<HamiltonianReport> {
    if !(1e-7..=1e-3).contains(&eps) {
        return Err(Error::Domain(format!("eps = {eps} outside [1e-7, 1e-3]")));
    }
    let mut iota = [0.0; 4];
    let mut dmu = [0.0; 4];
    match (pt, action.manifold) {
        (ActionPoint::TaubNut(hp, p), Manifold::TaubNut) => {
            let k = tn_metric_holo(hp, p)?;
            let x = action.field(hp.z);
            let w0 = tn_real_coords(hp);
            for j in 0..4 {
                iota[j] = k.omega(x, REAL_DIRS[j]);
                let h = fd_step(eps, w0[j]);
                let mut wp = w0;
                let mut wm = w0;
                wp[j] += h;
                wm[j] -= h;
                let mp = moment_tn(action, &tn_from_real(wp, p)?, p)?;
                let mm = moment_tn(action, &tn_from_real(wm, p)?, p)?;
                dmu[j] = (mp - mm) / (2.0 * h);
            }
        }
        (ActionPoint::AtiyahHitchin(sp, p), Manifold::AtiyahHitchin) => {
            let a = ah_point(sp, p)?;
            let x = action.field(a.cap_z);
            let (jac, dm) = ah_chart_derivatives(sp, p, eps)?;
            for j in 0..4 {
                iota[j] = a.metric.omega(x, jac[j]);
            }
            dmu = dm;
        }
        _ => return Err(Error::Domain(format!("point does not match {action:?}"))),
    }
    let residual = (0..4).map(|j| (iota[j] - dmu[j]).abs()).fold(0.0, f64::max);
    Ok(HamiltonianReport { residual, iota, dmu })
}

const ORBIT_SUBSTEPS: usize = 16;

/// Max deviation of mu along an RK4-integrated orbit of X (n points, step dt).
///
/// Taub-NUT orbits are integrated in (u, z); the Atiyah-Hitchin field is
/// integrated in the spherical chart, where it reads -2 d/dphi.
pub fn orbit_mu_variation(action: &ActionSpec, pt: &ActionPoint, n: usize, dt: f64) -> Result<f64> {
    let mut values = Vec::with_capacity(n);
    match (pt, action.manifold) {
        (ActionPoint::TaubNut(hp, p), Manifold::TaubNut) => {
            let f = |w: [C; 2]| action.field(w[1]);
            let mut w = [hp.u, hp.z];
            for i in 0..n {
                if i > 0 {
                    for _ in 0..ORBIT_SUBSTEPS {
                        w = rk4_step(&f, w, dt / ORBIT_SUBSTEPS as f64);
                    }
                }
                values.push(moment_tn(action, &TNHoloPoint::new(w[0], w[1], p)?, p)?);
            }
        }
        (ActionPoint::AtiyahHitchin(sp, p), Manifold::AtiyahHitchin) => {
            let f = |_: [f64; 1]| [-2.0];
            let mut phi = [sp.phi];
            for i in 0..n {
                if i > 0 {
                    for _ in 0..ORBIT_SUBSTEPS {
                        phi = rk4_step_real(&f, phi, dt / ORBIT_SUBSTEPS as f64);
                    }
                }
                let q = AHSphericalPoint { phi: phi[0], ..*sp };
                values.push(moment_ah_so2(&ah_from_spherical(&q, p)?));
            }
        }
        _ => return Err(Error::Domain(format!("point does not match {action:?}"))),
    }
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(hi - lo)
}

fn rk4_step<F: Fn([C; 2]) -> [C; 2]>(f: &F, w: [C; 2], dt: f64) -> [C; 2] {
    let add = |a: [C; 2], b: [C; 2], s: f64| [a[0] + b[0] * s, a[1] + b[1] * s];
    let k1 = f(w);
    let k2 = f(add(w, k1, dt / 2.0));
    let k3 = f(add(w, k2, dt / 2.0));
    let k4 = f(add(w, k3, dt));
    [
        w[0] + (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]) * (dt / 6.0),
        w[1] + (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]) * (dt / 6.0),
    ]
}

fn rk4_step_real<F: Fn([f64; 1]) -> [f64; 1]>(f: &F, w: [f64; 1], dt: f64) -> [f64; 1] {
    let k1 = f(w)[0];
    let k2 = f([w[0] + k1 * dt / 2.0])[0];
    let k3 = f([w[0] + k2 * dt / 2.0])[0];
    let k4 = f([w[0] + k3 * dt])[0];
    [w[0] + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * dt / 6.0]
}

/// Max |d(i_X omega)_{ij}| over coordinate pairs, by nested central differences.
pub fn symplecticity_residual(action: &ActionSpec, pt: &ActionPoint, step: f64) -> Result<f64> {
    let beta: Box<dyn Fn([f64; 4]) -> Result<[f64; 4]>> = match (*pt, action.manifold) {
        (ActionPoint::TaubNut(_, p), Manifold::TaubNut) => {
            let a = *action;
            Box::new(move |w: [f64; 4]| {
                let hp = tn_from_real(w, &p)?;
                let k = tn_metric_holo(&hp, &p)?;
                let x = a.field(hp.z);
                Ok([0, 1, 2, 3].map(|j| k.omega(x, REAL_DIRS[j])))
            })
        }
        (ActionPoint::AtiyahHitchin(_, p), Manifold::AtiyahHitchin) => {
            let a = *action;
            Box::new(move |s: [f64; 4]| {
                let sp = ah_from_coords(s)?;
                let (_, z, _, k) = ah_holo_aligned(&sp, &p, None)?;
                let x = a.field(z);
                let (jac, _) = ah_chart_derivatives(&sp, &p, 1e-5)?;
                // jac is built on the branch of z itself, matching x
                Ok([0, 1, 2, 3].map(|j| k.omega(x, jac[j])))
            })
        }
        _ => return Err(Error::Domain(format!("point does not match {action:?}"))),
    };
    let w0 = match pt {
        ActionPoint::TaubNut(hp, _) => tn_real_coords(hp),
        ActionPoint::AtiyahHitchin(sp, _) => ah_coords(sp),
    };
    let mut grads = [[0.0; 4]; 4];
    for i in 0..4 {
        let mut wp = w0;
        let mut wm = w0;
        wp[i] += step;
        wm[i] -= step;
        let bp = beta(wp)?;
        let bm = beta(wm)?;
        for j in 0..4 {
            grads[i][j] = (bp[j] - bm[j]) / (2.0 * step);
        }
    }
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            worst = worst.max((grads[i][j] - grads[j][i]).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_examples() {
        let p = TNParams::new(1.0, 1.0).unwrap();
        let pt = TNHoloPoint::new(C::new(0.0, 0.0), C::new(1.0, 0.0), &p).unwrap();
        assert_eq!(moment_tn_u1(&pt), 0.0);
        assert_eq!(moment_tn_so2(&pt, &p), 6.0);
        let fake = TNHoloPoint { x: 3.0, ..pt };
        assert_eq!(moment_tn_u1(&fake), 1.5);
        let flat = TNParams::new(2.0, 0.0).unwrap();
        assert_eq!(moment_tn_so2(&pt, &flat), 1.0);
    }

    #[test]
    fn so3_examples() {
        assert_eq!(so3_cotangent_moment([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]), [0.0, 0.0, 1.0]);
        assert_eq!(so3_cotangent_moment([1.0, 2.0, 3.0], [2.0, 4.0, 6.0]), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn action_validation() {
        assert!(ActionSpec::new(Manifold::AtiyahHitchin, Generator::U1Triholo).is_err());
        assert!(ActionSpec::new(Manifold::CotangentR3, Generator::SO3Rot).is_ok());
    }
}
