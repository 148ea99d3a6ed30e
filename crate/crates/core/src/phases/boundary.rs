//! The boundary phase `Φ(θ, z) = |P − Q| + |P − Q₀|` for `P = (1, θ, z)` on
//! the cylinder, its critical points and its Hessian.
//!
//! At a critical point, `(s cosθ − 1)/φ̃₁ = ±(r cos(θ−θ_Q) − 1)/φ̃₂`, where
//! `φ̃₁ = |P − Q₀|` and `φ̃₂ = |P − Q|`. The sign splits the critical points
//! into three families with different closed forms for the Hessian.

use super::{phi_tilde, CylPoint, SourceConfig};
use crate::numdiff::{deriv2, deriv_mixed};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// Sign relation between `c₁ = (s cosθ − 1)/φ̃₁` and `c₂ = (r cos(θ−θ_Q) − 1)/φ̃₂`
/// at a critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignRegime {
    /// `c₂ = −c₁`: `P` lies on the segment `Q₀Q` (it is lit from one side only).
    DifferentSigns,
    /// `c₂ = c₁ > 0`: `P` is lit from both points (the reflection point).
    SameSignIlluminated,
    /// `c₂ = c₁ < 0`: `P` is in the shadow of both points.
    SameSignShadow,
}

/// Second derivatives of `Φ` at a boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HessianReport {
    pub d2_zz: f64,
    pub d2_tz: f64,
    pub d2_tt: f64,
    /// `d2_zz·d2_tt − d2_tz²`.
    pub det: f64,
    /// Largest componentwise deviation from central finite differences,
    /// relative to the largest Hessian entry.
    pub fd_residual: f64,
    /// Set when the point is critical and the critical-point closed forms
    /// were used.
    pub regime: Option<SignRegime>,
    /// Closed-form determinant of the regime (only at critical points).
    pub det_closed: Option<f64>,
}

/// A critical point of `Φ` located by [`find_critical_points`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub theta: f64,
    pub z: f64,
    pub regime: SignRegime,
    pub grad_norm: f64,
}

struct Parts {
    p1: f64,
    p2: f64,
    s_sin: f64,
    s_cos: f64,
    r_sin: f64,
    r_cos: f64,
    z1: f64,
    z2: f64,
}

fn parts(theta: f64, z: f64, q: &CylPoint, q0: &SourceConfig) -> Parts {
    let s = q0.s;
    let r = q.r;
    let d = theta - q.theta;
    Parts {
        p1: phi_tilde(1.0, theta, z, s),
        p2: phi_tilde(1.0, d, z - q.z, r),
        s_sin: s * theta.sin(),
        s_cos: s * theta.cos(),
        r_sin: r * d.sin(),
        r_cos: r * d.cos(),
        z1: z,
        z2: z - q.z,
    }
}

/// `Φ(θ, z) = φ̃(1, θ−θ_Q, z−z_Q; r) + φ̃(1, θ, z; s)`.
pub fn boundary_phase(theta: f64, z: f64, q: &CylPoint, q0: &SourceConfig) -> f64 {
    let p = parts(theta, z, q, q0);
    p.p1 + p.p2
}

/// `(∂_θΦ, ∂_zΦ)`.
pub fn boundary_phase_grad(theta: f64, z: f64, q: &CylPoint, q0: &SourceConfig) -> [f64; 2] {
    let p = parts(theta, z, q, q0);
    [p.s_sin / p.p1 + p.r_sin / p.p2, p.z1 / p.p1 + p.z2 / p.p2]
}

/// General second derivatives `[Φ_θθ, Φ_θz, Φ_zz]`, valid at any point.
fn hessian_general(p: &Parts) -> [f64; 3] {
    let one = |pp: f64, sn: f64, cs: f64, zz: f64| {
        let p3 = pp * pp * pp;
        [cs / pp - sn * sn / p3, -zz * sn / p3, 1.0 / pp - zz * zz / p3]
    };
    let a = one(p.p1, p.s_sin, p.s_cos, p.z1);
    let b = one(p.p2, p.r_sin, p.r_cos, p.z2);
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn classify(c1: f64, c2: f64) -> SignRegime {
    if (c1 + c2).abs() < (c1 - c2).abs() {
        SignRegime::DifferentSigns
    } else if c1 > 0.0 {
        SignRegime::SameSignIlluminated
    } else {
        SignRegime::SameSignShadow
    }
}

/// Hessian closed forms at a critical point: returns `[Φ_θθ, Φ_θz, Φ_zz]`,
/// the regime and the closed-form determinant.
///
/// With `A = 1/φ̃₁ + 1/φ̃₂`, `S = s² sin²θ/φ̃₁²`, `Z = z²/φ̃₁²`, `c₁` as above
/// and `ψ₁² = 1 − 2s cosθ + s²`:
///
/// * `Φ_zz = A(1 − Z)`, `Φ_θz = −A z s sinθ/φ̃₁²`;
/// * `Φ_θθ = A(1 − S)` (different signs) or `A(1 − S) + 2c₁` (same sign);
/// * `det = A²c₁²` (different signs) or `A c₁ (A c₁ + 2ψ₁²/φ̃₁²)` (same sign).
fn hessian_critical(p: &Parts, s: f64) -> ([f64; 3], SignRegime, f64) {
    let a = 1.0 / p.p1 + 1.0 / p.p2;
    let p1sq = p.p1 * p.p1;
    let ss = p.s_sin * p.s_sin / p1sq;
    let zz = p.z1 * p.z1 / p1sq;
    let c1 = (p.s_cos - 1.0) / p.p1;
    let c2 = (p.r_cos - 1.0) / p.p2;
    let regime = classify(c1, c2);
    let h_zz = a * (1.0 - zz);
    let h_tz = -a * p.z1 * p.s_sin / p1sq;
    let (h_tt, det) = match regime {
        SignRegime::DifferentSigns => (a * (1.0 - ss), a * a * c1 * c1),
        _ => {
            let psi1sq = 1.0 - 2.0 * p.s_cos + s * s;
            (a * (1.0 - ss) + 2.0 * c1, a * c1 * (a * c1 + 2.0 * psi1sq / p1sq))
        }
    };
    ([h_tt, h_tz, h_zz], regime, det)
}

/// `[Φ_θθ, Φ_θz, Φ_zz]` from Richardson-extrapolated central differences.
pub fn boundary_phase_hessian_fd(theta: f64, z: f64, q: &CylPoint, q0: &SourceConfig) -> [f64; 3] {
    let h = 1e-3;
    let tt = deriv2(|t| boundary_phase(t, z, q, q0), theta, h);
    let zz = deriv2(|u| boundary_phase(theta, u, q, q0), z, h);
    let tz = deriv_mixed(|t, u| boundary_phase(t, u, q, q0), theta, z, h, h);
    [tt, tz, zz]
}

/// Gradient norm below which a point is treated as critical.
const CRITICAL_TOL: f64 = 1e-9;

/// Hessian of `Φ` at `(θ, z)`. At critical points (gradient below `1e−9`)
/// the specialized closed forms are used and the sign regime is reported;
/// elsewhere the general analytic second derivatives are returned.
pub fn boundary_phase_hessian(theta: f64, z: f64, q: &CylPoint, q0: &SourceConfig) -> HessianReport {
    let p = parts(theta, z, q, q0);
    let g = boundary_phase_grad(theta, z, q, q0);
    let (h, regime, det_closed) = if g[0].hypot(g[1]) < CRITICAL_TOL {
        let (h, r, d) = hessian_critical(&p, q0.s);
        (h, Some(r), Some(d))
    } else {
        (hessian_general(&p), None, None)
    };
    let fd = boundary_phase_hessian_fd(theta, z, q, q0);
    let scale = h.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let fd_residual = h.iter().zip(fd.iter()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / scale;
    HessianReport {
        d2_tt: h[0],
        d2_tz: h[1],
        d2_zz: h[2],
        det: h[2] * h[0] - h[1] * h[1],
        fd_residual,
        regime,
        det_closed,
    }
}

/// The unique `z`-critical point on the generator at angle `θ`:
/// `z_c = z_Q ψ(s,θ)/(ψ(s,θ) + ψ(r,θ−θ_Q))` with `ψ(s,θ) = √(1 − 2s cosθ + s²)`.
pub fn z_critical(theta: f64, q: &CylPoint, q0: &SourceConfig) -> f64 {
    let psi1 = phi_tilde(1.0, theta, 0.0, q0.s);
    let psi2 = phi_tilde(1.0, theta - q.theta, 0.0, q.r);
    q.z * psi1 / (psi1 + psi2)
}

fn newton(theta0: f64, z0: f64, q: &CylPoint, q0: &SourceConfig) -> Option<(f64, f64, f64)> {
    let (mut t, mut z) = (theta0, z0);
    let norm = |g: [f64; 2]| g[0].hypot(g[1]);
    let mut g = boundary_phase_grad(t, z, q, q0);
    for _ in 0..200 {
        let gn = norm(g);
        if gn < 1e-12 {
            return Some((t.rem_euclid(TAU), z, gn));
        }
        let h = hessian_general(&parts(t, z, q, q0));
        let det = h[0] * h[2] - h[1] * h[1];
        let (mut dt, mut dz) = if det.abs() > 1e-14 {
            ((-h[2] * g[0] + h[1] * g[1]) / det, (h[1] * g[0] - h[0] * g[1]) / det)
        } else {
            (-g[0], -g[1])
        };
        // Keep the angular step below a quarter turn.
        let cap = 0.5 / dt.abs().max(dz.abs()).max(0.5);
        dt *= cap;
        dz *= cap;
        let mut lambda = 1.0;
        loop {
            let gt = boundary_phase_grad(t + lambda * dt, z + lambda * dz, q, q0);
            if norm(gt) < gn * (1.0 - 1e-4 * lambda) || lambda < 1e-10 {
                t += lambda * dt;
                z += lambda * dz;
                g = gt;
                break;
            }
            lambda *= 0.5;
        }
        if lambda < 1e-10 {
            break;
        }
    }
    let gn = norm(g);
    (gn < 1e-10).then(|| (t.rem_euclid(TAU), z, gn))
}

/// All critical points of `Φ`, located by damped Newton iterations started
/// on a grid of angles with `z = z_c(θ)`, deduplicated and sorted by angle.
pub fn find_critical_points(q: &CylPoint, q0: &SourceConfig) -> Vec<CriticalPoint> {
    let mut out: Vec<CriticalPoint> = Vec::new();
    let starts = 48;
    for k in 0..starts {
        let t0 = TAU * (k as f64 + 0.5) / starts as f64;
        let z0 = z_critical(t0, q, q0);
        if let Some((t, z, gn)) = newton(t0, z0, q, q0) {
            let dup = out.iter().any(|c| {
                let d = (c.theta - t).rem_euclid(TAU);
                d.min(TAU - d) < 1e-7 && (c.z - z).abs() < 1e-7
            });
            if !dup {
                let p = parts(t, z, q, q0);
                let (_, regime, _) = hessian_critical(&p, q0.s);
                out.push(CriticalPoint { theta: t, z, regime, grad_norm: gn });
            }
        }
    }
    out.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    out
}
