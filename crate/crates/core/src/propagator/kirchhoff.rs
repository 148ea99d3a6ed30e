//! Single-layer (Kirchhoff) representation of the scattered wave.
//!
//! For the Dirichlet problem, `u = u_free − u#` with
//! `u#(Q, t) = ∫_{∂Ω} ∂_ν u(P, t − |Q−P|) / (4π|Q−P|) dσ(P)`, `ν` pointing
//! into the exterior. In the frequency domain the retarded kernel becomes
//! `e^{iτ|Q−P|}/(4π|Q−P|)`; its integral over the boundary generator `z'`
//! is the two-dimensional kernel `(i/4)H₀^{(1)}(κ|Q⊥−P⊥|)` at each axial
//! frequency `ϑ`, so that
//!
//! `û#(Q, τ) = ∫ dϑ e^{iϑz} ∫₀^{2π} ∂_ν û_ϑ(θ') (i/4) H₀^{(1)}(κ|Q⊥−P⊥(θ')|) dθ'`,
//!
//! with the boundary data `∂_ν û_ϑ(θ') = (4π²)⁻¹ Σ_n e^{inθ'} H_n(sκ)/H_n(κ)`
//! synthesized from the exact modal normal derivative. The `θ'` integral
//! is done numerically by the periodic trapezoid rule, and the time
//! synthesis shares the spectral quadrature of the wave kernel.

use super::engine::{EngineBounds, SpectralEngine};
use super::FreqWindow;
use crate::error::{Error, Result};
use crate::green::{mode_truncation, KernelSample, TruncationPolicy};
use crate::phases::{CylPoint, SourceConfig};
use crate::specfun::{cyl_seq, hankel_h1};
use num_complex::Complex64;
use std::f64::consts::PI;

/// `∫₀^{2π} ∂_ν û_ϑ(θ') (i/4) H₀^{(1)}(κ ρ(θ')) dθ'` at one `κ`.
fn boundary_layer(q: &CylPoint, s: f64, kappa: f64, tol: f64, n_max: usize) -> Result<Complex64> {
    let n = mode_truncation(kappa, s, tol) + ((1.0 / tol).ln() / s.ln()).ceil() as usize + 20;
    if n > n_max {
        return Err(Error::Truncation(format!("boundary data need {n} modes (n_max = {n_max})")));
    }
    let a = cyl_seq(n, kappa)?;
    let b = cyl_seq(n, s * kappa)?;
    let ratio: Vec<Complex64> = (0..=n).map(|m| b.h(m).div(a.h(m)).to_c64() / (4.0 * PI * PI)).collect();
    // Trapezoid resolution: both factors are band-limited in θ' up to about
    // n + κ(r+1); the log singularity of H₀ sits at distance r − 1.
    let band = n as f64 + kappa * (q.r + 1.0);
    let m_pts = ((2.0 * band + 64.0).max(48.0 / (q.r - 1.0)) / 4.0).ceil() as usize * 4;
    let (qx, qy) = (q.r * q.theta.cos(), q.r * q.theta.sin());
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..m_pts {
        let th = 2.0 * PI * k as f64 / m_pts as f64;
        let (c1, s1) = (th.cos(), th.sin());
        let rho = ((qx - c1).powi(2) + (qy - s1).powi(2)).sqrt();
        let (mut cm, mut cc) = (c1, 1.0);
        let mut data = ratio[0];
        for r in &ratio[1..] {
            let next = 2.0 * c1 * cc - cm;
            cm = cc;
            cc = next;
            data += r * (2.0 * cc);
        }
        acc += data * hankel_h1(0, kappa * rho)? * Complex64::new(0.0, 0.25);
    }
    Ok(acc * (2.0 * PI / m_pts as f64))
}

/// The single-layer term `u#` of the band-limited half-wave kernel, so that
/// `free_wave_kernel − u#` reproduces [`super::wave_kernel`].
pub fn kirchhoff_single_layer(
    q: &CylPoint,
    q0: &SourceConfig,
    t: f64,
    window: &FreqWindow,
    policy: &TruncationPolicy,
) -> Result<KernelSample> {
    if !(q.r > 1.0) {
        return Err(Error::Domain(format!("Q must lie strictly outside the cylinder, r = {}", q.r)));
    }
    let bounds = EngineBounds { r_max: q.r, z_max: q.z.abs(), t_max: t.abs() };
    let eng = SpectralEngine::new(*window, q0.s, bounds, policy)?;
    let (kx, kw) = eng.kappa_nodes();
    let time = eng.time_table(&[q.z], &[t]);
    let mut value = Complex64::new(0.0, 0.0);
    for ((k, w), tk) in kx.iter().zip(kw).zip(&time[0][0]) {
        let b = boundary_layer(q, q0.s, *k, policy.tol, policy.n_max)?;
        value += tk * (b.im * w);
    }
    Ok(KernelSample { value, n_used: eng.max_order(), quad_err: 0.0 })
}

/// Earliest time at which a ray from `Q₀` can reach `Q` via the boundary:
/// `min_P |Q₀ − P| + |P − Q|` over `P ∈ ∂Ω`.
pub fn first_boundary_arrival(q: &CylPoint, q0: &SourceConfig) -> f64 {
    let (qx, qy) = (q.r * q.theta.cos(), q.r * q.theta.sin());
    let f = |th: f64| {
        let (c, s) = (th.cos(), th.sin());
        let a = ((q0.s - c).powi(2) + s * s).sqrt();
        let b = ((qx - c).powi(2) + (qy - s).powi(2)).sqrt();
        // Optimal z' unfolds the path into a straight line.
        ((a + b).powi(2) + q.z * q.z).sqrt()
    };
    let n = 720;
    let (mut best, mut arg) = (f64::INFINITY, 0.0);
    for k in 0..n {
        let th = 2.0 * PI * k as f64 / n as f64;
        let v = f(th);
        if v < best {
            best = v;
            arg = th;
        }
    }
    // Golden-section refinement on the bracketing cell.
    let (mut a, mut b) = (arg - 2.0 * PI / n as f64, arg + 2.0 * PI / n as f64);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    f(0.5 * (a + b)).min(best)
}
