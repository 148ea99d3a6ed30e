//! Exact frequency-domain Green function outside the unit cylinder with
//! Dirichlet boundary condition.
//!
//! With `κ = √(τ² − ϑ²)`, the outgoing kernel is the modal integral
//!
//! `𝓡(Q, Q₀, τ) = ∫ dϑ e^{iϑz} Σ_{n∈ℤ} e^{inθ} g_n(r, s, κ)`,
//!
//! `g_n = (i/8π) [J_n(κr<) − J_n(κ) H_n(κr<)/H_n(κ)] H_n(κr>)`,
//!
//! which reduces to `e^{iτ|Q−Q₀|}/(4π|Q−Q₀|)` without the obstacle. In the
//! normalization `G_n = (π/2i)(r r̃)^{−1/2}[…]H_n` used for the modal kernel,
//! `g_n = w(r, s)·G_n` with the radial weight `w = −√(rs)/(4π²)`
//! ([`radial_weight`]).
//!
//! For `|ϑ| > τ`, `κ = i√(ϑ²−τ²)` and the modal kernel is real:
//! `g_n = (1/4π²)[I_n(qr<)K_n(qr>) − I_n(q)K_n(qr<)K_n(qr>)/K_n(q)]`.
//!
//! The resolvent is evaluated as the closed-form free kernel plus the
//! scattered mode sum, whose `ϑ`-integral is split at `|ϑ| = τ` and
//! desingularized by `ϑ = τ sin φ` (propagating) and `ϑ = τ cosh u`
//! (evanescent).

use crate::error::{Error, Result};
use crate::oscint::integrate_smooth;
use crate::phases::{dist_cyl, CutoffSystem, CylPoint, SourceConfig};
use crate::specfun::{cyl_seq, mod_seq, Scaled, ScaledC};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Frequencies of one angular/axial mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModalParams {
    pub tau: f64,
    pub vartheta: f64,
    /// `√(τ² − ϑ²)` on the propagating range, 0 otherwise.
    pub kappa: f64,
    pub n: u32,
}

impl ModalParams {
    pub fn new(tau: f64, vartheta: f64, n: u32) -> Result<Self> {
        if !(tau > 0.0) || !vartheta.is_finite() {
            return Err(Error::Domain(format!("need tau > 0, finite vartheta; got {tau}, {vartheta}")));
        }
        let kappa = (tau * tau - vartheta * vartheta).max(0.0).sqrt();
        Ok(Self { tau, vartheta, kappa, n })
    }

    /// `|ϑ| > τ`: the mode decays radially.
    pub fn is_evanescent(&self) -> bool {
        self.vartheta.abs() > self.tau
    }

    /// `√(ϑ² − τ²)` on the evanescent range, 0 otherwise.
    pub fn q(&self) -> f64 {
        (self.vartheta * self.vartheta - self.tau * self.tau).max(0.0).sqrt()
    }
}

/// Truncation controls for mode sums and `ϑ`-integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    /// Hard cap on the angular order.
    pub n_max: usize,
    /// Upper limit of `|ϑ|` for the evanescent integral (`∞` = automatic).
    pub vartheta_cut: f64,
    /// Absolute tolerance for quadratures and mode-sum tails.
    pub tol: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { n_max: 4000, vartheta_cut: f64::INFINITY, tol: 1e-10 }
    }
}

impl TruncationPolicy {
    fn validate(&self) -> Result<()> {
        if self.n_max < 1 || !(self.tol > 0.0) || !(self.vartheta_cut > 0.0) {
            return Err(Error::Config(format!("invalid truncation policy {self:?}")));
        }
        Ok(())
    }
}

/// A kernel value with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSample {
    pub value: Complex64,
    /// Largest number of angular modes summed at any quadrature node.
    pub n_used: usize,
    /// Quadrature error estimate plus the integrated mode-sum tail bound.
    pub quad_err: f64,
}

/// The radial weight `w(r, s) = −√(rs)/(4π²)` converting `G_n` into the
/// physical modal kernel `g_n`; fixed by requiring the free part of the mode
/// integral to reproduce `e^{iτd}/(4πd)`.
pub fn radial_weight(r: f64, s: f64) -> f64 {
    -(r * s).sqrt() / (4.0 * PI * PI)
}

/// Smallest `N ≥ 1` with `(e τ r_max/(2N))^N / √(2πN) < tol`: the large-order
/// envelope of `J_N(τ r_max)`.
pub fn mode_truncation(tau: f64, r_max: f64, tol: f64) -> usize {
    let x = tau * r_max;
    let lt = tol.ln();
    let mut n = 1usize;
    loop {
        let nf = n as f64;
        let l = nf * (std::f64::consts::E * x / (2.0 * nf)).ln() - 0.5 * (2.0 * PI * nf).ln();
        if l < lt || n > 1_000_000 {
            return n;
        }
        n += 1;
    }
}

fn check_args(r: f64, s: f64, kappa: f64) -> Result<()> {
    if !(r >= 1.0) || !(s >= 1.0) || !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::Domain(format!("need r, s >= 1 and kappa > 0; got {r}, {s}, {kappa}")));
    }
    Ok(())
}

fn to_c(v: ScaledC) -> Result<Complex64> {
    let c = v.to_c64();
    if c.re.is_finite() && c.im.is_finite() {
        Ok(c)
    } else {
        Err(Error::Overflow("modal kernel exceeds the f64 range".into()))
    }
}

/// `G_n(r, r̃, κ) = (π/2i)(r r̃)^{−1/2}[J_n(r<κ) − (J_n(κ)/H_n(κ))H_n(r<κ)]H_n(r>κ)`.
pub fn modal_green(n: u32, r: f64, r_src: f64, kappa: f64) -> Result<Complex64> {
    check_args(r, r_src, kappa)?;
    let (lo, hi) = if r <= r_src { (r, r_src) } else { (r_src, r) };
    if lo == 1.0 {
        // Dirichlet: the bracket vanishes identically on the boundary.
        return Ok(Complex64::new(0.0, 0.0));
    }
    let n = n as usize;
    let a = cyl_seq(n, kappa)?;
    let b = cyl_seq(n, lo * kappa)?;
    let c = cyl_seq(n, hi * kappa)?;
    let bracket = b.j[n].to_complex().add(a.j[n].to_complex().mul(b.h(n)).div(a.h(n)).scale(-Complex64::new(1.0, 0.0)));
    let pref = Complex64::new(0.0, -FRAC_PI_2) / (r * r_src).sqrt();
    to_c(bracket.mul(c.h(n)).scale(pref))
}

/// Free-space part `(π/2i)(r r̃)^{−1/2} J_n(r<κ) H_n(r>κ)` of the modal kernel.
pub fn modal_green_free(n: u32, r: f64, r_src: f64, kappa: f64) -> Result<Complex64> {
    check_args(r, r_src, kappa)?;
    let (lo, hi) = if r <= r_src { (r, r_src) } else { (r_src, r) };
    let n = n as usize;
    let b = cyl_seq(n, lo * kappa)?;
    let c = cyl_seq(n, hi * kappa)?;
    let pref = Complex64::new(0.0, -FRAC_PI_2) / (r * r_src).sqrt();
    to_c(c.h(n).mul_real(b.j[n]).scale(pref))
}

/// Incoming/outgoing split `(G⁺, G⁻)` with `G⁺ − G⁻ = G_n`:
/// `G⁺ = (π/4i)(r r̃)^{−1/2} H̄_n(r<κ) H_n(r>κ)`,
/// `G⁻ = (π/4i)(r r̃)^{−1/2} (H̄_n(κ)/H_n(κ)) H_n(r<κ) H_n(r>κ)`.
pub fn modal_green_split(n: u32, r: f64, r_src: f64, kappa: f64) -> Result<(Complex64, Complex64)> {
    check_args(r, r_src, kappa)?;
    let (lo, hi) = if r <= r_src { (r, r_src) } else { (r_src, r) };
    let n = n as usize;
    let a = cyl_seq(n, kappa)?;
    let b = cyl_seq(n, lo * kappa)?;
    let c = cyl_seq(n, hi * kappa)?;
    let pref = Complex64::new(0.0, -PI / 4.0) / (r * r_src).sqrt();
    let gp = b.h(n).conj().mul(c.h(n)).scale(pref);
    let gm = a.h(n).conj().div(a.h(n)).mul(b.h(n)).mul(c.h(n)).scale(pref);
    Ok((to_c(gp)?, to_c(gm)?))
}

/// `∂_{r̃} G_n(r_src, r̃, κ)` at the boundary `r̃ = 1`:
/// `−r_src^{−1/2} H_n(r_src κ)/H_n(κ)` (the bracket's Wronskian).
pub fn boundary_normal_derivative_modal(n: u32, r_src: f64, kappa: f64) -> Result<Complex64> {
    check_args(r_src, 1.0, kappa)?;
    if !(r_src > 1.0) {
        return Err(Error::Domain("boundary normal derivative needs r_src > 1".into()));
    }
    let n = n as usize;
    let a = cyl_seq(n, kappa)?;
    let c = cyl_seq(n, r_src * kappa)?;
    to_c(c.h(n).div(a.h(n)).scale(Complex64::new(-1.0 / r_src.sqrt(), 0.0)))
}

// ---------------------------------------------------------------------------
// Mode sums

/// Which part of the modal kernel to sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Part {
    Free,
    Scattered,
    Total,
}

/// Number of modes for the angular sum at frequency `τ`, before the 20-mode
/// tail check.
fn modes_needed(tau: f64, r: f64, s: f64, part: Part, policy: &TruncationPolicy) -> Result<usize> {
    let (lo, hi) = if r <= s { (r, s) } else { (s, r) };
    let ratio = match part {
        Part::Scattered => r * s,
        _ => hi / lo,
    };
    let base = mode_truncation(tau, hi, policy.tol);
    let extra = if ratio > 1.0 { ((1.0 / policy.tol).ln() / ratio.ln()).ceil() } else { f64::INFINITY };
    let n = base as f64 + extra;
    if !(n <= policy.n_max as f64) {
        return Err(Error::Truncation(format!(
            "angular sum needs {n} modes (> n_max = {}) at r = {r}, s = {s}",
            policy.n_max
        )));
    }
    Ok(n as usize)
}

const TAIL_MODES: usize = 20;

/// `Σ_{n≥0} ε_n cos(nθ) g_n(r, s, κ)` on the propagating range (`κ > 0`).
/// Returns the sum and the magnitude of the last `TAIL_MODES` contributions.
pub(crate) fn angular_sum_prop(theta: f64, r: f64, s: f64, kappa: f64, part: Part, n: usize) -> Result<(Complex64, f64)> {
    let (lo, hi) = if r <= s { (r, s) } else { (s, r) };
    let nn = n + TAIL_MODES;
    let a = cyl_seq(nn, kappa)?;
    let b = cyl_seq(nn, lo * kappa)?;
    let c = cyl_seq(nn, hi * kappa)?;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut tail = Complex64::new(0.0, 0.0);
    let pref = Complex64::new(0.0, 1.0 / (8.0 * PI));
    for k in 0..=nn {
        let free = || c.h(k).mul_real(b.j[k]);
        let scat = || b.h(k).mul(c.h(k)).div(a.h(k)).mul_real(a.j[k]);
        let v: ScaledC = match part {
            Part::Free => free(),
            Part::Scattered => scat().scale(Complex64::new(-1.0, 0.0)),
            Part::Total => free().add(scat().scale(Complex64::new(-1.0, 0.0))),
        };
        let eps = if k == 0 { 1.0 } else { 2.0 };
        let term = v.to_c64() * pref * eps * (k as f64 * theta).cos();
        if !(term.re.is_finite() && term.im.is_finite()) {
            return Err(Error::Overflow(format!("mode {k} overflows at kappa = {kappa}")));
        }
        sum += term;
        if k > n {
            tail += term;
        }
    }
    Ok((sum, tail.norm()))
}

/// Evanescent counterpart of [`angular_sum_prop`] at `q = √(ϑ²−τ²) > 0`.
pub(crate) fn angular_sum_evan(theta: f64, r: f64, s: f64, q: f64, part: Part, n: usize) -> Result<(f64, f64)> {
    let (lo, hi) = if r <= s { (r, s) } else { (s, r) };
    let nn = n + TAIL_MODES;
    let a = mod_seq(nn, q)?;
    let b = mod_seq(nn, lo * q)?;
    let c = mod_seq(nn, hi * q)?;
    let mut sum = 0.0;
    let mut tail = 0.0;
    let pref = 1.0 / (4.0 * PI * PI);
    for k in 0..=nn {
        let free = || b.i[k].mul(c.k[k]);
        let scat = || a.i[k].mul(b.k[k]).mul(c.k[k]).div(a.k[k]);
        let v: Scaled = match part {
            Part::Free => free(),
            Part::Scattered => scat().scale(-1.0),
            Part::Total => free().sub(scat()),
        };
        let eps = if k == 0 { 1.0 } else { 2.0 };
        let term = v.to_f64() * pref * eps * (k as f64 * theta).cos();
        if !term.is_finite() {
            return Err(Error::Overflow(format!("mode {k} overflows at q = {q}")));
        }
        sum += term;
        if k > n {
            tail += term;
        }
    }
    Ok((sum, tail.abs()))
}

// ---------------------------------------------------------------------------
// ϑ-integrals

struct Acc {
    n_used: usize,
    tail: f64,
    err: Option<Error>,
}

impl Acc {
    fn new() -> Self {
        Self { n_used: 0, tail: 0.0, err: None }
    }
}

/// `∫_{|ϑ|<τ} e^{iϑz} Σ ε_n cos(nθ) g_n dϑ`, optionally weighted by
/// `ψ(κ²/τ²)` restricted to `cos φ ∈ [c_lo, c_hi]`.
fn prop_integral(
    q: &CylPoint,
    s: f64,
    tau: f64,
    part: Part,
    policy: &TruncationPolicy,
    window: Option<(&dyn Fn(f64) -> f64, f64, f64)>,
) -> Result<KernelSample> {
    let n = modes_needed(tau, q.r, s, part, policy)?;
    let acc = std::cell::RefCell::new(Acc::new());
    let (phi_a, phi_b) = match &window {
        Some((_, c_lo, c_hi)) => (c_hi.min(1.0).acos(), c_lo.max(0.0).acos()),
        None => (0.0, FRAC_PI_2),
    };
    if !(phi_b > phi_a) {
        return Ok(KernelSample { value: Complex64::new(0.0, 0.0), n_used: 0, quad_err: 0.0 });
    }
    let f = |phi: f64| -> Complex64 {
        let (sn, cs) = phi.sin_cos();
        let kappa = tau * cs;
        let w = match &window {
            Some((psi, _, _)) => psi(cs * cs),
            None => 1.0,
        };
        if w == 0.0 || kappa <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match angular_sum_prop(q.theta, q.r, s, kappa, part, n) {
            Ok((v, t)) => {
                let mut a = acc.borrow_mut();
                a.n_used = a.n_used.max(n + TAIL_MODES);
                a.tail = a.tail.max(t);
                v * (2.0 * (tau * sn * q.z).cos() * kappa * w)
            }
            Err(e) => {
                acc.borrow_mut().err.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let res = integrate_smooth(f, (phi_a, phi_b), policy.tol)?;
    let a = acc.into_inner();
    if let Some(e) = a.err {
        return Err(e);
    }
    if a.tail > policy.tol {
        return Err(Error::Truncation(format!("mode-sum tail {:e} exceeds tol", a.tail)));
    }
    Ok(KernelSample {
        value: res.value,
        n_used: a.n_used,
        quad_err: res.err_estimate + a.tail * tau * (phi_b - phi_a),
    })
}

/// `∫_{|ϑ|>τ} e^{iϑz} Σ ε_n cos(nθ) g_n dϑ`.
fn evan_integral(q: &CylPoint, s: f64, tau: f64, part: Part, policy: &TruncationPolicy) -> Result<KernelSample> {
    let (lo, hi) = if q.r <= s { (q.r, s) } else { (s, q.r) };
    let decay = match part {
        Part::Scattered => q.r + s - 2.0,
        _ => hi - lo,
    };
    let q_auto = if decay > 0.0 { ((1.0 / policy.tol).ln() + 10.0) / decay } else { f64::INFINITY };
    let th_cut = policy.vartheta_cut.min((tau * tau + q_auto * q_auto).sqrt());
    if !th_cut.is_finite() {
        return Err(Error::Truncation("evanescent integrand does not decay (r = s)".into()));
    }
    if th_cut <= tau {
        return Ok(KernelSample { value: Complex64::new(0.0, 0.0), n_used: 0, quad_err: 0.0 });
    }
    let u_max = (th_cut / tau).acosh();
    let n = modes_needed(tau, q.r, s, part, policy)?;
    let acc = std::cell::RefCell::new(Acc::new());
    let f = |u: f64| -> Complex64 {
        let qq = tau * u.sinh();
        if qq <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match angular_sum_evan(q.theta, q.r, s, qq, part, n) {
            Ok((v, t)) => {
                let mut a = acc.borrow_mut();
                a.n_used = a.n_used.max(n + TAIL_MODES);
                a.tail = a.tail.max(t);
                Complex64::new(v * 2.0 * (tau * u.cosh() * q.z).cos() * qq, 0.0)
            }
            Err(e) => {
                acc.borrow_mut().err.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    // Split the u-range so that the quadrature sees the decay scale.
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let pieces = 8;
    for k in 0..pieces {
        let a = u_max * k as f64 / pieces as f64;
        let b = u_max * (k + 1) as f64 / pieces as f64;
        let r = integrate_smooth(&f, (a, b), policy.tol / pieces as f64)?;
        value += r.value;
        err += r.err_estimate;
    }
    let a = acc.into_inner();
    if let Some(e) = a.err {
        return Err(e);
    }
    if a.tail > policy.tol {
        return Err(Error::Truncation(format!("mode-sum tail {:e} exceeds tol", a.tail)));
    }
    Ok(KernelSample { value, n_used: a.n_used, quad_err: err + a.tail * th_cut })
}

fn combine(a: KernelSample, b: KernelSample) -> KernelSample {
    KernelSample {
        value: a.value + b.value,
        n_used: a.n_used.max(b.n_used),
        quad_err: a.quad_err + b.quad_err,
    }
}

/// Free outgoing kernel `e^{iτd}/(4πd)`.
pub fn free_resolvent(q: &CylPoint, q0: &SourceConfig, tau: f64) -> Result<Complex64> {
    let d = dist_cyl(q, q0);
    if d == 0.0 {
        return Err(Error::Degenerate("observation point coincides with the source".into()));
    }
    Ok(Complex64::cis(tau * d) / (4.0 * PI * d))
}

/// Scattered part `𝓡 − e^{iτd}/(4πd)` of the outgoing kernel.
pub fn scattered_resolvent(q: &CylPoint, q0: &SourceConfig, tau: f64, policy: &TruncationPolicy) -> Result<KernelSample> {
    policy.validate()?;
    if !(tau > 0.0) {
        return Err(Error::Domain(format!("tau must be positive, got {tau}")));
    }
    let p = prop_integral(q, q0.s, tau, Part::Scattered, policy, None)?;
    let e = evan_integral(q, q0.s, tau, Part::Scattered, policy)?;
    Ok(combine(p, e))
}

/// Propagating (`|ϑ| < τ`) and evanescent (`|ϑ| > τ`) pieces of the
/// scattered kernel.
pub fn scattered_resolvent_parts(
    q: &CylPoint,
    q0: &SourceConfig,
    tau: f64,
    policy: &TruncationPolicy,
) -> Result<(KernelSample, KernelSample)> {
    policy.validate()?;
    Ok((
        prop_integral(q, q0.s, tau, Part::Scattered, policy, None)?,
        evan_integral(q, q0.s, tau, Part::Scattered, policy)?,
    ))
}

/// Outgoing Dirichlet kernel `𝓡(Q, Q₀, τ)`: free closed form plus the
/// scattered mode integral.
pub fn resolvent(q: &CylPoint, q0: &SourceConfig, tau: f64, policy: &TruncationPolicy) -> Result<KernelSample> {
    let sc = scattered_resolvent(q, q0, tau, policy)?;
    Ok(KernelSample { value: sc.value + free_resolvent(q, q0, tau)?, ..sc })
}

/// Free kernel rebuilt entirely from its mode integral (both `ϑ` ranges);
/// requires `r ≠ s`. Used to calibrate [`radial_weight`] against the
/// closed form.
pub fn free_resolvent_modal(q: &CylPoint, q0: &SourceConfig, tau: f64, policy: &TruncationPolicy) -> Result<KernelSample> {
    policy.validate()?;
    let p = prop_integral(q, q0.s, tau, Part::Free, policy, None)?;
    let e = evan_integral(q, q0.s, tau, Part::Free, policy)?;
    Ok(combine(p, e))
}

/// Propagating part (`|ϑ| < τ`) of `𝓡`, from the full mode sum; requires `r ≠ s`.
pub fn resolvent_propagating(q: &CylPoint, q0: &SourceConfig, tau: f64, policy: &TruncationPolicy) -> Result<KernelSample> {
    policy.validate()?;
    prop_integral(q, q0.s, tau, Part::Total, policy, None)
}

/// Littlewood–Paley piece `𝓡_j`: the propagating part of `𝓡` weighted by
/// `ψ_j(1 − (ϑ/τ)²)` (`ψ₀` for `j = 0`); requires `r ≠ s`.
pub fn lp_resolvent(
    q: &CylPoint,
    q0: &SourceConfig,
    tau: f64,
    j: u32,
    cutoffs: &CutoffSystem,
    policy: &TruncationPolicy,
) -> Result<KernelSample> {
    policy.validate()?;
    // Support of ψ_j in β = cos²φ, hence in cos φ.
    let (b_lo, b_hi) = cutoffs.psi_j_support(j);
    let psi = |b: f64| cutoffs.psi_j(j, b);
    prop_integral(q, q0.s, tau, Part::Total, policy, Some((&psi, b_lo.sqrt(), b_hi.sqrt())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_truncation_pinned() {
        assert_eq!(mode_truncation(50.0, 1.0, 1e-10), 86);
        assert!(mode_truncation(50.0, 1.0, 5e-11) >= 86);
        assert!(mode_truncation(1e-3, 1.0, 1e-10) <= 3);
    }

    #[test]
    fn dirichlet_modal_zero() {
        let g = modal_green(3, 1.0, 2.0, 1.7).unwrap();
        assert!(g.norm() < 1e-15);
        let (p, m) = modal_green_split(3, 1.0, 2.0, 1.7).unwrap();
        assert!((p - m).norm() < 1e-15);
    }
}
