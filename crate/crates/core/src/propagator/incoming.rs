//! Angular (Littlewood–Paley) decomposition of the incoming free wave
//! `w_in = (iτ/4π) e^{−iτd}/d`.
//!
//! Fourier inversion in the tangential variables reduces the four-fold
//! `(α, γ, ỹ, z̃)` integral to a single integral over the axial direction
//! cosine `γ`:
//!
//! `w_j = (τ²/4π) ∫₀¹ ψ_j(1−γ²) cos(τzγ) H₀^{(2)}(τρ₀√(1−γ²)) dγ`,
//!
//! where `ρ₀` is the distance from `Q` to `Q₀` across the cylinder axis.
//! The `ψ_j` only see `|γ| < 1`; the remaining axial frequencies `|γ| > 1`
//! carry [`incoming_evanescent_remainder`], so that
//! `Σ_j w_j + remainder = w_in` exactly.

use crate::error::{Error, Result};
use crate::oscint::integrate_smooth;
use crate::phases::{dist_cyl, CutoffSystem, CylPoint, SourceConfig, PSI0_ZERO};
use crate::specfun::{hankel_h1, mod_seq};
use num_complex::Complex64;
use std::f64::consts::PI;

fn transverse_distance(q: &CylPoint, q0: &SourceConfig) -> Result<f64> {
    let rho = (q.r * q.r + q0.s * q0.s - 2.0 * q.r * q0.s * q.theta.cos()).max(0.0).sqrt();
    if !(rho > 1e-9) {
        return Err(Error::Degenerate(format!("Q lies on the axial line through Q0 (rho = {rho:e})")));
    }
    Ok(rho)
}

/// `(iτ/4π) e^{−iτd}/d`, the time Fourier transform of `1_{t>0} u_free`.
pub fn incoming_wave(q: &CylPoint, q0: &SourceConfig, tau: f64) -> Result<Complex64> {
    let d = dist_cyl(q, q0);
    if !(d > 1e-12) {
        return Err(Error::Degenerate("coincident points".into()));
    }
    Ok(Complex64::new(0.0, tau / (4.0 * PI)) * Complex64::cis(-tau * d) / d)
}

fn h0_2(x: f64) -> Result<Complex64> {
    Ok(hankel_h1(0, x)?.conj())
}

/// The `j`-th angular piece `w_j(Q, Q₀, τ)` (`j = 0` uses `ψ₀`).
pub fn freq_localized_incoming(
    q: &CylPoint,
    q0: &SourceConfig,
    tau: f64,
    j: u32,
    cutoffs: &CutoffSystem,
) -> Result<Complex64> {
    if !(tau > 0.0) {
        return Err(Error::Domain(format!("tau must be positive, got {tau}")));
    }
    let rho = transverse_distance(q, q0)?;
    let scale = tau / (4.0 * PI * dist_cyl(q, q0));
    let tol = 1e-11 * scale;
    let pref = tau * tau / (4.0 * PI);
    let z = q.z;
    let err = std::cell::Cell::new(None);
    let eval = |gamma: f64, beta: f64, weight: f64| -> Complex64 {
        let psi = cutoffs.psi_j(j, beta);
        if psi == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match h0_2(tau * rho * beta.sqrt()) {
            Ok(h) => h * (psi * weight * (tau * z * gamma).cos()),
            Err(e) => {
                err.set(Some(e));
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let integral = if j == 0 {
        let g_hi = (1.0 - PSI0_ZERO).sqrt();
        integrate_smooth(|g| eval(g, 1.0 - g * g, 1.0), (0.0, g_hi), tol / pref)?
    } else {
        // β = 1 − γ², dγ = dβ / (2√(1−β)); the support in β is compact.
        let (lo, hi) = cutoffs.psi_j_support(j);
        integrate_smooth(|b| eval((1.0 - b).sqrt(), b, 0.5 / (1.0 - b).sqrt()), (lo, hi), tol / pref)?
    };
    if let Some(e) = err.take() {
        return Err(e);
    }
    Ok(integral.value * pref)
}

/// Contribution of the axial frequencies `|γ| > 1` to `w_in`, which no
/// `ψ_j` reaches: `(iτ²/2π²) ∫₁^∞ cos(τzγ) K₀(τρ₀√(γ²−1)) dγ`.
pub fn incoming_evanescent_remainder(q: &CylPoint, q0: &SourceConfig, tau: f64) -> Result<Complex64> {
    let rho = transverse_distance(q, q0)?;
    let a = tau * rho;
    let scale = tau / (4.0 * PI * dist_cyl(q, q0));
    let pref = tau * tau / (2.0 * PI * PI);
    // γ = cosh u; K₀(a sinh u) < e^{−60} beyond a sinh u = 60.
    let u_max = (60.0 / a).asinh();
    let err = std::cell::Cell::new(None);
    let f = |u: f64| {
        let x = a * u.sinh();
        if x <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        match mod_seq(0, x) {
            Ok(m) => Complex64::new(m.k[0].to_f64() * u.sinh() * (tau * q.z * u.cosh()).cos(), 0.0),
            Err(e) => {
                err.set(Some(e));
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let v = integrate_smooth(f, (0.0, u_max), 1e-11 * scale / pref)?;
    if let Some(e) = err.take() {
        return Err(e);
    }
    Ok(Complex64::new(0.0, pref) * v.value)
}
