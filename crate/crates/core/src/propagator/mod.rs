//! Time-domain synthesis of frequency-localized wave kernels.
//!
//! The half-wave kernel of the band-limited propagator is
//!
//! `K(Q, Q₀, t) = ∫₀^∞ e^{itτ} χ(hτ) (τ/π) Im 𝓡(Q, Q₀, τ) dτ`,
//!
//! so that `K(t) + K(−t)` is the kernel of `cos(t√−Δ_D) χ(h√−Δ_D)` and
//! `2K` that of `e^{it√−Δ_D} χ(h√−Δ_D)`. Without the obstacle,
//! `Im 𝓡 = sin(τd)/(4πd)` and `K` has the closed form of
//! [`free_wave_kernel`].

mod engine;
mod incoming;
mod kirchhoff;
mod scan;

pub use engine::{wave_kernel, EngineBounds, SpectralEngine, TimeSlab};
pub use incoming::{freq_localized_incoming, incoming_evanescent_remainder, incoming_wave};
pub use kirchhoff::{first_boundary_arrival, kirchhoff_single_layer};
pub use scan::{dispersion_scan, DispersionReport, DispersionRow, KernelModel, ScanSetup, SearchPolicy};

use crate::error::{Error, Result};
use crate::oscint::{integrate_osc, integrate_smooth, legendre_rule, Phase1D};
use crate::phases::{dist_cyl, CylPoint, Smoothness, SourceConfig};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

/// Which time-frequency cutoff localizes the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowKind {
    /// `χ(hτ)`, supported in `τ ∈ [1/(2h), 2/h]`.
    High,
    /// `χ₀(τ)`, supported in `τ ∈ [0, 2)`.
    Low,
}

/// A time-frequency window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreqWindow {
    /// Semiclassical parameter (only the high window depends on it).
    pub h: f64,
    pub kind: WindowKind,
    #[serde(default)]
    pub smoothness: Smoothness,
}

impl FreqWindow {
    pub fn new(h: f64, kind: WindowKind, smoothness: Smoothness) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::Domain(format!("h must lie in (0, 1), got {h}")));
        }
        Ok(Self { h, kind, smoothness })
    }

    /// `χ(hτ)` with the default step profile.
    pub fn high(h: f64) -> Result<Self> {
        Self::new(h, WindowKind::High, Smoothness::default())
    }

    /// `χ₀(τ)` with the default step profile.
    pub fn low() -> Self {
        Self { h: 0.5, kind: WindowKind::Low, smoothness: Smoothness::default() }
    }

    pub fn with_smoothness(mut self, smoothness: Smoothness) -> Self {
        self.smoothness = smoothness;
        self
    }

    /// `τ = L σ` maps the profile variable `σ` to frequency.
    fn scale(&self) -> f64 {
        match self.kind {
            WindowKind::High => 1.0 / self.h,
            WindowKind::Low => 1.0,
        }
    }

    /// Closed support of the window in `τ > 0`.
    pub fn tau_range(&self) -> (f64, f64) {
        let l = self.scale();
        match self.kind {
            WindowKind::High => (0.5 * l, 2.0 * l),
            WindowKind::Low => (0.0, 2.0),
        }
    }

    /// Frequencies where the profile changes polynomial piece (including
    /// the support ends); quadratures split their panels there.
    pub fn breakpoints(&self) -> Vec<f64> {
        let l = self.scale();
        match self.kind {
            WindowKind::High => vec![0.5 * l, 0.75 * l, 1.5 * l, 2.0 * l],
            WindowKind::Low => vec![0.0, 1.5, 2.0],
        }
    }

    fn sigma_profile(&self, x: f64) -> f64 {
        let st = self.smoothness;
        match self.kind {
            WindowKind::High => st.step((x - 0.5) / 0.25) * (1.0 - st.step((x - 1.5) / 0.5)),
            WindowKind::Low => 1.0 - st.step((x.abs() - 1.5) / 0.5),
        }
    }

    /// The cutoff as a function of frequency: `χ(hτ)` or `χ₀(τ)`.
    pub fn profile(&self, tau: f64) -> f64 {
        self.sigma_profile(tau / self.scale())
    }

    /// The dispersive bound the kernel is compared with:
    /// `h⁻³ min(1, h/t)` (high) or `1/(1+t)` (low).
    pub fn bound(&self, t: f64) -> f64 {
        match self.kind {
            WindowKind::High => self.h.powi(-3) * (self.h / t).min(1.0),
            WindowKind::Low => 1.0 / (1.0 + t),
        }
    }

    /// `F(u) = ∫₀^∞ τ χ(hτ) e^{iτu} dτ` (or with `χ₀(τ)`), exactly for the
    /// polynomial step and by quadrature for the `C^∞` step.
    pub fn tau_moment(&self, u: f64) -> Complex64 {
        let l = self.scale();
        l * l * self.sigma_moment(u * l)
    }

    /// `M(ω) = ∫ σ χ(σ) e^{iωσ} dσ` over the profile support.
    fn sigma_moment(&self, w: f64) -> Complex64 {
        match self.smoothness {
            Smoothness::C4 => pieces(self.kind).iter().map(|p| p.integral(w)).sum(),
            Smoothness::CInf => {
                let (a, b) = match self.kind {
                    WindowKind::High => (0.5, 2.0),
                    WindowKind::Low => (0.0, 2.0),
                };
                let amp = |x: f64| Complex64::new(x * self.sigma_profile(x), 0.0);
                let r = if w.abs() < 1.0 {
                    integrate_smooth(|x| amp(x) * Complex64::cis(w * x), (a, b), 1e-12)
                } else {
                    let ph = Phase1D::new(|x| x).with_d1(|_| 1.0).with_d2(|_| 0.0);
                    integrate_osc(amp, &ph, w.abs(), (a, b), 1e-12).map(|q| {
                        let mut q = q;
                        if w < 0.0 {
                            q.value = q.value.conj();
                        }
                        q
                    })
                };
                // The profile is bounded and compactly supported; the adaptive
                // rule converges well inside its panel budget.
                r.map(|q| q.value).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Exact moments of the piecewise-polynomial profile

/// Coefficients (in `t`) of the degree-9 smoothstep.
const SMOOTHSTEP: [f64; 10] = [0.0, 0.0, 0.0, 0.0, 0.0, 126.0, -420.0, 540.0, -315.0, 70.0];

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

fn poly_deriv(a: &[f64]) -> Vec<f64> {
    if a.len() <= 1 {
        return vec![0.0];
    }
    a.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect()
}

fn poly_eval(a: &[f64], t: f64) -> f64 {
    a.iter().rev().fold(0.0, |s, c| s * t + c)
}

/// `σ χ(σ)` on `[a, a + len]` as a polynomial in `t = (σ − a)/len`.
struct Piece {
    a: f64,
    len: f64,
    poly: Vec<f64>,
}

impl Piece {
    /// `∫ₐ^{a+len} P e^{iωσ} dσ`.
    fn integral(&self, w: f64) -> Complex64 {
        let beta = w * self.len;
        let inner = if beta.abs() <= 6.0 {
            static GL: OnceLock<crate::oscint::Legendre> = OnceLock::new();
            let rule = GL.get_or_init(|| legendre_rule(24));
            let mut s = Complex64::new(0.0, 0.0);
            for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
                let t = 0.5 * (x + 1.0);
                s += Complex64::cis(beta * t) * (0.5 * wt * poly_eval(&self.poly, t));
            }
            s
        } else {
            // Σ_k (−1)^k [P^{(k)} e^{iβt}]₀¹ / (iβ)^{k+1}
            let ib = Complex64::new(0.0, beta);
            let e1 = Complex64::cis(beta);
            let mut d = self.poly.clone();
            let mut s = Complex64::new(0.0, 0.0);
            let mut den = ib;
            let mut sign = 1.0;
            while d.iter().any(|c| *c != 0.0) {
                s += (e1 * poly_eval(&d, 1.0) - poly_eval(&d, 0.0)) * sign / den;
                d = poly_deriv(&d);
                den *= ib;
                sign = -sign;
            }
            s
        };
        Complex64::cis(w * self.a) * inner * self.len
    }
}

fn pieces(kind: WindowKind) -> &'static [Piece] {
    static HIGH: OnceLock<Vec<Piece>> = OnceLock::new();
    static LOW: OnceLock<Vec<Piece>> = OnceLock::new();
    let one_minus_s: Vec<f64> = SMOOTHSTEP.iter().enumerate().map(|(k, c)| if k == 0 { 1.0 - c } else { -c }).collect();
    match kind {
        WindowKind::High => HIGH.get_or_init(|| {
            vec![
                Piece { a: 0.5, len: 0.25, poly: poly_mul(&[0.5, 0.25], &SMOOTHSTEP) },
                Piece { a: 0.75, len: 0.75, poly: vec![0.75, 0.75] },
                Piece { a: 1.5, len: 0.5, poly: poly_mul(&[1.5, 0.5], &one_minus_s) },
            ]
        }),
        WindowKind::Low => LOW.get_or_init(|| {
            vec![
                Piece { a: 0.0, len: 1.5, poly: vec![0.0, 1.5] },
                Piece { a: 1.5, len: 0.5, poly: poly_mul(&[1.5, 0.5], &one_minus_s) },
            ]
        }),
    }
}

/// Band-limited free half-wave kernel:
/// `K₀ = (8π²d i)⁻¹ [F(t + d) − F(t − d)]` with `F(u) = ∫τχ(hτ)e^{iτu}dτ`
/// and `d = |Q − Q₀|`.
pub fn free_wave_kernel(q: &CylPoint, q0: &SourceConfig, t: f64, window: &FreqWindow) -> Result<Complex64> {
    let d = dist_cyl(q, q0);
    free_wave_kernel_at_distance(d, t, window)
}

/// [`free_wave_kernel`] as a function of the distance `d` alone.
pub fn free_wave_kernel_at_distance(d: f64, t: f64, window: &FreqWindow) -> Result<Complex64> {
    if !(d > 1e-12) {
        return Err(Error::Degenerate(format!("coincident points (d = {d:e})")));
    }
    let num = window.tau_moment(t + d) - window.tau_moment(t - d);
    Ok(num / Complex64::new(0.0, 8.0 * PI * PI * d))
}

/// Kernel of `cos(t√−Δ_D)χ(h√−Δ_D)`: `K(t) + K(−t)`, both halves evaluated
/// independently. The imaginary part measures the synthesis error.
pub fn cosine_kernel(q: &CylPoint, q0: &SourceConfig, t: f64, window: &FreqWindow, policy: &crate::green::TruncationPolicy) -> Result<Complex64> {
    let bounds = EngineBounds { r_max: q.r, z_max: q.z.abs(), t_max: t.abs() };
    let eng = SpectralEngine::new(*window, q0.s, bounds, policy)?;
    Ok(eng.kernel(q, t)?.value + eng.kernel(q, -t)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_moments_match_quadrature() {
        for kind in [WindowKind::High, WindowKind::Low] {
            let win = FreqWindow { h: 0.5, kind, smoothness: Smoothness::C4 };
            for w in [0.0, 0.3, 2.0, 5.0, 11.0, 40.0, -17.0, 300.0] {
                let exact = win.sigma_moment(w);
                let (a, b) = if kind == WindowKind::High { (0.5, 2.0) } else { (0.0, 2.0) };
                let quad = integrate_smooth(
                    |x| Complex64::cis(w * x) * (x * win.sigma_profile(x)),
                    (a, b),
                    1e-12,
                )
                .unwrap()
                .value;
                assert!((exact - quad).norm() < 1e-11, "{kind:?} w={w}: {exact} vs {quad}");
            }
        }
    }
}
