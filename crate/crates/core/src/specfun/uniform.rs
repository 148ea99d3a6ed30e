//! Large-order asymptotics of `H_n^{(1)}(nρ)` and `J_n(nρ)`:
//!
//! * uniform Airy-type expansion (Olver), with `A₀ = 1`, `B₀` and one
//!   correction pair `A₁, B₁` built from the Debye polynomials `U_k`;
//! * the transition form near `ρ = 1` (`x = n + n^{1/3}v`), used when
//!   `|ρ − 1| ≤ 2 n^{−2/3}`;
//! * the large-order form `J_n(x) ≈ (2πn)^{−1/2}(ex/2n)^n` when `x ≤ 0.2√n`.
//!
//! In the uniform form `H^{(1)}` is expressed through `A₋(w) = Ai(e^{2iπ/3}w)`:
//! `H_ν^{(1)}(νρ) ≈ 2e^{−iπ/3}(4ζ/(1−ρ²))^{1/4}[ν^{−1/3}A₋(ν^{2/3}ζ)ΣA_kν^{−2k}
//! + ν^{−5/3}A₋'(ν^{2/3}ζ)ΣB_kν^{−2k}]`. The fourth root is of a positive real
//! number on both sides of `ρ = 1` and is taken real positive.

use super::airy::{a_minus_scaled, a_scaled};
use super::zeta::zeta_tilde;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Which approximation produced an [`AsymptoticValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    ExactSeries,
    UniformAiry,
    Transition,
    LargeOrder,
}

/// Asymptotic approximation with its regime and a relative error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticValue {
    pub value: Complex64,
    pub regime: Regime,
    pub err_estimate: f64,
}

/// Half-width constant `c` of the transition window `|ρ−1| ≤ c·n^{−2/3}`.
pub const TRANSITION_C: f64 = 2.0;
/// Maximal number of expansion terms.
pub const MAX_ORDER: u32 = 2;

const U1: f64 = 5.0 / 72.0;
const V1: f64 = -7.0 / 72.0;
const U2: f64 = 385.0 / 10368.0;
const V2: f64 = -455.0 / 10368.0;
const U3: f64 = 85085.0 / 2239488.0;

fn cis(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

/// Select the regime used for `(n, ρ)`.
pub fn select_regime(n: u32, rho: f64) -> Regime {
    let nf = n as f64;
    if nf * rho <= 0.2 * nf.sqrt() {
        Regime::LargeOrder
    } else if (rho - 1.0).abs() <= TRANSITION_C * nf.powf(-2.0 / 3.0) {
        Regime::Transition
    } else {
        Regime::UniformAiry
    }
}

fn check(n: u32, rho: f64, order: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::Range("uniform expansions need n ≥ 1".into()));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::Domain(format!("rho must be positive, got {rho}")));
    }
    if order == 0 || order > MAX_ORDER {
        return Err(Error::Range(format!("order must be 1..={MAX_ORDER}, got {order}")));
    }
    Ok(())
}

struct Coeffs {
    pref: f64,
    a: Complex64,
    b: Complex64,
    /// Magnitude of the last included correction, used as an error proxy.
    last: f64,
}

fn coeffs(nu: f64, rho: f64, zeta: f64, order: u32) -> Coeffs {
    let c = |x: f64| Complex64::new(x, 0.0);
    let sz = c(zeta).sqrt(); // i√(−ζ) for ζ < 0
    let z32 = sz * zeta;
    let p = c(1.0 - rho * rho).sqrt().inv();
    let (p2, p3) = (p * p, p * p * p);
    let u1 = (p * 3.0 - p3 * 5.0) / 24.0;
    let u2 = (p2 * 81.0 - p2 * p2 * 462.0 + p3 * p3 * 385.0) / 1152.0;
    let u3 = (p3 * 30375.0 - p3 * p2 * 369603.0 + p3 * p2 * p2 * 765765.0
        - p3 * p3 * p3 * 425425.0)
        / 414720.0;
    let b0 = -(u1 + 1.5 * U1 / z32) / sz;
    let a1 = u2 + 1.5 * V1 / z32 * u1 + 2.25 * V2 / (z32 * z32);
    let b1 = -(u3 + 1.5 * U1 / z32 * u2 + 2.25 * U2 / (z32 * z32) * u1
        + 3.375 * U3 / (z32 * z32 * z32))
        / sz;
    let pref = (4.0 * zeta / (1.0 - rho * rho)).powf(0.25);
    let nu2 = nu * nu;
    if order == 1 {
        Coeffs { pref, a: c(1.0), b: b0, last: (a1.norm() + b1.norm()) / nu2 }
    } else {
        Coeffs {
            pref,
            a: c(1.0) + a1 / nu2,
            b: b0 + b1 / nu2,
            last: (a1.norm() + b1.norm()) / (nu2 * nu2),
        }
    }
}

fn uniform(n: u32, rho: f64, order: u32, hankel: bool) -> Result<AsymptoticValue> {
    let nu = n as f64;
    let zeta = zeta_tilde(rho)?;
    let k = coeffs(nu, rho, zeta, order);
    let w = Complex64::new(nu.powf(2.0 / 3.0) * zeta, 0.0);
    let (ai, dai, eta) = if hankel { a_minus_scaled(w) } else { a_scaled(w) };
    if -eta.re > 700.0 {
        return Err(Error::Overflow(format!("H_{n}({}) exceeds the f64 range", nu * rho)));
    }
    let bracket = ai * k.a * nu.powf(-1.0 / 3.0) + dai * k.b * nu.powf(-5.0 / 3.0);
    let mut v = bracket * (-eta).exp() * k.pref;
    if hankel {
        v *= cis(-PI / 3.0) * 2.0;
    }
    Ok(AsymptoticValue { value: v, regime: Regime::UniformAiry, err_estimate: k.last })
}

fn transition(n: u32, rho: f64, hankel: bool) -> Result<AsymptoticValue> {
    let nu = n as f64;
    let t = (rho - 1.0) * nu.powf(2.0 / 3.0);
    let w = Complex64::new(-2f64.cbrt() * t, 0.0);
    let (ai, dai, eta) = if hankel { a_minus_scaled(w) } else { a_scaled(w) };
    let q = nu.powf(-2.0 / 3.0);
    let f1 = -t / 5.0;
    let f2 = -9.0 * t.powi(5) / 100.0 + 3.0 * t * t / 35.0;
    let f3 = 957.0 * t.powi(6) / 7000.0 - 173.0 * t.powi(3) / 3150.0 - 1.0 / 225.0;
    let g0 = 3.0 * t * t / 10.0;
    let g1 = -17.0 * t.powi(3) / 70.0 + 1.0 / 70.0;
    let g2 = -9.0 * t.powi(7) / 1000.0 + 611.0 * t.powi(4) / 3150.0 - 37.0 * t / 3150.0;
    let fs = 1.0 + q * (f1 + q * (f2 + q * f3));
    let gs = g0 + q * (g1 + q * g2);
    let scale = (-eta).exp();
    let mut v = (ai * 2f64.cbrt() * nu.powf(-1.0 / 3.0) * fs
        + dai * 2f64.cbrt().powi(2) / nu * gs)
        * scale;
    if hankel {
        v *= cis(-PI / 3.0) * 2.0;
    }
    let err = q * (f3.abs() * q * q + g2.abs() * q);
    Ok(AsymptoticValue { value: v, regime: Regime::Transition, err_estimate: err })
}

fn large_order(n: u32, rho: f64, hankel: bool) -> Result<AsymptoticValue> {
    let nu = n as f64;
    let x = nu * rho;
    let lj = nu * (std::f64::consts::E * rho / 2.0).ln() - 0.5 * (2.0 * PI * nu).ln();
    let j = lj.exp();
    let err = x * x / (4.0 * (nu + 1.0)) + 1.0 / (12.0 * nu);
    if !hankel {
        return Ok(AsymptoticValue { value: Complex64::new(j, 0.0), regime: Regime::LargeOrder, err_estimate: err });
    }
    // Y_n(x) ≈ −√(2/(πn)) (ex/2n)^{−n}
    let ly = -nu * (std::f64::consts::E * rho / 2.0).ln() + 0.5 * (2.0 / (PI * nu)).ln();
    if ly > 709.0 {
        return Err(Error::Overflow(format!("H_{n}({x}) exceeds the f64 range")));
    }
    Ok(AsymptoticValue {
        value: Complex64::new(j, -ly.exp()),
        regime: Regime::LargeOrder,
        err_estimate: err,
    })
}

fn dispatch(n: u32, rho: f64, order: u32, hankel: bool) -> Result<AsymptoticValue> {
    check(n, rho, order)?;
    match select_regime(n, rho) {
        Regime::LargeOrder => large_order(n, rho, hankel),
        Regime::Transition => transition(n, rho, hankel),
        _ => uniform(n, rho, order, hankel),
    }
}

/// Asymptotic `H_n^{(1)}(nρ)`.
pub fn hankel_uniform(n: u32, rho: f64, order: u32) -> Result<AsymptoticValue> {
    dispatch(n, rho, order, true)
}

/// Asymptotic `J_n(nρ)` (imaginary part is rounding noise).
pub fn bessel_uniform(n: u32, rho: f64, order: u32) -> Result<AsymptoticValue> {
    dispatch(n, rho, order, false)
}

/// The uniform Airy-type form regardless of the regime selector (for studies
/// of the overlap between regimes).
pub fn hankel_uniform_airy_only(n: u32, rho: f64, order: u32) -> Result<AsymptoticValue> {
    check(n, rho, order)?;
    uniform(n, rho, order, true)
}

/// The transition form regardless of the regime selector.
pub fn hankel_transition_only(n: u32, rho: f64) -> Result<AsymptoticValue> {
    check(n, rho, 1)?;
    transition(n, rho, true)
}

/// The large-order form regardless of the regime selector.
pub fn hankel_large_order_only(n: u32, rho: f64) -> Result<AsymptoticValue> {
    check(n, rho, 1)?;
    large_order(n, rho, true)
}
