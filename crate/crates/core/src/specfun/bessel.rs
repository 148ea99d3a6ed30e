//! Integer-order cylinder functions of real positive argument.
//!
//! * `J_n`: Miller backward recurrence normalised by `J₀ + 2ΣJ_{2k} = 1`,
//!   with exponent tracking so orders far beyond the argument underflow
//!   gracefully into [`Scaled`] values instead of to zero.
//! * `Y₀, Y₁`: Neumann series in the `J_k` for `x ≤ 25`, Hankel asymptotic
//!   expansion beyond; higher orders by (stable) forward recurrence.
//! * `I_n`: Miller recurrence normalised by `e^x = I₀ + 2ΣI_k`.
//! * `K₀, K₁`: trapezoidal rule on `∫₀^∞ e^{−x cosh t} cosh(νt) dt`
//!   (exponentially convergent), then forward recurrence.

use super::scaled::{Scaled, ScaledC};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;

/// Largest order accepted by the public evaluators.
pub const N_MAX: u32 = 10_000;
/// Largest argument accepted by the public evaluators.
pub const X_MAX: f64 = 1.0e5;

const RESCALE_AT: f64 = 1.0e150;
const RESCALE_BITS: i32 = 498; // 2^498 ≈ 1e150

fn check(n: u32, x: f64) -> Result<()> {
    if !(x > 0.0 && x <= X_MAX) {
        return Err(Error::Range(format!("argument x = {x} outside (0, {X_MAX}]")));
    }
    if n > N_MAX {
        return Err(Error::Range(format!("order n = {n} exceeds {N_MAX}")));
    }
    Ok(())
}

fn miller_start(nmax: usize, x: f64) -> usize {
    let base = (nmax as f64).max(x);
    let m = (base + 20.0 + 10.0 * x.max(1.0).cbrt()).ceil() as usize;
    m + (m & 1)
}

/// Run a backward three-term recurrence `f_{k-1} = (2k/x) f_k + sign·f_{k+1}`
/// from `m` down to 0, returning scaled (unnormalised) values.
fn backward(m: usize, x: f64, sign: f64) -> Vec<Scaled> {
    let mut out = vec![Scaled::ZERO; m + 1];
    let (mut hi, mut cur) = (0.0f64, 1.0e-280f64);
    let mut e = 0i32;
    out[m] = Scaled::from_parts(cur, e);
    for k in (1..=m).rev() {
        let next = (2.0 * k as f64 / x) * cur + sign * hi;
        hi = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            cur *= 2f64.powi(-RESCALE_BITS);
            hi *= 2f64.powi(-RESCALE_BITS);
            e += RESCALE_BITS;
        }
        out[k - 1] = Scaled::from_parts(cur, e);
    }
    out
}

/// `J_0 … J_nmax` at `x` (at least `nmax + 1` entries, possibly more).
pub fn j_seq(nmax: usize, x: f64) -> Vec<Scaled> {
    let m = miller_start(nmax, x);
    let f = backward(m, x, -1.0);
    let mut s = f[0];
    for k in (2..=m).step_by(2) {
        s = s.add(f[k].scale(2.0));
    }
    f.into_iter().map(|v| v.div(s)).collect()
}

/// Hankel large-argument expansion: returns `(J_ν, Y_ν)` for ν ∈ {0, 1}.
fn hankel_asym(nu: u32, x: f64) -> (f64, f64) {
    let mu = 4.0 * (nu * nu) as f64;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0f64;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        term *= (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * x);
        if term.abs() > prev || term == 0.0 {
            break;
        }
        prev = term.abs();
        // a_k/x^k contributes to P (k even) or Q (k odd) with sign (−1)^{⌊k/2⌋}.
        let sgn = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sgn * term;
        } else {
            q += sgn * term;
        }
        if term.abs() < 1e-18 {
            break;
        }
    }
    let w = x - nu as f64 * FRAC_PI_2 - FRAC_PI_4;
    let amp = (2.0 / (PI * x)).sqrt();
    let (s, c) = w.sin_cos();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

fn y01(x: f64, j: &[Scaled]) -> (f64, f64) {
    if x > 25.0 {
        return (hankel_asym(0, x).1, hankel_asym(1, x).1);
    }
    let jv = |k: usize| j.get(k).map_or(0.0, |v| v.to_f64());
    let l = (x / 2.0).ln() + EULER_GAMMA;
    let (mut s0, mut s1) = (0.0, 0.0);
    let mut k = 1usize;
    let mut sign = -1.0;
    while 2 * k + 1 < j.len() {
        let kf = k as f64;
        s0 += sign * jv(2 * k) / kf;
        s1 += sign * (2.0 * kf + 1.0) / (kf * (kf + 1.0)) * jv(2 * k + 1);
        sign = -sign;
        k += 1;
    }
    let y0 = (2.0 / PI) * (l * jv(0) - 2.0 * s0);
    let y1 = (2.0 / PI) * (-jv(0) / x + (l - 1.0) * jv(1) - s1);
    (y0, y1)
}

/// `Y_0 … Y_nmax` at `x` by forward recurrence from `Y₀, Y₁`.
fn y_seq_from(nmax: usize, x: f64, j: &[Scaled]) -> Vec<Scaled> {
    let (y0, y1) = y01(x, j);
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(Scaled::new(y0));
    if nmax == 0 {
        return out;
    }
    out.push(Scaled::new(y1));
    let (mut a, mut b) = (y0, y1);
    let mut e = 0i32;
    for k in 1..nmax {
        let c = (2.0 * k as f64 / x) * b - a;
        a = b;
        b = c;
        if b.abs() > RESCALE_AT {
            a *= 2f64.powi(-RESCALE_BITS);
            b *= 2f64.powi(-RESCALE_BITS);
            e += RESCALE_BITS;
        }
        out.push(Scaled::from_parts(b, e));
    }
    out
}

/// Orders `0..=nmax` of `J_n(x)` and `Y_n(x)` in scaled form.
#[derive(Debug, Clone)]
pub struct CylSeq {
    pub x: f64,
    pub j: Vec<Scaled>,
    pub y: Vec<Scaled>,
}

impl CylSeq {
    pub fn nmax(&self) -> usize {
        self.y.len() - 1
    }

    /// `H_n^{(1)}(x) = J_n + iY_n`.
    pub fn h(&self, n: usize) -> ScaledC {
        ScaledC::from_re_im(self.j[n], self.y[n])
    }

    /// `J_n'(x) = J_{n−1} − (n/x) J_n` (with `J_{−1} = −J_1`).
    pub fn dj(&self, n: usize) -> Scaled {
        let prev = if n == 0 { self.j[1].scale(-1.0) } else { self.j[n - 1] };
        prev.sub(self.j[n].scale(n as f64 / self.x))
    }

    /// `Y_n'(x) = Y_{n−1} − (n/x) Y_n`.
    pub fn dy(&self, n: usize) -> Scaled {
        let prev = if n == 0 { self.y[1].scale(-1.0) } else { self.y[n - 1] };
        prev.sub(self.y[n].scale(n as f64 / self.x))
    }

    /// `H_n'(x)`.
    pub fn dh(&self, n: usize) -> ScaledC {
        ScaledC::from_re_im(self.dj(n), self.dy(n))
    }
}

/// `J_n(x), Y_n(x)` for `n = 0..=nmax` (one extra order is kept for derivatives).
pub fn cyl_seq(nmax: usize, x: f64) -> Result<CylSeq> {
    check(nmax.min(u32::MAX as usize) as u32, x)?;
    let mut j = j_seq(nmax + 1, x);
    let y = y_seq_from(nmax + 1, x, &j);
    j.truncate(nmax + 2);
    Ok(CylSeq { x, j, y })
}

/// Bessel function of the first kind `J_n(x)` (0 if it underflows).
pub fn bessel_j(n: u32, x: f64) -> Result<f64> {
    check(n, x)?;
    Ok(j_seq(n as usize, x)[n as usize].to_f64())
}

/// Bessel function of the second kind `Y_n(x)`.
pub fn bessel_y(n: u32, x: f64) -> Result<f64> {
    let s = cyl_seq(n as usize, x)?;
    let v = s.y[n as usize].to_f64();
    if !v.is_finite() {
        return Err(Error::Overflow(format!("Y_{n}({x}) exceeds the f64 range")));
    }
    Ok(v)
}

/// Hankel function `H_n^{(1)}(x) = J_n(x) + iY_n(x)`.
pub fn hankel_h1(n: u32, x: f64) -> Result<Complex64> {
    let s = cyl_seq(n as usize, x)?;
    let v = s.h(n as usize).to_c64();
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::Overflow(format!("H_{n}({x}) exceeds the f64 range")));
    }
    Ok(v)
}

/// `H_n^{(1)}(x)` for signed `n`, via `H_{−n} = (−1)^n H_n`.
pub fn hankel_h1_signed(n: i64, x: f64) -> Result<Complex64> {
    let a = n.unsigned_abs();
    if a > N_MAX as u64 {
        return Err(Error::Range(format!("order {n} too large")));
    }
    let h = hankel_h1(a as u32, x)?;
    Ok(if n < 0 && a % 2 == 1 { -h } else { h })
}

/// `e^{x}` as a scaled number.
pub fn exp_scaled(x: f64) -> Scaled {
    let t = x / std::f64::consts::LN_2;
    let e = t.floor();
    Scaled::from_parts(2f64.powf(t - e), e as i32)
}

/// Modified Bessel functions `I_n(x), K_n(x)`, `n = 0..=nmax`, scaled form.
#[derive(Debug, Clone)]
pub struct ModSeq {
    pub x: f64,
    pub i: Vec<Scaled>,
    pub k: Vec<Scaled>,
}

fn k01_scaled(x: f64) -> (f64, f64) {
    // e^x K_ν(x) = ∫₀^∞ exp(−x(cosh t − 1)) cosh(νt) dt
    let h = 0.25f64.min(0.5 / x.sqrt());
    let (mut s0, mut s1) = (0.5, 0.5);
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let g = (-x * (t.cosh() - 1.0)).exp();
        let (a, b) = (g, g * t.cosh());
        s0 += a;
        s1 += b;
        if b < 1e-18 * s1 {
            break;
        }
        k += 1;
    }
    (s0 * h, s1 * h)
}

/// `I_n(x)` and `K_n(x)` for `n = 0..=nmax` (one extra order kept).
pub fn mod_seq(nmax: usize, x: f64) -> Result<ModSeq> {
    check(nmax.min(u32::MAX as usize) as u32, x)?;
    let m = miller_start(nmax + 1, x);
    let f = backward(m, x, 1.0);
    let mut s = f[0];
    for v in &f[1..] {
        s = s.add(v.scale(2.0));
    }
    let ex = exp_scaled(x);
    let i: Vec<Scaled> = f[..nmax + 2].iter().map(|v| v.div(s).mul(ex)).collect();
    let emx = exp_scaled(-x);
    let (k0, k1) = k01_scaled(x);
    let mut k = vec![Scaled::new(k0).mul(emx), Scaled::new(k1).mul(emx)];
    let (mut a, mut b) = (k0, k1);
    let mut e = 0i32;
    for n in 1..=nmax {
        let c = a + (2.0 * n as f64 / x) * b;
        a = b;
        b = c;
        if b.abs() > RESCALE_AT {
            a *= 2f64.powi(-RESCALE_BITS);
            b *= 2f64.powi(-RESCALE_BITS);
            e += RESCALE_BITS;
        }
        k.push(Scaled::from_parts(b, e).mul(emx));
    }
    Ok(ModSeq { x, i, k })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_table() {
        // Reference values (standard tables).
        let cases = [
            (0, 1.0, 0.765_197_686_557_966_6),
            (1, 1.0, 0.440_050_585_744_933_5),
            (5, 10.0, -0.234_061_528_186_793_6),
            (0, 50.0, 0.055_812_327_669_251_815),
        ];
        for (n, x, v) in cases {
            let got = bessel_j(n, x).unwrap();
            assert!((got - v).abs() < 1e-14, "J_{n}({x}) = {got}");
        }
        let y = [
            (0, 1.0, 0.088_256_964_215_676_96),
            (1, 1.0, -0.781_212_821_300_288_7),
            (0, 30.0, -0.117_295_731_686_664_03),
        ];
        for (n, x, v) in y {
            let got = bessel_y(n, x).unwrap();
            assert!((got - v).abs() < 1e-14, "Y_{n}({x}) = {got}");
        }
    }

    #[test]
    fn modified_wronskian() {
        // I_n K_{n+1} + I_{n+1} K_n = 1/x
        for &x in &[1e-3, 0.3, 2.0, 17.0, 300.0] {
            let s = mod_seq(60, x).unwrap();
            for n in [0usize, 1, 7, 40] {
                let w = s.i[n].mul(s.k[n + 1]).add(s.i[n + 1].mul(s.k[n]));
                assert!((w.to_f64() * x - 1.0).abs() < 1e-12, "x={x} n={n}");
            }
        }
    }

    #[test]
    fn k0_reference() {
        let s = mod_seq(1, 1.0).unwrap();
        assert!((s.k[0].to_f64() - 0.421_024_438_240_708_3).abs() < 1e-15);
        assert!((s.i[0].to_f64() - 1.266_065_877_752_008_4).abs() < 1e-15);
    }

    #[test]
    fn parity_helper() {
        let a = hankel_h1_signed(-3, 2.0).unwrap();
        let b = hankel_h1(3, 2.0).unwrap();
        assert!((a + b).norm() < 1e-15 * b.norm());
    }
}
