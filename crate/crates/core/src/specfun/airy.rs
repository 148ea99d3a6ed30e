//! Airy functions of complex argument and the rotated solutions
//! `A₊(w) = Ai(e^{−2iπ/3}w)`, `A₋(w) = Ai(e^{2iπ/3}w)`.
//!
//! Evaluation strategy:
//! * `|z| ≤ 2.5`: Maclaurin series;
//! * `|z| ≥ 9`: asymptotic expansions (exponential form for `|arg z| ≤ 2π/3`,
//!   oscillatory form beyond), truncated at the smallest term;
//! * in between: high-order Taylor stepping of `y'' = z·y` along the ray
//!   through `z`, inward from the asymptotic circle where `Ai` is recessive
//!   and outward from the series disc where it is dominant, so the stepping
//!   is always numerically stable.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Ai(0).
pub const AI0: f64 = 0.355_028_053_887_817_239_260_063_186_004_183_18;
/// −Ai'(0).
pub const MINUS_DAI0: f64 = 0.258_819_403_792_806_798_405_183_560_189_203_0;

/// Default evaluation window for the public bundle.
pub const W_MAX: f64 = 50.0;

const R_SERIES: f64 = 2.5;
const R_ASYMP: f64 = 9.0;
const MAX_STEP: f64 = 0.5;
/// Largest exponent magnitude (natural log) accepted before declaring overflow.
const EXP_BUDGET: f64 = 700.0;

#[inline]
fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
fn cis(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

/// `Ai`, `A₊`, `A₋` and derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryBundle {
    pub a: Complex64,
    pub a_plus: Complex64,
    pub a_minus: Complex64,
    pub da: Complex64,
    pub da_plus: Complex64,
    pub da_minus: Complex64,
}

fn series(z: Complex64) -> (Complex64, Complex64) {
    let z3 = z * z * z;
    let (mut a, mut b) = (c(1.0, 0.0), z);
    let (mut f, mut g) = (a, b);
    let (mut da, mut db) = (z * z * 0.5, c(1.0, 0.0));
    let (mut fd, mut gd) = (da, db);
    for k in 1..200 {
        let kf = k as f64;
        a *= z3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        b *= z3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        if k >= 2 {
            da *= z3 / ((3.0 * kf - 1.0) * (3.0 * kf - 3.0));
            fd += da;
        }
        db *= z3 / ((3.0 * kf) * (3.0 * kf - 2.0));
        f += a;
        g += b;
        gd += db;
        let tiny = 1e-18 * (f.norm() + g.norm() + fd.norm() + gd.norm());
        if a.norm() + b.norm() + da.norm() + db.norm() < tiny {
            break;
        }
    }
    (AI0 * f - MINUS_DAI0 * g, AI0 * fd - MINUS_DAI0 * gd)
}

/// Coefficients `u_k`, `v_k` of the Airy asymptotic expansions.
fn uv_coeffs() -> &'static [(f64, f64)] {
    use std::sync::OnceLock;
    static T: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    T.get_or_init(|| {
        let mut out = vec![(1.0, 1.0)];
        let mut u = 1.0f64;
        for k in 1..90 {
            let kf = k as f64;
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
            out.push((u, v));
        }
        out
    })
}

/// Sum `Σ (−1)^k c_k x^k` with truncation at the smallest term; `x = 1/ξ`.
fn asym_sum(x: Complex64, which_v: bool, stride: usize, offset: usize) -> Complex64 {
    let t = uv_coeffs();
    let mut sum = c(0.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut k = offset;
    let mut sign = 1.0;
    while k < t.len() {
        let coef = if which_v { t[k].1 } else { t[k].0 };
        let term = x.powu(k as u32) * (sign * coef);
        let mag = term.norm();
        if mag > prev {
            break;
        }
        sum += term;
        if mag < 1e-18 * sum.norm() {
            break;
        }
        prev = mag;
        k += stride;
        sign = -sign;
    }
    sum
}

/// Asymptotic `Ai·e^{ξ}`, `Ai'·e^{ξ}` with `ξ = (2/3) z^{3/2}`, valid for
/// large `|z|`, `|arg z| ≤ 2π/3`.
fn asym_exp_scaled(z: Complex64) -> (Complex64, Complex64, Complex64) {
    let xi = z.powf(1.5) * (2.0 / 3.0);
    let z14 = z.powf(0.25);
    let inv = xi.inv();
    // Alternating signs (−1)^k are applied inside asym_sum with stride 1.
    let su = asym_sum(inv, false, 1, 0);
    let sv = asym_sum(inv, true, 1, 0);
    let pre = 1.0 / (2.0 * PI.sqrt());
    (su * pre / z14, -sv * pre * z14, xi)
}

/// Oscillatory asymptotic form, valid for large `|z|`, `|arg(−z)| < π/3`.
fn asym_osc(z: Complex64) -> (Complex64, Complex64) {
    let w = -z;
    let zeta = w.powf(1.5) * (2.0 / 3.0);
    let w14 = w.powf(0.25);
    let inv = zeta.inv();
    let ph = zeta - PI / 4.0;
    let (cs, sn) = (ph.cos(), ph.sin());
    // Even/odd sub-series: (−1)^k c_{2k} ζ^{−2k} and (−1)^k c_{2k+1} ζ^{−2k−1}.
    let ue = asym_sum(inv, false, 2, 0);
    let uo = asym_sum(inv, false, 2, 1);
    let ve = asym_sum(inv, true, 2, 0);
    let vo = asym_sum(inv, true, 2, 1);
    let sp = PI.sqrt();
    let ai = (cs * ue + sn * uo) / (sp * w14);
    let dai = w14 / sp * (sn * ve - cs * vo);
    (ai, dai)
}

/// Propagate `(y, y')` of `y'' = z y` from `z0` to `z1` by Taylor steps.
fn taylor_walk(z0: Complex64, z1: Complex64, y: Complex64, dy: Complex64) -> (Complex64, Complex64) {
    let dist = (z1 - z0).norm();
    let nsteps = (dist / MAX_STEP).ceil().max(1.0) as usize;
    let hstep = (z1 - z0) / nsteps as f64;
    let (mut y, mut dy) = (y, dy);
    let mut zc = z0;
    let mut cf = [c(0.0, 0.0); 96];
    for _ in 0..nsteps {
        // y(zc + t) = Σ c_k t^k with c_{k+2} = (zc c_k + c_{k-1}) / ((k+1)(k+2)).
        cf[0] = y;
        cf[1] = dy;
        cf[2] = zc * y * 0.5;
        let mut sy = cf[0] + cf[1] * hstep + cf[2] * hstep * hstep;
        let mut sdy = cf[1] + cf[2] * hstep * 2.0;
        let mut hp = hstep * hstep; // h^{k-1} for k = 3 below
        let mut quiet = 0;
        for k in 3..cf.len() {
            cf[k] = (zc * cf[k - 2] + cf[k - 3]) / ((k as f64) * (k as f64 - 1.0));
            let dterm = cf[k] * hp * k as f64;
            hp *= hstep;
            let term = cf[k] * hp;
            sy += term;
            sdy += dterm;
            if term.norm() < 1e-18 * sy.norm() && dterm.norm() < 1e-18 * sdy.norm() {
                quiet += 1;
                if quiet >= 3 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        y = sy;
        dy = sdy;
        zc += hstep;
    }
    (y, dy)
}

/// `(Ai(z), Ai'(z))` without any window check; may overflow for huge growing arguments.
fn ai_raw(z: Complex64) -> (Complex64, Complex64) {
    let r = z.norm();
    if r <= R_SERIES {
        return series(z);
    }
    let arg = z.arg().abs();
    if r >= R_ASYMP {
        if arg <= 2.0 * PI / 3.0 {
            let (a, d, xi) = asym_exp_scaled(z);
            let f = (-xi).exp();
            return (a * f, d * f);
        }
        return asym_osc(z);
    }
    let dir = z / r;
    if arg < PI / 3.0 {
        // Recessive sector: integrate inward from the asymptotic circle.
        let zs = dir * R_ASYMP;
        let (a, d, xi) = asym_exp_scaled(zs);
        let f = (-xi).exp();
        taylor_walk(zs, z, a * f, d * f)
    } else {
        let zs = dir * R_SERIES;
        let (a, d) = series(zs);
        taylor_walk(zs, z, a, d)
    }
}

/// Exponentially scaled Airy function: returns `(Ai(z)e^{ξ}, Ai'(z)e^{ξ}, ξ)`
/// with `ξ = (2/3) z^{3/2}` (principal branch). Never overflows for
/// `|arg z| ≤ 2π/3`; elsewhere the unscaled value is moderate.
pub fn ai_scaled(z: Complex64) -> (Complex64, Complex64, Complex64) {
    let r = z.norm();
    if r >= R_ASYMP && z.arg().abs() <= 2.0 * PI / 3.0 {
        return asym_exp_scaled(z);
    }
    let xi = if r == 0.0 { c(0.0, 0.0) } else { z.powf(1.5) * (2.0 / 3.0) };
    let (a, d) = ai_raw(z);
    let f = xi.exp();
    (a * f, d * f, xi)
}

fn budget_check(z: Complex64) -> Result<()> {
    if z.norm() == 0.0 {
        return Ok(());
    }
    let xi = z.powf(1.5) * (2.0 / 3.0);
    if -xi.re > EXP_BUDGET {
        return Err(Error::Overflow(format!(
            "Ai({z}) grows like e^{}, beyond the exponent budget",
            -xi.re
        )));
    }
    Ok(())
}

/// `(Ai(z), Ai'(z))` for complex `z` with an overflow check.
pub fn airy_ai(z: Complex64) -> Result<(Complex64, Complex64)> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    budget_check(z)?;
    Ok(ai_raw(z))
}

/// `Ai`, `A₊`, `A₋` and their derivatives at `w`, for `|w| ≤ W_MAX`.
pub fn airy_all(w: Complex64) -> Result<AiryBundle> {
    if w.norm() > W_MAX {
        return Err(Error::Range(format!("|w| = {} exceeds the Airy window {W_MAX}", w.norm())));
    }
    let em = cis(-2.0 * PI / 3.0);
    let ep = cis(2.0 * PI / 3.0);
    let (a, da) = airy_ai(w)?;
    let (ap, dap) = airy_ai(em * w)?;
    let (am, dam) = airy_ai(ep * w)?;
    Ok(AiryBundle { a, a_plus: ap, a_minus: am, da, da_plus: em * dap, da_minus: ep * dam })
}

/// Exact value of the Wronskian `A'A₊ − A₊'A`.
pub fn wronskian_a_aplus() -> Complex64 {
    -cis(PI / 6.0) / (2.0 * PI)
}

/// `A₋(w)` and `A₋'(w)` multiplied by `e^{η}`, where `η` is returned as well;
/// used by the large-order expansions whose Airy arguments leave the window.
pub fn a_minus_scaled(w: Complex64) -> (Complex64, Complex64, Complex64) {
    let ep = cis(2.0 * PI / 3.0);
    let (a, d, xi) = ai_scaled(ep * w);
    (a, d * ep, xi)
}

/// `Ai(w)` and `Ai'(w)` multiplied by `e^{η}`, with `η` returned.
pub fn a_scaled(w: Complex64) -> (Complex64, Complex64, Complex64) {
    ai_scaled(w)
}

/// Airy quotient `Φ₊(w) = A₊'(w)/A₊(w)` for real `w`.
pub fn phi_plus(w: f64) -> Result<Complex64> {
    if !w.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {w}")));
    }
    let em = cis(-2.0 * PI / 3.0);
    let (a, d, _) = ai_scaled(em * c(w, 0.0));
    Ok(em * d / a)
}
