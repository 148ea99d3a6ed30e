//! Critical points and critical values of the one-dimensional phase
//! `y ↦ yα̃ + φ(x, y, 0, s)` near glancing, and the eikonal system.

use super::phi_tilde;
use crate::error::{Error, Result};
use crate::numdiff::{default_step, deriv1};
use crate::specfun::zeta_tilde;
use std::f64::consts::FRAC_PI_2;

/// `φ(x, y, z, s) = √((1+x)² − 2s(1+x) sin y + s² + z²)`: the source distance
/// in normal coordinates `x = r − 1`, `y = π/2 − θ`.
pub fn phi_xy(x: f64, y: f64, z: f64, s: f64) -> f64 {
    phi_tilde(1.0 + x, FRAC_PI_2 - y, z, s)
}

fn check_window(x: f64, alpha_t: f64, s: f64) -> Result<(f64, f64)> {
    let rad = 1.0 + x;
    if !(alpha_t > 0.0) || !(x >= 0.0) || !(s >= rad) || !(rad >= alpha_t) {
        return Err(Error::Domain(format!(
            "need s >= 1+x >= alpha > 0, got s={s}, x={x}, alpha={alpha_t}"
        )));
    }
    let a = (s * s - alpha_t * alpha_t).sqrt();
    let b = (rad * rad - alpha_t * alpha_t).max(0.0).sqrt();
    Ok((a, b))
}

/// The two critical points `y₊ ≥ y₋` of `y ↦ yα̃ + φ(x, y, 0, s)`:
/// `s(1+x) sin y± = α̃² ± √(s²−α̃²)·√((1+x)²−α̃²)`.
pub fn critical_points_ypm(x: f64, alpha_t: f64, s: f64) -> Result<(f64, f64)> {
    let (a, b) = check_window(x, alpha_t, s)?;
    let den = s * (1.0 + x);
    let a2 = alpha_t * alpha_t;
    let yp = ((a2 + a * b) / den).min(1.0).asin();
    let ym = ((a2 - a * b) / den).asin();
    Ok((yp, ym))
}

/// Critical values `φ(x, y±, 0, s) = √(s²−α̃²) ∓ √((1+x)²−α̃²)`.
pub fn critical_values_ypm(x: f64, alpha_t: f64, s: f64) -> Result<(f64, f64)> {
    let (a, b) = check_window(x, alpha_t, s)?;
    Ok((a - b, a + b))
}

/// `Γ₀(α̃, s) = ½((y₊+y₋)α̃ + φ(0,y₊,0,s) + φ(0,y₋,0,s))`, the mean critical
/// value at `x = 0`.
///
/// For `α̃ ≤ 1` the critical points are real. For `1 < α̃ < s` they form a
/// complex-conjugate pair; their sum is `2·Re arcsin((α̃² + i√(s²−α̃²)√(α̃²−1))/s)`,
/// which continues `Γ₀` analytically across `α̃ = 1`.
pub fn gamma0(alpha_t: f64, s: f64) -> Result<f64> {
    if !(s > 1.0) || !(alpha_t > 0.0) || !(alpha_t < s) {
        return Err(Error::Domain(format!("gamma0 needs 0 < alpha < s, s > 1; got {alpha_t}, {s}")));
    }
    let a = (s * s - alpha_t * alpha_t).sqrt();
    let sum = if alpha_t <= 1.0 {
        let (yp, ym) = critical_points_ypm(0.0, alpha_t, s)?;
        yp + ym
    } else {
        let u = alpha_t * alpha_t / s;
        let v = a * (alpha_t * alpha_t - 1.0).sqrt() / s;
        let w = 0.5 * ((1.0 + u).hypot(v) - (1.0 - u).hypot(v));
        2.0 * w.clamp(-1.0, 1.0).asin()
    };
    Ok(0.5 * sum * alpha_t + a)
}

/// `Γ̃(α̃, r) = −(y_Q + π/2)α̃ + Γ₀(α̃, r)`: the critical value seen from the
/// observation point at radius `r` and normal angle `y_Q`.
pub fn gamma_tilde(alpha_t: f64, r: f64, y_q: f64) -> Result<f64> {
    Ok(-(y_q + FRAC_PI_2) * alpha_t + gamma0(alpha_t, r)?)
}

/// Residuals of the eikonal system for the phases `ι = yα + zγ`,
/// `ζ = α^{2/3} ζ̃((1+x)√(1−γ²)/α)`:
///
/// * `res1 = |∇ι|² − ζ|∇ζ|² − 1`,
/// * `res2 = ⟨∇ι, ∇ζ⟩`,
///
/// with the metric `dx² + (1+x)²dy² + dz²`. All partial derivatives are
/// Richardson-extrapolated central differences.
pub fn eikonal_residual(x: f64, y: f64, z: f64, alpha: f64, gamma: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0) || !(gamma * gamma < 1.0) {
        return Err(Error::Domain(format!("need alpha > 0, gamma^2 < 1; got {alpha}, {gamma}")));
    }
    let iota = |_x: f64, y: f64, z: f64| y * alpha + z * gamma;
    let zeta = |x: f64, _y: f64, _z: f64| -> f64 {
        let rho = (1.0 + x) * (1.0 - gamma * gamma).sqrt() / alpha;
        alpha.powf(2.0 / 3.0) * zeta_tilde(rho).unwrap_or(f64::NAN)
    };
    let grad = |f: &dyn Fn(f64, f64, f64) -> f64| {
        [
            deriv1(|t| f(t, y, z), x, default_step(x)),
            deriv1(|t| f(x, t, z), y, default_step(y)),
            deriv1(|t| f(x, y, t), z, default_step(z)),
        ]
    };
    let gi = grad(&iota);
    let gz = grad(&zeta);
    let zv = zeta(x, y, z);
    if !zv.is_finite() || gz.iter().any(|v| !v.is_finite()) {
        return Err(Error::Range("zeta_tilde argument outside its window".into()));
    }
    let m = 1.0 / ((1.0 + x) * (1.0 + x));
    let dot = |a: &[f64; 3], b: &[f64; 3]| a[0] * b[0] + m * a[1] * b[1] + a[2] * b[2];
    let res1 = dot(&gi, &gi) - zv * dot(&gz, &gz) - 1.0;
    let res2 = dot(&gi, &gz);
    Ok((res1, res2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glancing_double_root() {
        let (p, m) = critical_points_ypm(0.3, 1.3, 2.0).unwrap();
        assert!((p - m).abs() < 1e-7);
        assert!((p - (1.3f64 / 2.0).asin()).abs() < 1e-7);
        let (p, m) = critical_points_ypm(0.0, 1.0, 2.0).unwrap();
        assert!((p - std::f64::consts::FRAC_PI_6).abs() < 1e-15);
        assert!((m - std::f64::consts::FRAC_PI_6).abs() < 1e-15);
        assert!(critical_points_ypm(0.0, 1.2, 2.0).is_err());
    }

    #[test]
    fn gamma0_at_glancing() {
        let s = std::f64::consts::SQRT_2;
        let g = gamma0(1.0, s).unwrap();
        assert!((g - 1.0 - std::f64::consts::FRAC_PI_4).abs() < 1e-14);
    }
}
