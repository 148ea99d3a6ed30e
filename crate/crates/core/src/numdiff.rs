//! Central finite differences with one Richardson extrapolation step.
//!
//! Used wherever a quantity is only available implicitly (critical values,
//! phase functions defined through root-finding) and by the test oracles.

/// Default relative step for first derivatives: `1e−5·(1+|x|)`.
pub fn default_step(x: f64) -> f64 {
    1e-5 * (1.0 + x.abs())
}

/// `f'(x)` from central differences at steps `h` and `h/2`, Richardson-combined.
/// Truncation error `O(h⁴)`.
pub fn deriv1<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    let (d1, d2) = (d(h), d(0.5 * h));
    (4.0 * d2 - d1) / 3.0
}

/// `f''(x)` from second central differences at `h` and `h/2`, Richardson-combined.
pub fn deriv2<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let f0 = f(x);
    let d = |h: f64| (f(x + h) - 2.0 * f0 + f(x - h)) / (h * h);
    let (d1, d2) = (d(h), d(0.5 * h));
    (4.0 * d2 - d1) / 3.0
}

/// Mixed partial `∂²f/∂x∂y` from the four-point stencil, Richardson-combined.
pub fn deriv_mixed<F: Fn(f64, f64) -> f64>(f: F, x: f64, y: f64, hx: f64, hy: f64) -> f64 {
    let d = |a: f64, b: f64| {
        (f(x + a, y + b) - f(x + a, y - b) - f(x - a, y + b) + f(x - a, y - b)) / (4.0 * a * b)
    };
    let (d1, d2) = (d(hx, hy), d(0.5 * hx, 0.5 * hy));
    (4.0 * d2 - d1) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_trig() {
        let x = 0.7;
        assert!((deriv1(f64::sin, x, default_step(x)) - x.cos()).abs() < 1e-10);
        assert!((deriv2(f64::sin, x, 1e-3) + x.sin()).abs() < 1e-9);
        let m = deriv_mixed(|a, b| (a * b).sin(), 0.3, 0.5, 1e-3, 1e-3);
        let exact = (0.15f64).cos() - 0.15 * (0.15f64).sin();
        assert!((m - exact).abs() < 1e-9);
    }
}
