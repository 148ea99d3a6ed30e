use cylwave::oscint::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_4, PI};

fn one(_: f64) -> Complex64 {
    Complex64::new(1.0, 0.0)
}

#[test]
fn full_periods_vanish() {
    let lambda = 37.0;
    let ph = Phase1D::new(|x| x).with_d1(|_| 1.0);
    let r = integrate_osc(one, &ph, lambda, (0.3, 0.3 + 12.0 * 2.0 * PI / lambda), 1e-13).unwrap();
    assert!(r.value.norm() < 1e-12, "{:?}", r);
}

#[test]
fn windowed_fresnel_integral() {
    // ∫ e^{−εx²} e^{iλx²/2} dx = √(π/(ε − iλ/2)) → √(2π/λ) e^{iπ/4} as ε → 0.
    let lambda = 1e3;
    let eps = 1e-4;
    let ph = Phase1D::new(|x| 0.5 * x * x).with_d1(|x| x).with_d2(|_| 1.0);
    let amp = |x: f64| Complex64::new((-eps * x * x).exp(), 0.0);
    let r = integrate_osc(amp, &ph, lambda, (-700.0, 700.0), 1e-10).unwrap();
    let exact = (Complex64::new(PI, 0.0) / Complex64::new(eps, -0.5 * lambda)).sqrt();
    let fresnel = (2.0 * PI / lambda).sqrt() * Complex64::cis(FRAC_PI_4);
    assert!((r.value - exact).norm() / exact.norm() < 1e-6, "{:?} {exact}", r);
    assert!((r.value - fresnel).norm() / fresnel.norm() < 1e-6);
    assert!(r.err_estimate <= 1e-10);
}

/// Composite 64-panel, 48-point Gauss–Legendre reference (no adaptivity).
fn brute_force(f: impl Fn(f64) -> Complex64, a: f64, b: f64) -> Complex64 {
    let n = 48;
    let (mut x, mut w) = (vec![0.0; n], vec![0.0; n]);
    for i in 0..n {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            t -= p1 / dp;
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
        x[i] = t;
    }
    let panels = 64;
    let h = (b - a) / panels as f64;
    let mut s = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let c = a + (p as f64 + 0.5) * h;
        for i in 0..n {
            s += f(c + 0.5 * h * x[i]) * w[i] * 0.5 * h;
        }
    }
    s
}

#[test]
fn agrees_with_brute_force_gauss() {
    let lambda = 50.0;
    let phf = |x: f64| x + 0.3 * x.sin() + 0.05 * x * x;
    let ph = Phase1D::new(phf);
    let amp = |x: f64| Complex64::new(1.0 / (1.0 + x * x), 0.2 * x.cos());
    let r = integrate_osc(amp, &ph, lambda, (-1.0, 4.0), 1e-11).unwrap();
    let bf = brute_force(|x| amp(x) * Complex64::cis(lambda * phf(x)), -1.0, 4.0);
    assert!((r.value - bf).norm() < 1e-11 + r.err_estimate, "{:?} {bf}", r);
}

#[test]
fn linearity_and_conjugation() {
    let lambda = 200.0;
    let ph = Phase1D::new(|x| x * x * 0.5 + 0.1 * x.powi(3));
    let ph_neg = Phase1D::new(|x| -(x * x * 0.5 + 0.1 * x.powi(3)));
    let a1 = |x: f64| Complex64::new((-x * x).exp(), x * (-x * x).exp());
    let a2 = |x: f64| Complex64::new(x.cos() * (-x * x).exp(), 0.0);
    let (c1, c2) = (Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5));
    let iv = (-6.0, 5.0);
    let tol = 1e-13;
    let i1 = integrate_osc(a1, &ph, lambda, iv, tol).unwrap().value;
    let i2 = integrate_osc(a2, &ph, lambda, iv, tol).unwrap().value;
    let i12 = integrate_osc(|x| c1 * a1(x) + c2 * a2(x), &ph, lambda, iv, tol).unwrap().value;
    assert!((i12 - (c1 * i1 + c2 * i2)).norm() < 1e-12);
    let ic = integrate_osc(|x| a1(x).conj(), &ph_neg, lambda, iv, tol).unwrap().value;
    assert!((ic - i1.conj()).norm() < 1e-12);
}

#[test]
fn stationary_phase_quadratic_and_degenerate() {
    let ph = Phase1D::new(|x| 0.5 * x * x);
    let v = stationary_phase_1d(one, &ph, 0.0, 100.0).unwrap();
    let exact = (2.0 * PI / 100.0).sqrt() * Complex64::cis(FRAC_PI_4);
    assert!((v - exact).norm() < 1e-12);
    let cubic = Phase1D::new(|x| x.powi(3));
    assert!(stationary_phase_1d(one, &cubic, 0.0, 100.0).is_err());
}

#[test]
fn stationary_phase_of_the_axial_reduction() {
    // z ↦ zγ + √(1+z²): critical at z = −γ/√(1−γ²) with value √(1−γ²)
    // and second derivative (1−γ²)^{3/2}.
    let g: f64 = 0.6;
    let zc = -g / (1.0 - g * g).sqrt();
    let ph = Phase1D::new(move |z| z * g + (1.0 + z * z).sqrt());
    assert!((ph.value(zc) - (1.0 - g * g).sqrt()).abs() < 1e-14);
    assert!((ph.d2(zc) - (1.0 - g * g).powf(1.5)).abs() < 1e-8);
    let amp = move |z: f64| Complex64::new((-(z - zc).powi(2)).exp(), 0.0);
    let mut prev = None;
    for &lambda in &[1e2, 1e3, 1e4] {
        let sp = stationary_phase_1d(amp, &ph, zc, lambda).unwrap();
        let q = integrate_osc(amp, &ph, lambda, (zc - 9.0, zc + 9.0), 1e-12).unwrap();
        let dev = (sp - q.value).norm() / q.value.norm();
        if lambda == 1e3 {
            assert!(dev < 1e-2, "{dev}");
        }
        if let Some(p) = prev {
            let ratio: f64 = p / dev;
            assert!((6.0..16.0).contains(&ratio), "error ratio {ratio} at {lambda}");
        }
        prev = Some(dev);
    }
}

#[test]
fn stationary_phase_constant_is_stable() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let a: f64 = rng.gen_range(0.5..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let b: f64 = rng.gen_range(-0.3..0.3);
        let c: f64 = rng.gen_range(-0.1..0.1);
        let xc: f64 = rng.gen_range(-1.0..1.0);
        let ph = Phase1D::new(move |x| {
            let d = x - xc;
            0.5 * a * d * d + b * d.powi(3) / 6.0 + c * d.powi(4) / 24.0
        });
        let amp = move |x: f64| Complex64::new((-(x - xc).powi(2)).exp(), 0.0);
        let consts: Vec<f64> = [400.0, 800.0, 1600.0]
            .iter()
            .map(|&l| {
                let sp = stationary_phase_1d(amp, &ph, xc, l).unwrap();
                let q = integrate_osc(amp, &ph, l, (xc - 7.0, xc + 7.0), 1e-13).unwrap();
                l * (sp - q.value).norm() / q.value.norm()
            })
            .collect();
        let spread = consts.iter().cloned().fold(0.0, f64::max) / consts.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(spread < 1.2, "{consts:?}");
    }
}
