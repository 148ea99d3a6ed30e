//! Special-function identities and comparisons against the independent
//! big-integer series oracle in `common`.

mod common;

use common::{j_oracle, j_oracle_f64, rel, y_oracle};
use cylwave::specfun::{
    airy_all, bessel_j, bessel_uniform, cyl_seq, hankel_h1, hankel_uniform, phi_plus, uniform,
    wronskian_a_aplus, zeta_tilde, zeta_tilde_deriv, Regime,
};
use num_complex::Complex64;
use std::f64::consts::PI;

fn real_grid() -> Vec<f64> {
    (0..100).map(|k| -20.0 + 40.0 * (k as f64 + 0.5) / 100.0).collect()
}

#[test]
fn oracle_self_check() {
    // Sanity of the oracle against classical table values.
    assert!(rel(j_oracle_f64(0, 1.0), 0.765_197_686_557_966_6) < 1e-15);
    assert!(rel(y_oracle(0, 1.0), 0.088_256_964_215_676_96) < 1e-15);
    assert!(rel(y_oracle(1, 1.0), -0.781_212_821_300_288_7) < 1e-15);
    assert!(rel(y_oracle(0, 30.0), -0.117_295_731_686_664_03) < 1e-14);
}

#[test]
fn airy_connection_identity() {
    let e = |t: f64| Complex64::from_polar(1.0, t);
    for w in real_grid() {
        let b = airy_all(Complex64::new(w, 0.0)).unwrap();
        let comb = e(PI / 3.0) * b.a_plus + e(-PI / 3.0) * b.a_minus;
        // Relative to the size of the terms: for w > 0 the two rotated
        // solutions are exponentially large and cancel to the small Ai(w).
        let scale = b.a.norm().max(b.a_plus.norm());
        assert!((comb - b.a).norm() < 1e-12 * scale, "w = {w}");
        // A(w) is real and A₋ = conj(A₊) on the real axis.
        assert!(b.a.im.abs() <= 1e-14 * b.a.norm().max(1e-300));
        assert!((b.a_minus - b.a_plus.conj()).norm() < 1e-13 * b.a_plus.norm());
    }
}

#[test]
fn airy_wronskian() {
    let wr = wronskian_a_aplus();
    for w in real_grid() {
        let b = airy_all(Complex64::new(w, 0.0)).unwrap();
        let got = b.da * b.a_plus - b.da_plus * b.a;
        assert!((got - wr).norm() < 1e-12 * wr.norm(), "w = {w}: {got} vs {wr}");
    }
}

#[test]
fn phi_plus_riccati_and_asymptotics() {
    for &w in &[-5.0, -1.0, 0.0, 1.0] {
        let h = 1e-5;
        let d = (phi_plus(w + h).unwrap() - phi_plus(w - h).unwrap()) / (2.0 * h);
        let p = phi_plus(w).unwrap();
        let res = (d - (w - p * p)).norm();
        assert!(res < 1e-7, "w = {w}: residual {res}");
    }
    let p = phi_plus(-10.0).unwrap();
    let lead = Complex64::new(0.0, 10f64.sqrt());
    assert!((p - lead).norm() / lead.norm() < 0.01);
    let b = airy_all(Complex64::new(0.0, 0.0)).unwrap();
    assert!((phi_plus(0.0).unwrap() - b.da_plus / b.a_plus).norm() < 1e-14);
}

#[test]
fn bessel_j_against_series_oracle() {
    let mut worst = 0.0f64;
    for &n in &[0u32, 1, 2, 5, 17, 50, 120, 300, 500] {
        for &x in &[0.5, 1.0, 3.7, 10.0, 42.0, 100.0] {
            let s = cyl_seq(n as usize, x).unwrap();
            let (m, e) = j_oracle(n, x);
            let got = s.j[n as usize];
            // compare mantissas after aligning exponents (values may underflow f64)
            let ratio = got.m / m * 2f64.powi((got.e as i64 - e) as i32);
            let err = (ratio - 1.0).abs();
            worst = worst.max(err);
            assert!(err < 1e-10, "J_{n}({x}): rel err {err:e}");
        }
    }
    println!("worst J relative error {worst:e}");
}

#[test]
fn bessel_y_against_series_oracle() {
    for &n in &[0u32, 1, 2, 5, 17, 40] {
        for &x in &[0.5, 1.0, 3.7, 10.0, 24.0, 30.0] {
            let got = cyl_seq(n as usize, x).unwrap().y[n as usize].to_f64();
            let want = y_oracle(n, x);
            assert!(rel(got, want) < 1e-10, "Y_{n}({x}): {got} vs {want}");
        }
    }
}

#[test]
fn cylinder_wronskian() {
    for &n in &[0usize, 1, 5, 50, 500] {
        for &x in &[0.5, 1.0, 10.0, 100.0] {
            let s = cyl_seq(n, x).unwrap();
            let w = s.j[n].mul(s.dy(n)).sub(s.dj(n).mul(s.y[n])).to_f64();
            let want = 2.0 / (PI * x);
            assert!(rel(w, want) < 1e-10, "n={n} x={x}: {w} vs {want}");
        }
    }
}

#[test]
fn j_is_real_part_of_h() {
    for &(n, x) in &[(0u32, 2.0), (7, 3.0), (30, 45.0)] {
        let h = hankel_h1(n, x).unwrap();
        assert!(rel(h.re, bessel_j(n, x).unwrap()) < 1e-14);
    }
}

#[test]
fn large_order_form_for_tiny_arguments() {
    for &(n, x) in &[(50u32, 1.0), (200, 2.0), (400, 0.5)] {
        let ln_lead = -(0.5) * (2.0 * PI * n as f64).ln()
            + n as f64 * (std::f64::consts::E * x / (2.0 * n as f64)).ln();
        let (m, e) = j_oracle(n, x);
        let ln_exact = m.ln() + e as f64 * std::f64::consts::LN_2;
        let r = (ln_exact - ln_lead).exp_m1().abs();
        // O(x²/n + 1/n) relative
        assert!(r < 2.0 * (x * x / n as f64 + 1.0 / n as f64), "n={n} x={x}: {r}");
    }
}

#[test]
fn zeta_tilde_certification() {
    // ODE residual −ζ (ζ')² + 1/ρ² − 1 with ζ' by central differences.
    let mut rho = 0.2;
    while rho <= 5.0 {
        if (rho - 1.0f64).abs() > 1e-3 {
            // central differences, Richardson-extrapolated once
            let h = 1e-5 * (1.0 + rho);
            let cd = |h: f64| (zeta_tilde(rho + h).unwrap() - zeta_tilde(rho - h).unwrap()) / (2.0 * h);
            let d = (4.0 * cd(h / 2.0) - cd(h)) / 3.0;
            let z = zeta_tilde(rho).unwrap();
            let res = (-z * d * d + 1.0 / (rho * rho) - 1.0).abs();
            assert!(res < 1e-8, "rho = {rho}: {res:e}");
            assert!(rel(zeta_tilde_deriv(rho).unwrap(), d) < 1e-7);
        }
        rho += 0.0137;
    }
    for k in 3..=6 {
        let e = 10f64.powi(-k);
        let slope = -zeta_tilde(1.0 + e).unwrap() / e;
        assert!((slope - 2f64.cbrt()).abs() < 1e-4 + 2.0 * e, "k={k}: {slope}");
    }
    assert_eq!(zeta_tilde(1.0).unwrap(), 0.0);
    // −ζ̃(2) from (2/3)(−ζ̃)^{3/2} = √3 − π/3, frozen at 1.0181048885671160
    assert!((-zeta_tilde(2.0).unwrap() - 1.018_104_888_567_116).abs() < 1e-14);
}

fn h_exact(n: u32, rho: f64) -> Complex64 {
    hankel_h1(n, n as f64 * rho).unwrap()
}

#[test]
fn uniform_hankel_examples() {
    let v = hankel_uniform(100, 1.5, 2).unwrap();
    assert_eq!(v.regime, Regime::UniformAiry);
    assert!((v.value - h_exact(100, 1.5)).norm() / h_exact(100, 1.5).norm() < 1e-3);

    let rho = 1.0 + 100f64.powf(-2.0 / 3.0) * 0.5;
    let v = hankel_uniform(100, rho, 2).unwrap();
    assert_eq!(v.regime, Regime::Transition);
    assert!((v.value - h_exact(100, rho)).norm() / h_exact(100, rho).norm() < 1e-2);

    // n = 200, ρ = 0.05: the large-order leading term is within O(ρ) of the
    // accurate value.
    let acc = bessel_uniform(200, 0.05, 2).unwrap().value.re;
    let lo = uniform::hankel_large_order_only(200, 0.05).unwrap().value.re;
    assert!((lo / acc - 1.0).abs() < 3.0 * 0.05);
    let exact = bessel_j(200, 10.0).unwrap();
    assert!(rel(acc, exact) < 1e-6);
}

#[test]
fn uniform_hankel_accuracy_and_monotone_improvement() {
    let rhos = |n: u32| {
        let d = (n as f64).powf(-2.0 / 3.0);
        vec![0.3, 0.9, 1.0 - d, 1.0 + d, 1.5, 3.0]
    };
    for n in [50u32, 100, 200, 400] {
        for rho in rhos(n) {
            let v = hankel_uniform(n, rho, 2).unwrap();
            let ex = h_exact(n, rho);
            let e = (v.value - ex).norm() / ex.norm();
            assert!(e < 1e-3, "n={n} rho={rho}: {e:e}");
        }
    }
    for &rho in &[0.3, 0.9, 1.5, 3.0] {
        let mut prev = f64::INFINITY;
        for n in [25u32, 50, 100, 200, 400] {
            let ex = h_exact(n, rho);
            // the uniform Airy-type form itself, independent of the regime selector
            let v = uniform::hankel_uniform_airy_only(n, rho, 1).unwrap();
            let e = (v.value - ex).norm() / ex.norm();
            assert!(e < prev, "rho={rho} n={n}: {e:e} !< {prev:e}");
            prev = e;
        }
    }
}
