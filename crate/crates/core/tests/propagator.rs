//! Time-domain kernels, the incoming-wave decomposition, the single-layer
//! representation and the dispersion scanner.

use cylwave::green::{boundary_normal_derivative_modal, radial_weight, resolvent, TruncationPolicy};
use cylwave::oscint::gauss_legendre;
use cylwave::phases::{dist_cyl, make_cutoffs, CylPoint, Smoothness, SourceConfig};
use cylwave::propagator::*;
use cylwave::specfun::hankel_h1;
use num_complex::Complex64;
use std::f64::consts::PI;

fn pt(r: f64, t: f64, z: f64) -> CylPoint {
    CylPoint::new(r, t, z).unwrap()
}

fn src(s: f64) -> SourceConfig {
    SourceConfig::new(s).unwrap()
}

#[test]
fn dirichlet_trace_vanishes() {
    let pol = TruncationPolicy::default();
    let w = FreqWindow::high(1.0 / 16.0).unwrap();
    for &(th, z, t) in &[(0.0, 0.0, 1.0), (1.2, 0.7, 1.5), (3.0, 2.0, 2.5)] {
        let k = wave_kernel(&pt(1.0, th, z), &src(2.0), t, &w, &pol).unwrap();
        assert!(k.value.norm() < 1e-12, "{k:?}");
    }
}

#[test]
fn early_times_follow_the_free_kernel() {
    // The reflected front needs about 35h longer than the direct one here.
    let pol = TruncationPolicy::default();
    let (q, q0) = (pt(3.0, 0.3, 0.5), src(2.0));
    let d = dist_cyl(&q, &q0);
    let w = FreqWindow::high(1.0 / 32.0).unwrap();
    for t in [0.8 * d, d, d + 4.0 * w.h] {
        let k = wave_kernel(&q, &q0, t, &w, &pol).unwrap().value;
        let f = free_wave_kernel(&q, &q0, t, &w).unwrap();
        let peak = free_wave_kernel(&q, &q0, d, &w).unwrap().norm();
        assert!((k - f).norm() < 1e-2 * peak, "t = {t}: {k} vs {f}");
    }
}

#[test]
fn finite_speed_before_the_direct_front() {
    // The band-limited front has tails of width ~h; with the C⁴ profile the
    // kernel drops below 1e-4 of its peak 80h ahead of the front (not 5h).
    let pol = TruncationPolicy::default();
    let (q, q0) = (pt(3.5, 1.2, 1.0), src(2.0));
    let d = dist_cyl(&q, &q0);
    let w = FreqWindow::high(1.0 / 64.0).unwrap();
    let peak = wave_kernel(&q, &q0, d, &w, &pol).unwrap().value.norm();
    for k in [80.0, 120.0, 160.0] {
        let v = wave_kernel(&q, &q0, d - k * w.h, &w, &pol).unwrap().value.norm();
        assert!(v < 1e-4 * peak, "{k}h ahead: {:e}", v / peak);
    }
}

#[test]
fn far_from_the_signal_window_the_kernel_is_small() {
    let pol = TruncationPolicy::default();
    let (q, q0) = (pt(3.0, 0.3, 0.5), src(2.0));
    let d = dist_cyl(&q, &q0);
    let w = FreqWindow::high(1.0 / 64.0).unwrap();
    let peak = wave_kernel(&q, &q0, d, &w, &pol).unwrap().value.norm();
    let v = wave_kernel(&q, &q0, d - 60.0 * w.h, &w, &pol).unwrap().value.norm();
    assert!(v < 1e-3 * peak, "{:e}", v / peak);
}

#[test]
fn cosine_kernel_is_real() {
    let pol = TruncationPolicy::default();
    let w = FreqWindow::high(1.0 / 16.0).unwrap();
    for &(r, th, z, t) in &[(3.0, 0.3, 0.5, 1.3), (1.5, 2.5, 0.2, 3.0), (2.2, 0.0, 1.0, 0.4)] {
        let v = cosine_kernel(&pt(r, th, z), &src(2.0), t, &w, &pol).unwrap();
        assert!(v.im.abs() < 1e-10 * v.norm().max(1.0), "{v}");
    }
}

/// `∫ e^{itτ} χ(hτ) (τ/π) Im 𝓡 dτ` by Gauss–Legendre on the polynomial
/// pieces of the C⁴ profile, with the resolvent summed mode by mode.
fn direct_kernel(q: &CylPoint, q0: &SourceConfig, t: f64, w: &FreqWindow) -> Complex64 {
    let pol = TruncationPolicy::default();
    let (nodes, weights) = gauss_legendre(24);
    let edges = [0.5 / w.h, 0.75 / w.h, 1.5 / w.h, 2.0 / w.h];
    let mut acc = Complex64::new(0.0, 0.0);
    for e in edges.windows(2) {
        let (a, b) = (e[0], e[1]);
        for (x, wt) in nodes.iter().zip(&weights) {
            let tau = a + 0.5 * (b - a) * (x + 1.0);
            let im = resolvent(q, q0, tau, &pol).unwrap().value.im;
            acc += Complex64::cis(t * tau) * (w.profile(tau) * tau / PI * im * 0.5 * (b - a) * wt);
        }
    }
    acc
}

#[test]
fn factorized_kernel_matches_direct_frequency_integral() {
    let pol = TruncationPolicy::default();
    let w = FreqWindow::high(0.25).unwrap();
    let q0 = src(2.0);
    for &(r, th, z, t) in &[(3.0, 0.3, 0.5, 1.4), (2.5, 2.8, 0.3, 4.0)] {
        let q = pt(r, th, z);
        let a = wave_kernel(&q, &q0, t, &w, &pol).unwrap().value;
        let b = direct_kernel(&q, &q0, t, &w);
        assert!((a - b).norm() < 1e-6 * b.norm().max(1.0), "{a} vs {b}");
    }
}

#[test]
fn free_kernel_peak_scaling() {
    // Peak height ∝ h⁻²/d once the front is well separated from its mirror.
    let mut vals = Vec::new();
    for h in [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0] {
        let w = FreqWindow::high(h).unwrap();
        for d in [40.0 * h, 80.0 * h, 160.0 * h] {
            let p = free_wave_kernel_at_distance(d, d, &w).unwrap().norm();
            vals.push(p * d * h * h);
        }
    }
    let (lo, hi) = vals.iter().fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(*v), b.max(*v)));
    assert!(hi / lo - 1.0 < 1e-3, "{vals:?}");
}

#[test]
fn free_kernel_tails() {
    // Below 1e-6 of the peak at 250h from the front (C⁴ profile).
    for h in [1.0 / 16.0, 1.0 / 32.0] {
        let w = FreqWindow::high(h).unwrap();
        let d = 20.0;
        let peak = free_wave_kernel_at_distance(d, d, &w).unwrap().norm();
        for t in [d - 250.0 * h, d + 250.0 * h] {
            let v = free_wave_kernel_at_distance(d, t, &w).unwrap().norm();
            assert!(v < 1e-6 * peak, "h = {h}, t = {t}: {:e}", v / peak);
        }
    }
    assert!(free_wave_kernel(&pt(2.0, 0.0, 0.0), &src(2.0), 1.0, &FreqWindow::high(0.1).unwrap()).is_err());
}

#[test]
fn incoming_pieces_and_remainder_rebuild_the_free_wave() {
    let cut = make_cutoffs(0.05, Smoothness::C4).unwrap();
    let q0 = src(2.0);
    let tau = 40.0;
    for &(r, th, z) in &[(3.0, 1.5, 0.0), (3.0, 1.0, 1.5), (2.5, 0.4, 3.0)] {
        let q = pt(r, th, z);
        let want = incoming_wave(&q, &q0, tau).unwrap();
        let mut sum = incoming_evanescent_remainder(&q, &q0, tau).unwrap();
        for j in 0..=14 {
            sum += freq_localized_incoming(&q, &q0, tau, j, &cut).unwrap();
        }
        assert!((sum - want).norm() < 1e-6 * want.norm(), "{sum} vs {want}");
    }
}

#[test]
fn incoming_pieces_concentrate_on_the_geometric_dyad() {
    // At τ = 40 the angular localization is only O((τρ₀)^{-1/2}): pieces
    // off the geometric dyad are a few percent, and decay for high j.
    let cut = make_cutoffs(0.05, Smoothness::C4).unwrap();
    let q0 = src(2.0);
    for &(r, th, z) in &[(3.0, 1.5, 0.0), (3.0, 1.0, 1.5)] {
        let q = pt(r, th, z);
        let win = incoming_wave(&q, &q0, 40.0).unwrap().norm();
        let m: Vec<f64> =
            (0..8).map(|j| freq_localized_incoming(&q, &q0, 40.0, j, &cut).unwrap().norm() / win).collect();
        assert!(m[0] > 0.9, "{m:?}");
        assert!(m[1..].iter().all(|v| *v < 5e-2), "{m:?}");
        assert!(m[7] < m[3] && m[7] < 1e-2, "{m:?}");
    }
}

#[test]
fn boundary_data_normalization() {
    // The physical normal derivative on r = 1 is w(1, s)·∂G_n = H_n(sκ)/(4π² H_n(κ)).
    for &(n, s, k) in &[(0u32, 2.0, 3.0), (5, 1.5, 10.0), (12, 3.0, 7.5)] {
        let got = boundary_normal_derivative_modal(n, s, k).unwrap() * radial_weight(1.0, s);
        let want = hankel_h1(n, s * k).unwrap() / hankel_h1(n, k).unwrap() / (4.0 * PI * PI);
        assert!((got - want).norm() < 1e-12 * want.norm(), "{got} vs {want}");
    }
}

#[test]
fn single_layer_reproduces_the_exact_kernel() {
    let pol = TruncationPolicy::default();
    let w = FreqWindow::high(1.0 / 20.0).unwrap();
    let (q, q0) = (pt(3.0, 0.3, 0.5), src(2.0));
    let t = first_boundary_arrival(&q, &q0);
    let exact = wave_kernel(&q, &q0, t, &w, &pol).unwrap().value;
    let free = free_wave_kernel(&q, &q0, t, &w).unwrap();
    let layer = kirchhoff_single_layer(&q, &q0, t, &w, &pol).unwrap().value;
    let err = (free - layer - exact).norm() / exact.norm();
    assert!(err < 0.05, "relative error {err:e}");
}

#[test]
fn single_layer_is_retarded() {
    // Source far from the boundary and observer next to it: the boundary
    // is reached some 360h after the direct front passes.
    let pol = TruncationPolicy::default();
    let w = FreqWindow::high(1.0 / 20.0).unwrap();
    let (q, q0) = (pt(11.0, 0.0, 0.0), src(10.0));
    let d = dist_cyl(&q, &q0);
    assert!(first_boundary_arrival(&q, &q0) - d > 360.0 * w.h - 1e-9);
    let layer = kirchhoff_single_layer(&q, &q0, d, &w, &pol).unwrap().value.norm();
    let free = free_wave_kernel(&q, &q0, d, &w).unwrap().norm();
    assert!(layer < 1e-6 * free, "{:e}", layer / free);
}

#[test]
fn first_arrival_geometry() {
    // Same ray: 1 + 3 via the nearest boundary point.
    assert!((first_boundary_arrival(&pt(4.0, 0.0, 0.0), &src(2.0)) - 4.0).abs() < 1e-12);
    // Axial offset unfolds into a straight line.
    let a = first_boundary_arrival(&pt(4.0, 0.0, 3.0), &src(2.0));
    assert!((a - 5.0).abs() < 1e-12);
}

fn small_search() -> SearchPolicy {
    SearchPolicy { n_r: 6, n_theta: 4, n_z: 4, top_k: 2, refine_evals: 12, ..SearchPolicy::default() }
}

#[test]
fn free_scan_matches_the_dispersive_envelope() {
    let pol = TruncationPolicy::default();
    let ts: Vec<f64> = (0..=16).map(|k| 0.02 * 100f64.powf(k as f64 / 16.0)).collect();
    let setup = ScanSetup { kind: WindowKind::High, model: KernelModel::Free, s: 2.0, smoothness: Smoothness::C4 };
    let rep = dispersion_scan(&[1.0 / 8.0, 1.0 / 16.0], &ts, &setup, &SearchPolicy::default(), &pol).unwrap();
    assert_eq!(rep.rows.len(), 2 * ts.len());
    let (lo, hi) = rep.rows.iter().fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(r.ratio), b.max(r.ratio)));
    // Within a factor 4 either side of a common constant.
    assert!(hi / lo <= 16.0, "ratios span [{lo}, {hi}]");
    for r in &rep.rows {
        assert!((r.ratio - r.sup_abs / r.bound).abs() <= 1e-15 * r.ratio);
        assert!((r.bound - r.h.powi(-3) * (r.h / r.t).min(1.0)).abs() <= 1e-12 * r.bound);
    }
}

#[test]
fn exact_scan_report_structure() {
    let pol = TruncationPolicy::default();
    let search = small_search();
    let ts = [0.3, 1.0];
    let setup = ScanSetup { kind: WindowKind::High, model: KernelModel::Exact, s: 2.0, smoothness: Smoothness::C4 };
    let a = dispersion_scan(&[0.125], &ts, &setup, &search, &pol).unwrap();
    let b = dispersion_scan(&[0.125], &ts, &setup, &search, &pol).unwrap();
    assert_eq!(a, b);
    for (row, t) in a.rows.iter().zip(ts) {
        assert_eq!(row.t, t);
        let q = row.argmax_q;
        assert!(q.r >= 1.0 && q.r <= search.r_max && q.z >= 0.0 && q.z <= search.z_max);
        let v = wave_kernel(&q, &src(2.0), t, &FreqWindow::high(0.125).unwrap(), &pol).unwrap().value.norm();
        assert!((v - row.sup_abs).abs() < 1e-8 * v, "{v} vs {}", row.sup_abs);
        assert!(row.ratio.is_finite() && row.ratio > 0.0);
    }

    let low = ScanSetup { kind: WindowKind::Low, ..setup };
    let r = dispersion_scan(&[], &[1.0, 10.0], &low, &search, &pol).unwrap();
    assert!(r.rows.iter().all(|row| row.h == 1.0 && (row.bound - 1.0 / (1.0 + row.t)).abs() < 1e-15));
}

#[test]
fn scan_rejects_bad_grids() {
    let pol = TruncationPolicy::default();
    let setup = ScanSetup { kind: WindowKind::High, model: KernelModel::Free, s: 2.0, smoothness: Smoothness::C4 };
    assert!(dispersion_scan(&[], &[1.0], &setup, &small_search(), &pol).is_err());
    assert!(dispersion_scan(&[0.1], &[], &setup, &small_search(), &pol).is_err());
    assert!(dispersion_scan(&[0.1], &[-1.0], &setup, &small_search(), &pol).is_err());
    let bad = SearchPolicy { r_max: 0.5, ..small_search() };
    assert!(dispersion_scan(&[0.1], &[1.0], &setup, &bad, &pol).is_err());
}
