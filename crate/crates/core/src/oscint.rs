//! Quadrature of oscillatory integrals `∫ₐᵇ amp(x) e^{iλφ(x)} dx` and the
//! one-dimensional stationary-phase leading term used to validate it.
//!
//! The integrator is globally adaptive. Panels on which `φ` is monotone and
//! the phase sweeps more than a few periods are handled by a Filon-type rule:
//! after substituting `u = φ(x)` the integrand is `g(u) e^{iλu}` with the
//! smooth `g = amp/φ'`. `g` is expanded in Legendre polynomials, and each
//! term is integrated exactly through `∫₋₁¹ P_k(t) e^{iωt} dt = 2 iᵏ j_k(ω)`.
//! All other panels use 21-point Gauss–Kronrod.

use crate::error::{Error, Result};
use crate::numdiff::{default_step, deriv1, deriv2};
use num_complex::Complex64;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

type RealFn<'a> = Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>;

/// A real phase function with optional analytic first and second derivatives.
/// Missing derivatives are replaced by Richardson-extrapolated central
/// differences (step `1e−5·(1+|x|)` for `φ'`, `1e−3·(1+|x|)` for `φ''`).
pub struct Phase1D<'a> {
    eval: RealFn<'a>,
    d1: Option<RealFn<'a>>,
    d2: Option<RealFn<'a>>,
}

impl<'a> Phase1D<'a> {
    pub fn new(eval: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        Self { eval: Box::new(eval), d1: None, d2: None }
    }

    pub fn with_d1(mut self, d1: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        self.d1 = Some(Box::new(d1));
        self
    }

    pub fn with_d2(mut self, d2: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        self.d2 = Some(Box::new(d2));
        self
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.eval)(x)
    }

    pub fn d1(&self, x: f64) -> f64 {
        match &self.d1 {
            Some(f) => f(x),
            None => deriv1(&self.eval, x, default_step(x)),
        }
    }

    pub fn d2(&self, x: f64) -> f64 {
        match &self.d2 {
            Some(f) => f(x),
            None => deriv2(&self.eval, x, 1e-3 * (1.0 + x.abs())),
        }
    }
}

/// Result of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    /// Estimated absolute error (non-negative).
    pub err_estimate: f64,
    /// Number of amplitude evaluations.
    pub n_evals: usize,
}

// ---------------------------------------------------------------------------
// Rules

/// 21-point Kronrod abscissae (non-negative half) and weights, with the
/// embedded 10-point Gauss weights.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Gauss–Legendre nodes and weights on `[−1, 1]` together with the Legendre
/// polynomial table `P_k(t_i)`.
pub(crate) struct Legendre {
    n: usize,
    pub(crate) nodes: Vec<f64>,
    pub(crate) weights: Vec<f64>,
    p: Vec<Vec<f64>>, // p[k][i]
}

pub(crate) fn legendre_rule(n: usize) -> Legendre {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                let (mut q0, mut q1) = (1.0, x);
                for k in 2..=n {
                    let q2 = ((2 * k - 1) as f64 * x * q1 - (k - 1) as f64 * q0) / k as f64;
                    q0 = q1;
                    q1 = q2;
                }
                let dq = n as f64 * (x * q1 - q0) / (x * x - 1.0);
                weights[i] = 2.0 / ((1.0 - x * x) * dq * dq);
                break;
            }
        }
        nodes[i] = x;
    }
    let mut p = vec![vec![0.0; n]; n];
    for (i, &x) in nodes.iter().enumerate() {
        p[0][i] = 1.0;
        if n > 1 {
            p[1][i] = x;
        }
        for k in 2..n {
            p[k][i] = ((2 * k - 1) as f64 * x * p[k - 1][i] - (k - 1) as f64 * p[k - 2][i]) / k as f64;
        }
    }
    Legendre { n, nodes, weights, p }
}

/// `n`-point Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let r = legendre_rule(n);
    (r.nodes, r.weights)
}

const FILON_LO: usize = 12;
const FILON_HI: usize = 24;

fn rules() -> &'static (Legendre, Legendre) {
    static R: OnceLock<(Legendre, Legendre)> = OnceLock::new();
    R.get_or_init(|| (legendre_rule(FILON_LO), legendre_rule(FILON_HI)))
}

/// Spherical Bessel `j_0 … j_{n−1}` at `ω > n` by (stable) forward recurrence.
fn sph_bessel_forward(n: usize, w: f64) -> Vec<f64> {
    let mut j = vec![0.0; n.max(2)];
    let (s, c) = w.sin_cos();
    j[0] = s / w;
    j[1] = s / (w * w) - c / w;
    for k in 1..n - 1 {
        j[k + 1] = (2 * k + 1) as f64 / w * j[k] - j[k - 1];
    }
    j
}

/// `∫₋₁¹ g(t) e^{iωt} dt` from samples of `g` at the rule's nodes.
fn filon_legendre(rule: &Legendre, g: &[Complex64], jk: &[f64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut ik = Complex64::new(1.0, 0.0);
    for k in 0..rule.n {
        let mut a = Complex64::new(0.0, 0.0);
        for i in 0..rule.n {
            a += g[i] * (rule.weights[i] * rule.p[k][i]);
        }
        // a_k = (2k+1)/2 Σ wᵢ g(tᵢ) P_k(tᵢ); ∫P_k e^{iωt} = 2 iᵏ j_k(ω)
        acc += a * ((2 * k + 1) as f64) * ik * jk[k];
        ik *= Complex64::i();
    }
    acc
}

// ---------------------------------------------------------------------------
// Panels

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&o.err)
    }
}

struct Ctx<'p, A> {
    amp: A,
    phase: &'p Phase1D<'p>,
    lambda: f64,
    evals: usize,
}

impl<'p, A: Fn(f64) -> Complex64> Ctx<'p, A> {
    fn f(&mut self, x: f64) -> Complex64 {
        self.evals += 1;
        (self.amp)(x) * Complex64::cis(self.lambda * self.phase.value(x))
    }

    fn kronrod(&mut self, a: f64, b: f64) -> (Complex64, f64) {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut vals = [Complex64::new(0.0, 0.0); 21];
        vals[20] = self.f(c);
        for j in 0..10 {
            let dx = h * XGK[j];
            vals[2 * j] = self.f(c - dx);
            vals[2 * j + 1] = self.f(c + dx);
        }
        let mut rk = vals[20] * WGK[10];
        let mut rg = Complex64::new(0.0, 0.0);
        let mut resabs = vals[20].norm() * WGK[10];
        for j in 0..10 {
            let s = vals[2 * j] + vals[2 * j + 1];
            rk += s * WGK[j];
            resabs += (vals[2 * j].norm() + vals[2 * j + 1].norm()) * WGK[j];
            if j % 2 == 1 {
                rg += s * WG[j / 2];
            }
        }
        // The 10-point Gauss rule has no centre node.
        let mean = rk * 0.5;
        let mut resasc = (vals[20] - mean).norm() * WGK[10];
        for j in 0..10 {
            resasc += ((vals[2 * j] - mean).norm() + (vals[2 * j + 1] - mean).norm()) * WGK[j];
        }
        let (vk, vg) = (rk * h, rg * h);
        let (resabs, resasc) = (resabs * h.abs(), resasc * h.abs());
        // QUADPACK's error heuristic.
        let mut err = (vk - vg).norm();
        if resasc != 0.0 && err != 0.0 {
            err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
        }
        if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * resabs);
        }
        (vk, err)
    }

    /// Inverse of the (monotone) phase on `[a, b]`.
    fn invert(&self, u: f64, a: f64, b: f64, ua: f64, ub: f64) -> f64 {
        let inc = ub > ua;
        let mut lo = a;
        let mut hi = b;
        let mut x = a + (b - a) * (u - ua) / (ub - ua);
        for _ in 0..100 {
            let fx = self.phase.value(x) - u;
            if fx == 0.0 {
                return x;
            }
            if (fx < 0.0) == inc {
                lo = x;
            } else {
                hi = x;
            }
            let d = self.phase.d1(x);
            let mut nx = x - fx / d;
            if !(nx > lo && nx < hi) || !nx.is_finite() {
                nx = 0.5 * (lo + hi);
            }
            if (nx - x).abs() <= 1e-15 * (1.0 + x.abs()) {
                return nx;
            }
            x = nx;
        }
        x
    }

    /// Filon rule on a monotone-phase panel; `None` if not applicable.
    fn filon(&mut self, a: f64, b: f64) -> Option<(Complex64, f64)> {
        let ua = self.phase.value(a);
        let ub = self.phase.value(b);
        let c = 0.5 * (ub - ua);
        let m = 0.5 * (ub + ua);
        let w = self.lambda * c;
        if !(w.abs() > 2.0 * FILON_HI as f64) {
            return None;
        }
        let (lo, hi) = rules();
        let mut run = |rule: &Legendre| -> Option<Complex64> {
            let mut g = Vec::with_capacity(rule.n);
            for &t in &rule.nodes {
                let u = m + c * t;
                let x = self.invert(u, a, b, ua, ub);
                let d = self.phase.d1(x);
                if d == 0.0 || !d.is_finite() {
                    return None;
                }
                self.evals += 1;
                g.push((self.amp)(x) / d);
            }
            let jk = sph_bessel_forward(rule.n, w);
            Some(filon_legendre(rule, &g, &jk) * c * Complex64::cis(self.lambda * m))
        };
        let vl = run(lo)?;
        let vh = run(hi)?;
        Some((vh, (vh - vl).norm()))
    }

    fn monotone(&self, a: f64, b: f64) -> bool {
        let n = 16;
        let d0 = self.phase.d1(a);
        if d0 == 0.0 {
            return false;
        }
        (1..=n).all(|k| {
            let x = a + (b - a) * k as f64 / n as f64;
            let d = self.phase.d1(x);
            d * d0 > 0.0 && (d / d0).abs() > 1e-3 && (d / d0).abs() < 1e3
        })
    }

    fn panel(&mut self, a: f64, b: f64) -> Panel {
        let filon = if self.monotone(a, b) { self.filon(a, b) } else { None };
        let (value, err) = filon.unwrap_or_else(|| self.kronrod(a, b));
        Panel { a, b, value, err }
    }
}

/// Maximum number of panels before giving up.
const PANEL_BUDGET: usize = 20_000;

/// `∫ₐᵇ amp(x) e^{iλφ(x)} dx` to absolute accuracy `tol`.
///
/// The interval is refined adaptively, always bisecting the panel with the
/// largest error estimate. Returns [`Error::NoConvergence`] when the panel
/// budget is exhausted before the summed error estimate drops below `tol`.
pub fn integrate_osc(
    amp: impl Fn(f64) -> Complex64,
    phase: &Phase1D<'_>,
    lambda: f64,
    interval: (f64, f64),
    tol: f64,
) -> Result<QuadResult> {
    let (a, b) = interval;
    if !(lambda > 0.0) || !(b > a) || !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "integrate_osc needs lambda > 0, a < b, tol > 0; got {lambda}, ({a}, {b}), {tol}"
        )));
    }
    let mut ctx = Ctx { amp, phase, lambda, evals: 0 };
    // Initial panels: roughly one per 20 periods of the phase.
    let sweep = lambda * (phase.value(b) - phase.value(a)).abs() / (2.0 * PI);
    let n0 = ((sweep / 20.0).ceil() as usize).clamp(1, 64);
    let mut heap = BinaryHeap::new();
    for k in 0..n0 {
        let lo = a + (b - a) * k as f64 / n0 as f64;
        let hi = a + (b - a) * (k + 1) as f64 / n0 as f64;
        heap.push(ctx.panel(lo, hi));
    }
    loop {
        let err: f64 = heap.iter().map(|p| p.err).sum();
        if err <= tol {
            break;
        }
        if heap.len() >= PANEL_BUDGET {
            return Err(Error::NoConvergence(format!(
                "oscillatory quadrature: error {err:e} > tol {tol:e} after {} panels",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::NoConvergence("panel width underflow".into()));
        }
        heap.push(ctx.panel(worst.a, mid));
        heap.push(ctx.panel(mid, worst.b));
    }
    // Deterministic summation in interval order.
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = panels.iter().fold(Complex64::new(0.0, 0.0), |s, p| s + p.value);
    let err_estimate = panels.iter().map(|p| p.err).sum();
    Ok(QuadResult { value, err_estimate, n_evals: ctx.evals })
}

/// `∫ₐᵇ f(x) dx` for a smooth (non-oscillatory or mildly oscillatory)
/// complex integrand, by globally adaptive 21-point Gauss–Kronrod, to
/// absolute accuracy `tol`.
pub fn integrate_smooth(f: impl Fn(f64) -> Complex64, interval: (f64, f64), tol: f64) -> Result<QuadResult> {
    let zero = Phase1D::new(|_| 0.0).with_d1(|_| 0.0).with_d2(|_| 0.0);
    integrate_osc(f, &zero, 1.0, interval, tol)
}

/// Leading stationary-phase term at the nondegenerate critical point `x_c`:
/// `amp(x_c) √(2π/(λ|φ''|)) e^{iλφ(x_c)} e^{i sgn(φ'') π/4}`.
///
/// Fails with [`Error::Degenerate`] when `|φ''(x_c)| < 1e−8·λ^{1/3}`, and
/// with [`Error::Domain`] when `x_c` is not critical
/// (`|φ'(x_c)| > 1e−6·max(1, |φ''(x_c)|)`).
pub fn stationary_phase_1d(
    amp: impl Fn(f64) -> Complex64,
    phase: &Phase1D<'_>,
    x_c: f64,
    lambda: f64,
) -> Result<Complex64> {
    let d2 = phase.d2(x_c);
    if d2.abs() < 1e-8 * lambda.cbrt() {
        return Err(Error::Degenerate(format!("phase'' = {d2:e} at x_c = {x_c}")));
    }
    let d1 = phase.d1(x_c);
    if d1.abs() > 1e-6 * d2.abs().max(1.0) {
        return Err(Error::Domain(format!("x_c = {x_c} is not critical: phase' = {d1:e}")));
    }
    let mag = (2.0 * PI / (lambda * d2.abs())).sqrt();
    let ph = lambda * phase.value(x_c) + d2.signum() * FRAC_PI_4;
    Ok(amp(x_c) * mag * Complex64::cis(ph))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let r = legendre_rule(12);
        let s: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(22)).sum();
        assert!((s - 2.0 / 23.0).abs() < 1e-14);
    }

    #[test]
    fn filon_moments() {
        // ∫₋₁¹ t² e^{iωt} dt in closed form.
        let w: f64 = 60.0;
        let (s, c) = w.sin_cos();
        let exact = Complex64::new(2.0 * s / w + 4.0 * c / (w * w) - 4.0 * s / w.powi(3), 0.0);
        let r = legendre_rule(12);
        let g: Vec<_> = r.nodes.iter().map(|t| Complex64::new(t * t, 0.0)).collect();
        let v = filon_legendre(&r, &g, &sph_bessel_forward(12, w));
        assert!((v - exact).norm() < 1e-14);
    }
}
