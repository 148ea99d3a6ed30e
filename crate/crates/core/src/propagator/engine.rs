//! Spectral evaluation of the band-limited kernel.
//!
//! Writing `Im 𝓡 = 2∫₀^τ cos(ϑz) S(κ) dϑ` with the angular spectral sum
//! `S(κ) = Σ_{n≥0} ε_n cos(nθ) Im g_n(κ)` and changing variables
//! `(τ, ϑ) → (κ, ϑ)`, `dτ dϑ = (κ/τ) dκ dϑ`, the kernel factorizes as
//!
//! `K(Q, t) = ∫₀^∞ S(κ; r, θ) T(κ; z, t) dκ`,
//! `T(κ; z, t) = (2κ/π) ∫₀^∞ cos(ϑz) χ(hτ) e^{itτ} dϑ`, `τ = √(κ² + ϑ²)`.
//!
//! The spectral factor depends on `(r, θ)` only and the time factor on
//! `(z, t)` only, so scans reuse both. Only propagating modes enter, and
//! `Im g_n = (8π)⁻¹ u_n(r) u_n(s) / (J_n(κ)² + Y_n(κ)²)` with
//! `u_n(ρ) = J_n(ρκ)Y_n(κ) − Y_n(ρκ)J_n(κ)`, which decays like
//! `J_n(κr)J_n(κs)` in `n` and vanishes identically at `r = 1`.

use super::FreqWindow;
use crate::error::{Error, Result};
use crate::green::{mode_truncation, KernelSample, TruncationPolicy};
use crate::oscint::legendre_rule;
use crate::phases::{CylPoint, SourceConfig};
use crate::specfun::{cyl_seq, Scaled};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Gauss–Legendre nodes per panel.
const NODES: usize = 16;
/// Phase advance per panel (radians) at the highest frequency present.
const PANEL_PHASE: f64 = 6.0;
/// Geometric refinement levels of the first `κ` panel.
const GRADED_LEVELS: i32 = 12;
/// Extra angular orders beyond the truncation estimate.
const TAIL_MODES: usize = 20;

/// Extent of the `(r, z, t)` region an engine serves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineBounds {
    pub r_max: f64,
    pub z_max: f64,
    pub t_max: f64,
}

struct Quad {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl Quad {
    fn push(&mut self, lo: f64, hi: f64) {
        let rule = rule();
        for (t, wt) in rule.nodes.iter().zip(&rule.weights) {
            self.x.push(lo + 0.5 * (hi - lo) * (t + 1.0));
            self.w.push(0.5 * (hi - lo) * wt);
        }
    }

    /// Appends a composite rule on `[a, b]` with panels no wider than
    /// `width`; `graded` refines the first panel geometrically towards `a`.
    fn append(&mut self, a: f64, b: f64, width: f64, graded: bool) {
        let n = ((b - a) / width).ceil().max(1.0) as usize;
        let h = (b - a) / n as f64;
        for k in 0..n {
            let lo = a + h * k as f64;
            let hi = a + h * (k + 1) as f64;
            if k == 0 && graded {
                let mut edges: Vec<f64> = (0..=GRADED_LEVELS).map(|l| lo + h * 2f64.powi(-l)).collect();
                edges.push(lo);
                edges.reverse();
                for e in edges.windows(2) {
                    self.push(e[0], e[1]);
                }
            } else {
                self.push(lo, hi);
            }
        }
    }

    /// Composite rule on consecutive segments of `edges`, skipping empty ones.
    fn segmented(edges: &[f64], width: f64, graded_at_zero: bool) -> Quad {
        let mut q = Quad { x: Vec::new(), w: Vec::new() };
        for e in edges.windows(2) {
            if e[1] > e[0] {
                q.append(e[0], e[1], width, graded_at_zero && e[0] == 0.0);
            }
        }
        q
    }
}

fn rule() -> &'static crate::oscint::Legendre {
    static R: std::sync::OnceLock<crate::oscint::Legendre> = std::sync::OnceLock::new();
    R.get_or_init(|| legendre_rule(NODES))
}

/// A run of equal-width Gauss–Legendre panels of one `ϑ` rule: nodes
/// `node0..node0 + panels·NODES`, first panel centred at `c0`, half-width
/// `half`.
struct Segment {
    node0: usize,
    panels: usize,
    c0: f64,
    half: f64,
}

/// Per-`κ` data that do not depend on the observation point.
struct KappaModes {
    j1: Vec<Scaled>,
    y1: Vec<Scaled>,
    /// `u_n(s)/(8π (J_n(κ)² + Y_n(κ)²))`.
    v: Vec<Scaled>,
}

/// `χ(hτ) e^{itτ}` tabulated on the `(κ, ϑ)` nodes at one time.
pub struct TimeSlab {
    pub t: f64,
    data: Vec<Complex64>,
}

/// Quadrature engine for [`wave_kernel`] over a fixed region.
///
/// Each `κ` node carries its own `ϑ` rule, split where `τ = √(κ²+ϑ²)`
/// crosses a breakpoint of the window profile, so that every panel sees a
/// single polynomial piece of the cutoff.
pub struct SpectralEngine {
    window: FreqWindow,
    s: f64,
    bounds: EngineBounds,
    kappa: Quad,
    /// `ϑ` nodes of `κ_i` are `v_x[v_off[i]..v_off[i+1]]`.
    v_off: Vec<usize>,
    v_x: Vec<f64>,
    v_tau: Vec<f64>,
    /// `(2κ/π) χ(hτ)` times the `ϑ` weight.
    v_w: Vec<f64>,
    /// Panel runs of `κ_i` are `segs[s_off[i]..s_off[i+1]]`.
    s_off: Vec<usize>,
    segs: Vec<Segment>,
    modes: Vec<KappaModes>,
}

impl SpectralEngine {
    pub fn new(window: FreqWindow, s: f64, bounds: EngineBounds, policy: &TruncationPolicy) -> Result<Self> {
        if !(s > 1.0) || !(bounds.r_max >= 1.0) || !(bounds.z_max >= 0.0) || !(bounds.t_max >= 0.0) {
            return Err(Error::Domain(format!("invalid engine region s = {s}, {bounds:?}")));
        }
        let (tau_lo, tau_hi) = window.tau_range();
        let brk = window.breakpoints();
        let freq_k = bounds.r_max + s + bounds.t_max + 1.0;
        let mut k_edges = vec![0.0];
        k_edges.extend(brk.iter().copied().filter(|b| *b > 0.0));
        let kappa = Quad::segmented(&k_edges, PANEL_PHASE / freq_k, true);
        let freq_v = bounds.z_max + bounds.t_max + 1.0;
        let width_v = (PANEL_PHASE / freq_v).min((tau_hi - tau_lo) / 12.0);
        let (mut v_off, mut v_x, mut v_tau, mut v_w) = (vec![0], Vec::new(), Vec::new(), Vec::new());
        let (mut s_off, mut segs) = (vec![0], Vec::new());
        let rule = rule();
        for &k in &kappa.x {
            let edges: Vec<f64> = brk.iter().map(|b| (b * b - k * k).max(0.0).sqrt()).collect();
            for e in edges.windows(2) {
                if !(e[1] > e[0]) {
                    continue;
                }
                let panels = ((e[1] - e[0]) / width_v).ceil().max(1.0) as usize;
                let half = 0.5 * (e[1] - e[0]) / panels as f64;
                segs.push(Segment { node0: v_x.len(), panels, c0: e[0] + half, half });
                for p in 0..panels {
                    let c = e[0] + half * (2 * p + 1) as f64;
                    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                        let v = c + half * x;
                        let tau = (k * k + v * v).sqrt();
                        v_x.push(v);
                        v_tau.push(tau);
                        v_w.push(half * w * window.profile(tau) * 2.0 * k / PI);
                    }
                }
            }
            v_off.push(v_x.len());
            s_off.push(segs.len());
        }
        let hi = bounds.r_max.max(s);
        let mut modes = Vec::with_capacity(kappa.x.len());
        for &k in &kappa.x {
            let n = mode_truncation(k, hi, policy.tol) + TAIL_MODES;
            if n > policy.n_max {
                return Err(Error::Truncation(format!("{n} modes needed at kappa = {k} (n_max = {})", policy.n_max)));
            }
            let a = cyl_seq(n, k)?;
            let b = cyl_seq(n, s * k)?;
            let mut v = Vec::with_capacity(n + 1);
            for m in 0..=n {
                let u = b.j[m].mul(a.y[m]).sub(b.y[m].mul(a.j[m]));
                let den = a.j[m].mul(a.j[m]).add(a.y[m].mul(a.y[m]));
                v.push(u.div(den).scale(1.0 / (8.0 * PI)));
            }
            modes.push(KappaModes { j1: a.j[..=n].to_vec(), y1: a.y[..=n].to_vec(), v });
        }
        Ok(Self { window, s, bounds, kappa, v_off, v_x, v_tau, v_w, s_off, segs, modes })
    }

    pub fn window(&self) -> &FreqWindow {
        &self.window
    }

    pub fn source(&self) -> f64 {
        self.s
    }

    pub fn bounds(&self) -> &EngineBounds {
        &self.bounds
    }

    /// Number of `κ` nodes and of active `(κ, ϑ)` nodes.
    pub fn size(&self) -> (usize, usize) {
        (self.kappa.x.len(), self.v_x.len())
    }

    /// Largest angular order summed.
    pub fn max_order(&self) -> usize {
        self.modes.iter().map(|m| m.v.len() - 1).max().unwrap_or(0)
    }

    /// Spectral factor `S(κ_i; r, θ)` at every `κ` node, for each `θ`
    /// (outer index), pre-multiplied by the `κ` weights. Also returns the
    /// largest tail magnitude (last `TAIL_MODES` orders) encountered.
    pub fn spectral_columns(&self, r: f64, thetas: &[f64]) -> Result<(Vec<Vec<f64>>, f64)> {
        if !(r >= 1.0) || r > self.bounds.r_max * (1.0 + 1e-12) {
            return Err(Error::Domain(format!("r = {r} outside [1, {}]", self.bounds.r_max)));
        }
        let nk = self.kappa.x.len();
        let mut out = vec![vec![0.0; nk]; thetas.len()];
        let mut tail_max = 0.0f64;
        let mut p = Vec::new();
        for (i, (&k, md)) in self.kappa.x.iter().zip(&self.modes).enumerate() {
            let n = md.v.len() - 1;
            p.clear();
            if r == 1.0 {
                p.resize(n + 1, 0.0);
            } else {
                let c = cyl_seq(n, r * k)?;
                for m in 0..=n {
                    let u = c.j[m].mul(md.y1[m]).sub(c.y[m].mul(md.j1[m]));
                    p.push(u.mul(md.v[m]).to_f64());
                }
            }
            for (th, col) in thetas.iter().zip(out.iter_mut()) {
                let c1 = th.cos();
                let (mut cm, mut cc) = (c1, 1.0); // cos((m−1)θ), cos(mθ)
                let mut sum = p[0];
                let mut tail = 0.0;
                for (m, pm) in p.iter().enumerate().skip(1) {
                    let next = 2.0 * c1 * cc - cm;
                    cm = cc;
                    cc = next;
                    let term = 2.0 * pm * cc;
                    sum += term;
                    if m + TAIL_MODES > n {
                        tail += term.abs();
                    }
                }
                tail_max = tail_max.max(tail);
                col[i] = sum * self.kappa.w[i];
            }
        }
        Ok((out, tail_max))
    }

    /// Time factor `T(κ_i; z, t)` at every `κ` node for each `(z, t)` pair
    /// of the product grid, indexed `[z][t][κ]`.
    pub fn time_table(&self, zs: &[f64], ts: &[f64]) -> Vec<Vec<Vec<Complex64>>> {
        let nk = self.kappa.x.len();
        let mut out = vec![vec![vec![Complex64::new(0.0, 0.0); nk]; ts.len()]; zs.len()];
        let mut e = vec![Complex64::new(0.0, 0.0); ts.len()];
        for i in 0..nk {
            for j in self.v_off[i]..self.v_off[i + 1] {
                let (v, tau, w) = (self.v_x[j], self.v_tau[j], self.v_w[j]);
                for (et, t) in e.iter_mut().zip(ts) {
                    *et = Complex64::cis(t * tau) * w;
                }
                for (zi, z) in zs.iter().enumerate() {
                    let c = (v * z).cos();
                    for (ti, et) in e.iter().enumerate() {
                        out[zi][ti][i] += et * c;
                    }
                }
            }
        }
        out
    }

    /// Precomputes `χ(hτ) e^{itτ}` on the `(κ, ϑ)` nodes for one `t`, so
    /// that time factors at many `z` cost one real-weighted sum each.
    pub fn time_slab(&self, t: f64) -> TimeSlab {
        let data = self.v_tau.iter().zip(&self.v_w).map(|(tau, w)| Complex64::cis(t * tau) * w).collect();
        TimeSlab { t, data }
    }

    /// Time factor at `(z, slab.t)` for every `κ` node. Within a run of
    /// equal panels `cos(ϑz)` is assembled from per-node offsets and a
    /// rotation stepping from panel centre to panel centre.
    pub fn slab_column(&self, slab: &TimeSlab, z: f64) -> Vec<Complex64> {
        let rule = rule();
        let mut off = [(0.0, 0.0); NODES];
        self.s_off
            .windows(2)
            .map(|r| {
                let mut acc = Complex64::new(0.0, 0.0);
                for sg in &self.segs[r[0]..r[1]] {
                    for (o, x) in off.iter_mut().zip(&rule.nodes) {
                        *o = (sg.half * x * z).sin_cos();
                    }
                    let step = Complex64::cis(2.0 * sg.half * z);
                    let mut rot = Complex64::cis(sg.c0 * z);
                    for p in 0..sg.panels {
                        if p % 32 == 31 {
                            // refresh to keep the rotation from drifting
                            rot = Complex64::cis((sg.c0 + 2.0 * sg.half * p as f64) * z);
                        }
                        let base = sg.node0 + p * NODES;
                        for (d, (sd, cd)) in slab.data[base..base + NODES].iter().zip(&off) {
                            acc += d * (rot.re * cd - rot.im * sd);
                        }
                        rot *= step;
                    }
                }
                acc
            })
            .collect()
    }

    /// `Σ_i S_i T_i`.
    pub fn contract(spectral: &[f64], time: &[Complex64]) -> Complex64 {
        spectral.iter().zip(time).fold(Complex64::new(0.0, 0.0), |a, (s, t)| a + t * s)
    }

    /// The band-limited half-wave kernel at `q` (any real `t`).
    pub fn kernel(&self, q: &CylPoint, t: f64) -> Result<KernelSample> {
        if q.z.abs() > self.bounds.z_max * (1.0 + 1e-12) || t.abs() > self.bounds.t_max * (1.0 + 1e-12) {
            return Err(Error::Domain(format!("(z, t) = ({}, {t}) outside the engine region", q.z)));
        }
        let (cols, tail) = self.spectral_columns(q.r, &[q.theta])?;
        let tt = self.time_table(&[q.z], &[t]);
        let value = Self::contract(&cols[0], &tt[0][0]);
        let tmag: f64 = tt[0][0].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let wsum: f64 = self.kappa.w.iter().sum();
        Ok(KernelSample { value, n_used: self.max_order(), quad_err: tail * tmag * wsum })
    }

    /// `κ` quadrature nodes and weights (shared with the boundary-layer
    /// evaluation).
    pub(crate) fn kappa_nodes(&self) -> (&[f64], &[f64]) {
        (&self.kappa.x, &self.kappa.w)
    }
}

/// The band-limited Dirichlet half-wave kernel
/// `∫₀^∞ e^{itτ} χ(hτ) (τ/π) Im 𝓡(Q, Q₀, τ) dτ` (see the module docs).
pub fn wave_kernel(
    q: &CylPoint,
    q0: &SourceConfig,
    t: f64,
    window: &FreqWindow,
    policy: &TruncationPolicy,
) -> Result<KernelSample> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    let bounds = EngineBounds { r_max: q.r, z_max: q.z.abs(), t_max: t };
    let eng = SpectralEngine::new(*window, q0.s, bounds, policy)?;
    eng.kernel(q, t)
}

