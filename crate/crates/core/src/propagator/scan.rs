//! Numerical test of the dispersive bound: for each `(h, t)`, the supremum
//! of `|K(·, Q₀, t)|` over a bounded region of observation points, the bound
//! `h⁻³ min(1, h/t)` (or `1/(1+t)` for the low window) and their ratio.
//!
//! The supremum is approximated by a coarse grid in `(r, θ, z)` followed by
//! bounded Nelder–Mead refinement of `|K|` from the best grid cells and from
//! the best point of the direct-ray shell `|Q − Q₀| = t`, where the free
//! wave front sits. By symmetry only `θ ∈ [0, π]`, `z ≥ 0` are searched.

use super::engine::{EngineBounds, SpectralEngine};
use super::{free_wave_kernel_at_distance, FreqWindow, WindowKind};
use crate::error::{Error, Result};
use crate::green::TruncationPolicy;
use crate::phases::{phi_tilde, CylPoint, Smoothness};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which kernel is scanned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelModel {
    /// The Dirichlet kernel outside the cylinder.
    Exact,
    /// The free-space kernel (obstacle removed), as a harness control.
    Free,
}

/// Search region and density for the supremum over `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchPolicy {
    pub r_max: f64,
    pub z_max: f64,
    pub n_r: usize,
    pub n_theta: usize,
    pub n_z: usize,
    /// Number of best grid cells refined.
    pub top_k: usize,
    /// Evaluation budget of each local refinement.
    pub refine_evals: usize,
    /// When set, the coarse grid is shifted by a seeded offset of at most a
    /// quarter cell per axis; `None` samples the cell centres.
    #[serde(default)]
    pub jitter_seed: Option<u64>,
}

impl Default for SearchPolicy {
    fn default() -> Self {
        Self { r_max: 4.0, z_max: 4.0, n_r: 24, n_theta: 16, n_z: 16, top_k: 5, refine_evals: 40, jitter_seed: None }
    }
}

impl SearchPolicy {
    fn validate(&self) -> Result<()> {
        if !(self.r_max > 1.0) || !(self.z_max >= 0.0) || self.n_r == 0 || self.n_theta == 0 || self.n_z == 0 {
            return Err(Error::Config(format!("invalid search policy {self:?}")));
        }
        Ok(())
    }

    fn clamp(&self, x: [f64; 3]) -> [f64; 3] {
        [x[0].clamp(1.0, self.r_max), x[1].clamp(0.0, PI), x[2].clamp(0.0, self.z_max)]
    }

    /// Coarse-grid axes in `r`, `θ` and `z`.
    fn axes(&self) -> [Vec<f64>; 3] {
        let mut shift = [0.0; 3];
        if let Some(seed) = self.jitter_seed {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for v in &mut shift {
                *v = rng.gen_range(-0.25..0.25);
            }
        }
        let axis = |lo: f64, hi: f64, n: usize, u: f64| -> Vec<f64> {
            (0..n).map(|i| lo + (hi - lo) * (i as f64 + 0.5 + u) / n as f64).collect()
        };
        [
            axis(1.0, self.r_max, self.n_r, shift[0]),
            axis(0.0, PI, self.n_theta, shift[1]),
            axis(0.0, self.z_max, self.n_z, shift[2]),
        ]
    }

    fn cell_size(&self) -> [f64; 3] {
        [(self.r_max - 1.0) / self.n_r as f64, PI / self.n_theta as f64, self.z_max.max(1e-3) / self.n_z as f64]
    }
}

/// Fixed physical inputs of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSetup {
    pub kind: WindowKind,
    pub model: KernelModel,
    /// Source radius `s`.
    pub s: f64,
    pub smoothness: Smoothness,
}

/// One `(h, t)` row of a dispersion report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionRow {
    pub h: f64,
    pub t: f64,
    pub sup_abs: f64,
    pub bound: f64,
    pub ratio: f64,
    pub argmax_q: CylPoint,
    /// Kernel evaluations spent on this row (grid + refinement).
    pub n_evals: usize,
}

/// Result of [`dispersion_scan`], rows ordered by `h` (as given) then `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionReport {
    pub setup: ScanSetup,
    pub search: SearchPolicy,
    pub rows: Vec<DispersionRow>,
}

impl DispersionReport {
    /// Largest ratio among the rows with the given `h`.
    pub fn max_ratio(&self, h: f64) -> Option<f64> {
        self.rows.iter().filter(|r| r.h == h).map(|r| r.ratio).reduce(f64::max)
    }
}

/// Bounded Nelder–Mead maximization of `f` from `x0` with initial steps `step`.
fn refine(f: &dyn Fn([f64; 3]) -> f64, search: &SearchPolicy, x0: [f64; 3], fx0: f64, budget: usize) -> ([f64; 3], f64, usize) {
    let step = search.cell_size();
    let mut simplex: Vec<([f64; 3], f64)> = vec![(x0, fx0)];
    let mut evals = 0;
    for k in 0..3 {
        let mut x = x0;
        x[k] += 0.5 * step[k] * if x0[k] + 0.5 * step[k] > [search.r_max, PI, search.z_max][k] { -1.0 } else { 1.0 };
        let x = search.clamp(x);
        simplex.push((x, f(x)));
        evals += 1;
    }
    let eval = |x: [f64; 3], evals: &mut usize| {
        let x = search.clamp(x);
        *evals += 1;
        (x, f(x))
    };
    while evals < budget {
        // Maximize: sort descending.
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let worst = simplex[3];
        let mut c = [0.0; 3];
        for p in &simplex[..3] {
            for k in 0..3 {
                c[k] += p.0[k] / 3.0;
            }
        }
        let along = |a: f64| {
            let mut x = [0.0; 3];
            for k in 0..3 {
                x[k] = c[k] + a * (worst.0[k] - c[k]);
            }
            x
        };
        let refl = eval(along(-1.0), &mut evals);
        if refl.1 > simplex[0].1 {
            let exp = eval(along(-2.0), &mut evals);
            simplex[3] = if exp.1 > refl.1 { exp } else { refl };
        } else if refl.1 > simplex[2].1 {
            simplex[3] = refl;
        } else {
            let con = eval(along(0.5), &mut evals);
            if con.1 > worst.1 {
                simplex[3] = con;
            } else {
                let best = simplex[0].0;
                for p in simplex.iter_mut().skip(1) {
                    let mut x = [0.0; 3];
                    for k in 0..3 {
                        x[k] = best[k] + 0.5 * (p.0[k] - best[k]);
                    }
                    *p = eval(x, &mut evals);
                }
            }
        }
    }
    simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
    (simplex[0].0, simplex[0].1, evals)
}

/// Points of the shell `|Q − Q₀| = t` inside the search region.
fn ray_seeds(s: f64, t: f64, search: &SearchPolicy) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    for ia in 0..=6 {
        let a = 0.5 * PI * ia as f64 / 6.0;
        let nb = if ia == 6 { 1 } else { 9 };
        for ib in 0..nb {
            let b = PI * ib as f64 / 8.0;
            let (x, y, z) = (s + t * a.cos() * b.cos(), t * a.cos() * b.sin(), t * a.sin());
            let r = x.hypot(y);
            if r > 1.0 && r <= search.r_max && z <= search.z_max {
                out.push([r, y.atan2(x).abs(), z]);
            }
        }
    }
    out
}

/// Scan `sup_Q |K(Q, Q₀, t)|` against the dispersive bound for every
/// `(h, t)`. Low-window scans ignore `grid_h` and report `h = 1`.
pub fn dispersion_scan(
    grid_h: &[f64],
    grid_t: &[f64],
    setup: &ScanSetup,
    search: &SearchPolicy,
    policy: &TruncationPolicy,
) -> Result<DispersionReport> {
    search.validate()?;
    if grid_t.is_empty() || (setup.kind == WindowKind::High && grid_h.is_empty()) {
        return Err(Error::Config("dispersion scan needs nonempty h and t grids".into()));
    }
    if grid_t.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::Config("scan times must be positive".into()));
    }
    let hs: Vec<f64> = match setup.kind {
        WindowKind::High => grid_h.to_vec(),
        WindowKind::Low => vec![1.0],
    };
    let mut rows = Vec::new();
    for &h in &hs {
        let window = match setup.kind {
            WindowKind::High => FreqWindow::new(h, WindowKind::High, setup.smoothness)?,
            WindowKind::Low => FreqWindow::low().with_smoothness(setup.smoothness),
        };
        let mut r = match setup.model {
            KernelModel::Exact => scan_exact(&window, grid_t, setup.s, search, policy)?,
            KernelModel::Free => scan_free(&window, grid_t, setup.s, search)?,
        };
        for row in &mut r {
            row.h = h;
        }
        rows.extend(r);
    }
    Ok(DispersionReport { setup: *setup, search: *search, rows })
}

struct Best {
    x: [f64; 3],
    val: f64,
}

fn finish_row(window: &FreqWindow, t: f64, best: Best, n_evals: usize) -> Result<DispersionRow> {
    let bound = window.bound(t);
    Ok(DispersionRow {
        h: window.h,
        t,
        sup_abs: best.val,
        bound,
        ratio: best.val / bound,
        argmax_q: CylPoint::new(best.x[0], best.x[1], best.x[2])?,
        n_evals,
    })
}

fn top_cells(vals: &[([f64; 3], f64)], k: usize) -> Vec<([f64; 3], f64)> {
    let mut v = vals.to_vec();
    v.sort_by(|a, b| b.1.total_cmp(&a.1));
    v.truncate(k);
    v
}

fn scan_exact(window: &FreqWindow, ts: &[f64], s: f64, search: &SearchPolicy, policy: &TruncationPolicy) -> Result<Vec<DispersionRow>> {
    let t_max = ts.iter().cloned().fold(0.0, f64::max);
    let bounds = EngineBounds { r_max: search.r_max, z_max: search.z_max, t_max };
    let eng = SpectralEngine::new(*window, s, bounds, policy)?;
    let [rs, ths, zs] = search.axes();
    let spectral: Vec<Vec<Vec<f64>>> =
        rs.par_iter().map(|&r| eng.spectral_columns(r, &ths).map(|c| c.0)).collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(ts.len());
    for &t in ts {
        let slab = eng.time_slab(t);
        let cols: Vec<_> = zs.par_iter().map(|&z| eng.slab_column(&slab, z)).collect();
        let mut vals = Vec::with_capacity(rs.len() * ths.len() * zs.len());
        for (ri, r) in rs.iter().enumerate() {
            for (ti, th) in ths.iter().enumerate() {
                for (zi, z) in zs.iter().enumerate() {
                    let v = SpectralEngine::contract(&spectral[ri][ti], &cols[zi]).norm();
                    vals.push(([*r, *th, *z], v));
                }
            }
        }
        let f = |x: [f64; 3]| -> f64 {
            match eng.spectral_columns(x[0], &[x[1]]) {
                Ok((c, _)) => SpectralEngine::contract(&c[0], &eng.slab_column(&slab, x[2])).norm(),
                Err(_) => 0.0,
            }
        };
        let mut seeds = top_cells(&vals, search.top_k);
        let shell: Vec<([f64; 3], f64)> = ray_seeds(s, t, search).into_par_iter().map(|x| (x, f(x))).collect();
        let n_shell = shell.len();
        seeds.extend(top_cells(&shell, 1));
        let refined: Vec<([f64; 3], f64, usize)> =
            seeds.par_iter().map(|(x, v)| refine(&f, search, *x, *v, search.refine_evals)).collect();
        let mut best = Best { x: vals[0].0, val: 0.0 };
        for (x, v) in vals.iter().chain(shell.iter()) {
            if *v > best.val {
                best = Best { x: *x, val: *v };
            }
        }
        let mut n_evals = vals.len() + n_shell;
        for (x, v, n) in refined {
            n_evals += n;
            if v > best.val {
                best = Best { x, val: v };
            }
        }
        rows.push(finish_row(window, t, best, n_evals)?);
    }
    Ok(rows)
}

fn scan_free(window: &FreqWindow, ts: &[f64], s: f64, search: &SearchPolicy) -> Result<Vec<DispersionRow>> {
    let [rs, ths, zs] = search.axes();
    ts.par_iter()
        .map(|&t| {
            let f = |x: [f64; 3]| -> f64 {
                let d = phi_tilde(x[0], x[1], x[2], s);
                free_wave_kernel_at_distance(d, t, window).map(|c| c.norm()).unwrap_or(0.0)
            };
            let mut vals = Vec::new();
            for r in &rs {
                for th in &ths {
                    for z in &zs {
                        let x = [*r, *th, *z];
                        vals.push((x, f(x)));
                    }
                }
            }
            let shell: Vec<_> = ray_seeds(s, t, search).into_iter().map(|x| (x, f(x))).collect();
            let mut seeds = top_cells(&vals, search.top_k);
            seeds.extend(top_cells(&shell, 1));
            let mut best = Best { x: vals[0].0, val: 0.0 };
            let mut n_evals = vals.len() + shell.len();
            for (x, v) in vals.iter().chain(shell.iter()) {
                if *v > best.val {
                    best = Best { x: *x, val: *v };
                }
            }
            for (x, v) in seeds {
                let (xr, vr, n) = refine(&f, search, x, v, search.refine_evals);
                n_evals += n;
                if vr > best.val {
                    best = Best { x: xr, val: vr };
                }
            }
            finish_row(window, t, best, n_evals)
        })
        .collect()
}
