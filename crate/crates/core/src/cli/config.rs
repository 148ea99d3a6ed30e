//! Run configuration: a TOML document with a command, nested parameters and
//! an output directory. Command-line flags override file values.
//!
//! Optional parameters left unset take command-specific defaults when the
//! configuration is [resolved](RunConfig::resolved); the resolved form is what
//! reports echo.

use crate::error::{Error, Result};
use crate::green::TruncationPolicy;
use crate::phases::Smoothness;
use crate::propagator::{KernelModel, SearchPolicy};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// The validation suites and scans the runner knows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Airy, Bessel/Hankel and `ζ̃` identities and asymptotics.
    SpecfunCheck,
    /// Phase-function Taylor data, eikonal residuals and boundary Hessians.
    ParametrixVerify,
    /// Dirichlet trace, Helmholtz residual, split recombination and the
    /// free-kernel calibration of the modal Green function.
    GreenValidate,
    /// Supremum of the band-limited kernel against the dispersive bound.
    DispersionScan,
    /// Incoming-wave decomposition and the single-layer identity.
    KirchhoffCheck,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::SpecfunCheck,
        Command::ParametrixVerify,
        Command::GreenValidate,
        Command::DispersionScan,
        Command::KirchhoffCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::SpecfunCheck => "specfun-check",
            Command::ParametrixVerify => "parametrix-verify",
            Command::GreenValidate => "green-validate",
            Command::DispersionScan => "dispersion-scan",
            Command::KirchhoffCheck => "kirchhoff-check",
        }
    }
}

impl std::fmt::Display for Command {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Mode-sum and quadrature truncation. Unset fields take the command default.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TruncationParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    /// Upper limit of `|ϑ|` for evanescent integrals; unset means automatic.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vartheta_cut: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl TruncationParams {
    /// The library policy, with `tol` falling back to `default_tol`.
    pub fn policy(&self, default_tol: f64) -> TruncationPolicy {
        let d = TruncationPolicy::default();
        TruncationPolicy {
            n_max: self.n_max.unwrap_or(d.n_max),
            vartheta_cut: self.vartheta_cut.unwrap_or(f64::INFINITY),
            tol: self.tol.unwrap_or(default_tol),
        }
    }
}

/// Pass thresholds of the individual checks. The defaults are the shipped
/// acceptance tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub airy: f64,
    pub cylinder_wronskian: f64,
    pub riccati: f64,
    pub zeta_ode: f64,
    pub zeta_slope: f64,
    pub hankel: f64,
    pub taylor: f64,
    pub eikonal: f64,
    pub hessian: f64,
    pub trace: f64,
    pub helmholtz: f64,
    pub recombination: f64,
    pub calibration: f64,
    pub incoming: f64,
    pub kirchhoff: f64,
    /// Allowed relative change of the maximal ratio between successive `h`.
    pub stability: f64,
    /// Allowed growth of `sup|K|·(1+t)` across the low-frequency scan: the
    /// maximum over the later half of the times over that of the earlier half.
    pub low_growth: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            airy: 1e-12,
            cylinder_wronskian: 1e-10,
            riccati: 1e-7,
            zeta_ode: 1e-8,
            zeta_slope: 1e-4,
            hankel: 1e-3,
            taylor: 1e-4,
            eikonal: 1e-6,
            hessian: 1e-6,
            trace: 1e-8,
            helmholtz: 1e-3,
            recombination: 1e-12,
            calibration: 1e-6,
            incoming: 1e-3,
            kirchhoff: 0.05,
            stability: 0.2,
            low_growth: 1.2,
        }
    }
}

impl Tolerances {
    fn all(&self) -> [(&'static str, f64); 17] {
        [
            ("airy", self.airy),
            ("cylinder_wronskian", self.cylinder_wronskian),
            ("riccati", self.riccati),
            ("zeta_ode", self.zeta_ode),
            ("zeta_slope", self.zeta_slope),
            ("hankel", self.hankel),
            ("taylor", self.taylor),
            ("eikonal", self.eikonal),
            ("hessian", self.hessian),
            ("trace", self.trace),
            ("helmholtz", self.helmholtz),
            ("recombination", self.recombination),
            ("calibration", self.calibration),
            ("incoming", self.incoming),
            ("kirchhoff", self.kirchhoff),
            ("stability", self.stability),
            ("low_growth", self.low_growth),
        ]
    }
}

/// Dispersion-scan inputs other than the `h` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanParams {
    pub model: KernelModel,
    /// Source radius.
    pub s: f64,
    /// Explicit scan times; when empty the geometric grid below is used.
    pub t: Vec<f64>,
    pub t_start: f64,
    pub t_decades: f64,
    pub t_per_decade: usize,
    /// Also scan the low-frequency window.
    pub low: bool,
    /// Times of the low-frequency scan.
    pub low_t: Vec<f64>,
    pub search: SearchPolicy,
}

impl Default for ScanParams {
    fn default() -> Self {
        Self {
            model: KernelModel::Exact,
            s: 2.0,
            t: Vec::new(),
            t_start: 0.02,
            t_decades: 2.0,
            t_per_decade: 8,
            low: true,
            low_t: (0..=8).map(|k| 100f64.powf(k as f64 / 8.0)).collect(),
            search: SearchPolicy::default(),
        }
    }
}

impl ScanParams {
    /// The scan times: the explicit list, or `t_start·10^{k/per_decade}`.
    pub fn times(&self) -> Vec<f64> {
        if !self.t.is_empty() {
            return self.t.clone();
        }
        let n = (self.t_decades * self.t_per_decade as f64).round() as usize;
        (0..=n).map(|k| self.t_start * 10f64.powf(k as f64 / self.t_per_decade as f64)).collect()
    }
}

/// Nested parameters of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    /// Seeds random property draws and the scan-grid jitter.
    pub seed: u64,
    /// Cutoff parameter `ε` of the angular partition.
    pub eps: f64,
    pub smoothness: Smoothness,
    /// Worker threads (0: one per core). Does not affect results.
    pub threads: usize,
    /// Semiclassical parameters; unset means the command default.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<f64>>,
    pub truncation: TruncationParams,
    pub tolerances: Tolerances,
    pub scan: ScanParams,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            seed: 0,
            eps: 0.05,
            smoothness: Smoothness::C4,
            threads: 0,
            h: None,
            truncation: TruncationParams::default(),
            tolerances: Tolerances::default(),
            scan: ScanParams::default(),
        }
    }
}

/// A complete run description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub params: Params,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Default truncation tolerance per command. The Helmholtz stencil divides
/// by a squared step of 1e−6, so the Green-function suite needs tighter sums.
fn default_tol(command: Command) -> f64 {
    match command {
        Command::GreenValidate => 1e-13,
        _ => TruncationPolicy::default().tol,
    }
}

fn default_h(command: Command) -> Vec<f64> {
    match command {
        Command::KirchhoffCheck => vec![1.0 / 20.0],
        _ => vec![1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0],
    }
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self { command, params: Params::default(), output_dir: default_output_dir() }
    }

    /// Parse a TOML document and validate it.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Read and parse a TOML file.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io { path: path.display().to_string(), msg: e.to_string() })?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// The `h` grid in effect.
    pub fn h_grid(&self) -> Vec<f64> {
        self.params.h.clone().unwrap_or_else(|| default_h(self.command))
    }

    /// The truncation policy in effect.
    pub fn policy(&self) -> TruncationPolicy {
        self.params.truncation.policy(default_tol(self.command))
    }

    /// Fill every command-dependent default so the configuration documents
    /// exactly what was run.
    pub fn resolved(&self) -> Self {
        let mut c = self.clone();
        let p = self.policy();
        c.params.h = Some(self.h_grid());
        c.params.truncation = TruncationParams {
            n_max: Some(p.n_max),
            vartheta_cut: p.vartheta_cut.is_finite().then_some(p.vartheta_cut),
            tol: Some(p.tol),
        };
        c.params.scan.t = self.params.scan.times();
        c
    }

    /// Schema-level checks: positive tolerances, nonempty grids, sane ranges.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        let p = &self.params;
        for (name, v) in p.tolerances.all() {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("tolerance `{name}` must be positive and finite, got {v}"));
            }
        }
        if !(p.eps > 0.0 && p.eps < 0.5) {
            return bad(format!("eps must lie in (0, 0.5), got {}", p.eps));
        }
        if let Some(h) = &p.h {
            if h.is_empty() {
                return bad("h grid is empty".into());
            }
            if let Some(x) = h.iter().find(|x| !(**x > 0.0 && **x < 1.0)) {
                return bad(format!("h values must lie in (0, 1), got {x}"));
            }
        }
        let t = &p.truncation;
        if t.n_max == Some(0) {
            return bad("n_max must be positive".into());
        }
        if let Some(v) = t.tol {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("truncation tol must be positive, got {v}"));
            }
        }
        if let Some(v) = t.vartheta_cut {
            if !(v > 0.0) {
                return bad(format!("vartheta_cut must be positive, got {v}"));
            }
        }
        let s = &p.scan;
        if !(s.s > 1.0 && s.s.is_finite()) {
            return bad(format!("source radius must exceed 1, got {}", s.s));
        }
        if s.t.is_empty() && !(s.t_start > 0.0 && s.t_decades >= 0.0 && s.t_per_decade > 0) {
            return bad("time grid is empty: give t or a positive t_start, t_decades ≥ 0, t_per_decade ≥ 1".into());
        }
        if let Some(x) = s.t.iter().chain(&s.low_t).find(|x| !(**x > 0.0 && x.is_finite())) {
            return bad(format!("scan times must be positive, got {x}"));
        }
        if s.low && s.low_t.is_empty() {
            return bad("low-frequency time grid is empty".into());
        }
        let q = &s.search;
        if !(q.r_max > 1.0) || !(q.z_max >= 0.0) || q.n_r == 0 || q.n_theta == 0 || q.n_z == 0 {
            return bad(format!("search grid is empty or degenerate: {q:?}"));
        }
        Ok(())
    }
}
