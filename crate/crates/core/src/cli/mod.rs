//! Experiment runner: validation suites and scans driven by a [`RunConfig`],
//! writing CSV reports, plot-ready long-format CSV and a JSON summary.
//!
//! Outputs in `output_dir`:
//! - `checks.csv`: `test,params,residual,tol,pass`, one row per check;
//! - `summary.json`: see [`Summary`] (schema in `docs/summary.schema.json`);
//! - `hankel_err.csv` (specfun-check): `form,rho,n,rel_err`;
//! - `dispersion_report.csv`, `ratio_vs_t.csv` (`h,t,ratio`, high window)
//!   and `low_ratio_vs_t.csv` (`t,ratio`, low window) for dispersion-scan.
//!
//! Every CSV is a pure function of the resolved configuration: rows are
//! assembled in a fixed order after the parallel work finishes.

pub mod config;
pub mod suites;

pub use config::{Command, Params, RunConfig, ScanParams, Tolerances, TruncationParams};
pub use suites::{run_suite, Check, HankelErr, SuiteReport};

use crate::error::{Error, Result};
use crate::phases::Smoothness;
use crate::propagator::{DispersionReport, KernelModel, WindowKind};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Exit status for a run whose checks all pass.
pub const EXIT_PASS: i32 = 0;
/// Exit status for failing checks or a numerical error.
pub const EXIT_FAIL: i32 = 1;
/// Exit status for an invalid configuration.
pub const EXIT_CONFIG: i32 = 2;

/// Machine-readable outcome of a run, written to `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub suite: Command,
    pub n_pass: usize,
    pub n_fail: usize,
    /// Largest `residual / tol` over the checks (above 1 means failure;
    /// `null` when a residual is not finite).
    pub worst_residual: f64,
    /// Name of the check attaining `worst_residual`.
    pub worst_check: String,
    pub checks: Vec<Check>,
    /// The fully resolved configuration that produced the outputs.
    pub config: RunConfig,
}

impl Summary {
    pub fn from_report(report: &SuiteReport, config: &RunConfig) -> Self {
        let worst = report.checks.iter().max_by(|a, b| a.normalized().total_cmp(&b.normalized()));
        Self {
            suite: report.suite,
            n_pass: report.n_pass(),
            n_fail: report.n_fail(),
            worst_residual: worst.map_or(0.0, Check::normalized),
            worst_check: worst.map_or_else(String::new, |c| c.test.clone()),
            checks: report.checks.clone(),
            config: config.resolved(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.n_fail == 0 {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

/// Map a library error to the runner's exit status.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Config(_) => EXIT_CONFIG,
        _ => EXIT_FAIL,
    }
}

/// Validate, run the configured suite and write every artifact.
pub fn run(config: &RunConfig) -> Result<Summary> {
    config.validate()?;
    if config.params.threads > 0 {
        // A global pool can be built once per process; later runs reuse it.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(config.params.threads).build_global();
    }
    let report = run_suite(config)?;
    let summary = Summary::from_report(&report, config);
    let dir = &config.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    write_checks(&dir.join("checks.csv"), &report.checks)?;
    emit_plot_data(&report, dir)?;
    let path = dir.join("summary.json");
    std::fs::write(&path, summary_json(&summary)? + "\n").map_err(|e| io_err(&path, e))?;
    Ok(summary)
}

/// The summary as pretty-printed JSON (non-finite numbers become `null`).
pub fn summary_json(summary: &Summary) -> Result<String> {
    serde_json::to_string_pretty(summary).map_err(|e| Error::Config(e.to_string()))
}

/// Write the plot-ready long-format tables of a report into `dir`:
/// `hankel_err.csv` for the asymptotics sweep; `dispersion_report.csv`,
/// `ratio_vs_t.csv` and `low_ratio_vs_t.csv` for scans. Returns the paths written.
pub fn emit_plot_data(report: &SuiteReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    if !report.hankel.is_empty() {
        let path = dir.join("hankel_err.csv");
        let mut w = writer(&path)?;
        record(&mut w, &path, ["form", "rho", "n", "rel_err"])?;
        for e in &report.hankel {
            record(&mut w, &path, [e.form.to_string(), num(e.rho), e.n.to_string(), num(e.rel_err)])?;
        }
        finish(w, &path)?;
        out.push(path);
    }
    if !report.scans.is_empty() {
        let path = dir.join("dispersion_report.csv");
        write_dispersion(&path, &report.scans)?;
        out.push(path);
        let high: Vec<_> = report.scans.iter().filter(|s| s.setup.kind == WindowKind::High).collect();
        if !high.is_empty() {
            let path = dir.join("ratio_vs_t.csv");
            let mut w = writer(&path)?;
            record(&mut w, &path, ["h", "t", "ratio"])?;
            for r in high.iter().flat_map(|s| &s.rows) {
                record(&mut w, &path, [num(r.h), num(r.t), num(r.ratio)])?;
            }
            finish(w, &path)?;
            out.push(path);
        }
        // The low window has no h; its ratio is sup|K|·(1+t).
        let low: Vec<_> = report.scans.iter().filter(|s| s.setup.kind == WindowKind::Low).collect();
        if !low.is_empty() {
            let path = dir.join("low_ratio_vs_t.csv");
            let mut w = writer(&path)?;
            record(&mut w, &path, ["t", "ratio"])?;
            for r in low.iter().flat_map(|s| &s.rows) {
                record(&mut w, &path, [num(r.t), num(r.ratio)])?;
            }
            finish(w, &path)?;
            out.push(path);
        }
    }
    Ok(out)
}

/// Dispersion rows with the search and truncation metadata of their scan.
fn write_dispersion(path: &Path, scans: &[DispersionReport]) -> Result<()> {
    let mut w = writer(path)?;
    record(
        &mut w,
        path,
        [
            "kind", "model", "s", "smoothness", "h", "t", "sup_abs", "bound", "ratio", "argmax_r", "argmax_theta",
            "argmax_z", "n_evals", "r_max", "z_max", "n_r", "n_theta", "n_z", "top_k", "refine_evals", "jitter_seed",
        ],
    )?;
    for scan in scans {
        let (st, q) = (&scan.setup, &scan.search);
        for r in &scan.rows {
            record(
                &mut w,
                path,
                [
                    kind_name(st.kind).to_string(),
                    match st.model {
                        KernelModel::Exact => "exact",
                        KernelModel::Free => "free",
                    }
                    .to_string(),
                    num(st.s),
                    match st.smoothness {
                        Smoothness::C4 => "c4",
                        Smoothness::CInf => "c-inf",
                    }
                    .to_string(),
                    num(r.h),
                    num(r.t),
                    num(r.sup_abs),
                    num(r.bound),
                    num(r.ratio),
                    num(r.argmax_q.r),
                    num(r.argmax_q.theta),
                    num(r.argmax_q.z),
                    r.n_evals.to_string(),
                    num(q.r_max),
                    num(q.z_max),
                    q.n_r.to_string(),
                    q.n_theta.to_string(),
                    q.n_z.to_string(),
                    q.top_k.to_string(),
                    q.refine_evals.to_string(),
                    q.jitter_seed.map_or_else(String::new, |s| s.to_string()),
                ],
            )?;
        }
    }
    finish(w, path)
}

fn write_checks(path: &Path, checks: &[Check]) -> Result<()> {
    let mut w = writer(path)?;
    record(&mut w, path, ["test", "params", "residual", "tol", "pass"])?;
    for c in checks {
        record(&mut w, path, [c.test.clone(), c.params.clone(), num(c.residual), num(c.tol), c.pass.to_string()])?;
    }
    finish(w, path)
}

fn kind_name(k: WindowKind) -> &'static str {
    match k {
        WindowKind::High => "high",
        WindowKind::Low => "low",
    }
}

/// Shortest round-trip decimal form.
fn num(x: f64) -> String {
    format!("{x:e}")
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io { path: path.display().to_string(), msg: e.to_string() }
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(|e| io_err(path, e))
}

fn record<I, T>(w: &mut csv::Writer<std::fs::File>, path: &Path, fields: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: AsRef<[u8]>,
{
    w.write_record(fields).map_err(|e| io_err(path, e))
}

fn finish(mut w: csv::Writer<std::fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| io_err(path, e))
}
