//! Python bindings: special functions, phase geometry, Green functions,
//! band-limited wave kernels, dispersion scans and the suite runner.
//!
//! Points are `(r, θ, z)` tuples outside the unit cylinder; the source sits
//! at `(s, 0, 0)`. Library errors surface as `ValueError` (invalid input or
//! configuration) or `RuntimeError` (numerical failure).

use cylwave_core::cli::{self, RunConfig};
use cylwave_core::green::{self, TruncationPolicy};
use cylwave_core::phases::{self, CylPoint, Smoothness, SourceConfig};
use cylwave_core::propagator::{self, FreqWindow, KernelModel, ScanSetup, SearchPolicy, WindowKind};
use cylwave_core::{specfun, Error};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Range(_) | Error::Domain(_) | Error::Degenerate(_) | Error::Config(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn point(q: (f64, f64, f64)) -> PyResult<CylPoint> {
    CylPoint::new(q.0, q.1, q.2).map_err(to_py)
}

fn source(s: f64) -> PyResult<SourceConfig> {
    SourceConfig::new(s).map_err(to_py)
}

fn policy(tol: Option<f64>, n_max: Option<usize>) -> TruncationPolicy {
    let d = TruncationPolicy::default();
    TruncationPolicy { tol: tol.unwrap_or(d.tol), n_max: n_max.unwrap_or(d.n_max), ..d }
}

fn smoothness(name: &str) -> PyResult<Smoothness> {
    match name {
        "c4" => Ok(Smoothness::C4),
        "c-inf" => Ok(Smoothness::CInf),
        _ => Err(PyValueError::new_err(format!("smoothness must be 'c4' or 'c-inf', got {name:?}"))),
    }
}

/// A time-frequency window: `high` localizes `τ ∈ [1/(2h), 2/h]`, `low`
/// localizes `τ ∈ [0, 2)`.
#[pyclass(name = "FreqWindow", module = "cylwave", frozen)]
#[derive(Clone)]
struct PyFreqWindow {
    inner: FreqWindow,
}

#[pymethods]
impl PyFreqWindow {
    #[staticmethod]
    #[pyo3(signature = (h, smoothness = "c4"))]
    fn high(h: f64, smoothness: &str) -> PyResult<Self> {
        let inner = FreqWindow::new(h, WindowKind::High, self::smoothness(smoothness)?).map_err(to_py)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (smoothness = "c4"))]
    fn low(smoothness: &str) -> PyResult<Self> {
        Ok(Self { inner: FreqWindow::low().with_smoothness(self::smoothness(smoothness)?) })
    }

    #[getter]
    fn h(&self) -> f64 {
        self.inner.h
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner.kind {
            WindowKind::High => "high",
            WindowKind::Low => "low",
        }
    }

    /// Frequency support `(τ_lo, τ_hi)`.
    fn tau_range(&self) -> (f64, f64) {
        self.inner.tau_range()
    }

    /// The dispersive bound at time `t`.
    fn bound(&self, t: f64) -> f64 {
        self.inner.bound(t)
    }

    fn __repr__(&self) -> String {
        format!("FreqWindow(kind={:?}, h={})", self.kind(), self.inner.h)
    }
}

// ---------------------------------------------------------------- specfun --

/// `(A, A₊, A₋, A', A₊', A₋')` at complex `w`.
#[pyfunction]
fn airy_all(w: Complex64) -> PyResult<[Complex64; 6]> {
    let b = specfun::airy_all(w).map_err(to_py)?;
    Ok([b.a, b.a_plus, b.a_minus, b.da, b.da_plus, b.da_minus])
}

/// `J_n(x)`.
#[pyfunction]
fn bessel_j(n: u32, x: f64) -> PyResult<f64> {
    specfun::bessel_j(n, x).map_err(to_py)
}

/// `H⁽¹⁾_n(x)`.
#[pyfunction]
fn hankel_h1(n: u32, x: f64) -> PyResult<Complex64> {
    specfun::hankel_h1(n, x).map_err(to_py)
}

/// Uniform large-order approximation of `H⁽¹⁾_n(nρ)`: `(value, regime, err_estimate)`.
#[pyfunction]
#[pyo3(signature = (n, rho, order = 2))]
fn hankel_uniform(n: u32, rho: f64, order: u32) -> PyResult<(Complex64, String, f64)> {
    let v = specfun::hankel_uniform(n, rho, order).map_err(to_py)?;
    Ok((v.value, format!("{:?}", v.regime), v.err_estimate))
}

/// The uniform Airy variable `ζ̃(ρ)`.
#[pyfunction]
fn zeta_tilde(rho: f64) -> PyResult<f64> {
    specfun::zeta_tilde(rho).map_err(to_py)
}

// ----------------------------------------------------------------- phases --

/// `Γ₀(α̃, s)`.
#[pyfunction]
fn gamma0(alpha_t: f64, s: f64) -> PyResult<f64> {
    phases::gamma0(alpha_t, s).map_err(to_py)
}

/// `Γ̃(α̃, r)` seen from normal angle `y_q`.
#[pyfunction]
fn gamma_tilde(alpha_t: f64, r: f64, y_q: f64) -> PyResult<f64> {
    phases::gamma_tilde(alpha_t, r, y_q).map_err(to_py)
}

/// Residuals of the two eikonal equations.
#[pyfunction]
fn eikonal_residual(x: f64, y: f64, z: f64, alpha: f64, gamma: f64) -> PyResult<(f64, f64)> {
    phases::eikonal_residual(x, y, z, alpha, gamma).map_err(to_py)
}

/// Critical points of the boundary phase: list of `(θ, z, regime)`.
#[pyfunction]
fn find_critical_points(q: (f64, f64, f64), s: f64) -> PyResult<Vec<(f64, f64, String)>> {
    let pts = phases::find_critical_points(&point(q)?, &source(s)?);
    Ok(pts.into_iter().map(|c| (c.theta, c.z, format!("{:?}", c.regime))).collect())
}

/// Distance between `Q` and the source.
#[pyfunction]
fn dist(q: (f64, f64, f64), s: f64) -> PyResult<f64> {
    Ok(phases::dist_cyl(&point(q)?, &source(s)?))
}

// ------------------------------------------------------------------ green --

/// Exterior Dirichlet resolvent `𝓡(Q, Q₀, τ)`.
#[pyfunction]
#[pyo3(signature = (q, s, tau, tol = None, n_max = None))]
fn resolvent(q: (f64, f64, f64), s: f64, tau: f64, tol: Option<f64>, n_max: Option<usize>) -> PyResult<Complex64> {
    let v = green::resolvent(&point(q)?, &source(s)?, tau, &policy(tol, n_max)).map_err(to_py)?;
    Ok(v.value)
}

/// Free resolvent `e^{iτd}/(4πd)`.
#[pyfunction]
fn free_resolvent(q: (f64, f64, f64), s: f64, tau: f64) -> PyResult<Complex64> {
    green::free_resolvent(&point(q)?, &source(s)?, tau).map_err(to_py)
}

/// Modal Green function `G_n(r, r̃; κ)`.
#[pyfunction]
fn modal_green(n: u32, r: f64, r_src: f64, kappa: f64) -> PyResult<Complex64> {
    green::modal_green(n, r, r_src, kappa).map_err(to_py)
}

// ------------------------------------------------------------- propagator --

/// Band-limited half-wave kernel outside the cylinder.
#[pyfunction]
#[pyo3(signature = (q, s, t, window, tol = None, n_max = None))]
fn wave_kernel(
    q: (f64, f64, f64),
    s: f64,
    t: f64,
    window: &PyFreqWindow,
    tol: Option<f64>,
    n_max: Option<usize>,
) -> PyResult<Complex64> {
    let v = propagator::wave_kernel(&point(q)?, &source(s)?, t, &window.inner, &policy(tol, n_max)).map_err(to_py)?;
    Ok(v.value)
}

/// The same kernel with the obstacle removed (closed form).
#[pyfunction]
fn free_wave_kernel(q: (f64, f64, f64), s: f64, t: f64, window: &PyFreqWindow) -> PyResult<Complex64> {
    propagator::free_wave_kernel(&point(q)?, &source(s)?, t, &window.inner).map_err(to_py)
}

/// Single-layer term `u#`, with `free_wave_kernel − u# = wave_kernel`.
#[pyfunction]
#[pyo3(signature = (q, s, t, window, tol = None))]
fn kirchhoff_single_layer(q: (f64, f64, f64), s: f64, t: f64, window: &PyFreqWindow, tol: Option<f64>) -> PyResult<Complex64> {
    let v = propagator::kirchhoff_single_layer(&point(q)?, &source(s)?, t, &window.inner, &policy(tol, None))
        .map_err(to_py)?;
    Ok(v.value)
}

/// Dispersion scan; returns one dict per `(h, t)` row.
#[pyfunction]
#[pyo3(signature = (h, t, kind = "high", model = "exact", s = 2.0, search = None, seed = None))]
#[allow(clippy::too_many_arguments)]
fn dispersion_scan<'py>(
    py: Python<'py>,
    h: Vec<f64>,
    t: Vec<f64>,
    kind: &str,
    model: &str,
    s: f64,
    search: Option<(usize, usize, usize)>,
    seed: Option<u64>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let kind = match kind {
        "high" => WindowKind::High,
        "low" => WindowKind::Low,
        _ => return Err(PyValueError::new_err(format!("kind must be 'high' or 'low', got {kind:?}"))),
    };
    let model = match model {
        "exact" => KernelModel::Exact,
        "free" => KernelModel::Free,
        _ => return Err(PyValueError::new_err(format!("model must be 'exact' or 'free', got {model:?}"))),
    };
    let mut sp = SearchPolicy { jitter_seed: seed, ..SearchPolicy::default() };
    if let Some((n_r, n_theta, n_z)) = search {
        sp.n_r = n_r;
        sp.n_theta = n_theta;
        sp.n_z = n_z;
    }
    let setup = ScanSetup { kind, model, s, smoothness: Smoothness::C4 };
    let report = py
        .allow_threads(|| propagator::dispersion_scan(&h, &t, &setup, &sp, &TruncationPolicy::default()))
        .map_err(to_py)?;
    report
        .rows
        .iter()
        .map(|r| {
            let d = PyDict::new_bound(py);
            d.set_item("h", r.h)?;
            d.set_item("t", r.t)?;
            d.set_item("sup_abs", r.sup_abs)?;
            d.set_item("bound", r.bound)?;
            d.set_item("ratio", r.ratio)?;
            d.set_item("argmax", (r.argmax_q.r, r.argmax_q.theta, r.argmax_q.z))?;
            d.set_item("n_evals", r.n_evals)?;
            Ok(d)
        })
        .collect()
}

// -------------------------------------------------------------------- cli --

/// Run a suite from a TOML configuration (or just a command name, with
/// defaults). Writes the usual artifacts and returns `(exit_code, summary_json)`.
#[pyfunction]
#[pyo3(signature = (config, output_dir = None))]
fn run(py: Python<'_>, config: &str, output_dir: Option<std::path::PathBuf>) -> PyResult<(i32, String)> {
    let parsed = if config.contains('=') {
        RunConfig::from_toml(config)
    } else {
        RunConfig::from_toml(&format!("command = {config:?}"))
    };
    let mut cfg = match parsed {
        Ok(c) => c,
        Err(e) => return Ok((cli::exit_code_for(&e), error_json(&e))),
    };
    if let Some(dir) = output_dir {
        cfg.output_dir = dir;
    }
    match py.allow_threads(|| cli::run(&cfg)) {
        Ok(summary) => {
            let json = cli::summary_json(&summary).map_err(to_py)?;
            Ok((summary.exit_code(), json))
        }
        Err(e) => Ok((cli::exit_code_for(&e), error_json(&e))),
    }
}

fn error_json(e: &Error) -> String {
    format!("{{\"error\": {:?}}}", e.to_string())
}

#[pymodule]
fn cylwave(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFreqWindow>()?;
    m.add_function(wrap_pyfunction!(airy_all, m)?)?;
    m.add_function(wrap_pyfunction!(bessel_j, m)?)?;
    m.add_function(wrap_pyfunction!(hankel_h1, m)?)?;
    m.add_function(wrap_pyfunction!(hankel_uniform, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(gamma0, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(eikonal_residual, m)?)?;
    m.add_function(wrap_pyfunction!(find_critical_points, m)?)?;
    m.add_function(wrap_pyfunction!(dist, m)?)?;
    m.add_function(wrap_pyfunction!(resolvent, m)?)?;
    m.add_function(wrap_pyfunction!(free_resolvent, m)?)?;
    m.add_function(wrap_pyfunction!(modal_green, m)?)?;
    m.add_function(wrap_pyfunction!(wave_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(free_wave_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(kirchhoff_single_layer, m)?)?;
    m.add_function(wrap_pyfunction!(dispersion_scan, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
