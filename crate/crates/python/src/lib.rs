//! Python bindings: `import susyqm`.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::Serialize;

use susyqm::harness::{self, Method, ReportFormat, TableOptions, ValidateOptions};
use susyqm::numerics;
use susyqm::wavefunction::{build_state, ExactWavefunction, Parity};
use susyqm::ModelParams;

create_exception!(susyqm, SusyError, PyValueError, "Invalid parameters or a failed solve.");

fn err(e: susyqm::Error) -> PyErr {
    SusyError::new_err(e.to_string())
}

fn to_python<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| SusyError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A superpotential family with fixed parameters.
#[pyclass(frozen, name = "Model", module = "susyqm")]
struct Model {
    inner: ModelParams,
}

#[pymethods]
impl Model {
    /// `W = A tanh px + B tanh 6px` with `A = -B0/6 + p`.
    #[staticmethod]
    #[pyo3(signature = (b0 = 24.0, p = 0.35))]
    fn tanh6(b0: f64, p: f64) -> PyResult<Self> {
        ModelParams::tanh6(b0, p).map(|inner| Model { inner }).map_err(err)
    }

    /// `W = A tanh px + B sech px`.
    #[staticmethod]
    #[pyo3(signature = (a = 7.0, b = 4.0, p = 1.0))]
    fn scarf2(a: f64, b: f64, p: f64) -> PyResult<Self> {
        ModelParams::scarf2(a, b, p).map(|inner| Model { inner }).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (omega = 1.0))]
    fn oscillator(omega: f64) -> PyResult<Self> {
        ModelParams::oscillator(omega).map(|inner| Model { inner }).map_err(err)
    }

    #[getter]
    fn family(&self) -> String {
        self.inner.family().to_string()
    }

    #[getter]
    fn n_max(&self) -> usize {
        self.inner.n_max()
    }

    #[getter]
    fn shift(&self) -> f64 {
        self.inner.shift()
    }

    /// Horizontal asymptote of the potential, or None when the family has none.
    #[getter]
    fn asymptote(&self) -> Option<f64> {
        self.inner.asymptote().ok()
    }

    #[getter]
    fn continuum_threshold(&self) -> Option<f64> {
        self.inner.continuum_threshold()
    }

    fn exact_energy(&self, n: usize) -> PyResult<f64> {
        self.inner.exact_energy(n).map_err(err)
    }

    /// Exact levels `E_0 .. E_n_max`.
    fn spectrum(&self) -> Vec<f64> {
        self.inner.exact_spectrum().levels.into_iter().map(|(_, e)| e).collect()
    }

    fn potential(&self, x: f64) -> f64 {
        self.inner.potential(x)
    }

    fn state(&self, n: usize) -> PyResult<State> {
        build_state(&self.inner, n).map(|inner| State { inner }).map_err(err)
    }

    fn __repr__(&self) -> String {
        match self.inner {
            ModelParams::Tanh6 { b0, p } => format!("Model.tanh6(b0={b0}, p={p})"),
            ModelParams::ScarfII { a, b, p } => format!("Model.scarf2(a={a}, b={b}, p={p})"),
            ModelParams::HarmonicOscillatorOracle { omega } => format!("Model.oscillator(omega={omega})"),
        }
    }
}

/// Grid and tolerance settings shared by the numerical solvers.
#[pyclass(frozen, name = "SolverConfig", module = "susyqm")]
struct SolverConfig {
    inner: numerics::SolverConfig,
}

#[pymethods]
impl SolverConfig {
    /// Defaults sized for `model` (or generic defaults), with keyword overrides.
    #[new]
    #[pyo3(signature = (model = None, *, half_width = None, grid_points = None, energy_tol = None, quad_tol = None, allow_above_threshold = None))]
    fn new(
        model: Option<PyRef<'_, Model>>,
        half_width: Option<f64>,
        grid_points: Option<usize>,
        energy_tol: Option<f64>,
        quad_tol: Option<f64>,
        allow_above_threshold: Option<bool>,
    ) -> PyResult<Self> {
        let mut c = match model {
            Some(m) => numerics::SolverConfig::for_model(&m.inner),
            None => numerics::SolverConfig::default(),
        };
        c.half_width = half_width.unwrap_or(c.half_width);
        c.grid_points = grid_points.unwrap_or(c.grid_points);
        c.energy_tol = energy_tol.unwrap_or(c.energy_tol);
        c.quad_tol = quad_tol.unwrap_or(c.quad_tol);
        c.allow_above_threshold = allow_above_threshold.unwrap_or(c.allow_above_threshold);
        c.validate().map_err(err)?;
        Ok(SolverConfig { inner: c })
    }

    #[getter]
    fn half_width(&self) -> f64 {
        self.inner.half_width
    }

    #[getter]
    fn grid_points(&self) -> usize {
        self.inner.grid_points
    }

    #[getter]
    fn energy_tol(&self) -> f64 {
        self.inner.energy_tol
    }

    #[getter]
    fn quad_tol(&self) -> f64 {
        self.inner.quad_tol
    }

    #[getter]
    fn allow_above_threshold(&self) -> bool {
        self.inner.allow_above_threshold
    }

    fn __repr__(&self) -> String {
        let c = &self.inner;
        format!(
            "SolverConfig(half_width={}, grid_points={}, energy_tol={}, quad_tol={}, allow_above_threshold={})",
            c.half_width,
            c.grid_points,
            c.energy_tol,
            c.quad_tol,
            if c.allow_above_threshold { "True" } else { "False" }
        )
    }
}

/// Closed-form eigenfunction built by the ladder operators.
#[pyclass(frozen, name = "State", module = "susyqm")]
struct State {
    inner: ExactWavefunction,
}

#[pymethods]
impl State {
    /// Unnormalized value at `x`.
    fn __call__(&self, x: f64) -> f64 {
        self.inner.evaluate(x)
    }

    fn evaluate(&self, xs: Vec<f64>) -> Vec<f64> {
        xs.into_iter().map(|x| self.inner.evaluate(x)).collect()
    }

    fn node_count(&self, lo: f64, hi: f64) -> usize {
        self.inner.node_count((lo, hi))
    }

    #[getter]
    fn decay_rate(&self) -> f64 {
        self.inner.decay_rate()
    }

    /// "even", "odd" or None.
    #[getter]
    fn parity(&self) -> Option<&'static str> {
        self.inner.parity().map(|p| match p {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

fn config_for(model: &Model, config: Option<PyRef<'_, SolverConfig>>) -> numerics::SolverConfig {
    config.map(|c| c.inner).unwrap_or_else(|| numerics::SolverConfig::for_model(&model.inner))
}

/// Lowest `m` finite-difference eigenvalues.
#[pyfunction]
#[pyo3(signature = (model, m, config = None))]
fn fd_spectrum(py: Python<'_>, model: PyRef<'_, Model>, m: usize, config: Option<PyRef<'_, SolverConfig>>) -> PyResult<Vec<f64>> {
    let (params, cfg) = (model.inner, config_for(&model, config));
    py.detach(|| numerics::fd_spectrum(&params, &cfg, m)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (model, n, config = None))]
fn wkb_energy(model: PyRef<'_, Model>, n: usize, config: Option<PyRef<'_, SolverConfig>>) -> PyResult<f64> {
    numerics::wkb_energy(&model.inner, n, &config_for(&model, config)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (model, n, config = None))]
fn swkb_energy(model: PyRef<'_, Model>, n: usize, config: Option<PyRef<'_, SolverConfig>>) -> PyResult<f64> {
    numerics::swkb_energy(&model.inner, n, &config_for(&model, config)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (model, n, config = None))]
fn shooting_energy(py: Python<'_>, model: PyRef<'_, Model>, n: usize, config: Option<PyRef<'_, SolverConfig>>) -> PyResult<f64> {
    let (params, cfg) = (model.inner, config_for(&model, config));
    py.detach(|| numerics::shooting_solve(&params, &cfg, n)).map_err(err)
}

/// Observed finite-difference convergence order for level `n`.
#[pyfunction]
#[pyo3(signature = (model, n, config = None))]
fn richardson_order(py: Python<'_>, model: PyRef<'_, Model>, n: usize, config: Option<PyRef<'_, SolverConfig>>) -> PyResult<f64> {
    let (params, cfg) = (model.inner, config_for(&model, config));
    py.detach(|| numerics::richardson_check(&params, n, &cfg)).map_err(err)
}

fn parse_methods(methods: Option<Vec<String>>) -> PyResult<Vec<Method>> {
    match methods {
        None => Ok(Method::ALL.to_vec()),
        Some(names) => names
            .iter()
            .map(|s| s.parse::<Method>().map_err(|e| SusyError::new_err(e.to_string())))
            .collect(),
    }
}

/// Comparison table as a list of row dicts.
#[pyfunction]
#[pyo3(signature = (model, config = None, methods = None, replicate_above_asymptote = false))]
fn build_table<'py>(
    py: Python<'py>,
    model: PyRef<'_, Model>,
    config: Option<PyRef<'_, SolverConfig>>,
    methods: Option<Vec<String>>,
    replicate_above_asymptote: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = TableOptions { methods: parse_methods(methods)?, replicate_above_asymptote };
    let (params, cfg) = (model.inner, config_for(&model, config));
    let rows = py.detach(|| harness::build_table(&params, &cfg, &opts)).map_err(err)?;
    to_python(py, &rows)
}

/// Comparison table rendered as "csv", "json" or "pretty" text.
#[pyfunction]
#[pyo3(signature = (model, format = "csv", config = None, methods = None, replicate_above_asymptote = false))]
fn table_report(
    py: Python<'_>,
    model: PyRef<'_, Model>,
    format: &str,
    config: Option<PyRef<'_, SolverConfig>>,
    methods: Option<Vec<String>>,
    replicate_above_asymptote: bool,
) -> PyResult<String> {
    let format: ReportFormat = format.parse().map_err(|e: susyqm::Error| SusyError::new_err(e.to_string()))?;
    let opts = TableOptions { methods: parse_methods(methods)?, replicate_above_asymptote };
    let (params, cfg) = (model.inner, config_for(&model, config));
    let rows = py.detach(|| harness::build_table(&params, &cfg, &opts)).map_err(err)?;
    String::from_utf8(harness::emit_report(&rows, format, None)).map_err(|e| SusyError::new_err(e.to_string()))
}

/// Invariant suite as a dict with `params`, `n_max` and `checks`.
#[pyfunction]
#[pyo3(signature = (model, config = None, inject_fault = false))]
fn validate<'py>(
    py: Python<'py>,
    model: PyRef<'_, Model>,
    config: Option<PyRef<'_, SolverConfig>>,
    inject_fault: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let (params, cfg) = (model.inner, config_for(&model, config));
    let report = py.detach(|| harness::validate_all(&params, &cfg, ValidateOptions { inject_fault }));
    to_python(py, &report)
}

#[pymodule]
#[pyo3(name = "susyqm")]
pub fn susyqm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SusyError", m.py().get_type::<SusyError>())?;
    m.add_class::<Model>()?;
    m.add_class::<SolverConfig>()?;
    m.add_class::<State>()?;
    m.add_function(wrap_pyfunction!(fd_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(wkb_energy, m)?)?;
    m.add_function(wrap_pyfunction!(swkb_energy, m)?)?;
    m.add_function(wrap_pyfunction!(shooting_energy, m)?)?;
    m.add_function(wrap_pyfunction!(richardson_order, m)?)?;
    m.add_function(wrap_pyfunction!(build_table, m)?)?;
    m.add_function(wrap_pyfunction!(table_report, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    Ok(())
}
