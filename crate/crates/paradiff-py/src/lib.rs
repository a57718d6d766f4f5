//! Python bindings for grids, fields, norms, symbols, paradifferential
//! operators, the wave solver and the experiment suites.

use num_complex::Complex64;
use paradiff::coefficients::{self, Axis, CoefficientField};
use paradiff::function_spaces::{self, NormMode, NormSpec, Sampled};
use paradiff::harness::{self, ExperimentConfig};
use paradiff::paraops::{self, LinearOp};
use paradiff::parasymbols::{self, Symbol};
use paradiff::solver::{self, CauchyProblem, EnergySettings};
use paradiff::spectral_core::{self as core, LpMode, PeriodicGrid, ScalarField};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use std::sync::Arc;

fn err(e: paradiff::Error) -> PyErr {
    match e {
        paradiff::Error::Config(_) | paradiff::Error::InvalidParameter(_) | paradiff::Error::InvalidGrid(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn lp_mode(gamma: Option<f64>) -> LpMode {
    gamma.map_or(LpMode::Classical, LpMode::Gamma)
}

#[pyclass(name = "Grid", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGrid(PeriodicGrid);

#[pymethods]
impl PyGrid {
    #[new]
    #[pyo3(signature = (n, dim = 1))]
    fn new(n: usize, dim: usize) -> PyResult<Self> {
        core::make_grid(n, dim).map(Self).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn dx(&self) -> f64 {
        self.0.dx()
    }

    fn points(&self) -> Vec<f64> {
        self.0.points()
    }

    fn freqs(&self) -> Vec<i64> {
        (0..self.0.n()).map(|i| self.0.freq(i)).collect()
    }

    fn __repr__(&self) -> String {
        format!("Grid(n={}, dim={})", self.0.n(), self.0.dim())
    }
}

#[pyclass(name = "Field", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyField(ScalarField);

#[pymethods]
impl PyField {
    #[staticmethod]
    fn from_real(grid: &PyGrid, values: Vec<f64>) -> PyResult<Self> {
        ScalarField::from_real(grid.0, &values).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_complex(grid: &PyGrid, values: Vec<Complex64>) -> PyResult<Self> {
        ScalarField::new(grid.0, values).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_spectrum(grid: &PyGrid, spectrum: Vec<Complex64>) -> PyResult<Self> {
        ScalarField::from_spectrum(grid.0, spectrum).map(Self).map_err(err)
    }

    /// Random field with spectral amplitude `(1+|k|)^(-decay)`.
    #[staticmethod]
    #[pyo3(signature = (grid, seed, decay = 0.0))]
    fn random(grid: &PyGrid, seed: u64, decay: f64) -> Self {
        let mut rng = paradiff::random::stream(seed, "python");
        Self(core::random_field(grid.0, &mut rng, |k| (1.0 + k).powf(-decay)))
    }

    #[getter]
    fn grid(&self) -> PyGrid {
        PyGrid(self.0.grid())
    }

    fn samples(&self) -> Vec<Complex64> {
        self.0.samples().to_vec()
    }

    fn real(&self) -> Vec<f64> {
        self.0.real_parts()
    }

    fn spectrum(&self) -> Vec<Complex64> {
        self.0.spectrum().to_vec()
    }

    fn norm_l2(&self) -> f64 {
        self.0.norm_l2()
    }

    fn norm_inf(&self) -> f64 {
        self.0.norm_inf()
    }

    fn inner(&self, other: &PyField) -> Complex64 {
        self.0.inner(&other.0)
    }

    fn add(&self, other: &PyField) -> PyResult<Self> {
        self.0.add(&other.0).map(Self).map_err(err)
    }

    fn sub(&self, other: &PyField) -> PyResult<Self> {
        self.0.sub(&other.0).map(Self).map_err(err)
    }

    fn scale(&self, c: Complex64) -> Self {
        Self(self.0.scale(c))
    }

    fn shift(&self, s: usize) -> Self {
        Self(self.0.shift(s))
    }

    #[pyo3(signature = (j, gamma = None))]
    fn lp_block(&self, j: usize, gamma: Option<f64>) -> PyResult<Self> {
        core::lp_block(&self.0, j, lp_mode(gamma)).map(Self).map_err(err)
    }

    #[pyo3(signature = (gamma = None))]
    fn lp_decompose(&self, gamma: Option<f64>) -> PyResult<Vec<Self>> {
        Ok(core::lp_decompose(&self.0, lp_mode(gamma)).map_err(err)?.into_iter().map(Self).collect())
    }

    fn sobolev_norm(&self, s: f64) -> f64 {
        function_spaces::sobolev_norm(&self.0, s)
    }

    /// `H^{s + α log}_γ` norm, computed directly or from dyadic blocks.
    #[pyo3(signature = (s, alpha, gamma, dyadic = false))]
    fn log_sobolev_norm(&self, s: f64, alpha: f64, gamma: f64, dyadic: bool) -> PyResult<f64> {
        let mode = if dyadic { NormMode::Dyadic } else { NormMode::Direct };
        let spec = NormSpec::new(s, alpha, gamma, mode).map_err(err)?;
        Ok(function_spaces::log_sobolev_norm(&self.0, &spec))
    }

    fn __len__(&self) -> usize {
        self.0.grid().len()
    }
}

/// Sampled Zygmund seminorm of periodic real samples with spacing `dx`.
#[pyfunction]
fn zygmund_seminorm(values: Vec<f64>, dx: f64) -> PyResult<f64> {
    Ok(function_spaces::zygmund_seminorm(&Sampled::periodic_real(&values, dx).map_err(err)?))
}

#[pyfunction]
fn holder_seminorm(values: Vec<f64>, dx: f64, theta: f64) -> PyResult<f64> {
    function_spaces::holder_seminorm(&Sampled::periodic_real(&values, dx).map_err(err)?, theta).map_err(err)
}

fn parse_axis(axis: &str) -> PyResult<Axis> {
    harness::config::parse_axis(axis).map_err(err)
}

#[pyclass(name = "Coefficient", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCoefficient(CoefficientField);

#[pymethods]
impl PyCoefficient {
    /// Weierstrass-Zygmund field of the given depth, tabulated at `nt` times.
    #[staticmethod]
    #[pyo3(signature = (grid, depth, seed, axis = "tx", final_time = 1.0, nt = 1025, lambda0 = 1.0, big_lambda0 = 2.0))]
    #[allow(clippy::too_many_arguments)]
    fn weierstrass(
        grid: &PyGrid,
        depth: usize,
        seed: u64,
        axis: &str,
        final_time: f64,
        nt: usize,
        lambda0: f64,
        big_lambda0: f64,
    ) -> PyResult<Self> {
        coefficients::weierstrass_zygmund(grid.0, depth, seed, parse_axis(axis)?, final_time, nt, lambda0, big_lambda0)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (grid, c, final_time = 1.0))]
    fn constant(grid: &PyGrid, c: f64, final_time: f64) -> PyResult<Self> {
        CoefficientField::constant(grid.0, c, final_time, 2).map(Self).map_err(err)
    }

    #[getter]
    fn nt(&self) -> usize {
        self.0.nt()
    }

    #[getter]
    fn final_time(&self) -> f64 {
        self.0.final_time()
    }

    fn row(&self, i: usize) -> PyResult<Vec<f64>> {
        if i >= self.0.nt() {
            return Err(PyValueError::new_err(format!("row {i} out of {}", self.0.nt())));
        }
        Ok(self.0.row(i).to_vec())
    }

    fn slice_at(&self, t: f64) -> Vec<f64> {
        self.0.slice_at(t)
    }
}

#[pyclass(name = "Symbol", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySymbol(Symbol);

#[pymethods]
impl PySymbol {
    /// `Λ(ξ, γ)^s`.
    #[staticmethod]
    fn lambda_power(grid: &PyGrid, gamma: f64, s: f64) -> PyResult<Self> {
        Symbol::lambda_power(grid.0, gamma, s).map(Self).map_err(err)
    }

    /// Order-zero symbol `b(x)`.
    #[staticmethod]
    fn function_of_x(grid: &PyGrid, gamma: f64, b: Vec<f64>) -> PyResult<Self> {
        Symbol::function_of_x(grid.0, gamma, &b).map(Self).map_err(err)
    }

    /// `a(t, x) ξ² + γ²` at the given times, without time mollification.
    #[staticmethod]
    fn alpha_tilde(a: &PyCoefficient, gamma: f64, times: Vec<f64>) -> PyResult<Self> {
        parasymbols::build_alpha_tilde(&a.0, gamma, &times).map(Self).map_err(err)
    }

    fn mul(&self, other: &PySymbol) -> PyResult<Self> {
        self.0.mul(&other.0).map(Self).map_err(err)
    }

    fn add(&self, other: &PySymbol) -> PyResult<Self> {
        self.0.add(&other.0).map(Self).map_err(err)
    }

    fn power(&self, p: f64) -> PyResult<Self> {
        parasymbols::symbol_power(&self.0, p).map(Self).map_err(err)
    }

    #[pyo3(signature = (ti, x, k))]
    fn value(&self, ti: usize, x: usize, k: i64) -> Complex64 {
        self.0.value(ti, x, k)
    }

    #[getter]
    fn n_times(&self) -> usize {
        self.0.n_times()
    }

    /// Smooths with the default admissible cutoff and quantizes.
    fn quantize(&self) -> PyResult<PyParaOp> {
        Ok(PyParaOp(Arc::new(paraops::quantize_raw(&self.0).map_err(err)?)))
    }
}

#[pyclass(name = "ParaOp", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyParaOp(Arc<paraops::ParaOp>);

#[pymethods]
impl PyParaOp {
    #[pyo3(signature = (u, ti = 0))]
    fn apply(&self, u: &PyField, ti: usize) -> PyResult<PyField> {
        self.0.apply(&u.0, ti).map(PyField).map_err(err)
    }

    fn adjoint(&self) -> Self {
        Self(Arc::new(self.0.adjoint()))
    }

    /// Fitted order over the default dyadic bands: a dict with `m`,
    /// `residual`, `delta`, `bands` and `ratios`.
    #[pyo3(signature = (ti = 0, trials = 4, seed = 1))]
    fn order_fit<'py>(&self, py: Python<'py>, ti: usize, trials: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
        let grid = self.0.grid();
        let op: LinearOp = self.0.at(ti).map_err(err)?;
        let fit = paraops::operator_order_fit(&op, &grid, self.0.gamma, &paraops::default_bands(&grid), trials, seed)
            .map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("m", fit.m)?;
        d.set_item("residual", fit.residual)?;
        d.set_item("delta", fit.delta)?;
        d.set_item("m_with_log", fit.m_with_log)?;
        d.set_item("bands", fit.bands)?;
        d.set_item("ratios", fit.ratios)?;
        Ok(d)
    }
}

#[pyclass(name = "Trajectory", frozen, skip_from_py_object)]
struct PyTrajectory {
    #[pyo3(get)]
    times: Vec<f64>,
    #[pyo3(get)]
    dt: f64,
    #[pyo3(get)]
    steps: usize,
    u: Vec<ScalarField>,
    dtu: Vec<ScalarField>,
    #[pyo3(get)]
    energy: Vec<f64>,
    #[pyo3(get)]
    energy_times: Vec<f64>,
    #[pyo3(get)]
    gronwall_lambda: Option<f64>,
}

#[pymethods]
impl PyTrajectory {
    fn u(&self, i: usize) -> PyResult<PyField> {
        self.u.get(i).cloned().map(PyField).ok_or_else(|| PyValueError::new_err("sample index out of range"))
    }

    fn dtu(&self, i: usize) -> PyResult<PyField> {
        self.dtu.get(i).cloned().map(PyField).ok_or_else(|| PyValueError::new_err("sample index out of range"))
    }

    fn __len__(&self) -> usize {
        self.times.len()
    }
}

/// Solves `∂²_t u - ∂_x(a ∂_x u) = 0` and evaluates the energy along the way.
#[pyfunction]
#[pyo3(signature = (a, u0, u1, final_time, dt = None, gamma = 1.0))]
fn solve(
    py: Python<'_>,
    a: &PyCoefficient,
    u0: &PyField,
    u1: &PyField,
    final_time: f64,
    dt: Option<f64>,
    gamma: f64,
) -> PyResult<PyTrajectory> {
    let mut p = CauchyProblem::new(a.0.clone(), u0.0.clone(), u1.0.clone(), final_time).map_err(err)?;
    if let Some(dt) = dt {
        p = p.with_dt(dt);
    }
    let (traj, trace) = py
        .detach(|| {
            let traj = solver::solve(&p)?;
            let settings = EnergySettings { gamma, ..Default::default() };
            let trace = solver::energy_trace(&p, &traj, &settings)?;
            Ok::<_, paradiff::Error>((traj, trace))
        })
        .map_err(err)?;
    Ok(PyTrajectory {
        times: traj.times,
        dt: traj.dt,
        steps: traj.steps,
        u: traj.u,
        dtu: traj.dtu,
        energy: trace.rows.iter().map(|r| r.e).collect(),
        energy_times: trace.rows.iter().map(|r| r.t).collect(),
        gronwall_lambda: trace.fit.map(|f| f.lambda),
    })
}

/// Runs a suite at its defaults, optionally from TOML text, and returns a
/// dict with `passed`, `checks` and `text`.
#[pyfunction]
#[pyo3(signature = (experiment, seed = None, config = None))]
fn run_suite<'py>(
    py: Python<'py>,
    experiment: &str,
    seed: Option<u64>,
    config: Option<&str>,
) -> PyResult<Bound<'py, PyDict>> {
    let mut cfg = match config {
        Some(text) => ExperimentConfig::from_toml_str(text).map_err(err)?,
        None => ExperimentConfig::default_for(experiment).map_err(err)?,
    };
    if cfg.experiment != experiment {
        return Err(PyValueError::new_err(format!("config names {:?}, not {experiment:?}", cfg.experiment)));
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let rep = py.detach(|| harness::run_suite(&cfg)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("passed", rep.passed())?;
    let checks: Vec<(String, f64, f64, bool, bool)> =
        rep.checks.iter().map(|c| (c.name.clone(), c.value, c.limit, c.gated, c.passed())).collect();
    d.set_item("checks", checks)?;
    d.set_item("text", rep.text())?;
    Ok(d)
}

#[pyfunction]
fn suites() -> Vec<&'static str> {
    harness::SUITES.to_vec()
}

#[pymodule]
fn paradiff_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGrid>()?;
    m.add_class::<PyField>()?;
    m.add_class::<PyCoefficient>()?;
    m.add_class::<PySymbol>()?;
    m.add_class::<PyParaOp>()?;
    m.add_class::<PyTrajectory>()?;
    m.add_function(wrap_pyfunction!(zygmund_seminorm, m)?)?;
    m.add_function(wrap_pyfunction!(holder_seminorm, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    m.add_function(wrap_pyfunction!(suites, m)?)?;
    Ok(())
}
