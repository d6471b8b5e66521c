// SPDX-License-Identifier: Apache-2.0

//! Python bindings for `nvscramble`.
//!
//! Matrices cross the boundary as nested lists of complex numbers, states as
//! a label ("00", "01", "10", "11", "phi-minus") or four complex amplitudes.

use num_complex::Complex64;
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use nvscramble::channel::{self, QuantumChannelParams};
use nvscramble::correlators::{self, ProbePair};
use nvscramble::hybrid::{self, Control, Feedback, HybridState, OscParams, Regime};
use nvscramble::runner::{self, Payload};
use nvscramble::spin_algebra::{self, Axis, Operator4, SpinParams, SpinState};
use nvscramble::Error;

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e.category() {
        "integration" => PyRuntimeError::new_err(msg),
        "io" => PyOSError::new_err(msg),
        _ => PyValueError::new_err(msg),
    }
}

fn matrix_from(rows: Vec<Vec<Complex64>>) -> PyResult<Operator4> {
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(PyValueError::new_err("expected a 4x4 matrix"));
    }
    Ok(Operator4::from_fn(|i, j| rows[i][j]))
}

fn matrix_to(m: &Operator4) -> Vec<Vec<Complex64>> {
    (0..4).map(|i| (0..4).map(|j| m[(i, j)]).collect()).collect()
}

#[derive(FromPyObject)]
enum StateArg {
    Label(String),
    Amplitudes(Vec<Complex64>),
}

fn state_from(arg: StateArg) -> PyResult<SpinState> {
    match arg {
        StateArg::Label(l) => match l.as_str() {
            "00" => Ok(SpinState::basis(0)),
            "01" => Ok(SpinState::basis(1)),
            "10" => Ok(SpinState::basis(2)),
            "11" => Ok(SpinState::basis(3)),
            "phi-minus" => Ok(SpinState::phi_minus()),
            other => Err(PyValueError::new_err(format!("unknown state label '{other}'"))),
        },
        StateArg::Amplitudes(a) => {
            let amps: [Complex64; 4] = a
                .try_into()
                .map_err(|_| PyValueError::new_err("expected four amplitudes"))?;
            SpinState::normalized(amps).map_err(to_py)
        }
    }
}

fn axis(s: &str) -> PyResult<Axis> {
    s.parse().map_err(PyValueError::new_err)
}

#[pyclass(name = "SpinParams", module = "nvscramble_py", from_py_object)]
#[derive(Clone)]
struct PySpinParams {
    inner: SpinParams,
}

#[pymethods]
impl PySpinParams {
    #[new]
    fn new(omega0: f64, g: f64, alpha: f64) -> Self {
        PySpinParams {
            inner: SpinParams::new(omega0, g, alpha),
        }
    }

    /// α from tan α = −ω_R/δ.
    #[staticmethod]
    fn from_rabi(omega_r: f64, delta: f64, g: f64) -> PyResult<Self> {
        Ok(PySpinParams {
            inner: SpinParams::from_rabi(omega_r, delta, g).map_err(to_py)?,
        })
    }

    #[getter]
    fn omega0(&self) -> f64 {
        self.inner.omega0
    }

    #[getter]
    fn g(&self) -> f64 {
        self.inner.g
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha
    }

    fn __repr__(&self) -> String {
        format!(
            "SpinParams(omega0={}, g={}, alpha={})",
            self.inner.omega0, self.inner.g, self.inner.alpha
        )
    }
}

#[pyclass(name = "OscParams", module = "nvscramble_py", from_py_object)]
#[derive(Clone)]
struct PyOscParams {
    inner: OscParams,
}

#[pymethods]
impl PyOscParams {
    /// Give the coupling either as `D` or as connectivity `K`.
    #[new]
    #[pyo3(signature = (omega1, omega2, *, D=None, K=None, xi=0.0, gamma=0.0, F=0.0, Omega=1.0))]
    #[allow(non_snake_case)]
    #[allow(clippy::too_many_arguments)]
    fn new(
        omega1: f64,
        omega2: f64,
        D: Option<f64>,
        K: Option<f64>,
        xi: f64,
        gamma: f64,
        F: f64,
        Omega: f64,
    ) -> PyResult<Self> {
        let base = OscParams {
            omega1,
            omega2,
            d: D.unwrap_or(0.0),
            xi,
            gamma,
            f: F,
            drive_omega: Omega,
        };
        let inner = match (D, K) {
            (Some(_), Some(_)) => return Err(PyValueError::new_err("give D or K, not both")),
            (_, Some(k)) => base.with_connectivity(k).map_err(to_py)?,
            _ => base,
        };
        inner.validate().map_err(to_py)?;
        Ok(PyOscParams { inner })
    }

    #[getter]
    #[allow(non_snake_case)]
    fn D(&self) -> f64 {
        self.inner.d
    }

    fn connectivity(&self) -> PyResult<f64> {
        hybrid::connectivity(&self.inner).map_err(to_py)
    }

    /// Regime name, or None when (F, γ, ξ) fits none of the four.
    fn regime(&self) -> Option<String> {
        Regime::classify(&self.inner).ok().map(|r| r.to_string())
    }

    fn __repr__(&self) -> String {
        let o = &self.inner;
        format!(
            "OscParams(omega1={}, omega2={}, D={}, xi={}, gamma={}, F={}, Omega={})",
            o.omega1, o.omega2, o.d, o.xi, o.gamma, o.f, o.drive_omega
        )
    }
}

#[pyclass(name = "ChannelParams", module = "nvscramble_py", from_py_object)]
#[derive(Clone)]
struct PyChannelParams {
    inner: QuantumChannelParams,
}

#[pymethods]
impl PyChannelParams {
    #[new]
    #[pyo3(signature = (omega0, omega, g, n, beta=0.0))]
    fn new(omega0: f64, omega: f64, g: f64, n: f64, beta: f64) -> PyResult<Self> {
        Ok(PyChannelParams {
            inner: QuantumChannelParams::new(omega0, omega, g, n, beta).map_err(to_py)?,
        })
    }

    #[getter]
    fn coupling0(&self) -> f64 {
        self.inner.coupling0()
    }

    #[getter]
    fn coupling_n(&self) -> f64 {
        self.inner.coupling_n()
    }

    #[getter]
    fn zeeman_r(&self) -> f64 {
        self.inner.zeeman_r()
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "ChannelParams(omega0={}, omega={}, g={}, n={}, beta={})",
            p.omega0, p.omega, p.g, p.n, p.beta
        )
    }
}

fn diagnostics_dict<'py>(py: Python<'py>, d: &hybrid::Diagnostics) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("accepted_steps", d.steps.accepted)?;
    out.set_item("rejected_steps", d.steps.rejected)?;
    out.set_item("max_norm_drift", d.max_norm_drift)?;
    out.set_item("cumulative_renorm_drift", d.cumulative_renorm_drift)?;
    out.set_item("renormalizations", d.renormalizations)?;
    out.set_item("max_unitarity_defect", d.max_unitarity_defect)?;
    out.set_item("max_separability_defect", d.max_separability_defect)?;
    Ok(out)
}

fn columns_dict<'py>(py: Python<'py>, header: &[&str], rows: &[Vec<f64>]) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    for (k, name) in header.iter().enumerate() {
        out.set_item(*name, rows.iter().map(|r| r[k]).collect::<Vec<f64>>())?;
    }
    Ok(out)
}

/// Integrates the hybrid model; returns {"columns": {...}, "diagnostics": {...}}.
#[pyfunction]
#[pyo3(signature = (osc, spin, t_end, dt_out=0.05, tol=1e-9, state=None, x1=1.0, v1=0.0, x2=0.0, v2=0.0, feedback=true, check_regime=true))]
#[allow(clippy::too_many_arguments)]
fn integrate<'py>(
    py: Python<'py>,
    osc: PyOscParams,
    spin: PySpinParams,
    t_end: f64,
    dt_out: f64,
    tol: f64,
    state: Option<StateArg>,
    x1: f64,
    v1: f64,
    x2: f64,
    v2: f64,
    feedback: bool,
    check_regime: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let psi = match state {
        Some(s) => state_from(s)?,
        None => SpinState::up_down(),
    };
    let regime = if check_regime {
        Some(Regime::classify(&osc.inner).map_err(to_py)?)
    } else {
        None
    };
    let mut control = Control::new(t_end, dt_out, tol);
    control.feedback = if feedback { Feedback::MeanField } else { Feedback::Off };
    let initial = HybridState::new(0.0, x1, v1, x2, v2, psi);
    let run = py
        .detach(|| hybrid::integrate(&initial, &osc.inner, &spin.inner, regime, &control))
        .map_err(to_py)?;
    let cfg = runner::ScenarioConfig::custom(runner::Model::Hybrid);
    let result = runner::RunResult {
        config: cfg,
        payload: Payload::Hybrid {
            series: run.series,
            diagnostics: run.diagnostics,
        },
        wall_time: Default::default(),
    };
    let (header, rows) = runner::output::table(&result);
    let out = PyDict::new(py);
    out.set_item("columns", columns_dict(py, header, &rows)?)?;
    out.set_item("diagnostics", diagnostics_dict(py, &run.diagnostics)?)?;
    Ok(out)
}

/// (F, C) for the product-form OTOC with W on spin 1 and V on spin 2.
#[pyfunction]
#[pyo3(signature = (u, state, w="z", v="z"))]
fn otoc_product(u: Vec<Vec<Complex64>>, state: StateArg, w: &str, v: &str) -> PyResult<(Complex64, f64)> {
    let (wo, vo) = ProbePair {
        w: axis(w)?,
        v: axis(v)?,
    }
    .operators();
    let r = correlators::otoc_product(&matrix_from(u)?, &state_from(state)?, &wo, &vo).map_err(to_py)?;
    Ok((r.f, r.c))
}

#[pyfunction]
#[pyo3(signature = (u, state, w="z", v="z"))]
fn otoc_commutator(u: Vec<Vec<Complex64>>, state: StateArg, w: &str, v: &str) -> PyResult<f64> {
    let (wo, vo) = ProbePair {
        w: axis(w)?,
        v: axis(v)?,
    }
    .operators();
    correlators::otoc_commutator(&matrix_from(u)?, &state_from(state)?, &wo, &vo).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (u, state, w="z", v="z"))]
fn two_point(u: Vec<Vec<Complex64>>, state: StateArg, w: &str, v: &str) -> PyResult<Complex64> {
    let (wo, vo) = ProbePair {
        w: axis(w)?,
        v: axis(v)?,
    }
    .operators();
    correlators::two_point(&matrix_from(u)?, &state_from(state)?, &wo, &vo).map_err(to_py)
}

/// exp(−i h t) for Hermitian h.
#[pyfunction]
fn expm_hermitian(h: Vec<Vec<Complex64>>, t: f64) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(matrix_to(
        &spin_algebra::expm_hermitian(&matrix_from(h)?, t).map_err(to_py)?,
    ))
}

#[pyfunction]
fn build_spin_hamiltonian(x1: f64, x2: f64, spin: PySpinParams) -> Vec<Vec<Complex64>> {
    matrix_to(&hybrid::build_spin_hamiltonian(x1, x2, &spin.inner))
}

#[pyfunction]
fn h_total(p: PyChannelParams) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(matrix_to(&channel::h_total(&p.inner).map_err(to_py)?))
}

/// [(energy, amplitudes)] for |00⟩, Ψ⁺, Ψ⁻, |11⟩.
#[pyfunction]
fn eigensystem(p: PyChannelParams) -> PyResult<Vec<(f64, Vec<Complex64>)>> {
    Ok(channel::eigensystem(&p.inner)
        .map_err(to_py)?
        .iter()
        .map(|e| (e.energy, e.vector.amplitudes().to_vec()))
        .collect())
}

#[pyfunction]
fn otoc_analytic(p: PyChannelParams, t: f64) -> f64 {
    channel::otoc_analytic(&p.inner, t)
}

#[pyfunction]
#[pyo3(signature = (p, t, state=None))]
fn otoc_numeric(p: PyChannelParams, t: f64, state: Option<StateArg>) -> PyResult<f64> {
    let psi = match state {
        Some(s) => state_from(s)?,
        None => SpinState::phi_minus(),
    };
    channel::otoc_numeric(&p.inner, t, &psi).map_err(to_py)
}

#[pyfunction]
fn thermal_density(p: PyChannelParams) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(matrix_to(channel::thermal_density(&p.inner).map_err(to_py)?.matrix()))
}

/// (closed form, trace evaluation)
#[pyfunction]
fn thermal_otoc(p: PyChannelParams, t: f64) -> PyResult<(f64, f64)> {
    let c = channel::thermal_otoc(&p.inner, t).map_err(to_py)?;
    Ok((c.closed_form, c.numeric))
}

/// (closed form, Wootters evaluation)
#[pyfunction]
fn thermal_concurrence(p: PyChannelParams, t: f64) -> PyResult<(f64, f64)> {
    let c = channel::thermal_concurrence(&p.inner, t).map_err(to_py)?;
    Ok((c.closed_form, c.numeric))
}

#[pyfunction]
fn concurrence(rho: Vec<Vec<Complex64>>) -> PyResult<f64> {
    let rho = channel::DensityMatrix4::new(matrix_from(rho)?).map_err(to_py)?;
    channel::concurrence(&rho).map_err(to_py)
}

#[pyfunction]
fn gme(c: f64) -> PyResult<f64> {
    channel::gme(c).map_err(to_py)
}

/// Runs a scenario given as config text (or just a preset name).
#[pyfunction]
fn run_scenario<'py>(py: Python<'py>, config: &str) -> PyResult<Bound<'py, PyDict>> {
    let cfg = match runner::preset_name(config.trim()) {
        Some(name) => runner::ScenarioConfig::preset(name),
        None => runner::parse_config(config),
    }
    .map_err(to_py)?;
    let result = py.detach(|| runner::run_scenario(&cfg)).map_err(to_py)?;
    let (header, rows) = runner::output::table(&result);
    let out = PyDict::new(py);
    out.set_item("scenario", &result.config.scenario)?;
    out.set_item("echo", result.echo())?;
    out.set_item("columns", columns_dict(py, header, &rows)?)?;
    match result.diagnostics() {
        Some(d) => out.set_item("diagnostics", diagnostics_dict(py, d)?)?,
        None => out.set_item("diagnostics", py.None())?,
    }
    Ok(out)
}

/// [(name, description)]
#[pyfunction]
fn presets() -> Vec<(String, String)> {
    runner::PRESETS
        .iter()
        .map(|p| (p.name.to_string(), p.description.to_string()))
        .collect()
}

#[pymodule]
fn nvscramble_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpinParams>()?;
    m.add_class::<PyOscParams>()?;
    m.add_class::<PyChannelParams>()?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(otoc_product, m)?)?;
    m.add_function(wrap_pyfunction!(otoc_commutator, m)?)?;
    m.add_function(wrap_pyfunction!(two_point, m)?)?;
    m.add_function(wrap_pyfunction!(expm_hermitian, m)?)?;
    m.add_function(wrap_pyfunction!(build_spin_hamiltonian, m)?)?;
    m.add_function(wrap_pyfunction!(h_total, m)?)?;
    m.add_function(wrap_pyfunction!(eigensystem, m)?)?;
    m.add_function(wrap_pyfunction!(otoc_analytic, m)?)?;
    m.add_function(wrap_pyfunction!(otoc_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(thermal_density, m)?)?;
    m.add_function(wrap_pyfunction!(thermal_otoc, m)?)?;
    m.add_function(wrap_pyfunction!(thermal_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(gme, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    Ok(())
}
