//! Python bindings: the `boolspec_py` extension module.
//!
//! The module exposes the core operations in Python-native shapes —
//! value strings in, plain floats/ints/dicts out, witnesses as JSON
//! strings — so exploratory sessions don't need the Rust toolchain.
//! Input errors surface as `ValueError`, broken internal invariants as
//! `RuntimeError`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use boolspec::approxlp::{approx_degree, approx_spectral_norm, LpConfig};
use boolspec::boolfn::{
    wht_forward, wht_inverse, BooleanTable, FourierSpectrum, FunctionFile, LoadedFunction,
};
use boolspec::constructions::parity_hadamard as build_parity_hadamard;
use boolspec::liftlab::lift_bound_check;
use boolspec::qsim::Simulator;

fn to_py_err(e: boolspec::Error) -> PyErr {
    match e {
        boolspec::Error::Internal(_) => PyRuntimeError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Forward transform: `2^n` function values in point-index order to
/// character coefficients in subset-mask order.
#[pyfunction]
fn transform(values: Vec<f64>) -> PyResult<Vec<f64>> {
    Ok(wht_forward(&values).map_err(to_py_err)?.coeffs().to_vec())
}

/// Inverse transform: character coefficients back to function values.
#[pyfunction]
fn inverse_transform(coeffs: Vec<f64>) -> PyResult<Vec<f64>> {
    if coeffs.is_empty() || !coeffs.len().is_power_of_two() {
        return Err(PyValueError::new_err(format!(
            "coefficient vector length {} is not a power of two",
            coeffs.len()
        )));
    }
    let n = coeffs.len().trailing_zeros();
    let spectrum = FourierSpectrum::new(n, coeffs).map_err(to_py_err)?;
    Ok(wht_inverse(&spectrum))
}

/// A Boolean function on the hypercube, built from its value string:
/// character `i` is the value at point index `i`, with `+` for +1, `-`
/// for -1, and `*` for outside-the-promise points.
#[pyclass]
struct Function {
    inner: LoadedFunction,
}

impl Function {
    fn total(&self) -> PyResult<&boolspec::boolfn::TruthTable> {
        match &self.inner {
            LoadedFunction::Total(t) => Ok(t),
            LoadedFunction::Partial(_) => Err(PyValueError::new_err(
                "exact spectrum statistics need a total function",
            )),
        }
    }
}

#[pymethods]
impl Function {
    #[new]
    fn new(values: &str) -> PyResult<Self> {
        let len = values.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(PyValueError::new_err(format!(
                "value string length {len} is not a power of two"
            )));
        }
        let kind = if values.contains('*') { "partial" } else { "total" };
        let file = FunctionFile {
            version: 1,
            n: len.trailing_zeros(),
            kind: kind.to_string(),
            values: values.to_string(),
        };
        Ok(Self {
            inner: file.decode().map_err(to_py_err)?,
        })
    }

    /// Number of variables.
    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    /// Whether the function is defined on every point.
    #[getter]
    fn is_total(&self) -> bool {
        matches!(self.inner, LoadedFunction::Total(_))
    }

    /// Number of points where the function is defined.
    #[getter]
    fn defined_count(&self) -> u64 {
        self.inner.as_partial().defined_count()
    }

    /// The value string the function was built from.
    fn values(&self) -> String {
        match &self.inner {
            LoadedFunction::Total(t) => FunctionFile::from_total(t).values,
            LoadedFunction::Partial(p) => FunctionFile::from_partial(p).values,
        }
    }

    /// Exact character coefficients (total functions only).
    fn coefficients(&self) -> PyResult<Vec<f64>> {
        Ok(self.total()?.spectrum().coeffs().to_vec())
    }

    /// Sum of absolute character coefficients (total functions only).
    fn spectral_norm(&self) -> PyResult<f64> {
        Ok(self.total()?.spectrum().spectral_norm())
    }

    /// Min-entropy of the squared-coefficient distribution (total only).
    fn min_entropy(&self) -> PyResult<f64> {
        self.total()?.spectrum().min_entropy().map_err(to_py_err)
    }

    /// Total influence (total functions only).
    fn influence(&self) -> PyResult<f64> {
        Ok(self.total()?.spectrum().influence())
    }

    /// Least polynomial degree achieving pointwise error `eps` on every
    /// defined point.
    fn approx_degree(&self, eps: f64) -> PyResult<u32> {
        let promise = self.inner.as_partial();
        Ok(approx_degree(&promise, eps, &LpConfig::default())
            .map_err(to_py_err)?
            .degree)
    }

    /// Least coefficient mass achieving pointwise error `eps` on every
    /// defined point. Returns `(value, witness)` with the witness as
    /// polynomial JSON.
    fn approx_spectral_norm(&self, eps: f64) -> PyResult<(f64, String)> {
        let promise = self.inner.as_partial();
        let result =
            approx_spectral_norm(&promise, eps, &LpConfig::default()).map_err(to_py_err)?;
        Ok((result.value, result.witness.to_json()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Function(n={}, kind={})",
            self.inner.n(),
            if self.is_total() { "total" } else { "partial" }
        )
    }
}

/// Builds the addressed-parity instance `(ell, k)`. Returns
/// `(total, promise, layout_json)`.
#[pyfunction]
fn parity_hadamard(ell: u32, k: u32) -> PyResult<(Function, Function, String)> {
    let built = build_parity_hadamard(ell, k).map_err(to_py_err)?;
    Ok((
        Function {
            inner: LoadedFunction::Total(built.total),
        },
        Function {
            inner: LoadedFunction::Partial(built.promise),
        },
        built.layout.to_json(),
    ))
}

/// Runs the quantum query algorithm exhaustively on the addressed-parity
/// instance `(ell, k)` and reports the success floors and query counts.
#[pyfunction]
fn simulate<'py>(py: Python<'py>, ell: u32, k: u32) -> PyResult<Bound<'py, PyDict>> {
    let sim = Simulator::new(ell, k).map_err(to_py_err)?;
    let ex = sim.run_exhaustive().map_err(to_py_err)?;
    let report = PyDict::new(py);
    report.set_item("n", ex.n_vars)?;
    report.set_item("promise_count", ex.promise_count)?;
    report.set_item("min_success_promise", ex.min_success_promise)?;
    report.set_item("min_success_nonpromise", ex.min_success_nonpromise)?;
    report.set_item("queries_total", ex.queries.total())?;
    Ok(report)
}

/// Runs the composition lower-bound check for `(ell, k)`; returns the
/// report as a JSON string.
#[pyfunction]
fn lift_check(ell: u32, k: u32) -> PyResult<String> {
    let report = lift_bound_check(ell, k, &LpConfig::default()).map_err(to_py_err)?;
    serde_json::to_string(&report).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn boolspec_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Function>()?;
    m.add_function(wrap_pyfunction!(transform, m)?)?;
    m.add_function(wrap_pyfunction!(inverse_transform, m)?)?;
    m.add_function(wrap_pyfunction!(parity_hadamard, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(lift_check, m)?)?;
    Ok(())
}
