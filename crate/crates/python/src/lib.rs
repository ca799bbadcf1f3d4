//! Python bindings: fields, skew polynomials, problems and reports.

use biext::cli::{self, Problem};
use biext::ff::Field;
use biext::kernel::{etale_kernel, KernelOptions};
use biext::skew::{g_form, parse_poly, SkewPoly};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// `F_{p^n}` with the smallest monic irreducible modulus unless one is given.
#[pyclass(name = "Field", module = "biext", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyField(Field);

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (p, n = 1, modulus = None))]
    fn new(p: u32, n: usize, modulus: Option<Vec<u32>>) -> PyResult<Self> {
        Field::new(p, n, modulus.as_deref()).map(PyField).map_err(value_error)
    }

    #[getter]
    fn p(&self) -> u32 {
        self.0.p()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.0.modulus().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Field({})", self.0.spec_string())
    }
}

/// A skew Laurent polynomial in `F` with `F a = a^p F`.
#[pyclass(name = "SkewPoly", module = "biext", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PySkewPoly(SkewPoly);

#[pymethods]
impl PySkewPoly {
    #[new]
    fn new(field: &PyField, text: &str) -> PyResult<Self> {
        parse_poly(&field.0, text).map(PySkewPoly).map_err(value_error)
    }

    fn adjoint(&self) -> Self {
        PySkewPoly(self.0.adjoint())
    }

    fn __mul__(&self, other: &Self) -> Self {
        PySkewPoly(&self.0 * &other.0)
    }

    fn __add__(&self, other: &Self) -> Self {
        PySkewPoly(&self.0 + &other.0)
    }

    #[getter]
    fn min_exp(&self) -> Option<i64> {
        self.0.min_exp()
    }

    #[getter]
    fn max_exp(&self) -> Option<i64> {
        self.0.max_exp()
    }

    /// Evaluate on the element with base-`p` index `x` of `F_{q^s}`.
    fn evaluate(&self, s: usize, x: u128) -> PyResult<String> {
        let big = Field::standard(self.0.field().p(), self.0.field().n() * s).map_err(value_error)?;
        self.0.evaluate(&big.element_at(x)).map(|v| v.to_string()).map_err(value_error)
    }

    /// Checks `g^p - g = f(x) y - x f*(y)` at the indexed pair of `F_{q^s}`.
    fn check_g_equation(&self, s: usize, x: u128, y: u128) -> PyResult<bool> {
        let big = Field::standard(self.0.field().p(), self.0.field().n() * s).map_err(value_error)?;
        let (x, y) = (big.element_at(x), big.element_at(y));
        let g = g_form(&self.0).eval(&x, &y).map_err(value_error)?;
        let lhs = &g.pow(big.p() as u64) - &g;
        let fx = self.0.evaluate(&x).map_err(value_error)?;
        let fy = self.0.adjoint().evaluate(&y).map_err(value_error)?;
        Ok(lhs == &(&fx * &y) - &(&x * &fy))
    }

    /// Kernel points as strings, listed in the splitting field.
    #[pyo3(signature = (max_ext_degree = 64))]
    fn kernel(&self, max_ext_degree: u32) -> PyResult<Vec<String>> {
        let opts = KernelOptions { max_ext_degree, ..KernelOptions::default() };
        let k = etale_kernel(&self.0, &opts).map_err(value_error)?;
        Ok(k.points().iter().map(|pt| pt[0].to_string()).collect())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("SkewPoly({})", self.0)
    }
}

/// A parsed problem: field, matrix and options.
#[pyclass(name = "Problem", module = "biext", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyProblem(Problem);

#[pymethods]
impl PyProblem {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        cli::parse_problem(text).map(PyProblem).map_err(value_error)
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.0.matrix.rows(), self.0.matrix.cols())
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField(self.0.field.clone())
    }

    fn analyze(&self, py: Python<'_>) -> PyReport {
        let p = self.0.clone();
        PyReport(py.detach(move || cli::analyze(&p)))
    }

    /// JSON for the representation-only pipeline.
    fn rep_check(&self, py: Python<'_>) -> String {
        let p = self.0.clone();
        py.detach(move || serde_json::to_string_pretty(&cli::rep_check(&p)).expect("serializes"))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Problem({:?})", self.0.to_string())
    }
}

#[pyclass(name = "Report", module = "biext", frozen)]
struct PyReport(cli::Report);

#[pymethods]
impl PyReport {
    #[getter]
    fn all_passed(&self) -> bool {
        self.0.all_passed()
    }

    /// `(name, passed, detail)` with `passed = None` for skipped checks.
    #[getter]
    fn certificates(&self) -> Vec<(String, Option<bool>, String)> {
        self.0.certificates.iter().map(|c| (c.name.clone(), c.passed, c.detail.clone())).collect()
    }

    #[getter]
    fn pi0_log(&self) -> u64 {
        self.0.dimensions.pi0_log_f
    }

    /// `(r, r')`, or `None` when the constants are model dependent.
    #[getter]
    fn constants(&self) -> Option<(i64, i64)> {
        match &self.0.constants {
            cli::ConstantsOutcome::Supported(c) => Some((c.r, c.r_prime)),
            cli::ConstantsOutcome::ModelDependent { .. } => None,
        }
    }

    #[getter]
    fn kernel_route(&self) -> &'static str {
        self.0.kernels.route
    }

    #[getter]
    fn gram(&self) -> Option<Vec<Vec<u32>>> {
        self.0.pairing.as_ref().map(|s| s.gram.clone())
    }

    fn json(&self) -> String {
        self.0.canonical_json()
    }

    fn summary(&self) -> String {
        self.0.summary_text()
    }
}

#[pyfunction]
fn analyze(py: Python<'_>, text: &str) -> PyResult<PyReport> {
    Ok(PyProblem::new(text)?.analyze(py))
}

/// Enumerated kernel of a 1x1 problem: `(s, complete, points)`.
#[pyfunction]
fn oracle_kernel(text: &str, s_max: u32) -> PyResult<(u32, bool, Vec<String>)> {
    let pr = cli::parse_problem(text).map_err(value_error)?;
    if (pr.matrix.rows(), pr.matrix.cols()) != (1, 1) {
        return Err(PyValueError::new_err("oracle_kernel takes a 1x1 problem"));
    }
    let o = cli::oracle_kernel(pr.matrix.get(0, 0), s_max).map_err(value_error)?;
    Ok((o.s, o.complete, o.kernel.points().iter().map(|pt| pt[0].to_string()).collect()))
}

/// Runs the randomized self-test; returns `(name, cases, failures)` rows.
#[pyfunction]
#[pyo3(signature = (seed = 1, cases = 50))]
fn selftest(py: Python<'_>, seed: u64, cases: usize) -> Vec<(String, usize, usize)> {
    py.detach(move || cli::selftest(seed, cases))
        .checks
        .into_iter()
        .map(|c| (c.name.to_string(), c.cases, c.failures))
        .collect()
}

#[pymodule]
#[pyo3(name = "biext")]
fn biext_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PySkewPoly>()?;
    m.add_class::<PyProblem>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    m.add("SCHEMA_VERSION", cli::SCHEMA_VERSION)?;
    Ok(())
}
