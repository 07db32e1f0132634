//! Python bindings for the `symsep` crate.

use std::fs;

use pyo3::create_exception;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use symsep_core::families;
use symsep_core::permanent::{gram_from_factors, marcus_bounds_check, permanent_naive, permanent_ryser};
use symsep_core::separability::{self, ClassifyOptions};
use symsep_core::state::{self as st, CMatrix};
use symsep_core::symmetry;
use symsep_core::verify::{run_suite, Suite};
use symsep_core::{LoadedState, StateFile, C64};

create_exception!(symsep, SizeGuardError, PyValueError, "A size guard refused the request.");

fn py_err(e: symsep_core::Error) -> PyErr {
    if e.is_guard() {
        SizeGuardError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for symsep_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

#[pyclass(name = "PureState", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPureState(st::PureState);

#[pymethods]
impl PyPureState {
    #[new]
    #[pyo3(signature = (dims, amplitudes, normalize = false))]
    fn new(dims: Vec<usize>, amplitudes: Vec<C64>, normalize: bool) -> PyResult<Self> {
        let psi = if normalize {
            st::PureState::normalized(dims, amplitudes)
        } else {
            st::PureState::new(dims, amplitudes)
        };
        Ok(Self(psi.py()?))
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.0.dims().to_vec()
    }

    #[getter]
    fn amplitudes(&self) -> Vec<C64> {
        self.0.amplitudes().to_vec()
    }

    #[getter]
    fn n_parties(&self) -> usize {
        self.0.n_parties()
    }

    fn norm_squared(&self) -> f64 {
        self.0.norm_squared()
    }

    fn fidelity(&self, other: &PyPureState) -> PyResult<f64> {
        self.0.fidelity(&other.0).py()
    }

    #[pyo3(signature = (tol = 1e-8))]
    fn is_permutation_invariant(&self, tol: f64) -> PyResult<bool> {
        symmetry::is_permutation_invariant(&self.0, tol).py()
    }

    #[pyo3(signature = (tol = 1e-8))]
    fn is_antisymmetric(&self, tol: f64) -> PyResult<bool> {
        symmetry::is_antisymmetric(&self.0, tol).py()
    }

    /// Eigen-analysis under the cyclic party shift.
    fn translation<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let t = symmetry::translation_analyze(&self.0).py()?;
        let d = PyDict::new(py);
        d.set_item("is_eigenstate", t.is_eigenstate)?;
        d.set_item("theta", t.theta)?;
        d.set_item("residual", t.residual)?;
        d.set_item("overlap", t.overlap)?;
        Ok(d)
    }

    /// Reduced density operator on the kept parties (0-based).
    fn reduced(&self, keep: Vec<usize>) -> PyResult<Vec<Vec<C64>>> {
        let (_, m) = st::reduced_operator(&self.0, &keep).py()?;
        Ok(rows(&m))
    }

    #[pyo3(signature = (tol = 1e-10))]
    fn classify(&self, tol: f64) -> PyResult<PyClassification> {
        let c = separability::classify_with(&self.0, &ClassifyOptions { rel_tol: tol }).py()?;
        Ok(PyClassification(c))
    }

    fn to_json(&self) -> String {
        StateFile::from_pure(&self.0).to_canonical_string()
    }

    fn __repr__(&self) -> String {
        format!("PureState(dims={:?})", self.0.dims())
    }
}

#[pyclass(name = "ProductState", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyProductState(st::ProductState);

#[pymethods]
impl PyProductState {
    /// Factors are normalized unless `normalize` is false, in which case
    /// they must already be unit vectors.
    #[new]
    #[pyo3(signature = (factors, normalize = true))]
    fn new(factors: Vec<Vec<C64>>, normalize: bool) -> PyResult<Self> {
        let phi = if normalize {
            st::ProductState::from_unnormalized(factors)
        } else {
            st::ProductState::new(factors)
        };
        Ok(Self(phi.py()?))
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.0.dims()
    }

    #[getter]
    fn factors(&self) -> Vec<Vec<C64>> {
        self.0.factors().to_vec()
    }

    #[getter]
    fn n_parties(&self) -> usize {
        self.0.n_parties()
    }

    fn tensor(&self) -> PyResult<PyPureState> {
        Ok(PyPureState(st::tensor_product(&self.0).py()?))
    }

    fn gram(&self) -> PyResult<Vec<Vec<C64>>> {
        Ok(rows(gram_from_factors(&self.0).py()?.entries()))
    }

    /// Unnormalized symmetrization and its squared norm.
    fn symmetrize(&self) -> PyResult<(PyPureState, f64)> {
        let s = symmetry::symmetrize(&self.0).py()?;
        Ok((PyPureState(s.state), s.norm_squared))
    }

    fn antisymmetrize(&self) -> PyResult<(PyPureState, f64)> {
        let s = symmetry::antisymmetrize(&self.0).py()?;
        Ok((PyPureState(s.state), s.norm_squared))
    }

    fn marcus_bounds<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = marcus_bounds_check(&gram_from_factors(&self.0).py()?).py()?;
        let d = PyDict::new(py);
        d.set_item("perm", r.perm)?;
        d.set_item("imag_residue", r.imag_residue)?;
        d.set_item("lower_ok", r.lower_ok)?;
        d.set_item("upper_ok", r.upper_ok)?;
        d.set_item("at_lower", r.at_lower())?;
        d.set_item("at_upper", r.at_upper())?;
        Ok(d)
    }

    /// Symmetrize, classify the result and report whether it is globally
    /// entangled exactly when the factors differ.
    #[pyo3(signature = (tol = 1e-10))]
    fn verify_symmetrization<'py>(&self, py: Python<'py>, tol: f64) -> PyResult<Bound<'py, PyDict>> {
        let r = separability::verify_result2_with(&self.0, &ClassifyOptions { rel_tol: tol }).py()?;
        let d = PyDict::new(py);
        d.set_item("holds", r.holds)?;
        d.set_item("nonzero", r.nonzero)?;
        d.set_item("norm_squared", r.norm_squared)?;
        d.set_item("permanent", r.permanent)?;
        d.set_item("factors_identical", r.factors_identical)?;
        d.set_item("state", PyPureState(r.symmetrized))?;
        d.set_item("classification", PyClassification(r.verdict))?;
        Ok(d)
    }

    fn rdm_crosscheck<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = separability::rdm_crosscheck(&self.0).py()?;
        let d = PyDict::new(py);
        d.set_item("norm_squared", r.norm_squared)?;
        d.set_item("direct", rows(r.direct_rdm.matrix()))?;
        d.set_item("gram", rows(r.gram_rdm.matrix()))?;
        d.set_item("max_deviation", r.max_deviation)?;
        Ok(d)
    }

    fn to_json(&self) -> String {
        StateFile::from_product(&self.0).to_canonical_string()
    }

    fn __repr__(&self) -> String {
        format!("ProductState(dims={:?})", self.0.dims())
    }
}

#[pyclass(name = "Classification", frozen, skip_from_py_object)]
struct PyClassification(separability::Classification);

#[pymethods]
impl PyClassification {
    #[getter]
    fn verdict(&self) -> &'static str {
        self.0.verdict.as_str()
    }

    /// First rank-one cut with 1-based labels, e.g. `{1}:{2,3}`.
    #[getter]
    fn witness(&self) -> Option<String> {
        self.0.witness.as_ref().map(ToString::to_string)
    }

    #[getter]
    fn ranks(&self) -> Vec<usize> {
        self.0.ranks()
    }

    /// `(label, rank, singular values)` per cut, in canonical order.
    #[getter]
    fn cuts(&self) -> Vec<(String, usize, Vec<f64>)> {
        self.0
            .evidence
            .iter()
            .map(|e| (e.cut.to_string(), e.rank, e.singular_values.clone()))
            .collect()
    }

    #[getter]
    fn factors(&self) -> Option<PyProductState> {
        self.0.factors.clone().map(PyProductState)
    }

    #[getter]
    fn factor_fidelity(&self) -> Option<f64> {
        self.0.factor_fidelity
    }

    fn __repr__(&self) -> String {
        format!("Classification({}, ranks={:?})", self.0.verdict, self.0.ranks())
    }
}

fn rows(m: &CMatrix) -> Vec<Vec<C64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn square(matrix: Vec<Vec<C64>>) -> PyResult<CMatrix> {
    let n = matrix.len();
    if matrix.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| matrix[i][j]))
}

#[pyfunction]
#[pyo3(signature = (matrix, method = "ryser"))]
fn permanent(matrix: Vec<Vec<C64>>, method: &str) -> PyResult<C64> {
    let m = square(matrix)?;
    match method {
        "ryser" => permanent_ryser(&m).py(),
        "naive" => permanent_naive(&m).py(),
        other => Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    }
}

#[pyfunction]
fn ghz(n: usize, d: usize) -> PyResult<PyPureState> {
    Ok(PyPureState(families::ghz(n, d).py()?))
}

#[pyfunction]
fn w_state(n: usize) -> PyResult<PyPureState> {
    Ok(PyPureState(families::w_state(n).py()?))
}

#[pyfunction]
fn dicke(n: usize, d: usize, k: usize) -> PyResult<PyPureState> {
    Ok(PyPureState(families::dicke(n, d, k).py()?))
}

#[pyfunction]
fn slater(n: usize, d: usize) -> PyResult<PyPureState> {
    Ok(PyPureState(families::slater(n, d).py()?))
}

#[pyfunction]
#[pyo3(signature = (n, d, seed = 0))]
fn random_symmetric(n: usize, d: usize, seed: u64) -> PyResult<PyPureState> {
    let mut rng = families::seeded_rng(seed);
    Ok(PyPureState(families::random_symmetric(n, d, &mut rng).py()?))
}

#[pyfunction]
#[pyo3(signature = (n, d, seed = 0))]
fn random_product(n: usize, d: usize, seed: u64) -> PyResult<PyProductState> {
    let mut rng = families::seeded_rng(seed);
    Ok(PyProductState(families::random_product(n, d, &mut rng).py()?))
}

#[pyfunction]
#[pyo3(signature = (n, d, k, seed = 0))]
fn translation_eigenstate(n: usize, d: usize, k: usize, seed: u64) -> PyResult<PyPureState> {
    let mut rng = families::seeded_rng(seed);
    Ok(PyPureState(families::translation_eigenstate(n, d, k, &mut rng).py()?))
}

/// Parse state-file text into a `PureState` or `ProductState`.
#[pyfunction]
fn parse_state(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    match StateFile::parse(text).and_then(|f| f.to_state()).py()? {
        LoadedState::Pure(p) => Ok(Py::new(py, PyPureState(p))?.into_any()),
        LoadedState::Product(p) => Ok(Py::new(py, PyProductState(p))?.into_any()),
        LoadedState::Ensemble(_) => Err(PyValueError::new_err(
            "ensemble files are not exposed to Python",
        )),
    }
}

#[pyfunction]
fn load_state(py: Python<'_>, path: &str) -> PyResult<Py<PyAny>> {
    let text = fs::read_to_string(path).map_err(|e| PyIOError::new_err(e.to_string()))?;
    parse_state(py, &text)
}

type PropertyRow = (String, usize, Option<f64>, Option<f64>);

/// Run a property suite; returns `(passed, [(name, failures, worst, margin)])`.
#[pyfunction]
#[pyo3(signature = (suite = "all", trials = 100, seed = 0))]
fn verify(
    py: Python<'_>,
    suite: &str,
    trials: usize,
    seed: u64,
) -> PyResult<(bool, Vec<PropertyRow>)> {
    let suite: Suite = suite.parse().py()?;
    let report = py.detach(|| run_suite(suite, trials, seed));
    let rows = report
        .properties
        .iter()
        .map(|p| (format!("{}.{}", p.suite, p.name), p.failures, p.worst, p.margin))
        .collect();
    Ok((report.passed(), rows))
}

#[pymodule]
fn symsep(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPureState>()?;
    m.add_class::<PyProductState>()?;
    m.add_class::<PyClassification>()?;
    m.add("SizeGuardError", m.py().get_type::<SizeGuardError>())?;
    m.add_function(wrap_pyfunction!(permanent, m)?)?;
    m.add_function(wrap_pyfunction!(ghz, m)?)?;
    m.add_function(wrap_pyfunction!(w_state, m)?)?;
    m.add_function(wrap_pyfunction!(dicke, m)?)?;
    m.add_function(wrap_pyfunction!(slater, m)?)?;
    m.add_function(wrap_pyfunction!(random_symmetric, m)?)?;
    m.add_function(wrap_pyfunction!(random_product, m)?)?;
    m.add_function(wrap_pyfunction!(translation_eigenstate, m)?)?;
    m.add_function(wrap_pyfunction!(parse_state, m)?)?;
    m.add_function(wrap_pyfunction!(load_state, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
