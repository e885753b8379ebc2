//! Python bindings for rainbow-core.
//!
//! Structured results (finder outcomes, certificates, exact values) cross the
//! boundary as plain dicts and lists, decoded with Python's `json` module.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use rainbow_core::exact::{self, ExactOptions};
use rainbow_core::finders::{self, FinderConfig};
use rainbow_core::generate::{self, GeneratorKind, GeneratorSpec};
use rainbow_core::model::io::{self, CertificateRecord};
use rainbow_core::model::make_pattern;
use rainbow_core::verify;
use rainbow_core::{AnchoredViolation, ColoringFamily, PatternGraph, ViolationCertificate};

create_exception!(rainbow_py, RainbowError, PyValueError, "Raised for every error reported by rainbow-core.");

fn err(e: rainbow_core::Error) -> PyErr {
    RainbowError::new_err(format!("{}: {e}", e.code()))
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| RainbowError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn from_py<T: serde::de::DeserializeOwned>(py: Python<'_>, obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = py.import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(|e| RainbowError::new_err(e.to_string()))
}

/// A small target graph. Isolated vertices count towards `num_vertices`.
#[pyclass(name = "Pattern", module = "rainbow_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPattern {
    inner: PatternGraph,
}

#[pymethods]
impl PyPattern {
    #[new]
    fn new(num_vertices: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyPattern { inner: PatternGraph::new(num_vertices, edges).map_err(err)? })
    }

    /// Parses names such as `P4`, `S5`, `C4`, `K8`, `K7,7`, `I3`, `P2+3K2`.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        Ok(PyPattern { inner: make_pattern(name).map_err(err)? })
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.inner.num_vertices()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label()
    }

    fn is_isomorphic(&self, other: &PyPattern) -> bool {
        self.inner.is_isomorphic(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!("Pattern({}, {:?})", self.inner.num_vertices(), self.inner.edges())
    }
}

/// `n` colorings of the edges of `K_n` with colors `1..=k`.
#[pyclass(name = "Family", module = "rainbow_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyFamily {
    inner: ColoringFamily,
}

#[pymethods]
impl PyFamily {
    /// Owner-major colors, edges in lexicographic order within each owner.
    #[staticmethod]
    fn from_dense(n: usize, k: u32, colors: Vec<u32>) -> PyResult<Self> {
        Ok(PyFamily { inner: ColoringFamily::from_dense(n, k, colors).map_err(err)? })
    }

    #[staticmethod]
    fn uniform(n: usize, k: u32, seed: u64) -> PyResult<Self> {
        Ok(PyFamily { inner: ColoringFamily::uniform(n, k, seed).map_err(err)? })
    }

    #[staticmethod]
    fn monochromatic(n: usize, k: u32) -> PyResult<Self> {
        Ok(PyFamily { inner: ColoringFamily::monochromatic(n, k).map_err(err)? })
    }

    #[staticmethod]
    fn injective(n: usize, k: u32) -> PyResult<Self> {
        Ok(PyFamily { inner: ColoringFamily::injective(n, k).map_err(err)? })
    }

    #[staticmethod]
    fn proper_ish(n: usize, k: u32, seed: u64) -> PyResult<Self> {
        Ok(PyFamily { inner: ColoringFamily::proper_ish(n, k, seed).map_err(err)? })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(PyFamily { inner: io::load_family(path).map_err(err)? })
    }

    fn save(&self, path: &str) -> PyResult<()> {
        io::save_family(&self.inner, path).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> u32 {
        self.inner.k()
    }

    /// Color that `owner` gives edge `ab`.
    fn color(&self, owner: usize, a: usize, b: usize) -> PyResult<u32> {
        let n = self.inner.n();
        if owner >= n || a >= n || b >= n || a == b {
            return Err(RainbowError::new_err(format!("({owner}, {a}, {b}) is not an owner and edge of K_{n}")));
        }
        Ok(self.inner.color(owner, a, b))
    }

    fn to_dense(&self) -> Vec<u32> {
        self.inner.to_dense()
    }

    fn __repr__(&self) -> String {
        format!("Family(n={}, k={})", self.inner.n(), self.inner.k())
    }
}

/// `{"is_good", "copies_checked", "witness"}`; the witness is a certificate dict.
#[pyfunction]
#[pyo3(signature = (family, pattern, max_copies = None))]
fn family_is_good<'py>(
    py: Python<'py>,
    family: &PyFamily,
    pattern: &PyPattern,
    max_copies: Option<u128>,
) -> PyResult<Bound<'py, PyAny>> {
    let limit = max_copies.unwrap_or(verify::DEFAULT_MAX_COPIES);
    let report = verify::family_is_good_with_limit(&family.inner, &pattern.inner, limit).map_err(err)?;
    to_py(py, &report)
}

/// Runs the finder for `pattern`. Returns `{"result": ..., "diagnostics": ...}`
/// where `result` holds either `success` (an anchored certificate) or
/// `threshold_not_met`.
#[pyfunction]
#[pyo3(signature = (family, pattern, coverage = None))]
fn find<'py>(
    py: Python<'py>,
    family: &PyFamily,
    pattern: &PyPattern,
    coverage: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let mut cfg = FinderConfig::default();
    if let Some(c) = coverage {
        cfg.coverage = c;
    }
    let out = py.detach(|| finders::find(&family.inner, &pattern.inner, &cfg)).map_err(err)?;
    to_py(py, &out)
}

/// Validates a certificate given as a dict: a finder's `result.success`, a
/// certificate file line, or a bare witness from `family_is_good`. Returns the
/// list of defects (empty = valid).
#[pyfunction]
fn check_certificate(py: Python<'_>, family: &PyFamily, certificate: &Bound<'_, PyAny>) -> PyResult<Vec<String>> {
    let av = if let Ok(record) = from_py::<CertificateRecord>(py, certificate) {
        record.to_violation()
    } else if let Ok(av) = from_py::<AnchoredViolation>(py, certificate) {
        av
    } else {
        let cert: ViolationCertificate = from_py(py, certificate)?;
        AnchoredViolation { certificate: cert, anchor: None, slack: Vec::new() }
    };
    Ok(verify::check_anchored(&family.inner, &av).defects.iter().map(|d| d.to_string()).collect())
}

/// `{"n", "pattern", "value", "method"}` plus the witness `Family` (or None).
#[pyfunction]
#[pyo3(signature = (n, pattern, k_max = 5, node_budget = None))]
fn compute_c<'py>(
    py: Python<'py>,
    n: usize,
    pattern: &PyPattern,
    k_max: u32,
    node_budget: Option<u64>,
) -> PyResult<(Bound<'py, PyAny>, Option<PyFamily>)> {
    let mut opts = ExactOptions::default();
    if let Some(b) = node_budget {
        opts.node_budget = b;
    }
    let r = py.detach(|| exact::compute_c_with(n, &pattern.inner, k_max, &opts)).map_err(err)?;
    let summary = serde_json::json!({
        "n": r.n,
        "pattern": r.pattern.label(),
        "value": r.value,
        "method": r.method,
    });
    Ok((to_py(py, &summary)?, r.witness_family.map(|f| PyFamily { inner: f })))
}

/// A good family, `None` when none exists; raises if a guard stops the search.
#[pyfunction]
fn decide_good_exists(py: Python<'_>, n: usize, pattern: &PyPattern, k: u32) -> PyResult<Option<PyFamily>> {
    match py.detach(|| exact::decide_good_exists(n, &pattern.inner, k)).map_err(err)? {
        exact::Decision::Good(f) => Ok(Some(PyFamily { inner: f })),
        exact::Decision::NoGood => Ok(None),
        exact::Decision::Undecided { reason } => Err(RainbowError::new_err(format!("undecided: {reason}"))),
    }
}

/// Writes the DIMACS instance; returns variable and clause counts.
#[pyfunction]
fn export_cnf<'py>(py: Python<'py>, n: usize, pattern: &PyPattern, k: u32, path: &str) -> PyResult<Bound<'py, PyAny>> {
    let counts = exact::export_cnf(n, &pattern.inner, k, path).map_err(err)?;
    to_py(py, &counts)
}

/// Family for a DIMACS model given as signed literals.
#[pyfunction]
fn decode_model(n: usize, k: u32, literals: Vec<i64>) -> PyResult<PyFamily> {
    Ok(PyFamily { inner: exact::decode_model(n, k, &literals).map_err(err)? })
}

#[pyfunction]
#[pyo3(signature = (n, pattern, k, seed = 0, budget = generate::DEFAULT_RESAMPLE_BUDGET))]
fn construct_good_family(
    py: Python<'_>,
    n: usize,
    pattern: &PyPattern,
    k: u32,
    seed: u64,
    budget: u64,
) -> PyResult<PyFamily> {
    let f = py.detach(|| generate::construct_good_family_with(n, &pattern.inner, k, seed, budget)).map_err(err)?;
    Ok(PyFamily { inner: f })
}

/// `kind` is one of uniform-random, monochromatic, injective, proper-ish,
/// resampled-good.
#[pyfunction]
#[pyo3(signature = (kind, n, k, seed = 0, pattern = None, budget = None))]
fn generate_family(
    kind: &str,
    n: usize,
    k: u32,
    seed: u64,
    pattern: Option<&PyPattern>,
    budget: Option<u64>,
) -> PyResult<PyFamily> {
    let kind: GeneratorKind = kind.parse().map_err(err)?;
    let spec = GeneratorSpec { kind, n, k, seed, pattern: pattern.map(|p| p.inner.clone()), budget };
    Ok(PyFamily { inner: generate::generate(&spec).map_err(err)? })
}

#[pymodule]
fn rainbow_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("RainbowError", m.py().get_type::<RainbowError>())?;
    m.add_class::<PyPattern>()?;
    m.add_class::<PyFamily>()?;
    m.add_function(wrap_pyfunction!(family_is_good, m)?)?;
    m.add_function(wrap_pyfunction!(find, m)?)?;
    m.add_function(wrap_pyfunction!(check_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(compute_c, m)?)?;
    m.add_function(wrap_pyfunction!(decide_good_exists, m)?)?;
    m.add_function(wrap_pyfunction!(export_cnf, m)?)?;
    m.add_function(wrap_pyfunction!(decode_model, m)?)?;
    m.add_function(wrap_pyfunction!(construct_good_family, m)?)?;
    m.add_function(wrap_pyfunction!(generate_family, m)?)?;
    Ok(())
}
