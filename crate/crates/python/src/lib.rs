//! Python bindings: rings, elements, ideals and the report functions.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;

use perfchar::homology::{koszul_grade as core_koszul_grade, tor as core_tor};
use perfchar::ideal::{colength, krull_dimension, membership, Colength};
use perfchar::reports::{classify_curve as core_classify, invariant_table as core_invariants, Embedding};
use perfchar::valuation::perfect_valuation;
use perfchar::{PerfPoly, RelationMode, RingPresentation};

create_exception!(perfchar, PerfcharError, PyValueError);

fn err(e: perfchar::Error) -> PyErr {
    PerfcharError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn to_json<T: serde::Serialize>(v: &T) -> PyResult<serde_json::Value> {
    serde_json::to_value(v).map_err(|e| PerfcharError::new_err(e.to_string()))
}

/// `F_p[vars]/(relations)`.
#[pyclass(name = "Ring", module = "perfchar", frozen)]
struct PyRing {
    inner: RingPresentation,
}

#[pymethods]
impl PyRing {
    #[new]
    #[pyo3(signature = (char, vars, relations = Vec::new()))]
    fn new(char: u64, vars: Vec<String>, relations: Vec<String>) -> PyResult<Self> {
        let v: Vec<&str> = vars.iter().map(String::as_str).collect();
        let r: Vec<&str> = relations.iter().map(String::as_str).collect();
        Ok(PyRing {
            inner: RingPresentation::parse(char, &v, &r).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyRing {
            inner: RingPresentation::from_json(text).map_err(err)?,
        })
    }

    #[getter]
    fn char(&self) -> u64 {
        self.inner.char().get()
    }

    #[getter]
    fn vars(&self) -> Vec<String> {
        self.inner.vars().to_vec()
    }

    fn element(&self, text: &str) -> PyResult<PyPoly> {
        Ok(PyPoly {
            inner: self.inner.parse_element(text).map_err(err)?,
        })
    }

    #[pyo3(signature = (generators, level = 0, literal = false))]
    fn ideal(&self, generators: &str, level: u32, literal: bool) -> PyResult<PyIdeal> {
        let mode = if literal { RelationMode::Literal } else { RelationMode::Perfection };
        let ring = self.inner.level(level).with_mode(mode);
        Ok(PyIdeal {
            inner: ring.parse_ideal(generators).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Ring({})", self.inner)
    }
}

/// An element of the perfect closure.
#[pyclass(name = "Poly", module = "perfchar", frozen, eq)]
#[derive(PartialEq)]
struct PyPoly {
    inner: PerfPoly,
}

impl PyPoly {
    fn check(&self, other: &PyPoly) -> PyResult<()> {
        self.inner.check_compatible(&other.inner).map_err(err)
    }
}

#[pymethods]
impl PyPoly {
    fn __add__(&self, other: &PyPoly) -> PyResult<PyPoly> {
        self.check(other)?;
        Ok(PyPoly {
            inner: &self.inner + &other.inner,
        })
    }

    fn __sub__(&self, other: &PyPoly) -> PyResult<PyPoly> {
        self.check(other)?;
        Ok(PyPoly {
            inner: &self.inner - &other.inner,
        })
    }

    fn __mul__(&self, other: &PyPoly) -> PyResult<PyPoly> {
        self.check(other)?;
        Ok(PyPoly {
            inner: &self.inner * &other.inner,
        })
    }

    fn __neg__(&self) -> PyPoly {
        PyPoly { inner: -&self.inner }
    }

    fn __pow__(&self, e: u64, _modulo: Option<u64>) -> PyPoly {
        PyPoly {
            inner: self.inner.pow_u64(e),
        }
    }

    /// `f^{p^k}`.
    fn frobenius(&self, k: u32) -> PyPoly {
        PyPoly {
            inner: self.inner.frobenius(k),
        }
    }

    /// `f^{1/p^k}`.
    fn pth_root(&self, k: u32) -> PyPoly {
        PyPoly {
            inner: self.inner.pth_root(k),
        }
    }

    #[getter]
    fn level(&self) -> u32 {
        self.inner.level_of()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Valuation of a one-variable element as `"a/b"`, `"inf"` for zero.
    fn valuation(&self) -> PyResult<String> {
        let v = perfect_valuation(&self.inner, None).map_err(err)?;
        Ok(v.text(self.inner.char()))
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly({})", self.inner)
    }
}

/// An ideal in a level ring.
#[pyclass(name = "Ideal", module = "perfchar", frozen)]
struct PyIdeal {
    inner: perfchar::IdealHandle,
}

#[pymethods]
impl PyIdeal {
    fn __contains__(&self, f: &PyPoly) -> PyResult<bool> {
        Ok(membership(&f.inner, &self.inner).map_err(err)?.member)
    }

    /// `None` when infinite.
    fn colength(&self) -> PyResult<Option<u128>> {
        Ok(match colength(&self.inner).map_err(err)? {
            Colength::Finite(n) => Some(n),
            Colength::Infinite => None,
        })
    }

    fn krull_dimension(&self) -> PyResult<Option<usize>> {
        krull_dimension(&self.inner).map_err(err)
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.inner.generators().iter().map(|g| g.to_string()).collect()
    }

    fn __repr__(&self) -> String {
        format!("Ideal({})", self.inner)
    }
}

/// `Tor_i(R/I, R/J)` at the common level of the two ideals, as a dict.
#[pyfunction]
fn tor<'py>(py: Python<'py>, left: &PyIdeal, right: &PyIdeal, index: usize) -> PyResult<Bound<'py, PyAny>> {
    let t = core_tor(&left.inner, &right.inner, index).map_err(err)?;
    to_py(py, &to_json(&t)?)
}

/// Koszul grade of `seq` on `R/module`; `None` means infinite.
#[pyfunction]
fn koszul_grade(ring: &PyRing, seq: &str, module: &PyIdeal) -> PyResult<Option<usize>> {
    let s = ring.inner.parse_elements(seq).map_err(err)?;
    Ok(core_koszul_grade(&s, &module.inner).map_err(err)?.value)
}

#[pyfunction]
#[pyo3(signature = (ring, normalization, images, max_level = 3))]
fn classify_curve<'py>(
    py: Python<'py>,
    ring: &PyRing,
    normalization: &PyRing,
    images: Vec<String>,
    max_level: u32,
) -> PyResult<Bound<'py, PyAny>> {
    let imgs: Vec<&str> = images.iter().map(String::as_str).collect();
    let e = Embedding::new(&ring.inner, &normalization.inner, &imgs).map_err(err)?;
    let rep = core_classify(&ring.inner, &normalization.inner, &e, max_level).map_err(err)?;
    to_py(py, &to_json(&rep)?)
}

#[pyfunction]
fn invariant_table<'py>(py: Python<'py>, ring: &PyRing) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &to_json(&core_invariants(&ring.inner).map_err(err)?)?)
}

/// Run the command-line front end; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut errs = Vec::new();
    let argv = std::iter::once("perfchar".to_string()).chain(args);
    let code = perfchar::reports::run_cli(argv, &mut out, &mut errs);
    (
        code,
        String::from_utf8_lossy(&out).into_owned(),
        String::from_utf8_lossy(&errs).into_owned(),
    )
}

#[pymodule]
#[pyo3(name = "perfchar")]
pub fn perfchar_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("PerfcharError", m.py().get_type::<PerfcharError>())?;
    m.add_class::<PyRing>()?;
    m.add_class::<PyPoly>()?;
    m.add_class::<PyIdeal>()?;
    m.add_function(wrap_pyfunction!(tor, m)?)?;
    m.add_function(wrap_pyfunction!(koszul_grade, m)?)?;
    m.add_function(wrap_pyfunction!(classify_curve, m)?)?;
    m.add_function(wrap_pyfunction!(invariant_table, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
