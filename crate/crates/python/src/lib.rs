use std::collections::BTreeMap;

use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value as Json;

use sasaki7_core::clifford::Spinor;
use sasaki7_core::error::Error;
use sasaki7_core::exterior::{Blade, Form as CoreForm};
use sasaki7_core::harness::{self, DumpObject, Mode, SuiteConfig, SECTIONS};
use sasaki7_core::linalg::Matrix;
use sasaki7_core::sasaki::SasakiModel;
use sasaki7_core::scalar::{parse_rational, Surd};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rational(text: &str) -> PyResult<BigRational> {
    parse_rational(text).map_err(py_err)
}

fn surd(text: &str) -> PyResult<Surd> {
    text.parse::<Surd>().map_err(py_err)
}

fn json_to_py<'py>(py: Python<'py>, value: &Json) -> PyResult<Bound<'py, PyAny>> {
    Ok(match value {
        Json::Null => py.None().into_bound(py),
        Json::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Json::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Json::String(s) => s.into_pyobject(py)?.into_any(),
        Json::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        Json::Object(map) => {
            let dict = PyDict::new(py);
            for (k, v) in map {
                dict.set_item(k, json_to_py(py, v)?)?;
            }
            dict.into_any()
        }
    })
}

fn to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let json = serde_json::to_value(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    json_to_py(py, &json)
}

fn matrix_strings(m: &Matrix<Surd>) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(Surd::to_string).collect())
        .collect()
}

fn spinor_strings(psi: &Spinor<Surd>) -> Vec<String> {
    psi.components().iter().map(Surd::to_string).collect()
}

/// An exact differential form on the 7-dimensional model, coefficients in Q(√t).
#[pyclass(name = "Form", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyForm {
    inner: CoreForm<Surd>,
}

#[pymethods]
impl PyForm {
    /// `η_{i1…ik}` from one-based indices.
    #[staticmethod]
    fn eta(indices: Vec<usize>) -> PyResult<Self> {
        if indices.iter().any(|&i| i == 0 || i > 7) {
            return Err(PyValueError::new_err("indices run from 1 to 7"));
        }
        Ok(PyForm {
            inner: CoreForm::eta(&indices),
        })
    }

    /// From `{"η123": "1", "η145": "-1/2"}`.
    #[staticmethod]
    fn from_dict(terms: BTreeMap<String, String>) -> PyResult<Self> {
        let mut inner = CoreForm::zero();
        for (blade, coeff) in terms {
            inner.add_term(Blade::parse(&blade).map_err(py_err)?, surd(&coeff)?);
        }
        Ok(PyForm { inner })
    }

    fn to_dict(&self) -> BTreeMap<String, String> {
        self.inner
            .terms()
            .map(|(b, c)| (b.to_string(), c.to_string()))
            .collect()
    }

    fn wedge(&self, other: &PyForm) -> PyForm {
        PyForm {
            inner: self.inner.wedge(&other.inner),
        }
    }

    fn scale(&self, factor: &str) -> PyResult<PyForm> {
        Ok(PyForm {
            inner: self.inner.scale(&surd(factor)?),
        })
    }

    /// Contraction with the `i`-th basis vector, one-based.
    fn interior(&self, i: usize) -> PyResult<PyForm> {
        if i == 0 || i > 7 {
            return Err(PyValueError::new_err("indices run from 1 to 7"));
        }
        Ok(PyForm {
            inner: self.inner.interior_basis(i - 1),
        })
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn __add__(&self, other: &PyForm) -> PyForm {
        PyForm {
            inner: &self.inner + &other.inner,
        }
    }

    fn __sub__(&self, other: &PyForm) -> PyForm {
        PyForm {
            inner: &self.inner - &other.inner,
        }
    }

    fn __neg__(&self) -> PyForm {
        PyForm {
            inner: -self.inner.clone(),
        }
    }

    fn __eq__(&self, other: &PyForm) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Form({})", self.inner)
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }
}

/// The squashed 3-Sasakian 7-sphere at parameter `t = s²`, computed exactly.
#[pyclass(name = "Model", frozen)]
struct PyModel {
    inner: SasakiModel<Surd>,
}

impl PyModel {
    fn wrap(&self, inner: CoreForm<Surd>) -> PyForm {
        PyForm { inner }
    }
}

#[pymethods]
impl PyModel {
    #[new]
    #[pyo3(signature = (t = "1"))]
    fn new(t: &str) -> PyResult<Self> {
        Ok(PyModel {
            inner: SasakiModel::build(&rational(t)?).map_err(py_err)?,
        })
    }

    #[getter]
    fn t(&self) -> String {
        self.inner.t().to_string()
    }

    #[getter]
    fn s(&self) -> String {
        self.inner.s().to_string()
    }

    /// `ω^s = s³F1 + sF2`.
    #[getter]
    fn omega(&self) -> PyForm {
        self.wrap(self.inner.omega().clone())
    }

    #[getter]
    fn torsion(&self) -> PyForm {
        self.wrap(self.inner.torsion().clone())
    }

    /// `(F1, F2, ω)` of the undeformed structure.
    fn canonical_structure(&self) -> (PyForm, PyForm, PyForm) {
        let (f1, f2, omega) = self.inner.canonical_structure();
        (self.wrap(f1), self.wrap(f2), self.wrap(omega))
    }

    fn nearly_parallel_forms(&self) -> Vec<PyForm> {
        self.inner
            .nearly_parallel_forms()
            .into_iter()
            .map(|f| self.wrap(f))
            .collect()
    }

    /// `dη_α` for `α = 1, 2, 3`.
    fn d_eta(&self, alpha: usize) -> PyResult<PyForm> {
        if !(1..=3).contains(&alpha) {
            return Err(PyValueError::new_err("α runs from 1 to 3"));
        }
        Ok(self.wrap(self.inner.d_eta(alpha - 1).clone()))
    }

    fn d(&self, form: &PyForm) -> PyResult<PyForm> {
        Ok(self.wrap(self.inner.space().d_invariant(&form.inner).map_err(py_err)?))
    }

    fn star(&self, form: &PyForm) -> PyResult<PyForm> {
        Ok(self.wrap(form.inner.hodge(self.inner.metric()).map_err(py_err)?))
    }

    fn inner_product(&self, a: &PyForm, b: &PyForm) -> PyResult<String> {
        Ok(self.inner.inner(&a.inner, &b.inner).map_err(py_err)?.to_string())
    }

    fn characteristic_torsion(&self, omega: &PyForm) -> PyResult<PyForm> {
        let t = sasaki7_core::sasaki::characteristic_torsion(self.inner.space(), &omega.inner, self.inner.metric())
            .map_err(py_err)?;
        Ok(self.wrap(t))
    }

    /// `(p1, p7, p27)` relative to the model's G2-form.
    fn type_split(&self, form: &PyForm) -> PyResult<(String, PyForm, PyForm)> {
        let split =
            sasaki7_core::sasaki::type_split(&form.inner, self.inner.omega(), self.inner.metric()).map_err(py_err)?;
        Ok((split.p1.to_string(), self.wrap(split.p7), self.wrap(split.p27)))
    }

    #[getter]
    fn psi0(&self) -> Vec<String> {
        spinor_strings(self.inner.psi0())
    }

    /// Clifford action of a form on a spinor given by 8 exact components.
    fn act(&self, form: &PyForm, spinor: Vec<String>) -> PyResult<Vec<String>> {
        if spinor.len() != 8 {
            return Err(PyValueError::new_err("spinors have 8 components"));
        }
        let psi = Spinor::new(spinor.iter().map(|c| surd(c)).collect::<PyResult<_>>()?);
        Ok(spinor_strings(&self.inner.form_act(&form.inner, &psi)))
    }

    fn phis(&self) -> Vec<Vec<Vec<String>>> {
        self.inner.phis().iter().map(matrix_strings).collect()
    }

    /// Riemannian Ricci tensor in the orthonormal frame.
    fn ricci(&self) -> Vec<Vec<String>> {
        matrix_strings(&self.inner.lc_curvature().ricci)
    }

    fn scalar_curvature(&self) -> String {
        self.inner.lc_curvature().scal.to_string()
    }

    /// Ricci tensor of the characteristic connection.
    fn characteristic_ricci(&self) -> PyResult<Vec<Vec<String>>> {
        let ric = self
            .inner
            .space()
            .ricci_of_torsion_connection(self.inner.characteristic_connection(), self.inner.torsion())
            .map_err(py_err)?;
        Ok(matrix_strings(&ric))
    }

    fn holonomy_dimension(&self) -> PyResult<usize> {
        Ok(self.inner.holonomy().map_err(py_err)?.len())
    }

    /// Eigenvalue of the Riemannian Dirac operator on Ψ0.
    fn dirac_eigenvalue(&self) -> PyResult<String> {
        Ok(self.inner.deformation_row().map_err(py_err)?.dirac.to_string())
    }

    fn __repr__(&self) -> String {
        format!("Model(t={})", self.inner.t())
    }
}

/// Runs the identity checks and returns one dict per check.
#[pyfunction]
#[pyo3(signature = (sections = None, t = "1", mode = "exact", tol = harness::DEFAULT_TOLERANCE))]
fn verify<'py>(
    py: Python<'py>,
    sections: Option<Vec<u8>>,
    t: &str,
    mode: &str,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = SuiteConfig {
        mode: mode.parse::<Mode>().map_err(py_err)?,
        t: rational(t)?,
        tolerance: tol,
        sections: sections.unwrap_or_else(|| SECTIONS.to_vec()).into_iter().collect(),
        ..SuiteConfig::default()
    };
    let results = py.detach(|| harness::run_suite(&cfg)).map_err(py_err)?;
    json_to_py(py, &harness::report_json(&cfg, &results))
}

/// Curvature and Dirac data at `steps + 1` equally spaced values of `t`.
#[pyfunction]
fn sweep<'py>(py: Python<'py>, t_from: &str, t_to: &str, steps: usize) -> PyResult<Bound<'py, PyAny>> {
    let (from, to) = (rational(t_from)?, rational(t_to)?);
    let rows = py.detach(|| harness::sweep(&from, &to, steps)).map_err(py_err)?;
    to_py(py, &rows)
}

/// `omega`, `torsion`, `gammas`, `phi` or `coset` as Python data.
#[pyfunction]
#[pyo3(signature = (object, t = "1"))]
fn dump<'py>(py: Python<'py>, object: &str, t: &str) -> PyResult<Bound<'py, PyAny>> {
    let json = harness::dump(object.parse::<DumpObject>().map_err(py_err)?, &rational(t)?).map_err(py_err)?;
    json_to_py(py, &json)
}

/// Validates a coset given as JSON text; returns the invariant report.
#[pyfunction]
fn ingest<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    let ingested = harness::ingest_coset_str(text).map_err(py_err)?;
    json_to_py(py, &ingested.to_json())
}

#[pymodule]
fn sasaki7(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyForm>()?;
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(dump, m)?)?;
    m.add_function(wrap_pyfunction!(ingest, m)?)?;
    Ok(())
}
