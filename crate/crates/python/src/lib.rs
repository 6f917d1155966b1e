//! Python bindings for orblab.
//!
//! Reports come back as plain Python dicts and lists (through their JSON
//! form); exact rationals are `"p/q"` strings there, and `fractions.Fraction`
//! where a method returns a single series.

use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use orblab::groups::{parse_group_spec, GroupKind};
use orblab::orbits::{bn_table, fn_table, WeightedFunction};
use orblab::rational::{format_rational, parse_rational};
use orblab::series::{cycle_index_character, sym_limit_character};
use orblab::structure::{
    factored_constant, fixed_point_table, freeness_report, jacobi_check, limit_constant, limit_table, resolve_seed,
    validate_seed,
};
use orblab::twisted::{min_twisted_weight, orbifold_limit_report};
use orblab::{OrbError, PermGroupHandle};

create_exception!(orblab, ValidationError, PyException);
create_exception!(orblab, BudgetExceeded, PyException);
create_exception!(orblab, LimitAnomaly, PyException);

fn py_err(e: OrbError) -> PyErr {
    match e {
        OrbError::Validation(_) => ValidationError::new_err(e.to_string()),
        OrbError::Budget { .. } => BudgetExceeded::new_err(e.to_string()),
        OrbError::LimitAnomaly(_) => LimitAnomaly::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for ::orblab::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (s,))
}

fn fractions<'py>(py: Python<'py>, rs: &[num_rational::BigRational]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let fraction = py.import("fractions")?.getattr("Fraction")?;
    rs.iter().map(|r| fraction.call1((format_rational(r),))).collect()
}

fn family(spec: &str) -> PyResult<GroupKind> {
    let parts: Vec<&str> = spec.trim().split(':').collect();
    match parts.as_slice() {
        ["S"] => Ok(GroupKind::Symmetric),
        ["Z"] => Ok(GroupKind::Cyclic),
        ["GL", q] => q
            .parse()
            .map(|q| GroupKind::GeneralLinear { q })
            .map_err(|_| PyValueError::new_err(format!("bad field size in {spec:?}"))),
        _ => parse_group_spec(spec).map(|g| g.kind()).py(),
    }
}

/// A permutation group: `Group("S:5")`, `Group("Z:6")`, `Group("GL:3:2")`.
#[pyclass(name = "Group", module = "orblab", frozen)]
struct PyGroup {
    inner: PermGroupHandle,
}

#[pymethods]
impl PyGroup {
    #[new]
    #[pyo3(signature = (spec, budget = None))]
    fn new(spec: &str, budget: Option<u64>) -> PyResult<Self> {
        let mut g = parse_group_spec(spec).py()?;
        if let Some(b) = budget {
            g = g.with_budget(b);
        }
        Ok(PyGroup { inner: g })
    }

    #[getter]
    fn spec(&self) -> String {
        self.inner.spec()
    }

    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    #[getter]
    fn order(&self) -> BigUint {
        self.inner.order().clone()
    }

    /// List of `{"cycles": {k: m_k}, "weight": "p/q"}`.
    fn cycle_index<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.inner.cycle_index().py()?)
    }

    /// Fixed-point character coefficients up to `nmax`.
    fn character<'py>(&self, py: Python<'py>, seed: &str, nmax: usize) -> PyResult<Vec<Bound<'py, PyAny>>> {
        let a = resolve_seed(seed).py()?.character(nmax);
        let chi = cycle_index_character(&self.inner.cycle_index().py()?, &a, nmax).py()?;
        fractions(py, chi.coeffs())
    }

    fn bn(&self, seed: &str, nmax: usize) -> PyResult<Vec<BigUint>> {
        let s = resolve_seed(seed).py()?;
        Ok(bn_table(&self.inner, &s.character(nmax), &s.name(), nmax).py()?.counts())
    }

    #[pyo3(name = "fn")]
    fn fn_counts(&self, nmax: usize) -> PyResult<Vec<BigUint>> {
        Ok(fn_table(&self.inner, nmax).py()?.counts())
    }

    /// Minimal twisted-sector weight report for central charge `c` ("p/q").
    #[pyo3(signature = (c = "24"))]
    fn twisted<'py>(&self, py: Python<'py>, c: &str) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &min_twisted_weight(&self.inner, &parse_rational(c).py()?).py()?)
    }

    fn __repr__(&self) -> String {
        format!("Group({:?})", self.inner.spec())
    }
}

/// A structure-constant table (seed or computed).
#[pyclass(name = "ConstantTable", module = "orblab", frozen)]
struct PyTable {
    inner: ::orblab::structure::ConstantTable,
}

#[pymethods]
impl PyTable {
    /// `vac`, `unit1`, `heis:<cutoff>` or a path to a seed JSON file.
    #[staticmethod]
    fn seed(spec: &str) -> PyResult<Self> {
        Ok(PyTable { inner: resolve_seed(spec).py()?.table().py()?.clone() })
    }

    /// Loads and validates a seed document.
    #[staticmethod]
    fn from_json(doc: &str) -> PyResult<Self> {
        let t = ::orblab::structure::ConstantTable::from_json(doc).py()?;
        validate_seed(&t).py()?;
        Ok(PyTable { inner: t })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn cutoff(&self) -> u32 {
        self.inner.cutoff()
    }

    /// `[(id, weight), ...]`, vacuum first.
    fn labels(&self) -> Vec<(String, u32)> {
        self.inner.labels().iter().map(|l| (l.id.clone(), l.wt)).collect()
    }

    /// `(exact string, float)`.
    fn get(&self, a: &str, b: &str, c: &str) -> PyResult<(String, f64)> {
        let v = self.inner.get(a, b, c).py()?;
        Ok((v.to_string(), v.to_f64()))
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[pyo3(signature = (cap = 2))]
    fn jacobi<'py>(&self, py: Python<'py>, cap: u32) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &jacobi_check(&self.inner, cap).py()?)
    }

    fn __repr__(&self) -> String {
        format!("ConstantTable({:?}, cutoff={})", self.inner.name(), self.inner.cutoff())
    }
}

/// Character of the S_N fixed-point limit.
#[pyfunction]
fn sym_limit<'py>(py: Python<'py>, seed: &str, nmax: usize) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let a = resolve_seed(seed).py()?.character(nmax);
    fractions(py, sym_limit_character(&a, nmax).py()?.coeffs())
}

/// Constants of `V^G` among orbit representatives of weight at most `cap`.
#[pyfunction]
fn fixed_point_constants(group: &PyGroup, seed: &PyTable, cap: u32) -> PyResult<PyTable> {
    Ok(PyTable { inner: fixed_point_table(&group.inner, &seed.inner, cap).py()? })
}

/// Large-N limit constants for a family `S` or `GL:<q>`.
#[pyfunction]
#[pyo3(signature = (family_spec, seed, cap, budget = ::orblab::groups::DEFAULT_BUDGET))]
fn limit_constants(family_spec: &str, seed: &PyTable, cap: u32, budget: u64) -> PyResult<PyTable> {
    Ok(PyTable { inner: limit_table(family(family_spec)?, &seed.inner, cap, budget).py()? })
}

/// Factored fixed-point constant for functions written as `p:label,...` or `vac`.
#[pyfunction]
fn factored<'py>(py: Python<'py>, group: &PyGroup, seed: &PyTable, g1: &str, g2: &str, g3: &str) -> PyResult<Bound<'py, PyAny>> {
    let labels = seed.inner.label_set();
    let d = group.inner.degree();
    let [a, b, c] = [g1, g2, g3].map(|s| WeightedFunction::parse(s, d, &labels));
    to_py(py, &factored_constant(&a.py()?, &b.py()?, &c.py()?, &group.inner, &seed.inner).py()?)
}

/// Large-N limit of one constant; functions as in [`factored`], points counted from 0.
#[pyfunction]
#[pyo3(signature = (family_spec, seed, g1, g2, g3, budget = ::orblab::groups::DEFAULT_BUDGET))]
fn limit<'py>(
    py: Python<'py>,
    family_spec: &str,
    seed: &PyTable,
    g1: &str,
    g2: &str,
    g3: &str,
    budget: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let labels = seed.inner.label_set();
    let [a, b, c] = [g1, g2, g3].map(|s| WeightedFunction::parse(s, u32::MAX, &labels));
    let r = limit_constant(&a.py()?, &b.py()?, &c.py()?, family(family_spec)?, &seed.inner, budget).py()?;
    to_py(py, &r)
}

#[pyfunction]
#[pyo3(signature = (family_spec, seed, cap = 2, budget = ::orblab::groups::DEFAULT_BUDGET))]
fn freeness<'py>(py: Python<'py>, family_spec: &str, seed: &PyTable, cap: u32, budget: u64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &freeness_report(family(family_spec)?, &seed.inner, cap, budget).py()?)
}

#[pyfunction]
#[pyo3(signature = (family_spec, c, ns, budget = ::orblab::groups::DEFAULT_BUDGET))]
fn orbifold_limit<'py>(py: Python<'py>, family_spec: &str, c: &str, ns: Vec<u32>, budget: u64) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &orbifold_limit_report(family(family_spec)?, &parse_rational(c).py()?, &ns, budget).py()?)
}

#[pymodule]
#[pyo3(name = "orblab")]
fn orblab_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PyGroup>()?;
    m.add_class::<PyTable>()?;
    m.add_function(wrap_pyfunction!(sym_limit, m)?)?;
    m.add_function(wrap_pyfunction!(fixed_point_constants, m)?)?;
    m.add_function(wrap_pyfunction!(limit_constants, m)?)?;
    m.add_function(wrap_pyfunction!(factored, m)?)?;
    m.add_function(wrap_pyfunction!(limit, m)?)?;
    m.add_function(wrap_pyfunction!(freeness, m)?)?;
    m.add_function(wrap_pyfunction!(orbifold_limit, m)?)?;
    m.add("ValidationError", py.get_type::<ValidationError>())?;
    m.add("BudgetExceeded", py.get_type::<BudgetExceeded>())?;
    m.add("LimitAnomaly", py.get_type::<LimitAnomaly>())?;
    Ok(())
}
