use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value;

use ::ddelta::charzeros::{find_zeros, Rect};
use ::ddelta::currents::{pv_pair, residue_pair, Bump, CurrentOptions};
use ::ddelta::division::ideal_member;
use ::ddelta::hefer::{hefer_pair_n2, pair_identity};
use ::ddelta::hring::{h_bezout, h_divides, h_gcd};
use ::ddelta::json::ToJson;
use ::ddelta::matsmith::smith;
use ::ddelta::parse::{parse_element, parse_matrix};
use ::ddelta::synthesis::{method_of_steps, solution_basis_single, ExpSolution, Mode, DEFAULT_RESIDUAL};
use ::ddelta::HElement;

create_exception!(ddelta, DdeltaError, PyException);

fn err(e: ::ddelta::Error) -> PyErr {
    DdeltaError::new_err((e.to_string(), e.exit_code()))
}

fn to_py(py: Python<'_>, v: &Value) -> PyResult<Py<PyAny>> {
    Ok(match v {
        Value::Null => py.None(),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any().unbind(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any().unbind(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any().unbind(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any().unbind(),
        Value::Array(a) => {
            let items = a.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, items)?.into_any().unbind()
        }
        Value::Object(m) => {
            let d = PyDict::new(py);
            for (k, x) in m {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any().unbind()
        }
    })
}

/// An element of the operator ring, always normalized.
#[pyclass(name = "Element", module = "ddelta", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyElement(HElement);

#[pymethods]
impl PyElement {
    #[new]
    fn new(expr: &str) -> PyResult<Self> {
        parse_element(expr).map(PyElement).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_expr_string()
    }

    fn __repr__(&self) -> String {
        format!("Element({:?})", self.0.to_expr_string())
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        element(other).map(|o| o == self.0).unwrap_or(false)
    }

    fn __add__(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyElement(&self.0 + &element(other)?))
    }

    fn __sub__(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyElement(&self.0 - &element(other)?))
    }

    fn __mul__(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyElement(&self.0 * &element(other)?))
    }

    fn __neg__(&self) -> Self {
        PyElement(&HElement::zero() - &self.0)
    }

    fn __pow__(&self, e: u32, _modulo: Option<u32>) -> Self {
        PyElement(self.0.pow(e))
    }

    fn is_unit(&self) -> bool {
        self.0.is_unit()
    }

    /// Value of the symbol at `z`.
    fn eval(&self, z: Complex64) -> PyResult<Complex64> {
        self.0.eval(z).map_err(err)
    }

    fn to_json(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &self.0.to_json())
    }
}

fn element(obj: &Bound<'_, PyAny>) -> PyResult<HElement> {
    if let Ok(e) = obj.cast::<PyElement>() {
        return Ok(e.get().0.clone());
    }
    if let Ok(s) = obj.extract::<String>() {
        return parse_element(&s).map_err(err);
    }
    if let Ok(i) = obj.extract::<i64>() {
        return parse_element(&i.to_string()).map_err(err);
    }
    Err(pyo3::exceptions::PyTypeError::new_err("expected an Element, an expression string or an int"))
}

#[pyfunction]
fn gcd(a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>) -> PyResult<PyElement> {
    h_gcd(&element(a)?, &element(b)?).map(PyElement).map_err(err)
}

/// `(g, u, v)` with `u·a + v·b = g`.
#[pyfunction]
fn bezout(a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>) -> PyResult<(PyElement, PyElement, PyElement)> {
    let t = h_bezout(&element(a)?, &element(b)?).map_err(err)?;
    Ok((PyElement(t.g), PyElement(t.u), PyElement(t.v)))
}

/// `b / a` when `a` divides `b`, else `None`.
#[pyfunction]
fn divides(a: &Bound<'_, PyAny>, b: &Bound<'_, PyAny>) -> PyResult<Option<PyElement>> {
    match h_divides(&element(a)?, &element(b)?) {
        Ok(q) => Ok(Some(PyElement(q))),
        Err(::ddelta::Error::NotDivisible { .. }) => Ok(None),
        Err(e) => Err(err(e)),
    }
}

#[pyfunction]
fn smith_form(py: Python<'_>, matrix: &str) -> PyResult<Py<PyAny>> {
    let p = parse_matrix(matrix).map_err(err)?;
    let s = smith(&p).map_err(err)?;
    to_py(py, &s.to_json())
}

/// `[(center, multiplicity), ...]` for the zeros of `q*` in the rectangle.
#[pyfunction]
#[pyo3(signature = (q, rect, tol = 1e-9))]
fn zeros(q: &Bound<'_, PyAny>, rect: [f64; 4], tol: f64) -> PyResult<Vec<(Complex64, u32)>> {
    let r = Rect::new(rect[0], rect[1], rect[2], rect[3]).map_err(err)?;
    let z = find_zeros(&element(q)?, &r, tol).map_err(err)?;
    Ok(z.into_iter().map(|c| (c.center, c.multiplicity)).collect())
}

/// Exponents and polynomial coefficients of the basis `x^j e^{αx}`.
#[pyfunction]
#[pyo3(signature = (q, rect, tol = 1e-9))]
fn solve(py: Python<'_>, q: &Bound<'_, PyAny>, rect: [f64; 4], tol: f64) -> PyResult<Py<PyAny>> {
    let r = Rect::new(rect[0], rect[1], rect[2], rect[3]).map_err(err)?;
    let b = solution_basis_single(&element(q)?, &r, tol, DEFAULT_RESIDUAL).map_err(err)?;
    to_py(py, &b.to_json())
}

/// Samples `(x, y(x))` from the method of steps with `y = init_poly(x)` on the
/// initial interval.
#[pyfunction]
#[pyo3(signature = (q, init_poly, horizon, step = 1.0 / 256.0))]
fn simulate(q: &Bound<'_, PyAny>, init_poly: Vec<Complex64>, horizon: f64, step: f64) -> PyResult<Vec<(f64, Complex64)>> {
    let init = ExpSolution::from_modes(vec![Mode::new(Complex64::new(0.0, 0.0), init_poly)]);
    let t = method_of_steps(&element(q)?, &init, horizon, step).map_err(err)?;
    Ok(t.grid().zip(t.values.iter().copied()).collect())
}

fn current(f: &Bound<'_, PyAny>, center: Complex64, radius: f64, lambdas: Option<Vec<f64>>, grid: Option<usize>, residue: bool) -> PyResult<Complex64> {
    let f = element(f)?;
    let bump = Bump::new(center, radius, vec![]).map_err(err)?;
    let mut opts = CurrentOptions::default();
    if let Some(l) = lambdas {
        opts.lambdas = l;
    }
    if let Some(g) = grid {
        opts.grid = g;
    }
    let e = if residue { residue_pair(&f, &bump, &opts) } else { pv_pair(&f, &bump, &opts) };
    e.map(|e| e.value).map_err(err)
}

/// Residue current of `f` paired with the radial bump.
#[pyfunction]
#[pyo3(signature = (f, center, radius, lambdas = None, grid = None))]
fn residue(f: &Bound<'_, PyAny>, center: Complex64, radius: f64, lambdas: Option<Vec<f64>>, grid: Option<usize>) -> PyResult<Complex64> {
    current(f, center, radius, lambdas, grid, true)
}

/// Principal value current of `f` paired with the radial bump.
#[pyfunction]
#[pyo3(signature = (f, center, radius, lambdas = None, grid = None))]
fn pv(f: &Bound<'_, PyAny>, center: Complex64, radius: f64, lambdas: Option<Vec<f64>>, grid: Option<usize>) -> PyResult<Complex64> {
    current(f, center, radius, lambdas, grid, false)
}

#[pyfunction]
fn hefer(py: Python<'_>, q: &Bound<'_, PyAny>, alpha: u32) -> PyResult<Py<PyAny>> {
    let q = element(q)?;
    let pair = hefer_pair_n2(&q, alpha);
    let t = pair_identity(&q, alpha, &pair);
    to_py(py, &serde_json::json!({"pair": pair.to_json(), "identity": t.to_json()}))
}

#[pyfunction]
fn member(py: Python<'_>, h: &Bound<'_, PyAny>, gens: Vec<Bound<'_, PyAny>>) -> PyResult<Py<PyAny>> {
    let h = element(h)?;
    let gens = gens.iter().map(element).collect::<PyResult<Vec<_>>>()?;
    let r = ideal_member(&h, &gens).map_err(err)?;
    let mut v = r.to_json();
    v["verified"] = Value::Bool(r.verify(&h, &gens));
    to_py(py, &v)
}

#[pymodule]
#[pyo3(name = "ddelta")]
fn ddelta_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyElement>()?;
    m.add("DdeltaError", m.py().get_type::<DdeltaError>())?;
    m.add_function(wrap_pyfunction!(gcd, m)?)?;
    m.add_function(wrap_pyfunction!(bezout, m)?)?;
    m.add_function(wrap_pyfunction!(divides, m)?)?;
    m.add_function(wrap_pyfunction!(smith_form, m)?)?;
    m.add_function(wrap_pyfunction!(zeros, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(residue, m)?)?;
    m.add_function(wrap_pyfunction!(pv, m)?)?;
    m.add_function(wrap_pyfunction!(hefer, m)?)?;
    m.add_function(wrap_pyfunction!(member, m)?)?;
    Ok(())
}
