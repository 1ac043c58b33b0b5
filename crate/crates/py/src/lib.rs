//! Python bindings. Rationals cross the boundary as `fractions.Fraction`;
//! anything whose `str()` parses as `p` or `p/q` is accepted on the way in.
//! Structured inputs (functions, families, test forms) use the same JSON as
//! the command-line tool.

use etv_core::degeneracy::{degeneracy_witness, is_nondegenerate, ma_zero_criterion, mixed_volume_zero_criterion};
use etv_core::dual_fan::dual_fan_etp;
use etv_core::error::EtvError;
use etv_core::framed::Etv;
use etv_core::intersection::{bergman_fan, product, stable_intersection};
use etv_core::json::{
    certificate_out, etv_in, etv_out, family_in, framed_out, pl_in, pl_out, test_form_in, witness_out,
};
use etv_core::monge::{
    corner_locus, dc_refined, is_r_generated, mixed_ma, mixed_volume_oracle, mixed_volume_via_ma, support_function,
    PLFunction, DC_SIGN,
};
use etv_core::polyhedron::VPolytope;
use etv_core::scalar::{fmt_rat, parse_rat, Rat};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(
    etv,
    EtvValueError,
    PyValueError,
    "Invalid input or a failed validation."
);
create_exception!(etv, ResourceCapError, PyValueError, "A resource cap was exceeded.");

fn err(e: EtvError) -> PyErr {
    match e {
        EtvError::ResourceCap(_) | EtvError::ShiftBudget(_) => ResourceCapError::new_err(e.to_string()),
        _ => EtvValueError::new_err(e.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    EtvValueError::new_err(format!("parse error: {e}"))
}

fn to_rat(x: &Bound<'_, PyAny>) -> PyResult<Rat> {
    parse_rat(&x.str()?.to_cow()?).map_err(err)
}

fn to_rats(xs: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<Rat>> {
    xs.iter().map(to_rat).collect()
}

fn fraction<'py>(py: Python<'py>, r: &Rat) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((fmt_rat(r),))
}

fn from_json<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((v.to_string(),))
}

/// A polytope given by vertices and optional rays.
#[pyclass(name = "Polytope", module = "etv", skip_from_py_object)]
#[derive(Clone)]
struct PyPolytope {
    inner: VPolytope,
}

#[pymethods]
impl PyPolytope {
    #[new]
    #[pyo3(signature = (vertices, rays = Vec::new()))]
    fn new(vertices: Vec<Vec<Bound<'_, PyAny>>>, rays: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let vs = vertices.into_iter().map(to_rats).collect::<PyResult<Vec<_>>>()?;
        let rs = rays.into_iter().map(to_rats).collect::<PyResult<Vec<_>>>()?;
        let d = vs
            .first()
            .map(|v| v.len())
            .ok_or_else(|| EtvValueError::new_err("no vertices"))?;
        if vs.iter().chain(&rs).any(|v| v.len() != d) {
            return Err(EtvValueError::new_err("points of different lengths"));
        }
        Ok(PyPolytope {
            inner: VPolytope::with_rays(vs, rs),
        })
    }

    #[getter]
    fn ambient(&self) -> usize {
        self.inner.ambient()
    }

    fn vertices<'py>(&self, py: Python<'py>) -> PyResult<Vec<Vec<Bound<'py, PyAny>>>> {
        self.inner
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| fraction(py, x)).collect())
            .collect()
    }

    fn volume<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.volume())
    }

    fn minkowski_sum(&self, other: &PyPolytope) -> PyPolytope {
        PyPolytope {
            inner: self.inner.minkowski_sum(&other.inner),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Polytope(ambient={}, vertices={})",
            self.inner.ambient(),
            self.inner.vertices.len()
        )
    }
}

/// Piecewise linear function `max(plus) - max(minus)` on `C^n`.
#[pyclass(name = "PLFunction", module = "etv", skip_from_py_object)]
#[derive(Clone)]
struct PyPLFunction {
    inner: PLFunction,
}

#[pymethods]
impl PyPLFunction {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j = serde_json::from_str(text).map_err(json_err)?;
        Ok(PyPLFunction {
            inner: pl_in(&j).map_err(err)?,
        })
    }

    /// Support function of a polytope in the real dual space `R^{2n}`.
    #[staticmethod]
    fn support(gamma: &PyPolytope) -> PyResult<Self> {
        Ok(PyPLFunction {
            inner: support_function(&gamma.inner).map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&pl_out(&self.inner)).expect("serializable")
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    /// Value at a point of `R^{2n}`.
    fn __call__<'py>(&self, py: Python<'py>, z: Vec<Bound<'py, PyAny>>) -> PyResult<Bound<'py, PyAny>> {
        let z = to_rats(z)?;
        if z.len() != 2 * self.inner.n {
            return Err(EtvValueError::new_err(format!(
                "expected {} coordinates",
                2 * self.inner.n
            )));
        }
        fraction(py, &self.inner.eval(&z))
    }

    fn __add__(&self, other: &PyPLFunction) -> PyResult<Self> {
        if other.inner.n != self.inner.n {
            return Err(EtvValueError::new_err("functions on different spaces"));
        }
        Ok(PyPLFunction {
            inner: self.inner.add(&other.inner),
        })
    }

    fn __neg__(&self) -> Self {
        PyPLFunction {
            inner: self.inner.neg(),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "PLFunction(n={}, plus={}, minus={})",
            self.inner.n,
            self.inner.plus.len(),
            self.inner.minus.len()
        )
    }
}

/// Exponential tropical variety: weighted cells in `R^{2n} = C^n`.
#[pyclass(name = "Etv", module = "etv", skip_from_py_object)]
#[derive(Clone)]
struct PyEtv {
    inner: Etv,
}

fn wrap(inner: Etv) -> PyEtv {
    PyEtv { inner }
}

#[pymethods]
impl PyEtv {
    /// Weighted or framed JSON; framed input is checked to be closed.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j = serde_json::from_str(text).map_err(json_err)?;
        Ok(wrap(etv_in(&j).map_err(err)?))
    }

    #[staticmethod]
    fn zero(n: usize, k: usize) -> Self {
        wrap(Etv::zero(n, k))
    }

    #[staticmethod]
    fn full_space(n: usize) -> Self {
        wrap(Etv::full_space(n))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&etv_out(&self.inner)).expect("serializable")
    }

    fn to_framed_json(&self) -> String {
        serde_json::to_string(&framed_out(&self.inner.to_framed())).expect("serializable")
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    fn __len__(&self) -> usize {
        self.inner.cells.len()
    }

    fn weights<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.inner.cells.iter().map(|c| fraction(py, &c.weight)).collect()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn is_positive(&self) -> bool {
        self.inner.is_positive()
    }

    fn is_r_generated(&self) -> bool {
        is_r_generated(&self.inner)
    }

    fn is_etp(&self) -> PyResult<bool> {
        Ok(self.inner.to_framed().is_etp().map_err(err)?.ok)
    }

    fn equivalent(&self, other: &PyEtv) -> bool {
        self.inner.equivalent(&other.inner)
    }

    fn __add__(&self, other: &PyEtv) -> PyResult<Self> {
        Ok(wrap(self.inner.add(&other.inner).map_err(err)?))
    }

    fn __sub__(&self, other: &PyEtv) -> PyResult<Self> {
        Ok(wrap(self.inner.sub(&other.inner).map_err(err)?))
    }

    fn __neg__(&self) -> Self {
        wrap(self.inner.neg())
    }

    fn scale(&self, t: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(wrap(self.inner.scale(&to_rat(t)?)))
    }

    fn translate(&self, a: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let a = to_rats(a)?;
        if a.len() != 2 * self.inner.n {
            return Err(EtvValueError::new_err(format!(
                "expected {} coordinates",
                2 * self.inner.n
            )));
        }
        Ok(wrap(self.inner.translate(&a)))
    }

    #[pyo3(signature = (other, seed = 0))]
    fn product(&self, other: &PyEtv, seed: u64) -> PyResult<Self> {
        Ok(wrap(product(&self.inner, &other.inner, seed).map_err(err)?))
    }

    #[pyo3(signature = (other, seed = 0))]
    fn stable_intersection(&self, other: &PyEtv, seed: u64) -> PyResult<Self> {
        Ok(wrap(stable_intersection(&self.inner, &other.inner, seed).map_err(err)?))
    }

    fn bergman_fan(&self) -> Self {
        wrap(bergman_fan(&self.inner))
    }

    fn irreducible_components(&self) -> Vec<PyEtv> {
        self.inner.irreducible_components().into_iter().map(wrap).collect()
    }

    /// Pairing with a test form given as JSON.
    fn evaluate_current<'py>(&self, py: Python<'py>, form: &str) -> PyResult<Bound<'py, PyAny>> {
        let j = serde_json::from_str(form).map_err(json_err)?;
        let phi = test_form_in(&j).map_err(err)?;
        fraction(py, &self.inner.evaluate_current(&phi).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!(
            "Etv(n={}, k={}, cells={})",
            self.inner.n,
            self.inner.k,
            self.inner.cells.len()
        )
    }
}

#[pyfunction]
fn dual_fan(gamma: &PyPolytope, k: usize) -> PyResult<PyEtv> {
    Ok(wrap(dual_fan_etp(&gamma.inner, k).map_err(err)?.result))
}

#[pyfunction(name = "corner_locus")]
fn py_corner_locus(h: &PyPLFunction) -> PyResult<PyEtv> {
    Ok(wrap(corner_locus(&h.inner).map_err(err)?))
}

/// `D_c(h X)`.
#[pyfunction]
fn dc(h: &PyPLFunction, x: &PyEtv) -> PyResult<PyEtv> {
    Ok(wrap(dc_refined(&h.inner, &x.inner).map_err(err)?))
}

#[pyfunction(name = "mixed_ma")]
#[pyo3(signature = (functions, seed = 0))]
fn py_mixed_ma(functions: Vec<PyRef<'_, PyPLFunction>>, seed: u64) -> PyResult<PyEtv> {
    let hs: Vec<PLFunction> = functions.iter().map(|h| h.inner.clone()).collect();
    Ok(wrap(mixed_ma(&hs, seed).map_err(err)?))
}

fn cloned(bs: &[PyRef<'_, PyPolytope>]) -> Vec<VPolytope> {
    bs.iter().map(|b| b.inner.clone()).collect()
}

#[pyfunction]
#[pyo3(signature = (bodies, seed = 0))]
fn mixed_volume<'py>(py: Python<'py>, bodies: Vec<PyRef<'py, PyPolytope>>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &mixed_volume_via_ma(&cloned(&bodies), seed).map_err(err)?)
}

#[pyfunction]
fn mixed_volume_by_polarization<'py>(
    py: Python<'py>,
    bodies: Vec<PyRef<'py, PyPolytope>>,
) -> PyResult<Bound<'py, PyAny>> {
    let bs = cloned(&bodies);
    let n = bs.len();
    if n == 0 || bs.iter().any(|b| b.ambient() != n || !b.is_bounded()) {
        return Err(EtvValueError::new_err(format!(
            "expected {n} bounded polytopes in R^{n}"
        )));
    }
    fraction(py, &mixed_volume_oracle(&bs))
}

/// `{"nondegenerate": bool, "witness": {...} | None}` for a family given as JSON.
#[pyfunction]
fn degeneracy<'py>(py: Python<'py>, family: &str) -> PyResult<Bound<'py, PyAny>> {
    let f = family_in(&serde_json::from_str(family).map_err(json_err)?).map_err(err)?;
    let ok = is_nondegenerate(&f);
    let witness = if ok {
        None
    } else {
        Some(witness_out(&degeneracy_witness(&f).map_err(err)?))
    };
    from_json(py, &serde_json::json!({ "nondegenerate": ok, "witness": witness }))
}

/// Whether `dd^c h_1 ∧ ... ∧ dd^c h_k` vanishes, with its certificate.
#[pyfunction]
fn ma_zero<'py>(py: Python<'py>, functions: Vec<PyRef<'py, PyPLFunction>>) -> PyResult<Bound<'py, PyAny>> {
    let hs: Vec<PLFunction> = functions.iter().map(|h| h.inner.clone()).collect();
    let v = ma_zero_criterion(&hs).map_err(err)?;
    from_json(
        py,
        &serde_json::json!({
            "zero": v.zero,
            "witness": v.witness.as_ref().map(witness_out),
            "certificate": v.certificate.as_ref().map(certificate_out),
        }),
    )
}

#[pyfunction]
fn mv_zero<'py>(py: Python<'py>, bodies: Vec<PyRef<'py, PyPolytope>>) -> PyResult<Bound<'py, PyAny>> {
    let v = mixed_volume_zero_criterion(&cloned(&bodies)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("zero", v.zero)?;
    d.set_item("subset", v.subset)?;
    let sub = v
        .subspace
        .iter()
        .map(|b| b.iter().map(|x| fraction(py, x)).collect::<PyResult<Vec<_>>>())
        .collect::<PyResult<Vec<_>>>()?;
    d.set_item("subspace", sub)?;
    Ok(d.into_any())
}

/// The orientation rule and `d^c` sign all results are computed under.
#[pyfunction]
fn conventions(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("version", "1")?;
    d.set_item("orientation", "outward-first")?;
    d.set_item("dc_sign", if DC_SIGN > 0 { "+1" } else { "-1" })?;
    Ok(d)
}

#[pymodule]
pub fn etv(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolytope>()?;
    m.add_class::<PyPLFunction>()?;
    m.add_class::<PyEtv>()?;
    m.add("EtvValueError", m.py().get_type::<EtvValueError>())?;
    m.add("ResourceCapError", m.py().get_type::<ResourceCapError>())?;
    m.add_function(wrap_pyfunction!(dual_fan, m)?)?;
    m.add_function(wrap_pyfunction!(py_corner_locus, m)?)?;
    m.add_function(wrap_pyfunction!(dc, m)?)?;
    m.add_function(wrap_pyfunction!(py_mixed_ma, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_volume, m)?)?;
    m.add_function(wrap_pyfunction!(mixed_volume_by_polarization, m)?)?;
    m.add_function(wrap_pyfunction!(degeneracy, m)?)?;
    m.add_function(wrap_pyfunction!(ma_zero, m)?)?;
    m.add_function(wrap_pyfunction!(mv_zero, m)?)?;
    m.add_function(wrap_pyfunction!(conventions, m)?)?;
    Ok(())
}
