//! Python bindings: the polynomial type plus the main pipeline operations
//! (Newton polyhedron, height, exponents, oscillatory decay, Knapp
//! predictions). Rationals cross the boundary as exact "p/q" strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use restrix::adapt;
use restrix::newton;
use restrix::oscint;
use restrix::polyalg;
use restrix::rat::{rat_from_str, rat_to_f64, rat_to_string, Rat};
use restrix::restrict;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_rat(text: &str) -> PyResult<Rat> {
    rat_from_str(text).ok_or_else(|| PyValueError::new_err(format!("not a rational: {text}")))
}

/// Sparse polynomial in x1..x3.
#[pyclass(name = "Polynomial", skip_from_py_object)]
#[derive(Clone)]
struct PyPolynomial {
    inner: polyalg::Polynomial,
}

#[pymethods]
impl PyPolynomial {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(PyPolynomial { inner: polyalg::parse(text, 3).map_err(value_err)? })
    }

    fn evaluate(&self, x: Vec<f64>) -> PyResult<f64> {
        self.inner.evaluate(&x).map_err(value_err)
    }

    /// Partial derivatives as canonical strings.
    fn gradient(&self) -> Vec<String> {
        self.inner.gradient().iter().map(|g| g.to_string()).collect()
    }

    /// Composition with a linear change of variables (3x3 row-major).
    fn compose(&self, matrix: Vec<Vec<f64>>) -> PyResult<Self> {
        let a = polyalg::LinearChange::from_rows(&matrix).map_err(value_err)?;
        Ok(PyPolynomial { inner: self.inner.compose_linear(&a).map_err(value_err)? })
    }

    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Polynomial(\"{}\")", self.inner)
    }
}

/// Newton polyhedron summary: vertices, facets, distance, principal face.
#[pyfunction]
fn newton_polyhedron<'py>(py: Python<'py>, poly: &str) -> PyResult<Bound<'py, PyDict>> {
    let p = polyalg::parse(poly, 3).map_err(value_err)?;
    let s = newton::support(&p).map_err(value_err)?;
    let np = newton::build_polyhedron(&s);
    let dr = newton::distance(&np);
    let out = PyDict::new(py);
    out.set_item("vertices", np.vertices.iter().map(|v| v.to_vec()).collect::<Vec<_>>())?;
    let facets = PyList::empty(py);
    for f in &np.facets {
        let fd = PyDict::new(py);
        fd.set_item("normal", f.normal.to_vec())?;
        fd.set_item("offset", f.offset)?;
        facets.append(fd)?;
    }
    out.set_item("facets", facets)?;
    out.set_item("distance", rat_to_string(&dr.d))?;
    out.set_item("distance_float", rat_to_f64(&dr.d))?;
    out.set_item("principal_face_dim", dr.principal_face_dim)?;
    out.set_item("attaining_normal", dr.attaining_normal.to_vec())?;
    Ok(out)
}

/// Brute-force LP distance oracle (exact rational string).
#[pyfunction]
fn distance_oracle(poly: &str) -> PyResult<String> {
    let p = polyalg::parse(poly, 3).map_err(value_err)?;
    let s = newton::support(&p).map_err(value_err)?;
    Ok(rat_to_string(&newton::distance_oracle(&s)))
}

/// Height search over rotations; returns h, d_original, the maximizing
/// rotation, and the certification flag.
#[pyfunction]
#[pyo3(signature = (poly, starts=64, iters=40, seed=0))]
fn height<'py>(
    py: Python<'py>,
    poly: &str,
    starts: usize,
    iters: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let p = polyalg::parse(poly, 3).map_err(value_err)?;
    let h = adapt::height_search(&p, starts, iters, seed).map_err(value_err)?;
    let out = PyDict::new(py);
    out.set_item("h", rat_to_string(&h.h))?;
    out.set_item("h_float", rat_to_f64(&h.h))?;
    out.set_item("d_original", rat_to_string(&h.d_original))?;
    out.set_item("certified", h.certified)?;
    out.set_item("rotation", h.maximizer.rows())?;
    Ok(out)
}

fn exponent_dict<'py>(py: Python<'py>, exps: &adapt::ExponentReport) -> PyResult<Bound<'py, PyDict>> {
    let out = PyDict::new(py);
    out.set_item("h", rat_to_string(&exps.h))?;
    out.set_item("beta", rat_to_string(&exps.beta))?;
    out.set_item("p_star", rat_to_string(&exps.p_star))?;
    out.set_item("p_star_float", rat_to_f64(&exps.p_star))?;
    out.set_item("q_star", rat_to_string(&exps.q_star))?;
    out.set_item("q_lower", rat_to_string(&exps.q_lower))?;
    out.set_item("m", exps.m)?;
    Ok(out)
}

/// Full exponent report from a height search on the given polynomial.
#[pyfunction]
#[pyo3(signature = (poly, starts=64, iters=40, seed=0))]
fn exponents<'py>(
    py: Python<'py>,
    poly: &str,
    starts: usize,
    iters: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let p = polyalg::parse(poly, 3).map_err(value_err)?;
    let h = adapt::height_search(&p, starts, iters, seed).map_err(value_err)?;
    let exps = adapt::exponent_report(&h.h, &h.d_original);
    let out = exponent_dict(py, &exps)?;
    out.set_item("d_original", rat_to_string(&h.d_original))?;
    out.set_item("certified", h.certified)?;
    Ok(out)
}

/// Exponent report straight from a rational height ("4/5").
#[pyfunction]
fn critical_p<'py>(py: Python<'py>, h: &str) -> PyResult<Bound<'py, PyDict>> {
    let h = parse_rat(h)?;
    exponent_dict(py, &adapt::critical_p(&h))
}

/// Transference exponent 2(m+beta)/(2m+beta) as an exact rational string.
#[pyfunction]
fn greenleaf_p(beta: &str, m: u32) -> PyResult<String> {
    Ok(rat_to_string(&adapt::greenleaf_p(&parse_rat(beta)?, m)))
}

/// Dual exponent: q with 1/p + 1/q = 1.
#[pyfunction]
fn dual_exponent(p: &str) -> PyResult<String> {
    adapt::dual_exponent(&parse_rat(p)?).map(|q| rat_to_string(&q)).map_err(value_err)
}

/// Exact Knapp scaling exponent 1/(2d) - (1 + 1/d)/q.
#[pyfunction]
fn knapp_predicted_exponent(d: &str, p: &str) -> PyResult<String> {
    Ok(rat_to_string(&restrict::predicted_exponent(&parse_rat(d)?, &parse_rat(p)?)))
}

/// The p at which the Knapp exponent crosses zero: 2(d+1)/(2d+1).
#[pyfunction]
fn critical_p_of_distance(d: &str) -> PyResult<String> {
    Ok(rat_to_string(&restrict::critical_p_of_distance(&parse_rat(d)?)))
}

/// Surface-measure Fourier transform J(xi); returns (re, im).
#[pyfunction]
#[pyo3(signature = (poly, xi, bump_radius=0.5, nodes_per_wavelength=4.0, budget=200_000_000, area_factor=true))]
fn fourier_surface_measure(
    poly: &str,
    xi: [f64; 4],
    bump_radius: f64,
    nodes_per_wavelength: f64,
    budget: u64,
    area_factor: bool,
) -> PyResult<(f64, f64)> {
    let p = polyalg::parse(poly, 3).map_err(value_err)?;
    let sp = oscint::SurfacePatch::new(p, bump_radius, oscint::BumpKind::SmoothExp, area_factor)
        .map_err(value_err)?;
    let cfg = oscint::QuadratureConfig { nodes_per_wavelength, max_evaluations: budget };
    let s = oscint::fourier_surface_measure(&sp, &xi.into(), &cfg).map_err(value_err)?;
    Ok((s.value.re, s.value.im))
}

/// Max of |1/Gamma(1+iy)| e^{-pi |y|} on a grid of [-y_max, y_max];
/// returns (max_ratio, argmax).
#[pyfunction]
fn gamma_bound_check(y_max: f64, n: usize) -> (f64, f64) {
    let g = oscint::gamma_bound_check(y_max, n);
    (g.max_ratio, g.argmax)
}

/// Sampled convexity check; returns (convex, witness_or_none).
#[pyfunction]
#[pyo3(signature = (poly, radius=1.0, grid=9))]
fn check_convex(poly: &str, radius: f64, grid: usize) -> PyResult<(bool, Option<Vec<f64>>)> {
    let p = polyalg::parse(poly, 3).map_err(value_err)?;
    let c = polyalg::check_convex(&p, radius, grid);
    Ok((c.convex, c.witness))
}

#[pymodule]
fn restrix_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_function(wrap_pyfunction!(newton_polyhedron, m)?)?;
    m.add_function(wrap_pyfunction!(distance_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(height, m)?)?;
    m.add_function(wrap_pyfunction!(exponents, m)?)?;
    m.add_function(wrap_pyfunction!(critical_p, m)?)?;
    m.add_function(wrap_pyfunction!(greenleaf_p, m)?)?;
    m.add_function(wrap_pyfunction!(dual_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(knapp_predicted_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(critical_p_of_distance, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_surface_measure, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_bound_check, m)?)?;
    m.add_function(wrap_pyfunction!(check_convex, m)?)?;
    Ok(())
}
