//! Python bindings. Structured results come back as plain dicts.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use serde::Serialize;

use cubex::builders::{self, BraidOptions};
use cubex::curve;
use cubex::hyperbolicity::{self, MetricSpec};
use cubex::median;
use cubex::morse;
use cubex::report::{run_pipeline, PipelineConfig};

create_exception!(pycubex, CubexError, PyException);

fn err(e: cubex::CubexError) -> PyErr {
    CubexError::new_err(e.to_string())
}

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| CubexError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pyclass(name = "DefiningGraph", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: cubex::DefiningGraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges, labels=None))]
    fn new(n: usize, edges: Vec<[usize; 2]>, labels: Option<Vec<String>>) -> PyResult<Self> {
        let inner = match labels {
            Some(l) => cubex::DefiningGraph::new(l, &edges),
            None => cubex::DefiningGraph::unlabelled(n, &edges),
        }
        .map_err(err)?;
        Ok(PyGraph { inner })
    }

    #[staticmethod]
    fn cycle(n: usize) -> Self {
        PyGraph {
            inner: cubex::DefiningGraph::cycle(n),
        }
    }

    #[staticmethod]
    fn path(n: usize) -> Self {
        PyGraph {
            inner: cubex::DefiningGraph::path(n),
        }
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        PyGraph {
            inner: cubex::DefiningGraph::complete(n),
        }
    }

    /// Accepts DOT (`graph { ... }`) or the JSON `{labels, edges}` form.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let t = text.trim_start();
        let inner = if t.starts_with("graph") || t.starts_with("strict") {
            cubex::DefiningGraph::from_dot(text)
        } else {
            cubex::DefiningGraph::from_json_str(text)
        }
        .map_err(err)?;
        Ok(PyGraph { inner })
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<[usize; 2]> {
        self.inner.edges()
    }

    fn __len__(&self) -> usize {
        self.inner.num_vertices()
    }

    fn induced_squares(&self) -> Vec<[usize; 4]> {
        self.inner.induced_squares()
    }

    fn is_square_free(&self) -> bool {
        self.inner.is_square_free()
    }

    fn __repr__(&self) -> String {
        format!(
            "DefiningGraph({} vertices, {} edges)",
            self.inner.num_vertices(),
            self.inner.num_edges()
        )
    }
}

#[pyclass(name = "CubeComplex", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyComplex {
    inner: cubex::CubeComplex,
}

impl PyComplex {
    fn hull(&self, pts: &[usize]) -> PyResult<cubex::ConvexSubcomplex> {
        self.check(pts)?;
        median::convex_hull(&self.inner, pts).map_err(err)
    }

    fn check(&self, pts: &[usize]) -> PyResult<()> {
        let n = self.inner.num_vertices();
        match pts.iter().find(|&&v| v >= n) {
            Some(v) => Err(pyo3::exceptions::PyIndexError::new_err(format!(
                "vertex {v} out of range (n = {n})"
            ))),
            None if pts.is_empty() => Err(CubexError::new_err("empty vertex set")),
            None => Ok(()),
        }
    }
}

fn wrap(inner: cubex::CubeComplex) -> PyComplex {
    PyComplex { inner }
}

#[pymethods]
impl PyComplex {
    /// Verifies the median property before accepting the graph.
    #[staticmethod]
    fn from_edges(n: usize, edges: Vec<[usize; 2]>) -> PyResult<Self> {
        cubex::CubeComplex::from_graph(n, &edges)
            .map(wrap)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        cubex::CubeComplex::from_json_str(text)
            .map(wrap)
            .map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.inner.num_vertices()
    }

    #[getter]
    fn num_hyperplanes(&self) -> usize {
        self.inner.num_hyperplanes()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    #[getter]
    fn edges(&self) -> Vec<[usize; 2]> {
        self.inner.edges().collect()
    }

    fn distance(&self, a: usize, b: usize) -> PyResult<usize> {
        self.check(&[a, b])?;
        Ok(self.inner.distance(a, b))
    }

    fn distance_linf(&self, a: usize, b: usize) -> PyResult<usize> {
        self.check(&[a, b])?;
        hyperbolicity::distance_linf(&self.inner, a, b).map_err(err)
    }

    fn median(&self, a: usize, b: usize, c: usize) -> PyResult<usize> {
        self.check(&[a, b, c])?;
        Ok(self.inner.median(a, b, c))
    }

    fn interval(&self, a: usize, b: usize) -> PyResult<Vec<usize>> {
        self.check(&[a, b])?;
        Ok(median::interval(&self.inner, a, b))
    }

    fn geodesic(&self, a: usize, b: usize) -> PyResult<Vec<usize>> {
        self.check(&[a, b])?;
        Ok(median::geodesic(&self.inner, a, b))
    }

    fn separating_hyperplanes(&self, a: usize, b: usize) -> PyResult<Vec<usize>> {
        self.check(&[a, b])?;
        Ok(self.inner.separating_hyperplanes(a, b))
    }

    fn convex_hull(&self, pts: Vec<usize>) -> PyResult<Vec<usize>> {
        Ok(self.hull(&pts)?.members().to_vec())
    }

    fn project(&self, v: usize, onto: Vec<usize>) -> PyResult<usize> {
        self.check(&[v])?;
        Ok(self.hull(&onto)?.project(&self.inner, v))
    }

    /// 0/1 string over hyperplanes.
    fn signature(&self, v: usize) -> PyResult<String> {
        self.check(&[v])?;
        let s = self.inner.signature(v);
        Ok((0..self.inner.num_hyperplanes())
            .map(|h| if s.get(h) { '1' } else { '0' })
            .collect())
    }

    fn transverse(&self, a: usize, b: usize) -> bool {
        self.inner.transverse(a, b)
    }

    fn quadruple_grid(&self, py: Python<'_>, xs: [usize; 4]) -> PyResult<Py<PyAny>> {
        self.check(&xs)?;
        to_py(py, &median::quadruple_grid(&self.inner, xs).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!(
            "CubeComplex({} vertices, {} hyperplanes, dim {})",
            self.inner.num_vertices(),
            self.inner.num_hyperplanes(),
            self.inner.dimension()
        )
    }
}

#[pyfunction]
fn grid(p: usize, q: usize) -> PyComplex {
    wrap(builders::grid(p, q))
}

#[pyfunction]
fn cube(d: usize) -> PyComplex {
    wrap(builders::cube(d))
}

#[pyfunction]
fn path(k: usize) -> PyComplex {
    wrap(builders::path(k))
}

#[pyfunction]
fn staircase(m: usize) -> PyComplex {
    wrap(builders::staircase(m))
}

#[pyfunction]
fn star_tree(arms: usize, length: usize) -> PyComplex {
    wrap(builders::star_tree(arms, length))
}

#[pyfunction]
fn product(a: &PyComplex, b: &PyComplex) -> PyComplex {
    wrap(builders::product(&a.inner, &b.inner))
}

#[pyfunction]
fn racg_ball(gamma: &PyGraph, radius: usize) -> PyResult<PyComplex> {
    builders::racg_ball(&gamma.inner, radius)
        .map(|b| wrap(b.complex))
        .map_err(err)
}

#[pyfunction]
fn raag_ball(gamma: &PyGraph, radius: usize) -> PyResult<PyComplex> {
    builders::raag_ball(&gamma.inner, radius)
        .map(|b| wrap(b.complex))
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (gamma, strands, subdivide=false, radius=3))]
fn braid_complex(
    gamma: &PyGraph,
    strands: usize,
    subdivide: bool,
    radius: usize,
) -> PyResult<PyComplex> {
    let opts = BraidOptions {
        auto_subdivide: subdivide,
        radius,
        ..BraidOptions::default()
    };
    builders::graph_braid_complex(&gamma.inner, strands, &opts)
        .map(|b| wrap(b.complex))
        .map_err(err)
}

#[pyfunction]
fn flat_rectangle_thickness(x: &PyComplex) -> usize {
    hyperbolicity::max_flat_rectangle_thickness(&x.inner).value
}

#[pyfunction]
fn join_thinness(x: &PyComplex) -> PyResult<usize> {
    hyperbolicity::join_thinness(&x.inner).map_err(err)
}

#[pyfunction]
fn grid_thinness(x: &PyComplex) -> PyResult<usize> {
    hyperbolicity::grid_thinness(&x.inner).map_err(err)
}

/// Four-point δ under "l1", "linf" or "dl" (with `l`).
#[pyfunction]
#[pyo3(signature = (x, metric="l1", l=0))]
fn four_point_delta(py: Python<'_>, x: &PyComplex, metric: &str, l: usize) -> PyResult<Py<PyAny>> {
    let m = match metric {
        "l1" => MetricSpec::L1,
        "linf" => MetricSpec::Linf,
        "dl" => MetricSpec::DeltaL { l },
        other => return Err(CubexError::new_err(format!("unknown metric {other:?}"))),
    };
    to_py(
        py,
        &hyperbolicity::four_point_delta(&x.inner, m).map_err(err)?,
    )
}

#[pyfunction]
fn meier_racg_hyperbolic(gamma: &PyGraph) -> bool {
    hyperbolicity::meier_racg_hyperbolic(&gamma.inner)
}

#[pyfunction]
fn braid2_hyperbolic(gamma: &PyGraph) -> PyResult<bool> {
    hyperbolicity::braid2_hyperbolic(&gamma.inner).map_err(err)
}

#[pyfunction]
fn raag_acyl_hyperbolic(gamma: &PyGraph) -> bool {
    hyperbolicity::raag_acyl_hyperbolic(&gamma.inner)
}

#[pyfunction]
fn delta_l(x: &PyComplex, a: usize, b: usize, l: usize) -> PyResult<usize> {
    x.check(&[a, b])?;
    curve::delta_l(&x.inner, a, b, l).map_err(err)
}

#[pyfunction]
fn hx_model(py: Python<'_>, x: &PyComplex) -> PyResult<Py<PyAny>> {
    to_py(py, &curve::hx_model(&x.inner).map_err(err)?)
}

/// Edge lists of the crossing and contact graphs.
#[pyfunction]
fn crossing_graph(x: &PyComplex) -> Vec<[usize; 2]> {
    curve::crossing_graph(&x.inner).edges()
}

#[pyfunction]
fn contact_graph(x: &PyComplex) -> Vec<[usize; 2]> {
    curve::contact_graph(&x.inner).edges()
}

/// Contraction constants of the hull of `points`: rect, grid and join.
#[pyfunction]
fn contraction_constants(py: Python<'_>, x: &PyComplex, points: Vec<usize>) -> PyResult<Py<PyAny>> {
    let y = x.hull(&points)?;
    let rect = morse::contraction_constant_rect(&x.inner, &y).map_err(err)?;
    let grid = morse::contraction_constant_grid(&x.inner, &y).map_err(err)?;
    let join = morse::contraction_constant_join(&x.inner, &y).map_err(err)?;
    to_py(
        py,
        &serde_json::json!({ "rect": rect, "grid": grid, "join": join, "hull": y.members() }),
    )
}

#[pyfunction]
fn contracting_ball_check(
    py: Python<'_>,
    x: &PyComplex,
    points: Vec<usize>,
    k: usize,
) -> PyResult<Py<PyAny>> {
    let y = x.hull(&points)?;
    to_py(py, &morse::contracting_ball_check(&x.inner, &y, k))
}

#[pyfunction]
fn morse_failure_witness(
    py: Python<'_>,
    x: &PyComplex,
    points: Vec<usize>,
    n: usize,
) -> PyResult<Py<PyAny>> {
    let y = x.hull(&points)?;
    to_py(
        py,
        &morse::morse_failure_witness(&x.inner, &y, n).map_err(err)?,
    )
}

/// Λ given as vertex indices of Γ.
#[pyfunction]
fn racg_special_morse(gamma: &PyGraph, sub: Vec<usize>) -> PyResult<bool> {
    morse::racg_special_morse(&gamma.inner, &sub)
        .map(|m| m.morse)
        .map_err(err)
}

/// Runs a pipeline config given as JSON text and returns the report bundle.
#[pyfunction]
fn report(py: Python<'_>, config: &str) -> PyResult<Py<PyAny>> {
    let cfg = PipelineConfig::from_json_str(config).map_err(err)?;
    let text = run_pipeline(&cfg).map_err(err)?.to_json_pretty();
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

#[pymodule]
fn pycubex(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CubexError", m.py().get_type::<CubexError>())?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyComplex>()?;
    m.add_function(wrap_pyfunction!(grid, m)?)?;
    m.add_function(wrap_pyfunction!(cube, m)?)?;
    m.add_function(wrap_pyfunction!(path, m)?)?;
    m.add_function(wrap_pyfunction!(staircase, m)?)?;
    m.add_function(wrap_pyfunction!(star_tree, m)?)?;
    m.add_function(wrap_pyfunction!(product, m)?)?;
    m.add_function(wrap_pyfunction!(racg_ball, m)?)?;
    m.add_function(wrap_pyfunction!(raag_ball, m)?)?;
    m.add_function(wrap_pyfunction!(braid_complex, m)?)?;
    m.add_function(wrap_pyfunction!(flat_rectangle_thickness, m)?)?;
    m.add_function(wrap_pyfunction!(join_thinness, m)?)?;
    m.add_function(wrap_pyfunction!(grid_thinness, m)?)?;
    m.add_function(wrap_pyfunction!(four_point_delta, m)?)?;
    m.add_function(wrap_pyfunction!(meier_racg_hyperbolic, m)?)?;
    m.add_function(wrap_pyfunction!(braid2_hyperbolic, m)?)?;
    m.add_function(wrap_pyfunction!(raag_acyl_hyperbolic, m)?)?;
    m.add_function(wrap_pyfunction!(delta_l, m)?)?;
    m.add_function(wrap_pyfunction!(hx_model, m)?)?;
    m.add_function(wrap_pyfunction!(crossing_graph, m)?)?;
    m.add_function(wrap_pyfunction!(contact_graph, m)?)?;
    m.add_function(wrap_pyfunction!(contraction_constants, m)?)?;
    m.add_function(wrap_pyfunction!(contracting_ball_check, m)?)?;
    m.add_function(wrap_pyfunction!(morse_failure_witness, m)?)?;
    m.add_function(wrap_pyfunction!(racg_special_morse, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    Ok(())
}
