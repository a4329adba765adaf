//! Python bindings: the conflict graph, the solver entry points, and the
//! instance utilities, importable as `kpath_py`.

// The pyo3 macros expand to error conversions that trip this lint.
#![allow(clippy::useless_conversion)]

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use kpath_core::{
    chromatic_number, generate, max_clique, parse_instance, serialize_instance, stats,
    verify_coloring, Coloring, GenParams, Graph as CoreGraph, Instance, SolveOptions, Strategy,
};

fn parse_strategy(s: &str) -> PyResult<Strategy> {
    s.parse::<Strategy>().map_err(PyValueError::new_err)
}

/// An undirected conflict graph with a fusable flag per edge.
///
/// Vertices are `0..n`; edges are `(u, v, fusable)` triples. Only fusable
/// edges may appear inside a color class.
#[pyclass(name = "Graph", frozen)]
struct PyGraph {
    inner: CoreGraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize, bool)>) -> PyResult<Self> {
        let inner = CoreGraph::new(n, &edges).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyGraph { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn f_count(&self) -> usize {
        self.inner.f_count()
    }

    #[getter]
    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }

    /// All edges as sorted `(u, v, fusable)` triples with u < v.
    fn edges(&self) -> Vec<(usize, usize, bool)> {
        self.inner.edges().to_vec()
    }

    /// Neighbors of `v` as `(vertex, fusable)` pairs.
    fn neighbors(&self, v: usize) -> PyResult<Vec<(usize, bool)>> {
        if v >= self.inner.n() {
            return Err(PyValueError::new_err(format!("vertex {v} out of range")));
        }
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, m={}, f={})",
            self.inner.n(),
            self.inner.m(),
            self.inner.f_count()
        )
    }
}

/// Outcome of a solve: the chromatic number and, when requested, a
/// witness coloring (one color per vertex).
#[pyclass(frozen)]
struct SolveReport {
    #[pyo3(get)]
    chromatic: u32,
    #[pyo3(get)]
    coloring: Option<Vec<u32>>,
    /// Heuristic decomposition width of the input graph.
    #[pyo3(get)]
    width: usize,
}

#[pymethods]
impl SolveReport {
    fn __repr__(&self) -> String {
        format!(
            "SolveReport(chromatic={}, width={}, coloring={})",
            self.chromatic,
            self.width,
            if self.coloring.is_some() { "yes" } else { "no" }
        )
    }
}

/// Instance statistics mirroring the CLI `stats` command.
#[pyclass(name = "Stats", frozen)]
struct PyStats {
    #[pyo3(get)]
    n: usize,
    #[pyo3(get)]
    m: usize,
    #[pyo3(get)]
    f_count: usize,
    #[pyo3(get)]
    omega: usize,
    #[pyo3(get)]
    omega_exact: bool,
    #[pyo3(get)]
    max_degree: usize,
    #[pyo3(get)]
    width: usize,
    #[pyo3(get)]
    components: usize,
    #[pyo3(get)]
    max_component: usize,
}

#[pymethods]
impl PyStats {
    fn __repr__(&self) -> String {
        format!(
            "Stats(n={}, m={}, f={}, omega={}, max_degree={}, width={}, components={})",
            self.n, self.m, self.f_count, self.omega, self.max_degree, self.width, self.components
        )
    }
}

/// Minimum number of colors such that every color class induces fusable
/// paths of at most `k` edges. Set `certificate=True` for a witness.
#[pyfunction]
#[pyo3(signature = (graph, k, certificate=false, split=true, strategy="best-of-both"))]
fn solve(
    graph: &PyGraph,
    k: u32,
    certificate: bool,
    split: bool,
    strategy: &str,
) -> PyResult<SolveReport> {
    let opts = SolveOptions {
        strategy: parse_strategy(strategy)?,
        certificate,
        split,
        ..SolveOptions::default()
    };
    let r = chromatic_number(&graph.inner, k, &opts)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let chromatic = r
        .chromatic
        .ok_or_else(|| PyRuntimeError::new_err("missing chromatic number"))?;
    Ok(SolveReport {
        chromatic,
        coloring: r.coloring.map(|c| c.colors().to_vec()),
        width: r.stats.width,
    })
}

/// Does the graph admit a coloring with at most `colors` colors?
#[pyfunction]
fn decide(graph: &PyGraph, k: u32, colors: u32) -> PyResult<bool> {
    let r = chromatic_number(&graph.inner, k, &SolveOptions::default())
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let chi = r
        .chromatic
        .ok_or_else(|| PyRuntimeError::new_err("missing chromatic number"))?;
    Ok(chi <= colors)
}

/// Check a full coloring (one color per vertex) against the path rules.
#[pyfunction]
fn verify(graph: &PyGraph, coloring: Vec<u32>, k: u32) -> PyResult<bool> {
    let num = coloring.iter().max().map_or(0, |&c| c + 1);
    let coloring =
        Coloring::new(coloring, num).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let report = verify_coloring(&graph.inner, &coloring, k)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(report.valid)
}

/// Parse instance text (`p kpath n m k` header plus `e u v f` lines) into
/// a graph and its stored default k.
#[pyfunction]
#[pyo3(name = "parse_instance")]
fn parse_instance_py(text: &str) -> PyResult<(PyGraph, u32)> {
    let inst = parse_instance(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok((PyGraph { inner: inst.graph }, inst.k))
}

/// Canonical instance text for a graph and default k.
#[pyfunction]
#[pyo3(name = "serialize_instance")]
fn serialize_instance_py(graph: &PyGraph, k: u32) -> String {
    serialize_instance(&Instance {
        graph: graph.inner.clone(),
        k,
    })
}

/// Generate a pseudo-industrial instance. Returns the graph and the
/// point layout as `(x, y)` grid coordinates per vertex.
#[pyfunction]
#[pyo3(signature = (n, seed=0, d_lith=None, d_dsa_min=None, pitch=None))]
fn generate_instance(
    n: usize,
    seed: u64,
    d_lith: Option<u32>,
    d_dsa_min: Option<u32>,
    pitch: Option<u32>,
) -> PyResult<(PyGraph, Vec<(u32, u32)>)> {
    let mut params = GenParams::for_n(n, seed);
    if let Some(d) = d_lith {
        params.d_lith = d;
    }
    if let Some(d) = d_dsa_min {
        params.d_dsa_min = d;
    }
    if let Some(p) = pitch {
        params.pitch = p;
    }
    let layout = generate(&params).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok((
        PyGraph {
            inner: layout.graph,
        },
        layout.points,
    ))
}

#[pyfunction]
#[pyo3(name = "stats")]
fn stats_py(graph: &PyGraph) -> PyStats {
    let s = stats(&graph.inner);
    PyStats {
        n: s.n,
        m: s.m,
        f_count: s.f_count,
        omega: s.omega,
        omega_exact: s.omega_exact,
        max_degree: s.max_degree,
        width: s.width,
        components: s.components,
        max_component: s.max_component,
    }
}

/// Clique number (exact up to 200 vertices, else a greedy lower bound).
#[pyfunction]
fn clique_number(graph: &PyGraph) -> (usize, bool) {
    let c = max_clique(&graph.inner);
    (c.size, c.exact)
}

#[pymodule]
fn kpath_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyGraph>()?;
    m.add_class::<SolveReport>()?;
    m.add_class::<PyStats>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(parse_instance_py, m)?)?;
    m.add_function(wrap_pyfunction!(serialize_instance_py, m)?)?;
    m.add_function(wrap_pyfunction!(generate_instance, m)?)?;
    m.add_function(wrap_pyfunction!(stats_py, m)?)?;
    m.add_function(wrap_pyfunction!(clique_number, m)?)?;
    Ok(())
}
