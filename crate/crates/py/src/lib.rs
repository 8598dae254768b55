//! Python bindings for `detourkit`.
//!
//! Vertices are plain ints, partitions are lists of parts (1 or 2 per
//! vertex), and every library error surfaces as `ValueError`.

use detourkit::detour::{run as run_detour, Case1Budget, OffsetTable};
use detourkit::oracle::{self, OracleLimits};
use detourkit::sieve::{self, SieveCounters, SieveQuery, DEFAULT_LABEL_CAP};
use detourkit::{
    bfs_layers, io, path_solver, Alpha, Bipartition, DetourQuery, FieldElem, Part, PathSolverConfig,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: detourkit::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Graph", frozen, module = "detourkit_py")]
pub struct PyGraph {
    inner: detourkit::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(PyGraph {
            inner: detourkit::Graph::new(n, edges).map_err(err)?,
        })
    }

    /// Parses the `n m` / `u v` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: io::parse_graph(text).map_err(err)?,
        })
    }

    #[staticmethod]
    fn path(n: usize) -> Self {
        PyGraph { inner: io::path(n) }
    }

    #[staticmethod]
    fn cycle(n: usize) -> PyResult<Self> {
        Ok(PyGraph {
            inner: io::cycle(n).map_err(err)?,
        })
    }

    #[staticmethod]
    fn grid(n: usize) -> PyResult<Self> {
        Ok(PyGraph {
            inner: io::grid(n).map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (n, p, seed=0))]
    fn gnp(n: usize, p: f64, seed: u64) -> PyResult<Self> {
        Ok(PyGraph {
            inner: io::gnp(n, p, seed).map_err(err)?,
        })
    }

    #[staticmethod]
    fn petersen() -> Self {
        PyGraph {
            inner: io::petersen(),
        }
    }

    fn to_text(&self) -> String {
        io::serialize_graph(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().to_vec()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        self.inner.check_vertex(v).map_err(err)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    /// BFS depth of every vertex from `s`; `None` when unreachable.
    fn distances(&self, s: usize) -> PyResult<Vec<Option<usize>>> {
        Ok(bfs_layers(&self.inner, s)
            .map_err(err)?
            .distances()
            .to_vec())
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

/// Outcome of one detour run.
#[pyclass(name = "DetourResult", frozen, module = "detourkit_py")]
pub struct PyDetourResult {
    #[pyo3(get)]
    answer: bool,
    #[pyo3(get)]
    dist_st: Option<usize>,
    #[pyo3(get)]
    dp_states_touched: u64,
    #[pyo3(get)]
    sieve_queries: u64,
    table: Option<OffsetTable>,
}

#[pymethods]
impl PyDetourResult {
    /// Stored `x`–`t` path lengths for `x`, ascending.
    fn lengths(&self, x: usize) -> Vec<usize> {
        self.table
            .as_ref()
            .map(|t| t.lengths(x))
            .unwrap_or_default()
    }

    fn __repr__(&self) -> String {
        format!(
            "DetourResult(answer={}, dist_st={:?})",
            if self.answer { "True" } else { "False" },
            self.dist_st
        )
    }
}

fn solver_config(
    reps: usize,
    budget_slack: usize,
    strategy: &str,
    seed: u64,
) -> PyResult<PathSolverConfig> {
    Ok(PathSolverConfig {
        repetitions: reps,
        budget_slack,
        strategy: strategy.parse().map_err(err)?,
        master_seed: seed,
        ..Default::default()
    })
}

fn partition_from(lg: &detourkit::LayeredGraph, parts: Option<Vec<u8>>) -> PyResult<Bipartition> {
    let Some(parts) = parts else {
        return Ok(lg.parity_partition());
    };
    if parts.len() != lg.n() {
        return Err(PyValueError::new_err(format!(
            "partition lists {} vertices, graph has {}",
            parts.len(),
            lg.n()
        )));
    }
    let parts = parts
        .into_iter()
        .map(|p| match p {
            1 => Ok(Part::V1),
            2 => Ok(Part::V2),
            other => Err(PyValueError::new_err(format!(
                "parts must be 1 or 2, got {other}"
            ))),
        })
        .collect::<PyResult<Vec<_>>>()?;
    Ok(Bipartition::from_parts(parts))
}

/// Runs the layered detour program.
#[pyfunction]
#[pyo3(signature = (graph, s, t, k, alpha="55814/100000", seed=0, reps=32, budget_slack=2, strategy="auto", case1_budget="widened"))]
#[allow(clippy::too_many_arguments)]
fn detour(
    py: Python<'_>,
    graph: &PyGraph,
    s: usize,
    t: usize,
    k: usize,
    alpha: &str,
    seed: u64,
    reps: usize,
    budget_slack: usize,
    strategy: &str,
    case1_budget: &str,
) -> PyResult<PyDetourResult> {
    let mut q = DetourQuery::new(&graph.inner, s, t, k);
    q.alpha = alpha.parse::<Alpha>().map_err(err)?;
    q.seed = seed;
    q.case1_budget = case1_budget.parse::<Case1Budget>().map_err(err)?;
    q.solver = solver_config(reps, budget_slack, strategy, seed)?;
    match py.detach(|| run_detour(&q)) {
        Ok(run) => Ok(PyDetourResult {
            answer: run.answer,
            dist_st: Some(run.dist_st),
            dp_states_touched: run.stats.dp_states,
            sieve_queries: run.stats.sieve_queries,
            table: Some(run.table),
        }),
        Err(detourkit::Error::Unreachable(_)) => Ok(PyDetourResult {
            answer: false,
            dist_st: None,
            dp_states_touched: 0,
            sieve_queries: 0,
            table: None,
        }),
        Err(e) => Err(err(e)),
    }
}

/// Walk-sieve decision for a path with `k1` vertices in V1 and `l2` V2V2 edges.
#[pyfunction]
#[pyo3(signature = (graph, s, t, length, k1, l2, partition=None, seed=0, reps=1))]
#[allow(clippy::too_many_arguments)]
fn bipath(
    graph: &PyGraph,
    s: usize,
    t: usize,
    length: usize,
    k1: usize,
    l2: usize,
    partition: Option<Vec<u8>>,
    seed: u64,
    reps: usize,
) -> PyResult<bool> {
    let lg = bfs_layers(&graph.inner, s).map_err(err)?;
    graph.inner.check_vertex(t).map_err(err)?;
    let partition = partition_from(&lg, partition)?;
    if lg.dist(t).is_none() {
        return Ok(false);
    }
    let view = lg.full_view();
    let q = SieveQuery {
        view: &view,
        partition: &partition,
        from: s,
        to: t,
        len: length,
        k1,
        l2,
    };
    let mut rng = detourkit::seed::rng_for(seed, &[0xb1]);
    sieve::decide_counted(
        &q,
        &mut rng,
        reps,
        DEFAULT_LABEL_CAP,
        Some(&SieveCounters::default()),
    )
    .map_err(err)
}

/// Lengths `<= cap` of simple `s`–`t` paths found by the path solver.
#[pyfunction]
#[pyo3(signature = (graph, s, t, cap, seed=0, reps=32, budget_slack=2, strategy="auto"))]
#[allow(clippy::too_many_arguments)]
fn path_lengths(
    graph: &PyGraph,
    s: usize,
    t: usize,
    cap: usize,
    seed: u64,
    reps: usize,
    budget_slack: usize,
    strategy: &str,
) -> PyResult<Vec<usize>> {
    let cfg = solver_config(reps, budget_slack, strategy, seed)?;
    let lg = bfs_layers(&graph.inner, s).map_err(err)?;
    graph.inner.check_vertex(t).map_err(err)?;
    if lg.dist(t).is_none() {
        return Ok(Vec::new());
    }
    let found = path_solver::exists_path_upto(&lg.full_view(), s, t, cap, &cfg).map_err(err)?;
    Ok(found.into_iter().collect())
}

#[pyfunction]
fn oracle_detour(graph: &PyGraph, s: usize, t: usize, k: usize) -> PyResult<bool> {
    match oracle::detour_exists_with_limits(&graph.inner, s, t, k, OracleLimits::UNLIMITED) {
        Ok(b) => Ok(b),
        Err(detourkit::Error::Unreachable(_)) => Ok(false),
        Err(e) => Err(err(e)),
    }
}

#[pyfunction]
#[pyo3(signature = (graph, s, t, length, k1, l2, partition=None))]
fn oracle_bipath(
    graph: &PyGraph,
    s: usize,
    t: usize,
    length: usize,
    k1: usize,
    l2: usize,
    partition: Option<Vec<u8>>,
) -> PyResult<bool> {
    let lg = bfs_layers(&graph.inner, s).map_err(err)?;
    graph.inner.check_vertex(t).map_err(err)?;
    let partition = partition_from(&lg, partition)?;
    if lg.dist(t).is_none() {
        return Ok(false);
    }
    oracle::bipartitioned_exists_with_limits(
        &lg.full_view(),
        s,
        t,
        length,
        k1,
        l2,
        &partition,
        OracleLimits::UNLIMITED,
    )
    .map_err(err)
}

#[pyfunction]
fn oracle_path_lengths(graph: &PyGraph, s: usize, t: usize, cap: usize) -> PyResult<Vec<usize>> {
    let lg = bfs_layers(&graph.inner, s).map_err(err)?;
    graph.inner.check_vertex(t).map_err(err)?;
    if lg.dist(t).is_none() {
        return Ok(Vec::new());
    }
    let lens =
        oracle::path_lengths(&lg.full_view(), s, t, cap, OracleLimits::UNLIMITED).map_err(err)?;
    Ok(lens.into_iter().collect())
}

/// Product in GF(2^64).
#[pyfunction]
fn gf_mul(a: u64, b: u64) -> u64 {
    (FieldElem(a) * FieldElem(b)).bits()
}

/// Inverse in GF(2^64); `None` for zero.
#[pyfunction]
fn gf_inv(a: u64) -> Option<u64> {
    FieldElem(a).inverse().map(|x| x.bits())
}

#[pymodule]
fn detourkit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyDetourResult>()?;
    m.add_function(wrap_pyfunction!(detour, m)?)?;
    m.add_function(wrap_pyfunction!(bipath, m)?)?;
    m.add_function(wrap_pyfunction!(path_lengths, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_detour, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_bipath, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_path_lengths, m)?)?;
    m.add_function(wrap_pyfunction!(gf_mul, m)?)?;
    m.add_function(wrap_pyfunction!(gf_inv, m)?)?;
    Ok(())
}
