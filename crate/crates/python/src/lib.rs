//! Python bindings. Ids are 0-based; exact densities are `(num, den)` tuples.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use ::hyperdense::io::{generate_random, parse_hypergraph, serialize_hypergraph, GeneratorParams};
use ::hyperdense::oracle::{brute_force_densest, OracleLimits};
use ::hyperdense as hd;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn ratio(r: Option<hd::Ratio>) -> Option<(u64, u64)> {
    r.map(|r| (r.num, r.den))
}

fn config(max_sweeps: usize, stop_gap: f64, threads: Option<usize>) -> hd::SolverConfig {
    hd::SolverConfig {
        max_sweeps,
        stop_gap,
        mode: match threads {
            Some(workers) => hd::SweepMode::Parallel { workers },
            None => hd::SweepMode::Sequential,
        },
        ..hd::SolverConfig::default()
    }
}

#[pyclass(name = "Hypergraph", module = "pyhyperdense", frozen)]
struct PyHypergraph {
    inner: hd::WeightedHypergraph,
}

#[pymethods]
impl PyHypergraph {
    /// `supports` lists 0-based vertex ids per edge. Weights default to 1.
    #[new]
    #[pyo3(signature = (n, supports, vertex_weights=None, edge_weights=None))]
    fn new(
        n: usize,
        supports: Vec<Vec<usize>>,
        vertex_weights: Option<Vec<f64>>,
        edge_weights: Option<Vec<f64>>,
    ) -> PyResult<Self> {
        let vw = vertex_weights.unwrap_or_else(|| vec![1.0; n]);
        if vw.len() != n {
            return Err(value_error(format!("expected {n} vertex weights, got {}", vw.len())));
        }
        let ew = edge_weights.unwrap_or_else(|| vec![1.0; supports.len()]);
        let inner = hd::WeightedHypergraph::build(vw, ew, &supports).map_err(value_error)?;
        Ok(PyHypergraph { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (text, strip_degenerate=false))]
    fn parse(text: &str, strip_degenerate: bool) -> PyResult<Self> {
        let parsed = parse_hypergraph(text, strip_degenerate).map_err(value_error)?;
        Ok(PyHypergraph {
            inner: parsed.hypergraph,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (n, m, min_size=2, max_size=4, min_weight=1, max_weight=1, seed=0))]
    fn random(
        n: usize,
        m: usize,
        min_size: usize,
        max_size: usize,
        min_weight: u64,
        max_weight: u64,
        seed: u64,
    ) -> PyResult<Self> {
        let inner = generate_random(&GeneratorParams {
            n,
            m,
            edge_size: (min_size, max_size),
            weights: (min_weight, max_weight),
            seed,
        })
        .map_err(value_error)?;
        Ok(PyHypergraph { inner })
    }

    fn serialize(&self) -> String {
        serialize_hypergraph(&self.inner)
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
    fn total_degree(&self) -> usize {
        self.inner.total_degree()
    }

    #[getter]
    fn vertex_weights(&self) -> Vec<f64> {
        self.inner.vertex_weights().to_vec()
    }

    #[getter]
    fn edge_weights(&self) -> Vec<f64> {
        self.inner.edge_weights().to_vec()
    }

    fn support(&self, edge: usize) -> PyResult<Vec<u32>> {
        if edge >= self.inner.m() {
            return Err(value_error(format!("edge {edge} out of range")));
        }
        Ok(self.inner.support(hd::EdgeId(edge as u32)).to_vec())
    }

    /// Density of the vertex set with all edges induced on it.
    fn density(&self, vertices: Vec<u32>) -> PyResult<f64> {
        let vs: Vec<hd::VertexId> = vertices.into_iter().map(hd::VertexId).collect();
        if vs.iter().any(|v| v.index() >= self.inner.n()) {
            return Err(value_error("vertex id out of range"));
        }
        let edges = self.inner.induced_edges(&vs);
        self.inner
            .density(&hd::SubgraphSelection::new(vs, edges))
            .map_err(value_error)
    }

    fn dual(&self) -> Self {
        PyHypergraph {
            inner: self.inner.dual(),
        }
    }

    fn __repr__(&self) -> String {
        format!(
            "Hypergraph(n={}, m={}, D={})",
            self.inner.n(),
            self.inner.m(),
            self.inner.total_degree()
        )
    }
}

#[pyclass(name = "SolveResult", module = "pyhyperdense", get_all, frozen)]
struct PySolveResult {
    density: f64,
    exact_density: Option<(u64, u64)>,
    vertices: Vec<u32>,
    edges: Vec<u32>,
    upper_bound: f64,
    gap: f64,
    optimal: bool,
    sweeps: usize,
    stop_reason: String,
    column_sums: Vec<f64>,
}

#[pymethods]
impl PySolveResult {
    fn __repr__(&self) -> String {
        format!(
            "SolveResult(density={}, optimal={}, sweeps={})",
            self.density,
            if self.optimal { "True" } else { "False" },
            self.sweeps
        )
    }
}

#[pyclass(name = "Factor", module = "pyhyperdense", get_all, frozen)]
struct PyFactor {
    density: f64,
    exact_density: Option<(u64, u64)>,
    vertices: Vec<u32>,
    edges: Vec<u32>,
    certified: bool,
}

#[pymethods]
impl PyFactor {
    fn __repr__(&self) -> String {
        format!(
            "Factor(density={}, vertices={}, edges={})",
            self.density,
            self.vertices.len(),
            self.edges.len()
        )
    }
}

fn factors(dec: &hd::SpectralDecomposition) -> Vec<PyFactor> {
    dec.factors
        .iter()
        .map(|f| PyFactor {
            density: f.density,
            exact_density: ratio(f.exact_density),
            vertices: f.vertices.iter().map(|v| v.0).collect(),
            edges: f.edges.iter().map(|e| e.0).collect(),
            certified: f.certified,
        })
        .collect()
}

#[pyfunction]
#[pyo3(signature = (h, max_sweeps=10_000, stop_gap=1e-10, threads=None))]
fn solve(
    py: Python<'_>,
    h: &PyHypergraph,
    max_sweeps: usize,
    stop_gap: f64,
    threads: Option<usize>,
) -> PyResult<PySolveResult> {
    let config = config(max_sweeps, stop_gap, threads);
    let out = py
        .detach(|| hd::solve(&h.inner, &config))
        .map_err(value_error)?;
    let c = &out.certificate;
    Ok(PySolveResult {
        density: c.density,
        exact_density: ratio(c.exact_density),
        vertices: c.selection.vertices.iter().map(|v| v.0).collect(),
        edges: c.selection.edges.iter().map(|e| e.0).collect(),
        upper_bound: c.upper_bound,
        gap: c.gap,
        optimal: c.optimal,
        sweeps: out.trace.sweeps(),
        stop_reason: format!("{:?}", out.stop_reason).to_lowercase(),
        column_sums: out.matrix.fresh_column_sums(),
    })
}

#[pyfunction]
#[pyo3(signature = (h, max_sweeps=10_000, stop_gap=1e-10))]
fn spectral_decompose(
    py: Python<'_>,
    h: &PyHypergraph,
    max_sweeps: usize,
    stop_gap: f64,
) -> PyResult<Vec<PyFactor>> {
    let config = config(max_sweeps, stop_gap, None);
    let dec = py
        .detach(|| hd::spectral_decompose(&h.inner, &config))
        .map_err(value_error)?;
    Ok(factors(&dec))
}

/// Spectral decomposition of the dual, obtained from the primal one.
#[pyfunction]
fn dual_decompose(py: Python<'_>, h: &PyHypergraph) -> PyResult<Vec<PyFactor>> {
    let dec = py
        .detach(|| hd::spectral_decompose(&h.inner, &hd::SolverConfig::default()))
        .map_err(value_error)?;
    Ok(factors(&hd::transport_dual(&dec)))
}

/// `(v_plus, v_zero, v_minus, e_plus, e_zero, e_minus)`.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn dm_decompose(
    py: Python<'_>,
    h: &PyHypergraph,
) -> PyResult<(Vec<u32>, Vec<u32>, Vec<u32>, Vec<u32>, Vec<u32>, Vec<u32>)> {
    let dm = py
        .detach(|| hd::dm_decompose(&h.inner, &hd::SolverConfig::default()))
        .map_err(value_error)?;
    let vs = |x: &[hd::VertexId]| x.iter().map(|v| v.0).collect();
    let es = |x: &[hd::EdgeId]| x.iter().map(|e| e.0).collect();
    Ok((
        vs(&dm.v_plus),
        vs(&dm.v_zero),
        vs(&dm.v_minus),
        es(&dm.e_plus),
        es(&dm.e_zero),
        es(&dm.e_minus),
    ))
}

/// Waterfills one row: returns `(new_values, level)`.
#[pyfunction]
fn equalize_row(stems: Vec<f64>, glass_weights: Vec<f64>, budget: f64) -> PyResult<(Vec<f64>, f64)> {
    if stems.is_empty() || stems.len() != glass_weights.len() {
        return Err(value_error("stems and glass_weights must be non-empty and equally long"));
    }
    if !(budget > 0.0) || glass_weights.iter().any(|&w| !(w > 0.0)) {
        return Err(value_error("budget and glass weights must be positive"));
    }
    let s = hd::equalize_row(&hd::RowProblem {
        stems,
        glass_weights,
        budget,
    });
    Ok((s.new_values, s.level))
}

/// Exhaustive maximum density: `((num, den), vertices, edges)`.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn oracle_densest(h: &PyHypergraph) -> PyResult<((u64, u64), Vec<u32>, Vec<u32>)> {
    let (d, sel) = brute_force_densest(&h.inner, &OracleLimits::default()).map_err(value_error)?;
    Ok((
        (d.num, d.den),
        sel.vertices.iter().map(|v| v.0).collect(),
        sel.edges.iter().map(|e| e.0).collect(),
    ))
}

/// Dominant eigenvalue of the normalized Gram matrix of an optimal support
/// matrix; equals the maximum density.
#[pyfunction]
fn gram_eigenvalue(py: Python<'_>, h: &PyHypergraph) -> PyResult<f64> {
    py.detach(|| {
        let config = hd::SolverConfig::default();
        let dec = hd::spectral_decompose(&h.inner, &config).map_err(value_error)?;
        let a = hd::optimal_support_matrix(&h.inner, &dec, 1e-13, config.max_sweeps)
            .map_err(value_error)?;
        Ok(a.gram_dominant_eigenvalue(1e-12, 100_000).lambda)
    })
}

#[pymodule]
fn pyhyperdense(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHypergraph>()?;
    m.add_class::<PySolveResult>()?;
    m.add_class::<PyFactor>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(dual_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(dm_decompose, m)?)?;
    m.add_function(wrap_pyfunction!(equalize_row, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_densest, m)?)?;
    m.add_function(wrap_pyfunction!(gram_eigenvalue, m)?)?;
    Ok(())
}
