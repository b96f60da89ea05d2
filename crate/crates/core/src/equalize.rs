//! Row equalization (waterfilling) and the sweep-based solver.
//!
//! A row's budget `u_i` is poured into the glasses of its support: glass `j`
//! stands on a stem of height `b_j = s_j - a_ij` (the column sum without this
//! row) and has cross-section `w_j`. All glasses that receive champagne end
//! at one common level; glasses whose stem already reaches that level stay
//! empty. Sweeping every row in turn never raises the largest column sum.

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::decomposition::{certify, extract_densest, extract_level_set, Certificate};
use crate::hypergraph::WeightedHypergraph;
use crate::support::SupportMatrix;

/// Number of sweeps the stall test looks back over.
pub const STOP_WINDOW: usize = 10;

/// One row's waterfilling input.
#[derive(Debug, Clone, PartialEq)]
pub struct RowProblem {
    pub stems: Vec<f64>,
    pub glass_weights: Vec<f64>,
    pub budget: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowSolution {
    pub new_values: Vec<f64>,
    pub level: f64,
}

/// Waterfills one row. Requires at least one glass, a positive budget and
/// positive glass weights.
pub fn equalize_row(problem: &RowProblem) -> RowSolution {
    let k = problem.stems.len();
    assert!(k > 0, "row has no glasses");
    assert_eq!(k, problem.glass_weights.len(), "stems and weights differ in length");
    let mut new_values = vec![0.0; k];
    let mut order = Vec::with_capacity(k);
    let level = waterfill(
        &problem.stems,
        &problem.glass_weights,
        problem.budget,
        &mut order,
        &mut new_values,
    );
    RowSolution { new_values, level }
}

/// Allocation-free waterfilling kernel. Writes the new row into `out` and
/// returns the common level.
///
/// Stems are sorted once and the fill set grows along the sorted order until
/// the level it implies no longer reaches the next stem. Heights are taken
/// relative to the lowest stem to limit cancellation, and the row is rescaled
/// by its exact weighted sum so the budget is met to rounding.
#[inline]
pub(crate) fn waterfill(
    stems: &[f64],
    weights: &[f64],
    budget: f64,
    order: &mut Vec<usize>,
    out: &mut [f64],
) -> f64 {
    let k = stems.len();
    if k == 1 {
        out[0] = budget / weights[0];
        return stems[0] + out[0];
    }
    order.clear();
    order.extend(0..k);
    order.sort_unstable_by(|&a, &b| stems[a].total_cmp(&stems[b]).then(a.cmp(&b)));
    let base = stems[order[0]];

    let mut wsum = 0.0;
    let mut wheight = 0.0;
    let mut excess = 0.0;
    let mut filled = 0;
    for t in 0..k {
        let j = order[t];
        wsum += weights[j];
        wheight += weights[j] * (stems[j] - base);
        excess = (budget + wheight) / wsum;
        filled = t + 1;
        if t + 1 == k || base + excess <= stems[order[t + 1]] {
            break;
        }
    }
    out.iter_mut().for_each(|v| *v = 0.0);
    let mut total = 0.0;
    for &j in &order[..filled] {
        let a = (excess - (stems[j] - base)).max(0.0);
        out[j] = a;
        total += weights[j] * a;
    }
    if total > 0.0 && total != budget {
        let scale = budget / total;
        for &j in &order[..filled] {
            out[j] *= scale;
        }
    }
    base + excess
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SweepMode {
    Sequential,
    Parallel { workers: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub max_sweeps: usize,
    /// Relative improvement over [`STOP_WINDOW`] sweeps below which the
    /// solver stops without a certificate.
    pub stop_gap: f64,
    /// An entry counts as nonzero when it carries more than this fraction of
    /// its row budget.
    pub epsilon_nz: f64,
    pub cache_refresh_period: usize,
    pub mode: SweepMode,
    pub certify_every: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_sweeps: 10_000,
            stop_gap: 1e-10,
            epsilon_nz: 1e-9,
            cache_refresh_period: 16,
            mode: SweepMode::Sequential,
            certify_every: 8,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        let bad = |what: &str| Err(SolveError::InvalidConfig(what.to_string()));
        if self.max_sweeps == 0 {
            return bad("max_sweeps must be positive");
        }
        if !(self.stop_gap > 0.0) {
            return bad("stop_gap must be positive");
        }
        if !(self.epsilon_nz > 0.0) {
            return bad("epsilon_nz must be positive");
        }
        if self.cache_refresh_period == 0 || self.certify_every == 0 {
            return bad("periods must be positive");
        }
        if let SweepMode::Parallel { workers: 0 } = self.mode {
            return bad("workers must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepStats {
    pub s_max_before: f64,
    pub s_max_after: f64,
    pub rows_changed: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub sweep: usize,
    pub s_max: f64,
    /// Density of the candidate extracted at this sweep, if one was tried.
    pub density: Option<f64>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SolveTrace {
    pub records: Vec<SweepRecord>,
}

impl SolveTrace {
    /// Sweeps actually run (record 0 is the initial matrix).
    pub fn sweeps(&self) -> usize {
        self.records.last().map_or(0, |r| r.sweep)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Certified,
    Stalled,
    MaxSweeps,
}

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("cannot solve the empty hypergraph")]
    EmptyHypergraph,
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone)]
pub struct SolveOutcome<'h> {
    pub matrix: SupportMatrix<'h>,
    pub trace: SolveTrace,
    pub certificate: Certificate,
    pub stop_reason: StopReason,
}

/// One Gauss-Seidel pass: rows in ascending order, each seeing the column
/// sums already updated by the rows before it.
pub fn sweep(a: &mut SupportMatrix<'_>) -> SweepStats {
    let s_max_before = a.s_max().0;
    let (h, values, sums) = a.parts_mut();
    let mut scratch = RowScratch::default();
    let mut rows_changed = 0;
    for i in 0..h.m() {
        let lo = h.edge_offsets()[i];
        let hi = h.edge_offsets()[i + 1];
        let changed = scratch.equalize(h, i, &mut values[lo..hi], &mut PlainSums(sums));
        rows_changed += changed as usize;
    }
    SweepStats {
        s_max_before,
        s_max_after: a.s_max().0,
        rows_changed,
    }
}

/// Rows split into contiguous chunks, one per worker. Workers read the
/// shared column sums without locking (reads may be stale within the sweep)
/// and publish their changes by atomic addition.
///
/// With more than one worker the column sums are rebuilt from scratch
/// afterwards. A single worker performs exactly the sequential operations,
/// so its result is bit-identical to [`sweep`].
pub fn parallel_sweep(a: &mut SupportMatrix<'_>, workers: usize) -> SweepStats {
    let workers = workers.max(1);
    let s_max_before = a.s_max().0;
    let (h, values, sums) = a.parts_mut();
    let shared: Vec<AtomicU64> = sums.iter().map(|s| AtomicU64::new(s.to_bits())).collect();
    let chunks = row_chunks(h, workers);

    let mut rows_changed = 0;
    std::thread::scope(|scope| {
        let mut rest: &mut [f64] = values;
        let mut consumed = 0;
        let mut handles = Vec::with_capacity(chunks.len());
        for &(r0, r1) in &chunks {
            let lo = h.edge_offsets()[r0];
            let hi = h.edge_offsets()[r1];
            let (_, tail) = std::mem::take(&mut rest).split_at_mut(lo - consumed);
            let (mine, tail) = tail.split_at_mut(hi - lo);
            rest = tail;
            consumed = hi;
            let shared = &shared;
            handles.push(scope.spawn(move || {
                let mut scratch = RowScratch::default();
                let mut changed = 0;
                for i in r0..r1 {
                    let a = h.edge_offsets()[i] - lo;
                    let b = h.edge_offsets()[i + 1] - lo;
                    let did = scratch.equalize(h, i, &mut mine[a..b], &mut SharedSums(shared));
                    changed += did as usize;
                }
                changed
            }));
        }
        for handle in handles {
            rows_changed += handle.join().expect("sweep worker panicked");
        }
    });

    if chunks.len() > 1 {
        a.refresh_column_sums();
    } else {
        let (_, _, sums) = a.parts_mut();
        for (s, atomic) in sums.iter_mut().zip(&shared) {
            *s = f64::from_bits(atomic.load(Ordering::Relaxed));
        }
    }
    SweepStats {
        s_max_before,
        s_max_after: a.s_max().0,
        rows_changed,
    }
}

fn atomic_add(cell: &AtomicU64, delta: f64) {
    let mut current = cell.load(Ordering::Relaxed);
    loop {
        let next = (f64::from_bits(current) + delta).to_bits();
        match cell.compare_exchange_weak(current, next, Ordering::Relaxed, Ordering::Relaxed) {
            Ok(_) => return,
            Err(seen) => current = seen,
        }
    }
}

/// Contiguous row ranges with roughly equal incidence counts.
fn row_chunks(h: &WeightedHypergraph, workers: usize) -> Vec<(usize, usize)> {
    let m = h.m();
    let workers = workers.min(m).max(1);
    let total = h.total_degree();
    let mut chunks = Vec::with_capacity(workers);
    let mut start = 0;
    for w in 1..=workers {
        let end = if w == workers {
            m
        } else {
            let target = total * w / workers;
            let mut end = h.edge_offsets().partition_point(|&o| o < target).min(m);
            // Leave at least one row for each remaining worker.
            end = end.max(start + 1).min(m - (workers - w));
            end
        };
        chunks.push((start, end));
        start = end;
    }
    chunks
}

/// Column-sum storage seen by a row update.
trait ColumnSums {
    fn read(&self, j: usize) -> f64;
    fn add(&mut self, j: usize, delta: f64);
}

struct PlainSums<'a>(&'a mut [f64]);

impl ColumnSums for PlainSums<'_> {
    #[inline]
    fn read(&self, j: usize) -> f64 {
        self.0[j]
    }

    #[inline]
    fn add(&mut self, j: usize, delta: f64) {
        self.0[j] += delta;
    }
}

struct SharedSums<'a>(&'a [AtomicU64]);

impl ColumnSums for SharedSums<'_> {
    #[inline]
    fn read(&self, j: usize) -> f64 {
        f64::from_bits(self.0[j].load(Ordering::Relaxed))
    }

    #[inline]
    fn add(&mut self, j: usize, delta: f64) {
        atomic_add(&self.0[j], delta);
    }
}

#[derive(Default)]
struct RowScratch {
    stems: Vec<f64>,
    weights: Vec<f64>,
    out: Vec<f64>,
    order: Vec<usize>,
}

impl RowScratch {
    /// Equalizes row `i` in place. Returns whether any value changed.
    #[inline]
    fn equalize(
        &mut self,
        h: &WeightedHypergraph,
        i: usize,
        row: &mut [f64],
        sums: &mut impl ColumnSums,
    ) -> bool {
        let lo = h.edge_offsets()[i];
        let support = &h.edge_vertices()[lo..lo + row.len()];
        let w = h.vertex_weights();
        self.stems.clear();
        self.weights.clear();
        for (&j, &a) in support.iter().zip(row.iter()) {
            self.stems.push(sums.read(j as usize) - a);
            self.weights.push(w[j as usize]);
        }
        self.out.clear();
        self.out.resize(row.len(), 0.0);
        waterfill(
            &self.stems,
            &self.weights,
            h.edge_weights()[i],
            &mut self.order,
            &mut self.out,
        );
        let mut changed = false;
        for (k, (&j, a)) in support.iter().zip(row.iter_mut()).enumerate() {
            let delta = self.out[k] - *a;
            if delta != 0.0 {
                sums.add(j as usize, delta);
                *a = self.out[k];
                changed = true;
            }
        }
        changed
    }
}

/// `Σ_j w_j s_j²`, the quantity each row update minimises exactly.
fn potential(a: &SupportMatrix<'_>) -> f64 {
    a.hypergraph()
        .vertex_weights()
        .iter()
        .zip(a.column_sums())
        .map(|(w, s)| w * s * s)
        .sum()
}

fn candidate(a: &SupportMatrix<'_>, epsilon_nz: f64) -> Certificate {
    let h = a.hypergraph();
    let closure = certify(h, &extract_densest(a, epsilon_nz), a)
        .expect("closure extraction yields a valid subgraph");
    let level = certify(h, &extract_level_set(a), a)
        .expect("level-set extraction yields a valid subgraph");
    if level.beats(&closure) {
        level
    } else {
        closure
    }
}

/// Runs the solver to a certificate, a stall or the sweep limit.
///
/// Every `certify_every` sweeps the column sums are rebuilt, a candidate
/// subgraph is extracted and certified; an optimal certificate stops the run.
/// Without one, the run stops once both `s_max` and `Σ w_j s_j²` change by
/// less than `stop_gap` (relative) over [`STOP_WINDOW`] sweeps.
pub fn solve<'h>(
    h: &'h WeightedHypergraph,
    config: &SolverConfig,
) -> Result<SolveOutcome<'h>, SolveError> {
    config.validate()?;
    if h.is_empty() {
        return Err(SolveError::EmptyHypergraph);
    }
    let start = Instant::now();
    let elapsed = || start.elapsed().as_secs_f64() * 1e3;
    let mut a = SupportMatrix::init(h);
    let mut trace = SolveTrace::default();
    let mut smax_history = vec![a.s_max().0];
    let mut phi_history = vec![potential(&a)];

    let mut best = candidate(&a, config.epsilon_nz);
    trace.records.push(SweepRecord {
        sweep: 0,
        s_max: smax_history[0],
        density: Some(best.density),
        wall_ms: elapsed(),
    });
    if best.optimal {
        return Ok(SolveOutcome {
            matrix: a,
            trace,
            certificate: best,
            stop_reason: StopReason::Certified,
        });
    }

    let mut stop_reason = StopReason::MaxSweeps;
    for k in 1..=config.max_sweeps {
        match config.mode {
            SweepMode::Sequential => sweep(&mut a),
            SweepMode::Parallel { workers } => parallel_sweep(&mut a, workers),
        };
        if k % config.cache_refresh_period == 0 {
            a.refresh_column_sums();
        }
        let mut density = None;
        if k % config.certify_every == 0 {
            a.refresh_column_sums();
            let cert = candidate(&a, config.epsilon_nz);
            density = Some(cert.density);
            if cert.beats(&best) {
                best = cert;
            }
        }
        let s_max = a.s_max().0;
        smax_history.push(s_max);
        phi_history.push(potential(&a));
        trace.records.push(SweepRecord {
            sweep: k,
            s_max,
            density,
            wall_ms: elapsed(),
        });
        if best.optimal {
            stop_reason = StopReason::Certified;
            break;
        }
        if k >= STOP_WINDOW {
            let rel = |hist: &[f64]| {
                let old = hist[k - STOP_WINDOW];
                ((old - hist[k]) / old).abs()
            };
            if rel(&smax_history) < config.stop_gap && rel(&phi_history) < config.stop_gap {
                stop_reason = StopReason::Stalled;
                break;
            }
        }
    }
    if stop_reason != StopReason::Certified {
        a.refresh_column_sums();
        let cert = candidate(&a, config.epsilon_nz);
        if cert.beats(&best) {
            best = cert;
        }
        if best.optimal {
            stop_reason = StopReason::Certified;
        }
    }
    Ok(SolveOutcome {
        matrix: a,
        trace,
        certificate: best,
        stop_reason,
    })
}
