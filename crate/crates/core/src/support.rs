//! Support matrices: nonnegative matrices on the incidence pattern whose
//! weighted row sums equal the edge weights.
//!
//! Values are stored in the hypergraph's edge-major order, one per incidence,
//! so the pattern constraint holds by construction. Column sums are cached
//! and refreshed from scratch on demand.

use serde::Serialize;
use thiserror::Error;

use crate::decomposition::SpectralDecomposition;
use crate::hypergraph::{EdgeId, VertexId, WeightedHypergraph};

/// Relative tolerance on `Σ_j w_j a_ij = u_i`.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;
/// Absolute tolerance between cached and recomputed column sums.
pub const CACHE_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SupportError {
    #[error("expected {expected} values, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("hypergraph shapes do not match: {0}")]
    ShapeMismatch(String),
    #[error(
        "entry (edge {edge}, vertex {vertex}) carries {share:e} of its row across factors (threshold {threshold:e})"
    )]
    NotBlockStructured {
        edge: usize,
        vertex: usize,
        share: f64,
        threshold: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryViolation {
    pub edge: usize,
    pub vertex: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowViolation {
    pub edge: usize,
    pub expected: f64,
    pub actual: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CacheViolation {
    pub vertex: usize,
    pub cached: f64,
    pub recomputed: f64,
}

/// Outcome of [`SupportMatrix::validate`]. Each list is sorted worst first.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub negative_entries: Vec<EntryViolation>,
    pub row_violations: Vec<RowViolation>,
    pub cache_violations: Vec<CacheViolation>,
    pub worst_row_error: f64,
    pub worst_cache_error: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.negative_entries.is_empty()
            && self.row_violations.is_empty()
            && self.cache_violations.is_empty()
    }
}

/// Power-iteration estimate of the dominant eigenvalue of the scaled Gram
/// matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenEstimate {
    pub lambda: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportMatrix<'h> {
    h: &'h WeightedHypergraph,
    values: Vec<f64>,
    column_sums: Vec<f64>,
}

impl<'h> SupportMatrix<'h> {
    /// Degree-normalised start: put 1 on the pattern, divide each column by
    /// the vertex degree, then rescale each row to its weighted budget.
    pub fn init(h: &'h WeightedHypergraph) -> Self {
        let w = h.vertex_weights();
        let u = h.edge_weights();
        let offsets = h.edge_offsets();
        let verts = h.edge_vertices();
        let mut values: Vec<f64> = verts
            .iter()
            .map(|&j| 1.0 / h.degree(VertexId(j)) as f64)
            .collect();
        for i in 0..h.m() {
            let range = offsets[i]..offsets[i + 1];
            let weighted: f64 = range.clone().map(|p| w[verts[p] as usize] * values[p]).sum();
            let scale = u[i] / weighted;
            for p in range {
                values[p] *= scale;
            }
        }
        let column_sums = column_sums_of(h, &values);
        SupportMatrix {
            h,
            values,
            column_sums,
        }
    }

    /// Wraps caller-provided values (edge-major order). Only the length is
    /// checked here; use [`validate`](Self::validate) for the rest.
    pub fn from_values(h: &'h WeightedHypergraph, values: Vec<f64>) -> Result<Self, SupportError> {
        if values.len() != h.total_degree() {
            return Err(SupportError::LengthMismatch {
                expected: h.total_degree(),
                found: values.len(),
            });
        }
        let column_sums = column_sums_of(h, &values);
        Ok(SupportMatrix {
            h,
            values,
            column_sums,
        })
    }

    /// Values and cached column sums as given, without recomputation.
    pub fn from_parts(
        h: &'h WeightedHypergraph,
        values: Vec<f64>,
        column_sums: Vec<f64>,
    ) -> Result<Self, SupportError> {
        if values.len() != h.total_degree() {
            return Err(SupportError::LengthMismatch {
                expected: h.total_degree(),
                found: values.len(),
            });
        }
        if column_sums.len() != h.n() {
            return Err(SupportError::LengthMismatch {
                expected: h.n(),
                found: column_sums.len(),
            });
        }
        Ok(SupportMatrix {
            h,
            values,
            column_sums,
        })
    }

    pub fn hypergraph(&self) -> &'h WeightedHypergraph {
        self.h
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn column_sums(&self) -> &[f64] {
        &self.column_sums
    }

    pub fn row(&self, e: EdgeId) -> &[f64] {
        &self.values[self.h.entry_range(e)]
    }

    /// Entry `a_ij`, zero off the pattern.
    pub fn entry(&self, e: EdgeId, v: VertexId) -> f64 {
        let range = self.h.entry_range(e);
        match self.h.support(e).binary_search(&v.0) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Mutable access for the solver kernels.
    pub(crate) fn parts_mut(&mut self) -> (&'h WeightedHypergraph, &mut [f64], &mut [f64]) {
        (self.h, &mut self.values, &mut self.column_sums)
    }

    /// Direct write access to one value; the column-sum cache is left stale.
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn column_sums_mut(&mut self) -> &mut [f64] {
        &mut self.column_sums
    }

    pub fn refresh_column_sums(&mut self) {
        self.column_sums = column_sums_of(self.h, &self.values);
    }

    pub fn fresh_column_sums(&self) -> Vec<f64> {
        column_sums_of(self.h, &self.values)
    }

    /// Largest cached column sum and its column; ties go to the smallest id.
    pub fn s_max(&self) -> (f64, VertexId) {
        max_with_index(&self.column_sums)
    }

    /// Total shortfall `Σ_i max(0, u_i - Σ_j w_j a_ij)` over all rows.
    pub fn row_shortfall(&self) -> f64 {
        let w = self.h.vertex_weights();
        let verts = self.h.edge_vertices();
        (0..self.h.m())
            .map(|i| {
                let range = self.h.entry_range(EdgeId(i as u32));
                let sum: f64 = range.map(|p| w[verts[p] as usize] * self.values[p]).sum();
                (self.h.edge_weights()[i] - sum).max(0.0)
            })
            .sum()
    }

    pub fn has_negative_entries(&self) -> bool {
        self.values.iter().any(|&a| !(a >= 0.0))
    }

    pub fn validate(&self) -> ValidationReport {
        let h = self.h;
        let w = h.vertex_weights();
        let u = h.edge_weights();
        let verts = h.edge_vertices();
        let mut report = ValidationReport::default();
        for i in 0..h.m() {
            let range = h.entry_range(EdgeId(i as u32));
            let mut sum = 0.0;
            for p in range {
                let a = self.values[p];
                if !(a >= 0.0) {
                    report.negative_entries.push(EntryViolation {
                        edge: i,
                        vertex: verts[p] as usize,
                        value: a,
                    });
                }
                sum += w[verts[p] as usize] * a;
            }
            let rel = (sum - u[i]).abs() / u[i];
            let rel = if rel.is_nan() { f64::INFINITY } else { rel };
            report.worst_row_error = report.worst_row_error.max(rel);
            if rel > ROW_SUM_TOLERANCE {
                report.row_violations.push(RowViolation {
                    edge: i,
                    expected: u[i],
                    actual: sum,
                    relative_error: rel,
                });
            }
        }
        let fresh = self.fresh_column_sums();
        for (j, (&cached, &recomputed)) in self.column_sums.iter().zip(&fresh).enumerate() {
            let err = (cached - recomputed).abs();
            let err = if err.is_nan() { f64::INFINITY } else { err };
            report.worst_cache_error = report.worst_cache_error.max(err);
            if err > CACHE_TOLERANCE {
                report.cache_violations.push(CacheViolation {
                    vertex: j,
                    cached,
                    recomputed,
                });
            }
        }
        report
            .negative_entries
            .sort_by(|a, b| a.value.total_cmp(&b.value));
        report
            .row_violations
            .sort_by(|a, b| b.relative_error.total_cmp(&a.relative_error));
        report.cache_violations.sort_by(|a, b| {
            (b.cached - b.recomputed)
                .abs()
                .total_cmp(&(a.cached - a.recomputed).abs())
        });
        report
    }

    /// Dominant eigenvalue of `Ãᵀ Ã` with `Ã = U^{-1/2} A W^{1/2}`, by power
    /// iteration from the normalised all-ones vector.
    ///
    /// The Gram matrix is applied as two sparse products through the pattern
    /// and never formed. It is entrywise nonnegative, so the positive start
    /// vector has a component along the Perron vector.
    pub fn gram_dominant_eigenvalue(&self, tol: f64, max_iters: usize) -> EigenEstimate {
        let h = self.h;
        let n = h.n();
        let sqrt_w: Vec<f64> = h.vertex_weights().iter().map(|w| w.sqrt()).collect();
        let inv_sqrt_u: Vec<f64> = h.edge_weights().iter().map(|u| 1.0 / u.sqrt()).collect();
        let offsets = h.edge_offsets();
        let verts = h.edge_vertices();

        let mut x = vec![1.0 / (n as f64).sqrt(); n];
        let mut y = vec![0.0; h.m()];
        let mut z = vec![0.0; n];
        let mut estimate = EigenEstimate {
            lambda: 0.0,
            residual: f64::INFINITY,
            iterations: 0,
            converged: false,
        };
        for iter in 1..=max_iters.max(1) {
            for i in 0..h.m() {
                let mut acc = 0.0;
                for p in offsets[i]..offsets[i + 1] {
                    let j = verts[p] as usize;
                    acc += self.values[p] * sqrt_w[j] * x[j];
                }
                y[i] = acc * inv_sqrt_u[i];
            }
            z.iter_mut().for_each(|v| *v = 0.0);
            for i in 0..h.m() {
                let yi = y[i] * inv_sqrt_u[i];
                for p in offsets[i]..offsets[i + 1] {
                    z[verts[p] as usize] += self.values[p] * yi;
                }
            }
            for j in 0..n {
                z[j] *= sqrt_w[j];
            }
            let lambda: f64 = x.iter().zip(&z).map(|(a, b)| a * b).sum();
            let residual = x
                .iter()
                .zip(&z)
                .map(|(a, b)| (b - lambda * a).powi(2))
                .sum::<f64>()
                .sqrt();
            estimate = EigenEstimate {
                lambda,
                residual,
                iterations: iter,
                converged: residual <= tol,
            };
            if estimate.converged {
                break;
            }
            let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                break;
            }
            for j in 0..n {
                x[j] = z[j] / norm;
            }
        }
        estimate
    }
}

pub(crate) fn column_sums_of(h: &WeightedHypergraph, values: &[f64]) -> Vec<f64> {
    let mut sums = vec![0.0; h.n()];
    for (p, &j) in h.edge_vertices().iter().enumerate() {
        sums[j as usize] += values[p];
    }
    sums
}

pub(crate) fn max_with_index(values: &[f64]) -> (f64, VertexId) {
    let mut best = (f64::NEG_INFINITY, VertexId(0));
    for (j, &s) in values.iter().enumerate() {
        if s > best.0 {
            best = (s, VertexId(j as u32));
        }
    }
    best
}

/// Support matrix for the dual hypergraph built from a block-structured
/// matrix `a` on `h`: `b_ji = a_ij w_j / (α_r u_i)` where `v_j` lies in the
/// factor of density `α_r`.
///
/// `dual` must be `a.hypergraph().dual()`. An entry carrying more than
/// `epsilon_nz` of its row budget across two different factors makes the
/// formula inapplicable and is reported.
pub fn dual_support_matrix<'d>(
    a: &SupportMatrix<'_>,
    decomposition: &SpectralDecomposition,
    dual: &'d WeightedHypergraph,
    epsilon_nz: f64,
) -> Result<SupportMatrix<'d>, SupportError> {
    let h = a.hypergraph();
    if dual.n() != h.m() || dual.m() != h.n() || dual.total_degree() != h.total_degree() {
        return Err(SupportError::ShapeMismatch(
            "second hypergraph is not the dual of the first".into(),
        ));
    }
    let (vertex_factor, edge_factor) = decomposition
        .factor_index(h.n(), h.m())
        .ok_or_else(|| SupportError::ShapeMismatch("decomposition does not partition h".into()))?;
    let densities: Vec<f64> = decomposition.factors.iter().map(|f| f.density).collect();
    let w = h.vertex_weights();
    let u = h.edge_weights();
    let mut values = vec![0.0; h.total_degree()];
    // The dual's edge-major order is the original vertex-major order.
    for j in 0..h.n() {
        let v = VertexId(j as u32);
        let alpha = densities[vertex_factor[j]];
        let base = h.vertex_offsets()[j];
        for (k, (&i, &pos)) in h.incidence(v).iter().zip(h.incidence_entries(v)).enumerate() {
            let i = i as usize;
            let aij = a.values()[pos as usize];
            if edge_factor[i] != vertex_factor[j] {
                let share = aij * w[j] / u[i];
                if share > epsilon_nz {
                    return Err(SupportError::NotBlockStructured {
                        edge: i,
                        vertex: j,
                        share,
                        threshold: epsilon_nz,
                    });
                }
            }
            values[base + k] = aij * w[j] / (alpha * u[i]);
        }
    }
    SupportMatrix::from_values(dual, values)
}
