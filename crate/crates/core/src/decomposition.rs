//! Extraction, certificates, spectral decomposition, duality and the
//! Dulmage-Mendelsohn decomposition.

use std::cmp::Ordering;
use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::equalize::{solve, sweep, SolveError, SolverConfig, StopReason};
use crate::hypergraph::{EdgeId, HypergraphError, SubgraphSelection, VertexId, WeightedHypergraph};
use crate::rational::Ratio;
use crate::support::SupportMatrix;

/// Relative tolerance for comparing densities of non-integral hypergraphs.
const FLOAT_DENSITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum DecompositionError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error("decomposition invariant violated at stage {stage}: {reason}")]
    DecompositionInvariantViolation { stage: usize, reason: String },
    #[error("the Dulmage-Mendelsohn decomposition needs all weights equal to 1")]
    NonUnitWeights,
    #[error("decomposition does not match the hypergraph: {0}")]
    Mismatch(String),
}

/// A subgraph density paired with a support-matrix upper bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub selection: SubgraphSelection,
    pub density: f64,
    pub exact_density: Option<Ratio>,
    /// Largest column sum, recomputed from the matrix values.
    pub upper_bound: f64,
    /// `upper_bound - density`, clamped at zero: at convergence the bound
    /// can land an ulp below the density.
    pub gap: f64,
    /// `1 / (wt(V') wt(V))`, the separation between distinct achievable
    /// densities. Present for integral weights only.
    pub threshold: Option<f64>,
    pub optimal: bool,
}

impl Certificate {
    /// Ordering used to keep the best certificate of a run: optimal first,
    /// then higher density, then smaller gap.
    pub fn beats(&self, other: &Certificate) -> bool {
        if self.optimal != other.optimal {
            return self.optimal;
        }
        match compare_densities(
            (self.density, self.exact_density),
            (other.density, other.exact_density),
        ) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => self.gap < other.gap,
        }
    }
}

fn compare_densities(a: (f64, Option<Ratio>), b: (f64, Option<Ratio>)) -> Ordering {
    match (a.1, b.1) {
        (Some(x), Some(y)) => x.cmp(&y),
        _ => {
            let scale = a.0.abs().max(b.0.abs()).max(f64::MIN_POSITIVE);
            if (a.0 - b.0).abs() <= FLOAT_DENSITY_TOLERANCE * scale {
                Ordering::Equal
            } else {
                a.0.total_cmp(&b.0)
            }
        }
    }
}

/// Grows a subgraph from the heaviest column: each new vertex pulls in the
/// edges with a nonzero entry in its column, each new edge pulls in its whole
/// support, until nothing changes. Finally every edge lying inside the vertex
/// set is added.
///
/// An entry counts as nonzero when `a_ij w_j / u_i > epsilon_nz`. Uses the
/// cached column sums to pick the seed.
pub fn extract_densest(a: &SupportMatrix<'_>, epsilon_nz: f64) -> SubgraphSelection {
    let h = a.hypergraph();
    let w = h.vertex_weights();
    let u = h.edge_weights();
    let values = a.values();
    let mut in_v = vec![false; h.n()];
    let mut in_e = vec![false; h.m()];
    let mut queue = VecDeque::new();
    let seed = a.s_max().1;
    in_v[seed.index()] = true;
    queue.push_back(seed);
    while let Some(v) = queue.pop_front() {
        let j = v.index();
        for (&i, &pos) in h.incidence(v).iter().zip(h.incidence_entries(v)) {
            let i = i as usize;
            if in_e[i] || values[pos as usize] * w[j] / u[i] <= epsilon_nz {
                continue;
            }
            in_e[i] = true;
            for &k in h.support(EdgeId(i as u32)) {
                if !in_v[k as usize] {
                    in_v[k as usize] = true;
                    queue.push_back(VertexId(k));
                }
            }
        }
    }
    let vertices: Vec<VertexId> = (0..h.n())
        .filter(|&j| in_v[j])
        .map(|j| VertexId(j as u32))
        .collect();
    let edges = h.induced_edges_mask(&in_v);
    SubgraphSelection { vertices, edges }
}

/// Densest prefix of the vertices ordered by decreasing column sum, with the
/// edges induced on it. Ties in density go to the longer prefix.
///
/// Uses the cached column sums.
pub fn extract_level_set(a: &SupportMatrix<'_>) -> SubgraphSelection {
    let h = a.hypergraph();
    let n = h.n();
    let sums = a.column_sums();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| sums[y].total_cmp(&sums[x]).then(x.cmp(&y)));
    let mut rank = vec![0usize; n];
    for (r, &j) in order.iter().enumerate() {
        rank[j] = r;
    }
    // Edge i becomes induced once the last of its vertices joins the prefix.
    let mut completes_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut last_rank = vec![0usize; h.m()];
    for i in 0..h.m() {
        let r = h
            .support(EdgeId(i as u32))
            .iter()
            .map(|&j| rank[j as usize])
            .max()
            .expect("non-empty support");
        last_rank[i] = r;
        completes_at[r].push(i);
    }
    let integral = h.has_integral_weights();
    let (mut wv, mut we) = (0.0, 0.0);
    let (mut iv, mut ie) = (0u64, 0u64);
    let mut best: Option<(usize, f64, Option<Ratio>)> = None;
    for (r, &j) in order.iter().enumerate() {
        wv += h.vertex_weights()[j];
        iv += h.vertex_weights()[j] as u64;
        for &i in &completes_at[r] {
            we += h.edge_weights()[i];
            ie += h.edge_weights()[i] as u64;
        }
        let exact = integral.then(|| Ratio::new(ie, iv));
        let density = exact.map_or(we / wv, Ratio::to_f64);
        let better = match &best {
            None => true,
            Some((_, d, e)) => {
                compare_densities((density, exact), (*d, *e)) != Ordering::Less
            }
        };
        if better {
            best = Some((r, density, exact));
        }
    }
    let cut = best.map_or(0, |b| b.0);
    let mut vertices: Vec<VertexId> = order[..=cut].iter().map(|&j| VertexId(j as u32)).collect();
    vertices.sort_unstable();
    let edges = (0..h.m())
        .filter(|&i| last_rank[i] <= cut)
        .map(|i| EdgeId(i as u32))
        .collect();
    SubgraphSelection { vertices, edges }
}

/// Pairs the density of `selection` with the largest column sum of `a`.
///
/// For integral weights the selection is proven densest when the gap,
/// widened by the matrix's row-sum shortfall and a rounding allowance, stays
/// below `1 / (wt(V') wt(V))`: two distinct densities `p/q` and `p'/q'` with
/// `q = wt(V')` and `q' <= wt(V)` differ by at least that much.
pub fn certify(
    h: &WeightedHypergraph,
    selection: &SubgraphSelection,
    a: &SupportMatrix<'_>,
) -> Result<Certificate, DecompositionError> {
    selection.check(h)?;
    if selection.vertices.is_empty() {
        return Err(HypergraphError::EmptyVertexSet.into());
    }
    if !std::ptr::eq(h, a.hypergraph()) && h != a.hypergraph() {
        return Err(DecompositionError::Mismatch(
            "support matrix belongs to another hypergraph".into(),
        ));
    }
    let fresh = a.fresh_column_sums();
    let upper_bound = fresh.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exact_density = h.exact_density(selection)?;
    let density = match exact_density {
        Some(r) => r.to_f64(),
        None => h.density(selection)?,
    };
    let gap = (upper_bound - density).max(0.0);
    let threshold = h.has_integral_weights().then(|| {
        let q = h.exact_vertex_weight(&selection.vertices) as f64;
        1.0 / (q * h.total_vertex_weight())
    });
    let optimal = match threshold {
        Some(t) if !a.has_negative_entries() => {
            let max_degree = (0..h.n())
                .map(|j| h.degree(VertexId(j as u32)))
                .max()
                .unwrap_or(1) as f64;
            let rounding = 4.0 * f64::EPSILON * upper_bound.abs().max(1.0) * (max_degree + 2.0);
            gap + a.row_shortfall() + rounding < t
        }
        _ => false,
    };
    Ok(Certificate {
        selection: selection.clone(),
        density,
        exact_density,
        upper_bound,
        gap,
        threshold,
        optimal,
    })
}

/// One factor of a spectral decomposition, in original ids.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Factor {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub density: f64,
    pub exact_density: Option<Ratio>,
    /// Whether the factor's density was proven maximal for its stage.
    pub certified: bool,
}

/// Partition of a hypergraph into factors of strictly decreasing density,
/// each the maximal densest subgraph of what the previous ones leave.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralDecomposition {
    pub n: usize,
    pub m: usize,
    pub factors: Vec<Factor>,
}

impl SpectralDecomposition {
    /// Factor index of every vertex and every edge, or `None` when the
    /// factors do not partition `n` vertices and `m` edges.
    pub fn factor_index(&self, n: usize, m: usize) -> Option<(Vec<usize>, Vec<usize>)> {
        if self.n != n || self.m != m {
            return None;
        }
        let mut vf = vec![usize::MAX; n];
        let mut ef = vec![usize::MAX; m];
        for (r, f) in self.factors.iter().enumerate() {
            for v in &f.vertices {
                let slot = vf.get_mut(v.index())?;
                if *slot != usize::MAX {
                    return None;
                }
                *slot = r;
            }
            for e in &f.edges {
                let slot = ef.get_mut(e.index())?;
                if *slot != usize::MAX {
                    return None;
                }
                *slot = r;
            }
        }
        if vf.contains(&usize::MAX) || ef.contains(&usize::MAX) {
            return None;
        }
        Some((vf, ef))
    }

    /// Partition, strict decrease and prefix-subgraph checks against `h`.
    pub fn check_invariants(&self, h: &WeightedHypergraph) -> Result<(), DecompositionError> {
        let violation = |stage, reason: String| {
            Err(DecompositionError::DecompositionInvariantViolation { stage, reason })
        };
        let Some((vf, _)) = self.factor_index(h.n(), h.m()) else {
            return violation(0, "factors do not partition the vertices and edges".into());
        };
        for (r, pair) in self.factors.windows(2).enumerate() {
            let order = compare_densities(
                (pair[0].density, pair[0].exact_density),
                (pair[1].density, pair[1].exact_density),
            );
            if order != Ordering::Greater {
                return violation(
                    r + 1,
                    format!(
                        "density {} does not exceed the next factor's {}",
                        pair[0].density, pair[1].density
                    ),
                );
            }
        }
        if let Some(f) = self.factors.last() {
            if !(f.density > 0.0) {
                return violation(self.factors.len() - 1, "non-positive density".into());
            }
        }
        for (r, f) in self.factors.iter().enumerate() {
            for &e in &f.edges {
                if let Some(&v) = h.support(e).iter().find(|&&v| vf[v as usize] > r) {
                    return violation(
                        r,
                        format!("edge {} reaches vertex {} of a later factor", e.0, v),
                    );
                }
            }
        }
        Ok(())
    }

    /// Same partition and the same densities (exact when both are exact).
    pub fn equivalent(&self, other: &SpectralDecomposition) -> bool {
        self.n == other.n
            && self.m == other.m
            && self.factors.len() == other.factors.len()
            && self.factors.iter().zip(&other.factors).all(|(a, b)| {
                a.vertices == b.vertices
                    && a.edges == b.edges
                    && compare_densities(
                        (a.density, a.exact_density),
                        (b.density, b.exact_density),
                    ) == Ordering::Equal
            })
    }
}

/// Per-stage solver summary from [`spectral_decompose_detailed`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageReport {
    pub stage: usize,
    pub n: usize,
    pub m: usize,
    pub sweeps: usize,
    pub stop_reason: StopReason,
    pub density: f64,
    pub upper_bound: f64,
    pub gap: f64,
    pub optimal: bool,
    /// The stage found the same density as the previous factor and was
    /// merged into it.
    pub merged: bool,
}

pub fn spectral_decompose(
    h: &WeightedHypergraph,
    config: &SolverConfig,
) -> Result<SpectralDecomposition, DecompositionError> {
    spectral_decompose_detailed(h, config).map(|(d, _)| d)
}

/// Peels densest subgraphs: solve the current quotient, certify the
/// extracted subgraph, record it and quotient it away.
///
/// A certified stage is densest but not necessarily the maximal densest
/// subgraph. When the next stage reaches the same density, the union of the
/// two is again densest in the earlier quotient, so the stage is merged into
/// the previous factor. A factor is therefore closed only once the following
/// stage proves a strictly smaller density, which makes it maximal.
pub fn spectral_decompose_detailed(
    h: &WeightedHypergraph,
    config: &SolverConfig,
) -> Result<(SpectralDecomposition, Vec<StageReport>), DecompositionError> {
    let mut current = h.clone();
    let mut vertex_map: Vec<VertexId> = (0..h.n() as u32).map(VertexId).collect();
    let mut edge_map: Vec<EdgeId> = (0..h.m() as u32).map(EdgeId).collect();
    let mut factors: Vec<Factor> = Vec::new();
    let mut stages = Vec::new();

    while !current.is_empty() {
        let stage = stages.len();
        let (cert, sweeps, stop_reason) = {
            let out = solve(&current, config)?;
            let sweeps = out.trace.sweeps();
            (out.certificate, sweeps, out.stop_reason)
        };
        let vertices: Vec<VertexId> = cert
            .selection
            .vertices
            .iter()
            .map(|v| vertex_map[v.index()])
            .collect();
        let edges: Vec<EdgeId> = cert
            .selection
            .edges
            .iter()
            .map(|e| edge_map[e.index()])
            .collect();
        let order = factors.last().map(|last: &Factor| {
            compare_densities(
                (cert.density, cert.exact_density),
                (last.density, last.exact_density),
            )
        });
        let merged = order == Some(Ordering::Equal);
        match order {
            Some(Ordering::Greater) => {
                return Err(DecompositionError::DecompositionInvariantViolation {
                    stage,
                    reason: format!(
                        "stage density {} exceeds the previous factor's {}",
                        cert.density,
                        factors.last().map_or(0.0, |f| f.density)
                    ),
                });
            }
            Some(Ordering::Equal) => {
                let last = factors.last_mut().expect("previous factor");
                last.vertices.extend(vertices);
                last.vertices.sort_unstable();
                last.edges.extend(edges);
                last.edges.sort_unstable();
                last.certified &= cert.optimal;
            }
            _ => factors.push(Factor {
                vertices: {
                    let mut v = vertices;
                    v.sort_unstable();
                    v
                },
                edges: {
                    let mut e = edges;
                    e.sort_unstable();
                    e
                },
                density: cert.density,
                exact_density: cert.exact_density,
                certified: cert.optimal,
            }),
        }
        stages.push(StageReport {
            stage,
            n: current.n(),
            m: current.m(),
            sweeps,
            stop_reason,
            density: cert.density,
            upper_bound: cert.upper_bound,
            gap: cert.gap,
            optimal: cert.optimal,
            merged,
        });

        let q = current.quotient(&cert.selection)?;
        vertex_map = q.vertex_map.iter().map(|v| vertex_map[v.index()]).collect();
        edge_map = q.edge_map.iter().map(|e| edge_map[e.index()]).collect();
        current = q.hypergraph;
    }

    let dec = SpectralDecomposition {
        n: h.n(),
        m: h.m(),
        factors,
    };
    dec.check_invariants(h)?;
    Ok((dec, stages))
}

/// The spectral decomposition of the dual hypergraph: factors in reverse
/// order with vertex and edge roles swapped and densities inverted.
pub fn transport_dual(dec: &SpectralDecomposition) -> SpectralDecomposition {
    let factors = dec
        .factors
        .iter()
        .rev()
        .map(|f| {
            let exact_density = f.exact_density.map(Ratio::recip);
            Factor {
                vertices: f.edges.iter().map(|e| VertexId(e.0)).collect(),
                edges: f.vertices.iter().map(|v| EdgeId(v.0)).collect(),
                density: exact_density.map_or(1.0 / f.density, Ratio::to_f64),
                exact_density,
                certified: f.certified,
            }
        })
        .collect();
    SpectralDecomposition {
        n: dec.m,
        m: dec.n,
        factors,
    }
}

/// The (+, 0, −) tri-partition of vertices and edges.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DMDecomposition {
    pub v_plus: Vec<VertexId>,
    pub v_zero: Vec<VertexId>,
    pub v_minus: Vec<VertexId>,
    pub e_plus: Vec<EdgeId>,
    pub e_zero: Vec<EdgeId>,
    pub e_minus: Vec<EdgeId>,
}

/// Buckets spectral factors by density above, equal to and below 1.
/// Unit weights only.
pub fn dm_decompose(
    h: &WeightedHypergraph,
    config: &SolverConfig,
) -> Result<DMDecomposition, DecompositionError> {
    if !h.has_unit_weights() {
        return Err(DecompositionError::NonUnitWeights);
    }
    let dec = spectral_decompose(h, config)?;
    Ok(dm_from_spectral(&dec))
}

pub(crate) fn dm_from_spectral(dec: &SpectralDecomposition) -> DMDecomposition {
    let mut dm = DMDecomposition::default();
    for f in &dec.factors {
        let order = compare_densities((f.density, f.exact_density), (1.0, Some(Ratio::one())));
        let (vs, es) = match order {
            Ordering::Greater => (&mut dm.v_plus, &mut dm.e_plus),
            Ordering::Equal => (&mut dm.v_zero, &mut dm.e_zero),
            Ordering::Less => (&mut dm.v_minus, &mut dm.e_minus),
        };
        vs.extend(&f.vertices);
        es.extend(&f.edges);
    }
    for v in [&mut dm.v_plus, &mut dm.v_zero, &mut dm.v_minus] {
        v.sort_unstable();
    }
    for e in [&mut dm.e_plus, &mut dm.e_zero, &mut dm.e_minus] {
        e.sort_unstable();
    }
    dm
}

/// A block-diagonal support matrix whose column sums equal the density of
/// each vertex's factor, to within `tol` relative.
///
/// Each factor is balanced on its own (its maximum density is its overall
/// density), so sweeping it alone drives every column sum to that density.
/// Entries outside the blocks are zero.
pub fn optimal_support_matrix<'h>(
    h: &'h WeightedHypergraph,
    dec: &SpectralDecomposition,
    tol: f64,
    max_sweeps: usize,
) -> Result<SupportMatrix<'h>, DecompositionError> {
    let (vf, ef) = dec
        .factor_index(h.n(), h.m())
        .ok_or_else(|| DecompositionError::Mismatch("factors do not partition h".into()))?;
    let mut values = vec![0.0; h.total_degree()];
    for (r, f) in dec.factors.iter().enumerate() {
        let keep_v: Vec<bool> = vf.iter().map(|&x| x == r).collect();
        let keep_e: Vec<bool> = ef.iter().map(|&x| x == r).collect();
        let block = h.restrict(&keep_v, &keep_e)?;
        let bh = &block.hypergraph;
        let mut a = SupportMatrix::init(bh);
        let target = f.density;
        let spread = |a: &SupportMatrix<'_>| {
            a.column_sums()
                .iter()
                .map(|s| (s - target).abs())
                .fold(0.0, f64::max)
        };
        let mut done = 0;
        while done < max_sweeps && spread(&a) > tol * target {
            for _ in 0..16 {
                sweep(&mut a);
            }
            a.refresh_column_sums();
            done += 16;
        }
        // Scatter the block back; supports of block edges are sub-lists of
        // the original supports restricted to this factor.
        for (bi, &e) in block.edge_map.iter().enumerate() {
            let orig_support = h.support(e);
            let orig_range = h.entry_range(e);
            let brange = bh.entry_range(EdgeId(bi as u32));
            for (bp, &bj) in brange.clone().zip(&bh.edge_vertices()[brange]) {
                let j = block.vertex_map[bj as usize].0;
                let k = orig_support
                    .binary_search(&j)
                    .expect("block support is a subset of the original");
                values[orig_range.start + k] = a.values()[bp];
            }
        }
    }
    Ok(SupportMatrix::from_values(h, values).expect("length matches"))
}
