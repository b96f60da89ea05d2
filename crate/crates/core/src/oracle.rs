//! Exhaustive reference implementations for small instances.

use serde::Serialize;
use thiserror::Error;

use crate::decomposition::{DMDecomposition, Factor, SpectralDecomposition};
use crate::equalize::{RowProblem, RowSolution};
use crate::hypergraph::{EdgeId, HypergraphError, SubgraphSelection, VertexId, WeightedHypergraph};
use crate::rational::Ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleLimits {
    /// Largest `n` for vertex-subset enumeration.
    pub max_vertices: usize,
    /// Largest `n + m` for exterior-cover enumeration.
    pub max_incidence: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_vertices: 20,
            max_incidence: 16,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("instance too large for enumeration: {size} > {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("exact enumeration needs integer weights")]
    NonIntegralWeights,
    #[error("exterior-cover enumeration needs all weights equal to 1")]
    NonUnitWeights,
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

fn support_masks(h: &WeightedHypergraph) -> Vec<u64> {
    (0..h.m())
        .map(|i| {
            h.support(EdgeId(i as u32))
                .iter()
                .fold(0u64, |acc, &j| acc | 1 << j)
        })
        .collect()
}

fn selection_from_mask(h: &WeightedHypergraph, masks: &[u64], vmask: u64) -> SubgraphSelection {
    let vertices = (0..h.n())
        .filter(|&j| vmask >> j & 1 == 1)
        .map(|j| VertexId(j as u32))
        .collect();
    let edges = (0..h.m())
        .filter(|&i| masks[i] & !vmask == 0)
        .map(|i| EdgeId(i as u32))
        .collect();
    SubgraphSelection { vertices, edges }
}

/// Maximum density over all vertex subsets with their induced edges, and
/// the union of all maximizers, which is the maximal densest subgraph.
pub fn brute_force_densest(
    h: &WeightedHypergraph,
    limits: &OracleLimits,
) -> Result<(Ratio, SubgraphSelection), OracleError> {
    if h.n() > limits.max_vertices {
        return Err(OracleError::TooLarge {
            size: h.n(),
            limit: limits.max_vertices,
        });
    }
    if !h.has_integral_weights() {
        return Err(OracleError::NonIntegralWeights);
    }
    let n = h.n();
    let masks = support_masks(h);
    let vw: Vec<u64> = h.vertex_weights().iter().map(|&w| w as u64).collect();
    // Edges attributed to their highest vertex: an edge is induced by S
    // exactly when its highest vertex is the top bit of some prefix of S.
    let mut by_top: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &mask) in masks.iter().enumerate() {
        by_top[63 - mask.leading_zeros() as usize].push(i);
    }
    let size = 1usize << n;
    let mut wv = vec![0u64; size];
    let mut we = vec![0u64; size];
    let mut best = Ratio::new(0, 1);
    let mut union = 0u64;
    for s in 1..size {
        let top = usize::BITS as usize - 1 - s.leading_zeros() as usize;
        let rest = s & !(1 << top);
        wv[s] = wv[rest] + vw[top];
        we[s] = we[rest]
            + by_top[top]
                .iter()
                .filter(|&&i| masks[i] & !(s as u64) == 0)
                .map(|&i| h.edge_weights()[i] as u64)
                .sum::<u64>();
        let d = Ratio::new(we[s], wv[s]);
        match d.cmp(&best) {
            std::cmp::Ordering::Greater => {
                best = d;
                union = s as u64;
            }
            std::cmp::Ordering::Equal => union |= s as u64,
            std::cmp::Ordering::Less => {}
        }
    }
    Ok((best, selection_from_mask(h, &masks, union)))
}

/// Peels maximal densest subgraphs found by enumeration.
pub fn brute_force_spectral(
    h: &WeightedHypergraph,
    limits: &OracleLimits,
) -> Result<SpectralDecomposition, OracleError> {
    let mut current = h.clone();
    let mut vmap: Vec<VertexId> = (0..h.n() as u32).map(VertexId).collect();
    let mut emap: Vec<EdgeId> = (0..h.m() as u32).map(EdgeId).collect();
    let mut factors = Vec::new();
    while !current.is_empty() {
        let (density, sel) = brute_force_densest(&current, limits)?;
        let mut vertices: Vec<VertexId> = sel.vertices.iter().map(|v| vmap[v.index()]).collect();
        let mut edges: Vec<EdgeId> = sel.edges.iter().map(|e| emap[e.index()]).collect();
        vertices.sort_unstable();
        edges.sort_unstable();
        factors.push(Factor {
            vertices,
            edges,
            density: density.to_f64(),
            exact_density: Some(density),
            certified: true,
        });
        let q = current.quotient(&sel)?;
        vmap = q.vertex_map.iter().map(|v| vmap[v.index()]).collect();
        emap = q.edge_map.iter().map(|e| emap[e.index()]).collect();
        current = q.hypergraph;
    }
    Ok(SpectralDecomposition {
        n: h.n(),
        m: h.m(),
        factors,
    })
}

/// Intersections over all minimum-cardinality exterior covers.
pub fn brute_force_dm(
    h: &WeightedHypergraph,
    limits: &OracleLimits,
) -> Result<DMDecomposition, OracleError> {
    let (n, m) = (h.n(), h.m());
    if n + m > limits.max_incidence {
        return Err(OracleError::TooLarge {
            size: n + m,
            limit: limits.max_incidence,
        });
    }
    if !h.has_unit_weights() {
        return Err(OracleError::NonUnitWeights);
    }
    let masks = support_masks(h);
    let all_v = (1u64 << n) - 1;
    let all_e = (1u64 << m) - 1;
    let mut best = u32::MAX;
    let (mut cap_v, mut cap_not_v) = (all_v, all_v);
    let (mut cap_e, mut cap_not_e) = (all_e, all_e);
    for x in 0..1u64 << (n + m) {
        let cv = x & all_v;
        let ce = x >> n;
        let covers = (0..m).all(|i| ce >> i & 1 == 1 || masks[i] & !cv == 0);
        if !covers {
            continue;
        }
        let size = x.count_ones();
        if size < best {
            best = size;
            (cap_v, cap_not_v, cap_e, cap_not_e) = (all_v, all_v, all_e, all_e);
        }
        if size == best {
            cap_v &= cv;
            cap_not_v &= !cv & all_v;
            cap_e &= ce;
            cap_not_e &= !ce & all_e;
        }
    }
    let vs = |mask: u64| -> Vec<VertexId> {
        (0..n).filter(|&j| mask >> j & 1 == 1).map(|j| VertexId(j as u32)).collect()
    };
    let es = |mask: u64| -> Vec<EdgeId> {
        (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| EdgeId(i as u32)).collect()
    };
    Ok(DMDecomposition {
        v_plus: vs(cap_v),
        v_zero: vs(all_v & !cap_v & !cap_not_v),
        v_minus: vs(cap_not_v),
        e_plus: es(cap_not_e),
        e_zero: es(all_e & !cap_e & !cap_not_e),
        e_minus: es(cap_e),
    })
}

/// Grid search over allocations `x >= 0` with `sum w_j x_j = budget`,
/// minimizing `max_j (stems_j + x_j)`. Each glass receives a multiple of
/// `budget / steps` in weighted units.
pub fn brute_force_waterfill(problem: &RowProblem, steps: usize) -> Result<RowSolution, OracleError> {
    let k = problem.stems.len();
    if k == 0 || k > 4 {
        return Err(OracleError::TooLarge { size: k, limit: 4 });
    }
    let unit = problem.budget / steps as f64;
    let mut parts = vec![0usize; k];
    let mut best: Option<RowSolution> = None;
    // Enumerate compositions of `steps` into k nonnegative parts.
    fn rec(
        idx: usize,
        left: usize,
        parts: &mut [usize],
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if idx + 1 == parts.len() {
            parts[idx] = left;
            visit(parts);
            return;
        }
        for p in 0..=left {
            parts[idx] = p;
            rec(idx + 1, left - p, parts, visit);
        }
    }
    rec(0, steps, &mut parts, &mut |parts| {
        let values: Vec<f64> = parts
            .iter()
            .zip(&problem.glass_weights)
            .map(|(&p, &w)| p as f64 * unit / w)
            .collect();
        let level = values
            .iter()
            .zip(&problem.stems)
            .map(|(x, s)| x + s)
            .fold(f64::NEG_INFINITY, f64::max);
        if best.as_ref().is_none_or(|b| level < b.level) {
            best = Some(RowSolution {
                new_values: values,
                level,
            });
        }
    });
    Ok(best.expect("at least one grid point"))
}
