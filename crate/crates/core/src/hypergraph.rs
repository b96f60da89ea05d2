//! Immutable weighted hypergraphs in compressed sparse row form.
//!
//! Supports are stored edge-major (`edge_offsets` / `edge_vertices`) and the
//! transpose vertex-major (`vertex_offsets` / `vertex_edges`). Every vertex
//! incidence also records the position of the matching entry in the
//! edge-major array, so a support matrix can share one `values` array and be
//! walked by rows or by columns.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::Ratio;

/// Largest integer weight treated as exact; every integer up to this is
/// representable in an `f64`.
const MAX_EXACT_WEIGHT: f64 = 9_007_199_254_740_992.0; // 2^53

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypergraphError {
    #[error("edge {edge} has an empty support")]
    EmptySupport { edge: usize },
    #[error("vertex {vertex} belongs to no edge")]
    IsolatedVertex { vertex: usize },
    #[error("{kind} weight {index} is {value}; weights must be finite and positive")]
    NonPositiveWeight {
        kind: &'static str,
        index: usize,
        value: f64,
    },
    #[error("edge {edge} lists vertex {vertex} more than once")]
    DuplicateVertexInSupport { edge: usize, vertex: usize },
    #[error("edge {edge} references vertex {vertex}, but there are only {n} vertices")]
    IndexOutOfRange { edge: usize, vertex: usize, n: usize },
    #[error("expected {expected} supports, got {found}")]
    SupportCountMismatch { expected: usize, found: usize },
    #[error("hypergraph has no vertices or no edges")]
    EmptyHypergraph,
    #[error("too many incidences ({0}) for 32-bit indexing")]
    TooManyIncidences(usize),
    #[error("selection has no vertices")]
    EmptyVertexSet,
    #[error("invalid selection: {0}")]
    InvalidSelection(String),
    #[error("edge {edge} would have an empty support in the quotient")]
    QuotientCreatesEmptySupport { edge: usize },
    #[error("vertex {vertex} would be isolated in the quotient")]
    QuotientCreatesIsolatedVertex { vertex: usize },
}

/// A vertex set together with an edge set whose supports lie inside it.
///
/// Both lists are kept sorted and free of duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgraphSelection {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl SubgraphSelection {
    pub fn new(mut vertices: Vec<VertexId>, mut edges: Vec<EdgeId>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        edges.sort_unstable();
        edges.dedup();
        SubgraphSelection { vertices, edges }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full(h: &WeightedHypergraph) -> Self {
        SubgraphSelection {
            vertices: (0..h.n() as u32).map(VertexId).collect(),
            edges: (0..h.m() as u32).map(EdgeId).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty()
    }

    pub fn vertex_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for v in &self.vertices {
            mask[v.index()] = true;
        }
        mask
    }

    pub fn edge_mask(&self, m: usize) -> Vec<bool> {
        let mut mask = vec![false; m];
        for e in &self.edges {
            mask[e.index()] = true;
        }
        mask
    }

    /// Checks index ranges and the subgraph property against `h`.
    pub fn check(&self, h: &WeightedHypergraph) -> Result<(), HypergraphError> {
        if let Some(v) = self.vertices.iter().find(|v| v.index() >= h.n()) {
            return Err(HypergraphError::InvalidSelection(format!(
                "vertex {} out of range",
                v.0
            )));
        }
        if let Some(e) = self.edges.iter().find(|e| e.index() >= h.m()) {
            return Err(HypergraphError::InvalidSelection(format!(
                "edge {} out of range",
                e.0
            )));
        }
        let mask = self.vertex_mask(h.n());
        for &e in &self.edges {
            if let Some(&v) = h.support(e).iter().find(|&&v| !mask[v as usize]) {
                return Err(HypergraphError::InvalidSelection(format!(
                    "edge {} contains vertex {} outside the selection",
                    e.0, v
                )));
            }
        }
        Ok(())
    }
}

/// Result of restricting a hypergraph to part of its vertices and edges, with
/// maps from the new indices back to the original ones.
#[derive(Debug, Clone, PartialEq)]
pub struct Quotient {
    pub hypergraph: WeightedHypergraph,
    pub vertex_map: Vec<VertexId>,
    pub edge_map: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedHypergraph {
    vertex_weights: Vec<f64>,
    edge_weights: Vec<f64>,
    edge_offsets: Vec<usize>,
    edge_vertices: Vec<u32>,
    vertex_offsets: Vec<usize>,
    vertex_edges: Vec<u32>,
    vertex_entries: Vec<u32>,
    integral: bool,
}

impl WeightedHypergraph {
    /// Builds and validates a hypergraph from per-edge vertex lists.
    ///
    /// Supports are sorted; a vertex listed twice in one support is an error
    /// rather than being merged.
    pub fn build<S: AsRef<[usize]>>(
        vertex_weights: Vec<f64>,
        edge_weights: Vec<f64>,
        supports: &[S],
    ) -> Result<Self, HypergraphError> {
        let n = vertex_weights.len();
        if supports.len() != edge_weights.len() {
            return Err(HypergraphError::SupportCountMismatch {
                expected: edge_weights.len(),
                found: supports.len(),
            });
        }
        let total: usize = supports.iter().map(|s| s.as_ref().len()).sum();
        if total > u32::MAX as usize {
            return Err(HypergraphError::TooManyIncidences(total));
        }
        let mut offsets = Vec::with_capacity(supports.len() + 1);
        let mut vertices = Vec::with_capacity(total);
        offsets.push(0);
        for (edge, support) in supports.iter().enumerate() {
            for &v in support.as_ref() {
                if v >= n {
                    return Err(HypergraphError::IndexOutOfRange { edge, vertex: v, n });
                }
                vertices.push(v as u32);
            }
            offsets.push(vertices.len());
        }
        Self::from_csr(vertex_weights, edge_weights, offsets, vertices)
    }

    /// Builds from an edge-major CSR layout. `offsets` has `m + 1` entries.
    pub fn from_csr(
        vertex_weights: Vec<f64>,
        edge_weights: Vec<f64>,
        offsets: Vec<usize>,
        mut vertices: Vec<u32>,
    ) -> Result<Self, HypergraphError> {
        let n = vertex_weights.len();
        let m = edge_weights.len();
        if n == 0 || m == 0 {
            return Err(HypergraphError::EmptyHypergraph);
        }
        if offsets.len() != m + 1 || offsets[0] != 0 || offsets[m] != vertices.len() {
            return Err(HypergraphError::SupportCountMismatch {
                expected: m + 1,
                found: offsets.len(),
            });
        }
        if vertices.len() > u32::MAX as usize {
            return Err(HypergraphError::TooManyIncidences(vertices.len()));
        }
        check_weights("vertex", &vertex_weights)?;
        check_weights("edge", &edge_weights)?;
        for edge in 0..m {
            let (lo, hi) = (offsets[edge], offsets[edge + 1]);
            if hi < lo {
                return Err(HypergraphError::SupportCountMismatch {
                    expected: m + 1,
                    found: offsets.len(),
                });
            }
            if hi == lo {
                return Err(HypergraphError::EmptySupport { edge });
            }
            let support = &mut vertices[lo..hi];
            support.sort_unstable();
            if let Some(&v) = support.iter().find(|&&v| v as usize >= n) {
                return Err(HypergraphError::IndexOutOfRange {
                    edge,
                    vertex: v as usize,
                    n,
                });
            }
            if let Some(w) = support.windows(2).find(|w| w[0] == w[1]) {
                return Err(HypergraphError::DuplicateVertexInSupport {
                    edge,
                    vertex: w[0] as usize,
                });
            }
        }
        let h = Self::assemble(vertex_weights, edge_weights, offsets, vertices);
        if let Some(vertex) = (0..n).find(|&j| h.vertex_offsets[j] == h.vertex_offsets[j + 1]) {
            return Err(HypergraphError::IsolatedVertex { vertex });
        }
        Ok(h)
    }

    /// Builds the transpose of already-validated edge data.
    fn assemble(
        vertex_weights: Vec<f64>,
        edge_weights: Vec<f64>,
        edge_offsets: Vec<usize>,
        edge_vertices: Vec<u32>,
    ) -> Self {
        let n = vertex_weights.len();
        let m = edge_weights.len();
        let mut vertex_offsets = vec![0usize; n + 1];
        for &v in &edge_vertices {
            vertex_offsets[v as usize + 1] += 1;
        }
        for j in 0..n {
            vertex_offsets[j + 1] += vertex_offsets[j];
        }
        let mut cursor = vertex_offsets[..n].to_vec();
        let mut vertex_edges = vec![0u32; edge_vertices.len()];
        let mut vertex_entries = vec![0u32; edge_vertices.len()];
        for i in 0..m {
            for pos in edge_offsets[i]..edge_offsets[i + 1] {
                let j = edge_vertices[pos] as usize;
                vertex_edges[cursor[j]] = i as u32;
                vertex_entries[cursor[j]] = pos as u32;
                cursor[j] += 1;
            }
        }
        let integral = detect_integral(&vertex_weights) && detect_integral(&edge_weights);
        WeightedHypergraph {
            vertex_weights,
            edge_weights,
            edge_offsets,
            edge_vertices,
            vertex_offsets,
            vertex_edges,
            vertex_entries,
            integral,
        }
    }

    /// The hypergraph with no vertices and no edges. Only produced by
    /// quotienting out everything; the solver refuses it.
    pub(crate) fn empty() -> Self {
        Self::assemble(Vec::new(), Vec::new(), vec![0], Vec::new())
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_weights.is_empty()
    }

    pub fn n(&self) -> usize {
        self.vertex_weights.len()
    }

    pub fn m(&self) -> usize {
        self.edge_weights.len()
    }

    /// Total number of incidences, the sum of all support sizes.
    pub fn total_degree(&self) -> usize {
        self.edge_vertices.len()
    }

    /// True iff every weight is an integer and both weight totals fit in a
    /// `u64`. Gates exact densities and optimality certificates.
    pub fn has_integral_weights(&self) -> bool {
        self.integral
    }

    /// True iff every vertex and edge weight equals 1.
    pub fn has_unit_weights(&self) -> bool {
        self.vertex_weights.iter().all(|&w| w == 1.0) && self.edge_weights.iter().all(|&u| u == 1.0)
    }

    pub fn vertex_weights(&self) -> &[f64] {
        &self.vertex_weights
    }

    pub fn edge_weights(&self) -> &[f64] {
        &self.edge_weights
    }

    pub fn vertex_weight(&self, v: VertexId) -> f64 {
        self.vertex_weights[v.index()]
    }

    pub fn edge_weight(&self, e: EdgeId) -> f64 {
        self.edge_weights[e.index()]
    }

    pub fn edge_offsets(&self) -> &[usize] {
        &self.edge_offsets
    }

    pub fn edge_vertices(&self) -> &[u32] {
        &self.edge_vertices
    }

    pub fn vertex_offsets(&self) -> &[usize] {
        &self.vertex_offsets
    }

    pub fn vertex_edges(&self) -> &[u32] {
        &self.vertex_edges
    }

    /// Positions into the edge-major arrays, aligned with `vertex_edges`.
    pub fn vertex_entries(&self) -> &[u32] {
        &self.vertex_entries
    }

    /// Range of `e`'s entries in the edge-major arrays.
    #[inline]
    pub fn entry_range(&self, e: EdgeId) -> Range<usize> {
        self.edge_offsets[e.index()]..self.edge_offsets[e.index() + 1]
    }

    #[inline]
    pub fn support(&self, e: EdgeId) -> &[u32] {
        &self.edge_vertices[self.entry_range(e)]
    }

    #[inline]
    pub fn incidence(&self, v: VertexId) -> &[u32] {
        &self.vertex_edges[self.vertex_offsets[v.index()]..self.vertex_offsets[v.index() + 1]]
    }

    #[inline]
    pub fn incidence_entries(&self, v: VertexId) -> &[u32] {
        &self.vertex_entries[self.vertex_offsets[v.index()]..self.vertex_offsets[v.index() + 1]]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.vertex_offsets[v.index() + 1] - self.vertex_offsets[v.index()]
    }

    pub fn total_vertex_weight(&self) -> f64 {
        self.vertex_weights.iter().sum()
    }

    pub fn total_edge_weight(&self) -> f64 {
        self.edge_weights.iter().sum()
    }

    /// `wt(E) / wt(V)` of a selection.
    pub fn density(&self, sel: &SubgraphSelection) -> Result<f64, HypergraphError> {
        sel.check(self)?;
        if sel.vertices.is_empty() {
            return Err(HypergraphError::EmptyVertexSet);
        }
        let wv: f64 = sel.vertices.iter().map(|&v| self.vertex_weight(v)).sum();
        let we: f64 = sel.edges.iter().map(|&e| self.edge_weight(e)).sum();
        Ok(we / wv)
    }

    /// Exact density of a selection, `None` when the weights are not integral.
    pub fn exact_density(&self, sel: &SubgraphSelection) -> Result<Option<Ratio>, HypergraphError> {
        sel.check(self)?;
        if sel.vertices.is_empty() {
            return Err(HypergraphError::EmptyVertexSet);
        }
        if !self.integral {
            return Ok(None);
        }
        let wv: u64 = sel.vertices.iter().map(|&v| self.vertex_weight(v) as u64).sum();
        let we: u64 = sel.edges.iter().map(|&e| self.edge_weight(e) as u64).sum();
        Ok(Some(Ratio::new(we, wv)))
    }

    /// Exact total vertex weight of a selection (integral weights only).
    pub(crate) fn exact_vertex_weight(&self, vertices: &[VertexId]) -> u64 {
        vertices.iter().map(|&v| self.vertex_weight(v) as u64).sum()
    }

    /// The dual hypergraph: vertices and edges trade places, as do weights.
    pub fn dual(&self) -> WeightedHypergraph {
        if self.is_empty() {
            return Self::empty();
        }
        Self::assemble(
            self.edge_weights.clone(),
            self.vertex_weights.clone(),
            self.vertex_offsets.clone(),
            self.vertex_edges.clone(),
        )
    }

    /// Every edge whose support lies inside `vertices`.
    pub fn induced_edges(&self, vertices: &[VertexId]) -> Vec<EdgeId> {
        let mut mask = vec![false; self.n()];
        for v in vertices {
            mask[v.index()] = true;
        }
        self.induced_edges_mask(&mask)
    }

    pub(crate) fn induced_edges_mask(&self, vertex_mask: &[bool]) -> Vec<EdgeId> {
        (0..self.m())
            .filter(|&i| {
                self.edge_vertices[self.edge_offsets[i]..self.edge_offsets[i + 1]]
                    .iter()
                    .all(|&v| vertex_mask[v as usize])
            })
            .map(|i| EdgeId(i as u32))
            .collect()
    }

    /// Removes a subgraph: the remaining edges keep only their remaining
    /// vertices. Quotienting by everything yields the empty hypergraph.
    pub fn quotient(&self, sel: &SubgraphSelection) -> Result<Quotient, HypergraphError> {
        sel.check(self)?;
        let keep_vertices: Vec<bool> = sel.vertex_mask(self.n()).iter().map(|&s| !s).collect();
        let keep_edges: Vec<bool> = sel.edge_mask(self.m()).iter().map(|&s| !s).collect();
        self.restrict(&keep_vertices, &keep_edges)
    }

    /// The hypergraph on the kept vertices and edges, each kept support
    /// intersected with the kept vertices.
    pub fn restrict(
        &self,
        keep_vertices: &[bool],
        keep_edges: &[bool],
    ) -> Result<Quotient, HypergraphError> {
        let mut new_index = vec![u32::MAX; self.n()];
        let mut vertex_map = Vec::new();
        for j in (0..self.n()).filter(|&j| keep_vertices[j]) {
            new_index[j] = vertex_map.len() as u32;
            vertex_map.push(VertexId(j as u32));
        }
        let edge_map: Vec<EdgeId> = (0..self.m())
            .filter(|&i| keep_edges[i])
            .map(|i| EdgeId(i as u32))
            .collect();
        if vertex_map.is_empty() && edge_map.is_empty() {
            return Ok(Quotient {
                hypergraph: Self::empty(),
                vertex_map,
                edge_map,
            });
        }
        let mut offsets = Vec::with_capacity(edge_map.len() + 1);
        let mut vertices = Vec::new();
        offsets.push(0);
        for &e in &edge_map {
            let before = vertices.len();
            vertices.extend(
                self.support(e)
                    .iter()
                    .filter(|&&v| keep_vertices[v as usize])
                    .map(|&v| new_index[v as usize]),
            );
            if vertices.len() == before {
                return Err(HypergraphError::QuotientCreatesEmptySupport { edge: e.index() });
            }
            offsets.push(vertices.len());
        }
        let vertex_weights: Vec<f64> = vertex_map.iter().map(|&v| self.vertex_weight(v)).collect();
        let edge_weights: Vec<f64> = edge_map.iter().map(|&e| self.edge_weight(e)).collect();
        let h = Self::assemble(vertex_weights, edge_weights, offsets, vertices);
        if let Some(j) = (0..h.n()).find(|&j| h.vertex_offsets[j] == h.vertex_offsets[j + 1]) {
            return Err(HypergraphError::QuotientCreatesIsolatedVertex {
                vertex: vertex_map[j].index(),
            });
        }
        Ok(Quotient {
            hypergraph: h,
            vertex_map,
            edge_map,
        })
    }
}

fn check_weights(kind: &'static str, weights: &[f64]) -> Result<(), HypergraphError> {
    match weights
        .iter()
        .enumerate()
        .find(|(_, &w)| !(w > 0.0 && w.is_finite()))
    {
        Some((index, &value)) => Err(HypergraphError::NonPositiveWeight { kind, index, value }),
        None => Ok(()),
    }
}

fn detect_integral(weights: &[f64]) -> bool {
    let mut total: u64 = 0;
    for &w in weights {
        if w.fract() != 0.0 || w > MAX_EXACT_WEIGHT {
            return false;
        }
        match total.checked_add(w as u64) {
            Some(t) => total = t,
            None => return false,
        }
    }
    true
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn vs(ids: &[u32]) -> Vec<VertexId> {
        ids.iter().map(|&i| VertexId(i)).collect()
    }

    fn es(ids: &[u32]) -> Vec<EdgeId> {
        ids.iter().map(|&i| EdgeId(i)).collect()
    }

    #[test]
    fn smallest_instance() {
        let h = WeightedHypergraph::build(vec![1.0], vec![1.0], &[vec![0]]).unwrap();
        assert_eq!((h.n(), h.m(), h.total_degree()), (1, 1, 1));
        assert!(h.has_integral_weights());
    }

    #[test]
    fn triangle_builds_with_transpose() {
        let h = k3();
        assert_eq!(h.total_degree(), 6);
        assert_eq!(h.incidence(VertexId(0)), &[0, 1]);
        assert_eq!(h.incidence(VertexId(2)), &[1, 2]);
        for j in 0..h.n() {
            for (&i, &pos) in h.incidence(VertexId(j as u32)).iter().zip(h.incidence_entries(VertexId(j as u32))) {
                assert!(h.entry_range(EdgeId(i)).contains(&(pos as usize)));
                assert_eq!(h.edge_vertices()[pos as usize], j as u32);
            }
        }
    }

    #[test]
    fn build_errors() {
        let empty: &[&[usize]] = &[&[]];
        assert_eq!(
            WeightedHypergraph::build(vec![1.0, 1.0], vec![1.0], empty),
            Err(HypergraphError::EmptySupport { edge: 0 })
        );
        assert_eq!(
            WeightedHypergraph::build(vec![1.0, 1.0], vec![1.0], &[vec![0]]),
            Err(HypergraphError::IsolatedVertex { vertex: 1 })
        );
        assert_eq!(
            WeightedHypergraph::build(vec![1.0], vec![1.0], &[vec![0, 0]]),
            Err(HypergraphError::DuplicateVertexInSupport { edge: 0, vertex: 0 })
        );
        assert!(matches!(
            WeightedHypergraph::build(vec![1.0], vec![0.0], &[vec![0]]),
            Err(HypergraphError::NonPositiveWeight { kind: "edge", .. })
        ));
        assert!(matches!(
            WeightedHypergraph::build(vec![f64::NAN], vec![1.0], &[vec![0]]),
            Err(HypergraphError::NonPositiveWeight { kind: "vertex", .. })
        ));
        assert_eq!(
            WeightedHypergraph::build(vec![1.0], vec![1.0], &[vec![3]]),
            Err(HypergraphError::IndexOutOfRange { edge: 0, vertex: 3, n: 1 })
        );
    }

    #[test]
    fn integrality_detection() {
        let h = WeightedHypergraph::build(vec![2.0], vec![3.0], &[vec![0]]).unwrap();
        assert!(h.has_integral_weights());
        assert!(!h.has_unit_weights());
        let h = WeightedHypergraph::build(vec![2.5], vec![3.0], &[vec![0]]).unwrap();
        assert!(!h.has_integral_weights());
        let h = WeightedHypergraph::build(vec![1e300], vec![3.0], &[vec![0]]).unwrap();
        assert!(!h.has_integral_weights());
    }

    #[test]
    fn densities() {
        let h = k3();
        assert_eq!(h.density(&SubgraphSelection::full(&h)).unwrap(), 1.0);
        let h = k4();
        assert_eq!(h.density(&SubgraphSelection::full(&h)).unwrap(), 1.5);
        assert_eq!(
            h.exact_density(&SubgraphSelection::full(&h)).unwrap(),
            Some(Ratio::new(3, 2))
        );
        let h = WeightedHypergraph::build(vec![2.0], vec![3.0], &[vec![0]]).unwrap();
        assert_eq!(h.density(&SubgraphSelection::full(&h)).unwrap(), 1.5);
        assert_eq!(
            h.density(&SubgraphSelection::empty()),
            Err(HypergraphError::EmptyVertexSet)
        );
        let bad = SubgraphSelection::new(vs(&[0]), es(&[0]));
        assert!(matches!(
            k3().density(&bad),
            Err(HypergraphError::InvalidSelection(_))
        ));
    }

    #[test]
    fn dual_of_triangle_and_star() {
        let d = k3().dual();
        assert_eq!((d.n(), d.m()), (3, 3));
        assert!((0..3).all(|i| d.support(EdgeId(i)).len() == 2));

        let star = unit(1, &[&[0], &[0], &[0]]);
        let d = star.dual();
        assert_eq!((d.n(), d.m()), (3, 1));
        assert_eq!(d.support(EdgeId(0)), &[0, 1, 2]);
    }

    #[test]
    fn dual_is_an_involution_and_inverts_density() {
        let h = WeightedHypergraph::build(
            vec![1.0, 2.0, 3.0],
            vec![5.0, 0.5],
            &[vec![2, 0], vec![1, 2]],
        )
        .unwrap();
        assert_eq!(h.dual().dual(), h);
        let a = h.density(&SubgraphSelection::full(&h)).unwrap();
        let d = h.dual();
        let b = d.density(&SubgraphSelection::full(&d)).unwrap();
        assert!((a * b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quotient_cases() {
        let h = k4_pendant();
        let q = h.quotient(&SubgraphSelection::empty()).unwrap();
        assert_eq!(q.hypergraph, h);

        let k4 = SubgraphSelection::new(vs(&[0, 1, 2, 3]), es(&[0, 1, 2, 3, 4, 5]));
        let q = h.quotient(&k4).unwrap();
        assert_eq!((q.hypergraph.n(), q.hypergraph.m()), (1, 1));
        assert_eq!(q.vertex_map, vs(&[4]));
        assert_eq!(q.edge_map, es(&[6]));
        assert_eq!(q.hypergraph.support(EdgeId(0)), &[0]);

        let q = h.quotient(&SubgraphSelection::full(&h)).unwrap();
        assert!(q.hypergraph.is_empty());

        // Leaving out an edge whose support is inside the selection.
        let partial = SubgraphSelection::new(vs(&[0, 1, 2, 3]), es(&[0, 1, 2, 3, 4]));
        assert_eq!(
            h.quotient(&partial),
            Err(HypergraphError::QuotientCreatesEmptySupport { edge: 5 })
        );
    }

    #[test]
    fn induced_edges_cases() {
        assert_eq!(k3().induced_edges(&vs(&[0, 1])), es(&[0]));
        assert_eq!(k3().induced_edges(&vs(&[0, 1, 2])), es(&[0, 1, 2]));
        assert_eq!(
            k4_pendant().induced_edges(&vs(&[0, 1, 2, 3])),
            es(&[0, 1, 2, 3, 4, 5])
        );
    }

    #[test]
    fn weighted_average_identity() {
        let h = WeightedHypergraph::build(
            vec![1.0, 2.0, 3.0, 1.5],
            vec![2.0, 1.0, 4.0],
            &[vec![0, 1], vec![1, 2, 3], vec![3]],
        )
        .unwrap();
        let sub = SubgraphSelection::new(vs(&[0, 1]), es(&[0]));
        let q = h.quotient(&sub).unwrap();
        let a = h.density(&SubgraphSelection::full(&h)).unwrap();
        let a1 = h.density(&sub).unwrap();
        let a2 = q
            .hypergraph
            .density(&SubgraphSelection::full(&q.hypergraph))
            .unwrap();
        let (w1, w2) = (3.0, 4.5);
        assert!(((w1 * a1 + w2 * a2) / (w1 + w2) - a).abs() < 1e-12 * a);
    }
}
