//! Seeded random hypergraphs.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{HypergraphError, WeightedHypergraph};

#[derive(Debug, Error, PartialEq)]
pub enum GenerateError {
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParameters(String),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// Ranges are inclusive. Weights are integers drawn independently for every
/// vertex and edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorParams {
    pub n: usize,
    pub m: usize,
    pub edge_size: (usize, usize),
    pub weights: (u64, u64),
    pub seed: u64,
}

impl GeneratorParams {
    pub fn unit(n: usize, m: usize, edge_size: (usize, usize), seed: u64) -> Self {
        GeneratorParams {
            n,
            m,
            edge_size,
            weights: (1, 1),
            seed,
        }
    }
}

/// Samples supports without replacement with sizes uniform in
/// `edge_size`, then gives every uncovered vertex an incidence: it joins a
/// random edge with room to spare, or replaces a vertex that is covered
/// elsewhere.
pub fn generate_random(p: &GeneratorParams) -> Result<WeightedHypergraph, GenerateError> {
    let infeasible = |msg: String| Err(GenerateError::InfeasibleParameters(msg));
    let (lo, hi) = p.edge_size;
    if p.n == 0 || p.m == 0 {
        return infeasible("n and m must be positive".into());
    }
    if lo == 0 || lo > hi || hi > p.n {
        return infeasible(format!("edge sizes {lo}..={hi} must lie in 1..={}", p.n));
    }
    if p.weights.0 == 0 || p.weights.0 > p.weights.1 || p.weights.1 > 1 << 53 {
        return infeasible(format!("weight range {:?} must lie in 1..=2^53", p.weights));
    }
    if (p.m as u128) * (hi as u128) < p.n as u128 {
        return infeasible(format!("{} edges of size at most {hi} cannot cover {} vertices", p.m, p.n));
    }
    if p.m.checked_mul(hi).is_none_or(|d| d > u32::MAX as usize) {
        return infeasible("too many incidences for 32-bit indexing".into());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut sizes: Vec<usize> = (0..p.m).map(|_| rng.random_range(lo..=hi)).collect();
    let mut supports: Vec<u32> = Vec::with_capacity(sizes.iter().sum());
    let mut degree = vec![0u32; p.n];
    for &k in &sizes {
        for j in sample(&mut rng, p.n, k) {
            supports.push(j as u32);
            degree[j] += 1;
        }
    }

    let mut offsets = Vec::with_capacity(p.m + 1);
    offsets.push(0usize);
    for &k in &sizes {
        offsets.push(offsets.last().unwrap() + k);
    }
    let mut extra: Vec<(usize, u32)> = Vec::new();
    for v in 0..p.n {
        if degree[v] > 0 {
            continue;
        }
        // Random probes first, then a scan; feasibility guarantees a hit.
        let probes = (0..32).map(|_| rng.random_range(0..p.m));
        let placed = probes.chain(0..p.m).find_map(|i| {
            if sizes[i] < hi {
                return Some((i, None));
            }
            let range = offsets[i]..offsets[i + 1];
            supports[range.clone()]
                .iter()
                .position(|&u| degree[u as usize] > 1)
                .map(|k| (i, Some(range.start + k)))
        });
        match placed {
            Some((i, None)) => {
                sizes[i] += 1;
                extra.push((i, v as u32));
            }
            Some((_, Some(pos))) => {
                degree[supports[pos] as usize] -= 1;
                supports[pos] = v as u32;
            }
            None => unreachable!("coverable by the size check"),
        }
        degree[v] = 1;
    }

    if !extra.is_empty() {
        extra.sort_unstable();
        let mut merged = Vec::with_capacity(supports.len() + extra.len());
        let mut new_offsets = Vec::with_capacity(p.m + 1);
        new_offsets.push(0);
        let mut cursor = 0;
        for i in 0..p.m {
            merged.extend_from_slice(&supports[offsets[i]..offsets[i + 1]]);
            while cursor < extra.len() && extra[cursor].0 == i {
                merged.push(extra[cursor].1);
                cursor += 1;
            }
            new_offsets.push(merged.len());
        }
        supports = merged;
        offsets = new_offsets;
    }

    let (wlo, whi) = p.weights;
    let mut weight = || rng.random_range(wlo..=whi) as f64;
    let vertex_weights: Vec<f64> = (0..p.n).map(|_| weight()).collect();
    let edge_weights: Vec<f64> = (0..p.m).map(|_| weight()).collect();
    Ok(WeightedHypergraph::from_csr(
        vertex_weights,
        edge_weights,
        offsets,
        supports,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let p = GeneratorParams::unit(10, 15, (2, 4), 1);
        let a = generate_random(&p).unwrap();
        let b = generate_random(&p).unwrap();
        assert_eq!(a, b);
        assert_eq!((a.n(), a.m()), (10, 15));
        assert!(a.has_unit_weights());
        let c = generate_random(&GeneratorParams { seed: 2, ..p }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn covers_every_vertex_when_edges_are_few() {
        for seed in 0..50 {
            let p = GeneratorParams {
                n: 12,
                m: 4,
                edge_size: (1, 3),
                weights: (1, 5),
                seed,
            };
            let h = generate_random(&p).unwrap();
            assert_eq!(h.n(), 12);
            assert!(h.has_integral_weights());
        }
    }

    #[test]
    fn rejects_infeasible() {
        let bad = [
            GeneratorParams::unit(0, 3, (1, 2), 0),
            GeneratorParams::unit(5, 3, (0, 2), 0),
            GeneratorParams::unit(5, 3, (3, 2), 0),
            GeneratorParams::unit(5, 3, (1, 6), 0),
            GeneratorParams::unit(10, 3, (1, 3), 0),
            GeneratorParams {
                weights: (0, 1),
                ..GeneratorParams::unit(5, 5, (1, 2), 0)
            },
        ];
        for p in bad {
            assert!(matches!(
                generate_random(&p),
                Err(GenerateError::InfeasibleParameters(_))
            ));
        }
    }
}
