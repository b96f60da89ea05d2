#![allow(dead_code)]

use hyperdense::io::{generate_random, GeneratorParams};
use hyperdense::{SupportMatrix, WeightedHypergraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded instance with `n` and `m` drawn from the inclusive ranges.
pub fn instance(
    seed: u64,
    n: (usize, usize),
    m: (usize, usize),
    edge_size: (usize, usize),
    weights: (u64, u64),
) -> WeightedHypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f12_57a9_ce00);
    let n = rng.random_range(n.0..=n.1);
    let m = rng.random_range(m.0..=m.1);
    let edge_size = (edge_size.0.min(n), edge_size.1.min(n));
    let m = m.max(n.div_ceil(edge_size.1));
    generate_random(&GeneratorParams {
        n,
        m,
        edge_size,
        weights,
        seed,
    })
    .expect("feasible generator parameters")
}

pub fn unit_instance(seed: u64, n: (usize, usize), m: (usize, usize), sizes: (usize, usize)) -> WeightedHypergraph {
    instance(seed, n, m, sizes, (1, 1))
}

/// A valid support matrix with random row shapes; roughly one entry in four
/// is zero.
pub fn random_matrix<'h>(h: &'h WeightedHypergraph, seed: u64) -> SupportMatrix<'h> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = vec![0.0; h.total_degree()];
    let w = h.vertex_weights();
    for i in 0..h.m() {
        let e = hyperdense::EdgeId(i as u32);
        let range = h.entry_range(e);
        let support = h.support(e);
        let mut raw: Vec<f64> = support
            .iter()
            .map(|_| if rng.random_bool(0.25) { 0.0 } else { rng.random_range(0.01..1.0) })
            .collect();
        if raw.iter().all(|&x| x == 0.0) {
            raw[0] = 1.0;
        }
        let total: f64 = raw.iter().zip(support).map(|(x, &j)| x * w[j as usize]).sum();
        let scale = h.edge_weights()[i] / total;
        for (k, x) in raw.into_iter().enumerate() {
            values[range.start + k] = x * scale;
        }
    }
    SupportMatrix::from_values(h, values).expect("length matches")
}
