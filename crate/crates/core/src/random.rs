//! Seeded Erdős–Rényi graphs for sweeps and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Edge, Weight, WeightedGraph};

/// `G(n, p)` with weights drawn uniformly from `1..=max_weight`.
pub fn random_graph(n: usize, p: f64, max_weight: Weight, seed: u64) -> WeightedGraph {
    assert!(max_weight >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((Edge::new(a, b), rng.gen_range(1..=max_weight)));
            }
        }
    }
    WeightedGraph::new(n, edges).expect("generated graph is simple")
}

#[derive(Clone, Debug)]
pub struct CorpusSpec {
    pub min_vertices: usize,
    pub max_vertices: usize,
    pub probabilities: Vec<f64>,
    pub max_weight: Weight,
    pub graphs_per_probability: usize,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub label: String,
    pub graph: WeightedGraph,
}

/// Deterministic corpus: for each probability, `graphs_per_probability`
/// graphs with vertex counts cycling through the allowed range.
pub fn corpus(spec: &CorpusSpec) -> Vec<Instance> {
    let span = spec.max_vertices - spec.min_vertices + 1;
    let mut out = Vec::new();
    for (pi, &p) in spec.probabilities.iter().enumerate() {
        for i in 0..spec.graphs_per_probability {
            let n = spec.min_vertices + i % span;
            let seed = spec.seed ^ ((pi as u64) << 32) ^ i as u64;
            out.push(Instance { label: format!("n{n}-p{p}-#{i}"), graph: random_graph(n, p, spec.max_weight, seed) });
        }
    }
    out
}
