//! Seeded inputs shared by the benchmarks in `benches/`.

use ghcloud::generate::{random_correspondence, random_metric, random_tree_edges, rng_from_seed, MetricParams};
use ghcloud::gluing::GluingTree;
use ghcloud::FiniteMetricSpace;

pub fn metric_pair(seed: u64, points: usize) -> (FiniteMetricSpace, FiniteMetricSpace) {
    let mut rng = rng_from_seed(seed);
    let params = MetricParams::new(points);
    (random_metric(&mut rng, &params), random_metric(&mut rng, &params))
}

/// A random tree of `vertices` spaces with `points` points each.
pub fn gluing_tree(seed: u64, vertices: usize, points: usize) -> GluingTree {
    let mut rng = rng_from_seed(seed);
    let params = MetricParams::new(points);
    let spaces: Vec<FiniteMetricSpace> = (0..vertices).map(|_| random_metric(&mut rng, &params)).collect();
    let edges = random_tree_edges(&mut rng, vertices)
        .into_iter()
        .map(|(u, v)| (u, v, random_correspondence(&mut rng, points, points, 0.2)))
        .collect();
    GluingTree::new(spaces, edges).expect("generated tree is valid")
}
