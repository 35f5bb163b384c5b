//! Seeded random inputs. Metrics come from distinct grid points of a bounded box
//! under the sup distance, so they satisfy the triangle inequality by construction.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::correspondence::Correspondence;
use crate::hedgehog::HedgehogSpec;
use crate::rational::rat;
use crate::space::{FiniteMetricSpace, Mode};

pub use crate::hedgehog::grid_hedgehog;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Points of `{0, 1/denom, …, bound}^dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MetricParams {
    pub points: usize,
    pub dim: usize,
    pub bound: i64,
    pub denom: i64,
}

impl MetricParams {
    pub fn new(points: usize) -> Self {
        MetricParams {
            points,
            dim: 3,
            bound: 6,
            denom: 1,
        }
    }
}

fn sup_space(coords: &[Vec<i64>], denom: i64) -> FiniteMetricSpace {
    let labels = (0..coords.len()).map(|i| format!("p{i}")).collect();
    FiniteMetricSpace::from_fn_unchecked(labels, Mode::Strict, |i, j| {
        let d = coords[i]
            .iter()
            .zip(&coords[j])
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or(0);
        rat(d as i128, denom as i128)
    })
}

/// A strict space of `params.points` distinct points.
///
/// Panics if the box holds fewer grid points than requested.
pub fn random_metric<R: Rng>(rng: &mut R, params: &MetricParams) -> FiniteMetricSpace {
    let side = (params.bound * params.denom + 1) as u128;
    let capacity = side.checked_pow(params.dim as u32).unwrap_or(u128::MAX);
    assert!(
        params.points as u128 <= capacity && params.points > 0,
        "cannot place {} points",
        params.points
    );
    let mut seen = BTreeSet::new();
    let mut coords = Vec::with_capacity(params.points);
    while coords.len() < params.points {
        let p: Vec<i64> = (0..params.dim)
            .map(|_| rng.gen_range(0..=params.bound * params.denom))
            .collect();
        if seen.insert(p.clone()) {
            coords.push(p);
        }
    }
    sup_space(&coords, params.denom)
}

/// Like [`random_metric`], resampling until all nonzero distances differ.
pub fn random_metric_distinct<R: Rng>(rng: &mut R, points: usize) -> FiniteMetricSpace {
    let params = MetricParams {
        points,
        dim: 4,
        bound: 12 * points as i64,
        denom: 1,
    };
    loop {
        let x = random_metric(rng, &params);
        let pairs = points * points.saturating_sub(1) / 2;
        if x.distance_values().len() == pairs {
            return x;
        }
    }
}

/// `graph(f) ∪ graph(g)⁻¹` for random `f`, `g`, plus each other pair with probability `extra`.
pub fn random_correspondence<R: Rng>(rng: &mut R, n: usize, m: usize, extra: f64) -> Correspondence {
    let f: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
    let g: Vec<usize> = (0..m).map(|_| rng.gen_range(0..n)).collect();
    let mut pairs: Vec<(usize, usize)> = Correspondence::from_maps(&f, &g)
        .expect("maps into nonempty sets")
        .pairs()
        .iter()
        .copied()
        .collect();
    for i in 0..n {
        for j in 0..m {
            if rng.gen_bool(extra) {
                pairs.push((i, j));
            }
        }
    }
    Correspondence::new(n, m, pairs).expect("contains a surjective pair of maps")
}

/// A random bijection `0..n -> 0..n` as a correspondence.
pub fn random_bijection<R: Rng>(rng: &mut R, n: usize) -> Correspondence {
    let mut image: Vec<usize> = (0..n).collect();
    image.shuffle(rng);
    Correspondence::from_bijection(&image).expect("a permutation")
}

/// Edges of a random tree on `0..n`: every vertex after the first attaches to an earlier one.
pub fn random_tree_edges<R: Rng>(rng: &mut R, n: usize) -> Vec<(usize, usize)> {
    (1..n).map(|v| (rng.gen_range(0..v), v)).collect()
}

/// `count` needles with lengths `k/denom`, `1 ≤ k ≤ max·denom`, and multiplicities up to 3.
pub fn dense_spec<R: Rng>(rng: &mut R, count: usize, max: i64, denom: i64) -> HedgehogSpec {
    let needles = (0..count.max(1)).map(|_| {
        let k = rng.gen_range(1..=max * denom);
        (rat(k as i128, denom as i128), rng.gen_range(1..=3))
    });
    HedgehogSpec::new(needles).expect("positive lengths and multiplicities")
}
