//! Ambient spaces that realize correspondences.
//!
//! For a correspondence `R` between `X` and `Y` with `0 < dis R`, the cross distance
//! `|xy| = min over (x', y') ∈ R of |xx'| + |y'y| + ½·dis R` extends both metrics to
//! `X ⊔ Y`, and the two parts then sit at Hausdorff distance exactly `½·dis R`.
//! A tree of such gluings extends to every vertex by relaying through the unique
//! tree path.

use std::collections::VecDeque;

use num_traits::Zero;
use thiserror::Error;

use crate::correspondence::{distortion, Correspondence, CorrespondenceError};
use crate::rational::Rational;
use crate::space::{FiniteMetricSpace, MetricError, Mode, SubsetRef};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GluingError {
    #[error("edge {0} carries a distortion-0 correspondence; merge isometric spaces instead of gluing")]
    ZeroDistortion(usize),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("leaf {leaf}: distortion {distortion} is not below 2M = {budget}")]
    DistortionBudgetExceeded {
        leaf: usize,
        distortion: Rational,
        budget: Rational,
    },
    #[error("edge {edge}: {source}")]
    Correspondence {
        edge: usize,
        source: CorrespondenceError,
    },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TreeEdge {
    pub u: usize,
    pub v: usize,
    /// Relates the points of `u` (left) to those of `v` (right).
    pub correspondence: Correspondence,
    /// `½·dis` of the correspondence.
    pub weight: Rational,
}

/// Spaces on the vertices of a tree, with a correspondence on every edge.
#[derive(Clone, Debug, PartialEq)]
pub struct GluingTree {
    vertices: Vec<FiniteMetricSpace>,
    edges: Vec<TreeEdge>,
}

impl GluingTree {
    pub fn new(
        vertices: Vec<FiniteMetricSpace>,
        edges: Vec<(usize, usize, Correspondence)>,
    ) -> Result<Self, GluingError> {
        let k = vertices.len();
        if k == 0 {
            return Err(GluingError::NotATree("no vertices".into()));
        }
        if edges.len() != k - 1 {
            return Err(GluingError::NotATree(format!(
                "{} edges on {k} vertices",
                edges.len()
            )));
        }
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(parent: &mut [usize], mut a: usize) -> usize {
            while parent[a] != a {
                parent[a] = parent[parent[a]];
                a = parent[a];
            }
            a
        }
        let mut checked = Vec::with_capacity(edges.len());
        for (e, (u, v, r)) in edges.into_iter().enumerate() {
            if u >= k || v >= k {
                return Err(GluingError::NotATree(format!("edge {e} names a missing vertex")));
            }
            if u == v {
                return Err(GluingError::NotATree(format!("edge {e} is a loop")));
            }
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                return Err(GluingError::NotATree(format!("edge {e} closes a cycle")));
            }
            parent[ru] = rv;
            let dis = distortion(&r, &vertices[u], &vertices[v])
                .map_err(|source| GluingError::Correspondence { edge: e, source })?;
            if dis.is_zero() {
                return Err(GluingError::ZeroDistortion(e));
            }
            checked.push(TreeEdge {
                u,
                v,
                correspondence: r,
                weight: dis / 2,
            });
        }
        Ok(GluingTree {
            vertices,
            edges: checked,
        })
    }

    pub fn vertices(&self) -> &[FiniteMetricSpace] {
        &self.vertices
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }
}

/// One ambient space holding every vertex space isometrically.
#[derive(Clone, Debug, PartialEq)]
pub struct GluedSpace {
    carrier: FiniteMetricSpace,
    provenance: Vec<(usize, usize)>,
    offsets: Vec<usize>,
}

impl GluedSpace {
    pub fn carrier(&self) -> &FiniteMetricSpace {
        &self.carrier
    }

    /// `(vertex, local index)` for every carrier point.
    pub fn provenance(&self) -> &[(usize, usize)] {
        &self.provenance
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Carrier index of `local` in `vertex`.
    pub fn point(&self, vertex: usize, local: usize) -> usize {
        self.offsets[vertex] + local
    }

    pub fn part_indices(&self, vertex: usize) -> Vec<usize> {
        (self.offsets[vertex]..self.offsets[vertex + 1]).collect()
    }

    /// The points of `vertex` as a subset of the carrier.
    pub fn part(&self, vertex: usize) -> SubsetRef<'_> {
        SubsetRef::new(&self.carrier, self.part_indices(vertex)).expect("vertex parts are nonempty")
    }
}

/// Cross distances `|ab|` for `a ∈ U`, `b ∈ V` over a correspondence `R ⊂ U×V` with weight `½·dis R`.
fn cross_distances(
    u: &FiniteMetricSpace,
    v: &FiniteMetricSpace,
    r: &Correspondence,
    weight: &Rational,
) -> Vec<Vec<Rational>> {
    (0..u.len())
        .map(|a| {
            (0..v.len())
                .map(|b| {
                    r.pairs()
                        .iter()
                        .map(|&(a2, b2)| u.dist(a, a2) + v.dist(b2, b) + weight)
                        .min()
                        .expect("correspondences are nonempty")
                })
                .collect()
        })
        .collect()
}

/// Glues `X` and `Y` along `R`; `X` becomes vertex 0 and `Y` vertex 1.
pub fn glue_pair(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    r: &Correspondence,
) -> Result<GluedSpace, GluingError> {
    let tree = GluingTree::new(vec![x.clone(), y.clone()], vec![(0, 1, r.clone())])?;
    glue_tree(&tree)
}

/// Extends all vertex metrics to the disjoint union. Between points of different
/// vertices the distance is the cheapest relay along the tree path, accumulated
/// one edge at a time from each source vertex.
pub fn glue_tree(tree: &GluingTree) -> Result<GluedSpace, GluingError> {
    let k = tree.vertices.len();
    let mut offsets = vec![0usize; k + 1];
    for (i, x) in tree.vertices.iter().enumerate() {
        offsets[i + 1] = offsets[i] + x.len();
    }
    let total = offsets[k];

    // adjacency with the cross table oriented away from the current vertex
    let mut adjacent: Vec<Vec<(usize, Vec<Vec<Rational>>)>> = vec![Vec::new(); k];
    for e in &tree.edges {
        let (xu, xv) = (&tree.vertices[e.u], &tree.vertices[e.v]);
        let forward = cross_distances(xu, xv, &e.correspondence, &e.weight);
        let backward = (0..xv.len())
            .map(|b| (0..xu.len()).map(|a| forward[a][b]).collect())
            .collect();
        adjacent[e.u].push((e.v, forward));
        adjacent[e.v].push((e.u, backward));
    }

    let mut dist = vec![vec![Rational::zero(); total]; total];
    for s in 0..k {
        let xs = &tree.vertices[s];
        for a in 0..xs.len() {
            for b in 0..xs.len() {
                dist[offsets[s] + a][offsets[s] + b] = *xs.dist(a, b);
            }
        }
        let mut seen = vec![false; k];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(p) = queue.pop_front() {
            for (v, cross) in &adjacent[p] {
                let v = *v;
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                queue.push_back(v);
                let (np, nv) = (tree.vertices[p].len(), tree.vertices[v].len());
                for a in 0..xs.len() {
                    let src = offsets[s] + a;
                    for b in 0..nv {
                        let best = (0..np)
                            .map(|q| dist[src][offsets[p] + q] + cross[q][b])
                            .min()
                            .expect("spaces are nonempty");
                        dist[src][offsets[v] + b] = best;
                    }
                }
            }
        }
    }

    let mut labels = Vec::with_capacity(total);
    let mut provenance = Vec::with_capacity(total);
    for (i, x) in tree.vertices.iter().enumerate() {
        for (local, label) in x.labels().iter().enumerate() {
            labels.push(format!("{i}.{label}"));
            provenance.push((i, local));
        }
    }
    let mode = if tree.vertices.iter().all(|x| x.mode() == Mode::Strict) {
        Mode::Strict
    } else {
        Mode::Pseudo
    };
    let carrier = FiniteMetricSpace::validate(labels, dist, mode)?;
    Ok(GluedSpace {
        carrier,
        provenance,
        offsets,
    })
}

/// Star gluing: the center is vertex 0 and leaf `i` is vertex `i + 1`. Each leaf
/// needs `0 < dis R < 2M`, which puts it at Hausdorff distance below `M` from the center.
pub fn glue_star(
    center: &FiniteMetricSpace,
    leaves: &[(FiniteMetricSpace, Correspondence, Rational)],
) -> Result<GluedSpace, GluingError> {
    let mut vertices = vec![center.clone()];
    let mut edges = Vec::with_capacity(leaves.len());
    for (i, (leaf, r, budget)) in leaves.iter().enumerate() {
        let dis = distortion(r, center, leaf)
            .map_err(|source| GluingError::Correspondence { edge: i, source })?;
        if dis.is_zero() {
            return Err(GluingError::ZeroDistortion(i));
        }
        if dis >= budget * 2 {
            return Err(GluingError::DistortionBudgetExceeded {
                leaf: i,
                distortion: dis,
                budget: budget * 2,
            });
        }
        vertices.push(leaf.clone());
        edges.push((0, i + 1, r.clone()));
    }
    glue_tree(&GluingTree::new(vertices, edges)?)
}
