//! Finite (pseudo)metric spaces with exact distances.
//!
//! A [`FiniteMetricSpace`] can only be obtained through [`FiniteMetricSpace::validate`]
//! (or an operation that provably preserves the axioms), so every value of the type
//! satisfies symmetry, a zero diagonal and the triangle inequality exactly.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{is_positive, Rational};

/// Whether distinct points may sit at distance zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Strict,
    Pseudo,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Strict => f.write_str("strict"),
            Mode::Pseudo => f.write_str("pseudo"),
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Mode::Strict),
            "pseudo" => Ok(Mode::Pseudo),
            other => Err(format!("unknown mode `{other}` (expected strict or pseudo)")),
        }
    }
}

/// A single failed axiom, with the indices that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Violation {
    Empty,
    NotSquare { row: usize, len: usize, expected: usize },
    LabelCount { labels: usize, points: usize },
    DuplicateLabel(usize, usize),
    NegativeEntry(usize, usize),
    NonzeroDiagonal(usize),
    AsymmetricEntry(usize, usize),
    /// `dist[i][j] > dist[i][k] + dist[k][j]`, reported as `(i, j, k)` with `i < j`.
    TriangleViolation(usize, usize, usize),
    ZeroDistanceDistinctPoints(usize, usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "the space has no points"),
            Violation::NotSquare { row, len, expected } => {
                write!(f, "row {row} has {len} entries, expected {expected}")
            }
            Violation::LabelCount { labels, points } => {
                write!(f, "{labels} labels for {points} points")
            }
            Violation::DuplicateLabel(i, j) => write!(f, "points {i} and {j} share a label"),
            Violation::NegativeEntry(i, j) => write!(f, "negative entry at ({i},{j})"),
            Violation::NonzeroDiagonal(i) => write!(f, "nonzero diagonal at {i}"),
            Violation::AsymmetricEntry(i, j) => write!(f, "dist[{i}][{j}] != dist[{j}][{i}]"),
            Violation::TriangleViolation(i, j, k) => {
                write!(f, "dist[{i}][{j}] > dist[{i}][{k}] + dist[{k}][{j}]")
            }
            Violation::ZeroDistanceDistinctPoints(i, j) => {
                write!(f, "distinct points {i} and {j} at distance 0 in strict mode")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("not a metric: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("scale factor must be positive, got {0}")]
    NonpositiveScale(Rational),
    #[error("subset is empty")]
    EmptySubset,
    #[error("index {index} out of range for a space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("index {0} listed twice in a subset")]
    DuplicateIndex(usize),
    #[error("subsets live in different ambient spaces")]
    DifferentAmbientSpaces,
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

impl MetricError {
    /// The violations carried by an `Invalid` error, empty otherwise.
    pub fn violations(&self) -> &[Violation] {
        match self {
            MetricError::Invalid(v) => v,
            _ => &[],
        }
    }
}

/// Labeled points with an exact symmetric distance matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    n: usize,
    dist: Vec<Rational>,
    mode: Mode,
}

impl FiniteMetricSpace {
    /// Checks every axiom and returns the space, or the full list of violations.
    pub fn validate(
        labels: Vec<String>,
        matrix: Vec<Vec<Rational>>,
        mode: Mode,
    ) -> Result<Self, MetricError> {
        let n = matrix.len();
        let mut violations = Vec::new();
        if n == 0 {
            return Err(MetricError::Invalid(vec![Violation::Empty]));
        }
        for (row, entries) in matrix.iter().enumerate() {
            if entries.len() != n {
                violations.push(Violation::NotSquare {
                    row,
                    len: entries.len(),
                    expected: n,
                });
            }
        }
        if labels.len() != n {
            violations.push(Violation::LabelCount {
                labels: labels.len(),
                points: n,
            });
        }
        if !violations.is_empty() {
            return Err(MetricError::Invalid(violations));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if labels[i] == labels[j] {
                    violations.push(Violation::DuplicateLabel(i, j));
                }
            }
        }

        let dist: Vec<Rational> = matrix.into_iter().flatten().collect();
        let at = |i: usize, j: usize| &dist[i * n + j];
        for i in 0..n {
            for j in 0..n {
                if at(i, j).is_negative() {
                    violations.push(Violation::NegativeEntry(i, j));
                }
            }
        }
        for i in 0..n {
            if !at(i, i).is_zero() {
                violations.push(Violation::NonzeroDiagonal(i));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if at(i, j) != at(j, i) {
                    violations.push(Violation::AsymmetricEntry(i, j));
                }
                if mode == Mode::Strict && (at(i, j).is_zero() || at(j, i).is_zero()) {
                    violations.push(Violation::ZeroDistanceDistinctPoints(i, j));
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    if at(i, j) > &(at(i, k) + at(k, j)) {
                        violations.push(Violation::TriangleViolation(i, j, k));
                    }
                }
            }
        }

        if violations.is_empty() {
            Ok(FiniteMetricSpace {
                labels,
                n,
                dist,
                mode,
            })
        } else {
            Err(MetricError::Invalid(violations))
        }
    }

    /// Like [`validate`](Self::validate) with labels `0..n`.
    pub fn from_matrix(matrix: Vec<Vec<Rational>>, mode: Mode) -> Result<Self, MetricError> {
        let labels = (0..matrix.len()).map(|i| i.to_string()).collect();
        Self::validate(labels, matrix, mode)
    }

    /// The one-point space.
    pub fn point() -> Self {
        FiniteMetricSpace {
            labels: vec!["0".into()],
            n: 1,
            dist: vec![Rational::zero()],
            mode: Mode::Strict,
        }
    }

    /// Builds a space from a distance function without checking the axioms.
    /// Callers must guarantee them; debug builds re-validate.
    pub(crate) fn from_fn_unchecked(
        labels: Vec<String>,
        mode: Mode,
        f: impl Fn(usize, usize) -> Rational,
    ) -> Self {
        let n = labels.len();
        let mut dist = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                dist.push(if i == j { Rational::zero() } else { f(i, j) });
            }
        }
        let space = FiniteMetricSpace {
            labels,
            n,
            dist,
            mode,
        };
        debug_assert!(
            Self::validate(space.labels.clone(), space.matrix(), mode).is_ok(),
            "unchecked construction produced an invalid space"
        );
        space
    }

    pub fn len(&self) -> usize {
        self.n
    }

    /// Always false: validated spaces have at least one point.
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.dist[i * self.n..(i + 1) * self.n]
    }

    /// The matrix as nested rows.
    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    /// Largest distance; zero for a one-point space.
    pub fn diameter(&self) -> Rational {
        self.dist.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest distance from point `i`.
    pub fn eccentricity(&self, i: usize) -> Rational {
        self.row(i).iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    /// Every distance multiplied by `lambda`.
    pub fn scale(&self, lambda: &Rational) -> Result<Self, MetricError> {
        if !is_positive(lambda) {
            return Err(MetricError::NonpositiveScale(*lambda));
        }
        Ok(FiniteMetricSpace {
            labels: self.labels.clone(),
            n: self.n,
            dist: self.dist.iter().map(|d| d * lambda).collect(),
            mode: self.mode,
        })
    }

    /// The subspace on `indices`, in the given order.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self, MetricError> {
        let subset = SubsetRef::new(self, indices.to_vec())?;
        let idx = subset.indices();
        Ok(FiniteMetricSpace::from_fn_unchecked(
            idx.iter().map(|&i| self.labels[i].clone()).collect(),
            self.mode,
            |a, b| *self.dist(idx[a], idx[b]),
        ))
    }

    /// Same points and distances, different labels.
    pub fn relabel(&self, labels: Vec<String>) -> Result<Self, MetricError> {
        Self::validate(labels, self.matrix(), self.mode)
    }

    /// Same matrix, checked again under `mode`.
    pub fn with_mode(&self, mode: Mode) -> Result<Self, MetricError> {
        Self::validate(self.labels.clone(), self.matrix(), mode)
    }

    /// True when the distance matrices agree entrywise (labels are ignored).
    pub fn same_distances(&self, other: &Self) -> bool {
        self.n == other.n && self.dist == other.dist
    }

    /// Distinct nonzero distances, ascending.
    pub fn distance_values(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.dist.iter().filter(|d| !d.is_zero()).cloned().collect();
        v.sort();
        v.dedup();
        v
    }

    /// Whether a distance-preserving bijection onto `other` exists.
    pub fn is_isometric(&self, other: &Self) -> bool {
        !find_isometries(self, other, Some(1)).is_empty()
    }
}

/// Enumerates distance-preserving bijections `self -> other` by backtracking,
/// stopping after `limit` maps when given. Each map is `image[i]` for point `i`.
pub fn find_isometries(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    limit: Option<usize>,
) -> Vec<Vec<usize>> {
    let mut found = Vec::new();
    if x.len() != y.len() {
        return found;
    }
    let n = x.len();
    let mut image = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend_isometry(x, y, &mut image, &mut used, &mut found, limit);
    found
}

fn extend_isometry(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    image: &mut Vec<usize>,
    used: &mut [bool],
    found: &mut Vec<Vec<usize>>,
    limit: Option<usize>,
) -> bool {
    if limit.is_some_and(|l| found.len() >= l) {
        return true;
    }
    let i = image.len();
    if i == x.len() {
        found.push(image.clone());
        return limit.is_some_and(|l| found.len() >= l);
    }
    for c in 0..y.len() {
        if used[c] {
            continue;
        }
        if image.iter().enumerate().all(|(j, &yj)| x.dist(i, j) == y.dist(c, yj)) {
            used[c] = true;
            image.push(c);
            let done = extend_isometry(x, y, image, used, found, limit);
            image.pop();
            used[c] = false;
            if done {
                return true;
            }
        }
    }
    false
}

/// A nonempty set of point indices of one space.
#[derive(Clone, Debug)]
pub struct SubsetRef<'a> {
    space: &'a FiniteMetricSpace,
    indices: Vec<usize>,
}

impl<'a> SubsetRef<'a> {
    pub fn new(space: &'a FiniteMetricSpace, indices: Vec<usize>) -> Result<Self, MetricError> {
        if indices.is_empty() {
            return Err(MetricError::EmptySubset);
        }
        let mut seen = HashSet::with_capacity(indices.len());
        for &i in &indices {
            if i >= space.len() {
                return Err(MetricError::IndexOutOfRange {
                    index: i,
                    len: space.len(),
                });
            }
            if !seen.insert(i) {
                return Err(MetricError::DuplicateIndex(i));
            }
        }
        Ok(SubsetRef { space, indices })
    }

    /// The subset containing every point.
    pub fn whole(space: &'a FiniteMetricSpace) -> Self {
        SubsetRef {
            space,
            indices: (0..space.len()).collect(),
        }
    }

    pub fn space(&self) -> &'a FiniteMetricSpace {
        self.space
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// `inf { |p a| : a in self }`
    pub fn distance_to(&self, p: usize) -> Rational {
        self.indices
            .iter()
            .map(|&a| *self.space.dist(p, a))
            .min()
            .expect("subsets are nonempty")
    }
}

/// `max_{a in A} min_{b in B} |ab|`
pub fn directed_hausdorff(a: &SubsetRef<'_>, b: &SubsetRef<'_>) -> Result<Rational, MetricError> {
    if !std::ptr::eq(a.space, b.space) {
        return Err(MetricError::DifferentAmbientSpaces);
    }
    Ok(a.indices
        .iter()
        .map(|&p| b.distance_to(p))
        .max()
        .expect("subsets are nonempty"))
}

/// Hausdorff distance between two subsets of the same space. For finite sets the
/// infimum over radii is attained, so this is the symmetric max-min.
pub fn hausdorff(a: &SubsetRef<'_>, b: &SubsetRef<'_>) -> Result<Rational, MetricError> {
    let ab = directed_hausdorff(a, b)?;
    let ba = directed_hausdorff(b, a)?;
    Ok(ab.max(ba))
}

/// Every point of `a` lies in the open `r`-neighborhood of `b`.
pub fn within_open_neighborhood(
    a: &SubsetRef<'_>,
    b: &SubsetRef<'_>,
    r: &Rational,
) -> Result<bool, MetricError> {
    Ok(&directed_hausdorff(a, b)? < r)
}
