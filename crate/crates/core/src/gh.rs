//! Exact Gromov–Hausdorff distance between finite metric spaces.
//!
//! The distance is half the least distortion of a correspondence. Every
//! correspondence contains one of the form `graph(f) ∪ graph(g)⁻¹` with
//! `f: X -> Y`, `g: Y -> X`, whose distortion is no larger, so the search runs over
//! such pairs of maps (`m^n · n^m` leaves instead of `2^(nm)`).
//!
//! The search is a depth-first branch and bound. Points of both spaces are
//! assigned images in order of decreasing eccentricity; candidate images are tried
//! closest-eccentricity first. A node is pruned when its bound reaches the
//! incumbent. The bound is the larger of the partial distortion and, for every
//! unassigned point, the cheapest increase any of its candidates would cause
//! (forward checking). Distances are rescaled to a common denominator so that the
//! inner loop runs on `i64`.
//!
//! Among optimal pairs of maps the solver returns the first one in its fixed
//! search order. The parallel mode splits the first decision across rayon workers
//! and reproduces that same witness.

use std::sync::atomic::{AtomicI64, AtomicU64, AtomicUsize, Ordering};

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use thiserror::Error;

use crate::correspondence::{distortion, enumerate_correspondences, Correspondence, CorrespondenceError};
use crate::rational::{rat, Rational};
use crate::space::{FiniteMetricSpace, Mode};

/// Default cap on the number of points on either side.
pub const DEFAULT_CAP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GhError {
    #[error("spaces of {n} and {m} points exceed the exact-search cap of {cap}")]
    SizeLimitExceeded { n: usize, m: usize, cap: usize },
    #[error("exact search needs strict metric spaces")]
    NotStrict,
    #[error("distances cannot be brought to a common 64-bit denominator")]
    Overflow,
    #[error(transparent)]
    Correspondence(#[from] CorrespondenceError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Parallelism {
    Sequential,
    Parallel,
    /// Parallel once `n·m` reaches 25.
    #[default]
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GhOptions {
    pub cap: usize,
    pub parallelism: Parallelism,
}

impl Default for GhOptions {
    fn default() -> Self {
        GhOptions {
            cap: DEFAULT_CAP,
            parallelism: Parallelism::Auto,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhResult {
    /// `d_GH(X, Y)`
    pub value: Rational,
    /// A correspondence with `½·dis = value`.
    pub witness: Correspondence,
    /// `½|diam X - diam Y|`
    pub lower_bound: Rational,
    /// Search nodes visited. Deterministic only for sequential runs.
    pub nodes_explored: u64,
}

/// `½|diam X − diam Y|`, a lower bound for `d_GH`.
pub fn gh_lower_bound(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Rational {
    (x.diameter() - y.diameter()).abs() / 2
}

/// `½·dis R`, an upper bound for `d_GH`.
pub fn gh_upper_from(
    r: &Correspondence,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Result<Rational, CorrespondenceError> {
    Ok(distortion(r, x, y)? / 2)
}

/// `½·min dis R` over every correspondence, by full enumeration (`n·m ≤ 20`).
pub fn gh_by_enumeration(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Result<(Rational, Correspondence), CorrespondenceError> {
    let mut best: Option<(Rational, Correspondence)> = None;
    for r in enumerate_correspondences(x.len(), y.len())? {
        let d = distortion(&r, x, y)?;
        if best.as_ref().is_none_or(|(b, _)| d < *b) {
            best = Some((d, r));
        }
    }
    let (d, r) = best.expect("at least the full relation is enumerated");
    Ok((d / 2, r))
}

pub fn gh_exact(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<GhResult, GhError> {
    gh_exact_with(x, y, &GhOptions::default())
}

pub fn gh_exact_with(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
    options: &GhOptions,
) -> Result<GhResult, GhError> {
    let (n, m) = (x.len(), y.len());
    if n > options.cap || m > options.cap {
        return Err(GhError::SizeLimitExceeded {
            n,
            m,
            cap: options.cap,
        });
    }
    if x.mode() != Mode::Strict || y.mode() != Mode::Strict {
        return Err(GhError::NotStrict);
    }

    let (dx, dy, denom) = common_scale(x, y)?;
    let search = Search::new(n, m, dx, dy);
    let parallel = match options.parallelism {
        Parallelism::Sequential => false,
        Parallelism::Parallel => true,
        Parallelism::Auto => n * m >= 25,
    };
    let (best, assignment, nodes) = if parallel {
        search.run_parallel()
    } else {
        search.run_sequential()
    };

    let mut f = vec![0; n];
    let mut g = vec![0; m];
    for (pos, &value) in assignment.iter().enumerate() {
        match search.order[pos] {
            Var::X(i) => f[i] = value,
            Var::Y(j) => g[j] = value,
        }
    }
    let witness = Correspondence::from_maps(&f, &g)?;
    let value = rat(best as i128, 2 * denom);
    debug_assert_eq!(distortion(&witness, x, y).ok(), Some(value * 2));
    Ok(GhResult {
        value,
        witness,
        lower_bound: gh_lower_bound(x, y),
        nodes_explored: nodes,
    })
}

/// Both matrices multiplied by the lcm of all denominators.
fn common_scale(
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Result<(Vec<i64>, Vec<i64>, i128), GhError> {
    let entries = || (0..x.len()).flat_map(|i| x.row(i).iter()).chain((0..y.len()).flat_map(|j| y.row(j).iter()));
    let mut denom: i128 = 1;
    for e in entries() {
        denom = denom.lcm(e.denom());
        if denom > i64::MAX as i128 {
            return Err(GhError::Overflow);
        }
    }
    let scale = |s: &FiniteMetricSpace| -> Result<Vec<i64>, GhError> {
        let mut out = Vec::with_capacity(s.len() * s.len());
        for i in 0..s.len() {
            for e in s.row(i) {
                let v = e
                    .numer()
                    .checked_mul(denom / e.denom())
                    .and_then(|v| v.to_i64())
                    .filter(|v| *v < i64::MAX / 4)
                    .ok_or(GhError::Overflow)?;
                out.push(v);
            }
        }
        Ok(out)
    };
    Ok((scale(x)?, scale(y)?, denom))
}

#[derive(Clone, Copy, Debug)]
enum Var {
    /// a point of X choosing its image in Y
    X(usize),
    /// a point of Y choosing its image in X
    Y(usize),
}

struct Search {
    n: usize,
    m: usize,
    dx: Vec<i64>,
    dy: Vec<i64>,
    order: Vec<Var>,
    candidates: Vec<Vec<usize>>,
    width: usize,
    lower: i64,
    initial: i64,
}

struct Worker<'a> {
    search: &'a Search,
    /// increase table per depth: `tables[d][p * width + c]`
    tables: Vec<Vec<i64>>,
    assignment: Vec<usize>,
    best: i64,
    best_assignment: Vec<usize>,
    nodes: u64,
    shared: &'a AtomicI64,
    stop: &'a AtomicUsize,
    branch: usize,
}

impl Search {
    fn new(n: usize, m: usize, dx: Vec<i64>, dy: Vec<i64>) -> Self {
        let ecc_x: Vec<i64> = (0..n).map(|i| *dx[i * n..(i + 1) * n].iter().max().unwrap()).collect();
        let ecc_y: Vec<i64> = (0..m).map(|j| *dy[j * m..(j + 1) * m].iter().max().unwrap()).collect();

        let mut order: Vec<(i64, usize, Var)> = (0..n)
            .map(|i| (ecc_x[i], 0, Var::X(i)))
            .chain((0..m).map(|j| (ecc_y[j], 1, Var::Y(j))))
            .collect();
        order.sort_by(|a, b| {
            b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then_with(|| index(a.2).cmp(&index(b.2)))
        });
        let order: Vec<Var> = order.into_iter().map(|(_, _, v)| v).collect();

        let candidates = order
            .iter()
            .map(|&v| {
                let (own, other): (i64, &[i64]) = match v {
                    Var::X(i) => (ecc_x[i], &ecc_y),
                    Var::Y(j) => (ecc_y[j], &ecc_x),
                };
                let mut c: Vec<usize> = (0..other.len()).collect();
                c.sort_by_key(|&k| ((own - other[k]).abs(), k));
                c
            })
            .collect();

        let diam_x = dx.iter().copied().max().unwrap();
        let diam_y = dy.iter().copied().max().unwrap();
        Search {
            n,
            m,
            dx,
            dy,
            order,
            candidates,
            width: n.max(m),
            lower: (diam_x - diam_y).abs(),
            // every pair of maps is a sub-relation of X×Y, whose distortion is max diam
            initial: diam_x.max(diam_y) + 1,
        }
    }

    fn pair(&self, pos: usize, value: usize) -> (usize, usize) {
        match self.order[pos] {
            Var::X(i) => (i, value),
            Var::Y(j) => (value, j),
        }
    }

    #[inline]
    fn gap(&self, a: (usize, usize), b: (usize, usize)) -> i64 {
        (self.dx[a.0 * self.n + b.0] - self.dy[a.1 * self.m + b.1]).abs()
    }

    fn vars(&self) -> usize {
        self.order.len()
    }

    fn worker<'a>(&'a self, shared: &'a AtomicI64, stop: &'a AtomicUsize, branch: usize) -> Worker<'a> {
        Worker {
            search: self,
            tables: vec![vec![0; self.vars() * self.width]; self.vars() + 1],
            assignment: Vec::with_capacity(self.vars()),
            best: self.initial,
            best_assignment: Vec::new(),
            nodes: 0,
            shared,
            stop,
            branch,
        }
    }

    fn run_sequential(&self) -> (i64, Vec<usize>, u64) {
        let shared = AtomicI64::new(self.initial);
        let stop = AtomicUsize::new(usize::MAX);
        let mut w = self.worker(&shared, &stop, 0);
        w.descend(0, 0);
        (w.best, w.best_assignment, w.nodes)
    }

    fn run_parallel(&self) -> (i64, Vec<usize>, u64) {
        let shared = AtomicI64::new(self.initial);
        let stop = AtomicUsize::new(usize::MAX);
        let nodes = AtomicU64::new(1);
        let results: Vec<(i64, Vec<usize>)> = (0..self.candidates[0].len())
            .into_par_iter()
            .map(|b| {
                let mut w = self.worker(&shared, &stop, b);
                let value = self.candidates[0][b];
                w.branch_root(value);
                nodes.fetch_add(w.nodes, Ordering::Relaxed);
                (w.best, w.best_assignment)
            })
            .collect();
        // first branch attaining the minimum, which is what the sequential order finds
        let (best, assignment) = results
            .into_iter()
            .min_by_key(|(b, _)| *b)
            .expect("at least one branch");
        (best, assignment, nodes.into_inner())
    }
}

fn index(v: Var) -> usize {
    match v {
        Var::X(i) | Var::Y(i) => i,
    }
}

impl Worker<'_> {
    fn branch_root(&mut self, value: usize) {
        self.nodes += 1;
        let inc = self.tables[0][value];
        self.assign(0, value, 0, inc);
    }

    fn cutoff(&self, bound: i64) -> bool {
        bound >= self.best || bound > self.shared.load(Ordering::Relaxed)
    }

    /// Returns true when the search can stop entirely.
    fn descend(&mut self, depth: usize, partial: i64) -> bool {
        self.nodes += 1;
        if self.stop.load(Ordering::Relaxed) < self.branch {
            return true;
        }
        let s = self.search;
        if depth == s.vars() {
            if partial < self.best {
                self.best = partial;
                self.best_assignment = self.assignment.clone();
                self.shared.fetch_min(partial, Ordering::Relaxed);
                if partial <= s.lower {
                    self.stop.fetch_min(self.branch, Ordering::Relaxed);
                    return true;
                }
            }
            return false;
        }

        let table = &self.tables[depth];
        let mut bound = partial;
        for pos in depth..s.vars() {
            let cheapest = s.candidates[pos]
                .iter()
                .map(|&c| table[pos * s.width + c])
                .min()
                .unwrap();
            bound = bound.max(cheapest);
        }
        if self.cutoff(bound) {
            return false;
        }

        for ci in 0..s.candidates[depth].len() {
            let value = s.candidates[depth][ci];
            let inc = self.tables[depth][depth * s.width + value];
            if self.assign(depth, value, partial, inc) {
                return true;
            }
        }
        false
    }

    fn assign(&mut self, depth: usize, value: usize, partial: i64, inc: i64) -> bool {
        let s = self.search;
        let next = partial.max(inc);
        if self.cutoff(next) {
            return false;
        }
        let pair = s.pair(depth, value);
        let (head, tail) = self.tables.split_at_mut(depth + 1);
        let (cur, nxt) = (&head[depth], &mut tail[0]);
        for pos in (depth + 1)..s.vars() {
            for &c in &s.candidates[pos] {
                let k = pos * s.width + c;
                nxt[k] = cur[k].max(s.gap(pair, s.pair(pos, c)));
            }
        }
        self.assignment.push(value);
        let done = self.descend(depth + 1, next);
        self.assignment.pop();
        done
    }
}
