//! Chains of finite spaces and their threads, the function `d(λ) = d_GH(X, λX)`,
//! iteration toward the center of the bounded cloud, and stabilizers of finite data.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::correspondence::{distortion, Correspondence, CorrespondenceError};
use crate::gh::{gh_exact, gh_lower_bound, GhError};
use crate::hedgehog::HedgehogSpec;
use crate::rational::{abs_diff, int, is_positive, pow, Rational};
use crate::space::{FiniteMetricSpace, MetricError, Mode};

/// Chains whose thread count exceeds this are refused.
pub const THREAD_CAP: u128 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CloudError {
    #[error("a chain needs at least one space")]
    EmptyChain,
    #[error("link {0} does not connect space {0} to space {next}", next = .0 + 1)]
    BrokenLink(usize),
    #[error("link {link} has distortion {distortion}, budget is below {budget}")]
    BudgetExceeded {
        link: usize,
        distortion: Rational,
        budget: Rational,
    },
    #[error("{count} threads exceed the cap of {cap}")]
    TooManyThreads { count: u128, cap: u128 },
    #[error("lambda must lie in {0}, got {1}")]
    LambdaOutOfRange(&'static str, Rational),
    #[error("layer {0} out of range")]
    LayerOutOfRange(usize),
    #[error(transparent)]
    Gh(#[from] GhError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Correspondence(#[from] CorrespondenceError),
}

/// Spaces `X₁..X_k` with correspondences `Rₙ` between consecutive ones. Layers and
/// links are numbered from 1 in messages and from 0 in indices.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreadChain {
    spaces: Vec<FiniteMetricSpace>,
    links: Vec<Correspondence>,
    budget_checked: bool,
}

impl ThreadChain {
    pub fn new(spaces: Vec<FiniteMetricSpace>, links: Vec<Correspondence>) -> Result<Self, CloudError> {
        if spaces.is_empty() {
            return Err(CloudError::EmptyChain);
        }
        if links.len() + 1 != spaces.len() {
            return Err(CloudError::BrokenLink(links.len().min(spaces.len()) + 1));
        }
        for (n, r) in links.iter().enumerate() {
            if r.check_spaces(&spaces[n], &spaces[n + 1]).is_err() {
                return Err(CloudError::BrokenLink(n + 1));
            }
        }
        Ok(ThreadChain {
            spaces,
            links,
            budget_checked: false,
        })
    }

    /// Also requires `dis Rₙ < 1/2ⁿ` for every link.
    pub fn with_budget(spaces: Vec<FiniteMetricSpace>, links: Vec<Correspondence>) -> Result<Self, CloudError> {
        let mut chain = Self::new(spaces, links)?;
        for n in 1..=chain.links.len() {
            let dis = chain.link_distortion(n)?;
            let budget = link_budget(n);
            if dis >= budget {
                return Err(CloudError::BudgetExceeded {
                    link: n,
                    distortion: dis,
                    budget,
                });
            }
        }
        chain.budget_checked = true;
        Ok(chain)
    }

    pub fn spaces(&self) -> &[FiniteMetricSpace] {
        &self.spaces
    }

    pub fn links(&self) -> &[Correspondence] {
        &self.links
    }

    pub fn depth(&self) -> usize {
        self.spaces.len()
    }

    pub fn budget_checked(&self) -> bool {
        self.budget_checked
    }

    /// `dis Rₙ`, 1-based.
    pub fn link_distortion(&self, n: usize) -> Result<Rational, CloudError> {
        if n == 0 || n > self.links.len() {
            return Err(CloudError::LayerOutOfRange(n));
        }
        Ok(distortion(&self.links[n - 1], &self.spaces[n - 1], &self.spaces[n])?)
    }

    /// Number of threads, saturating.
    pub fn thread_count(&self) -> u128 {
        let last = self.spaces.len() - 1;
        let mut counts = vec![1u128; self.spaces[last].len()];
        for n in (0..last).rev() {
            let mut next = vec![0u128; self.spaces[n].len()];
            for &(x, y) in self.links[n].pairs() {
                next[x] = next[x].saturating_add(counts[y]);
            }
            counts = next;
        }
        counts.iter().fold(0u128, |a, &c| a.saturating_add(c))
    }

    fn check_thread_cap(&self, cap: u128) -> Result<u128, CloudError> {
        let count = self.thread_count();
        if count > cap {
            return Err(CloudError::TooManyThreads { count, cap });
        }
        Ok(count)
    }

    /// `R_n ∘ … ∘ R_{m−1}` between layers `n < m`, 1-based: the pairs of points
    /// shared by some thread.
    pub fn relay(&self, n: usize, m: usize) -> Result<Correspondence, CloudError> {
        if n == 0 || m > self.depth() || n > m {
            return Err(CloudError::LayerOutOfRange(n.max(m)));
        }
        let mut r = Correspondence::identity(self.spaces[n - 1].len());
        for link in &self.links[n - 1..m - 1] {
            r = r.compose(link)?;
        }
        Ok(r)
    }

    /// Every thread `x₁, …, x_k`, in lexicographic order.
    pub fn threads(&self, cap: u128) -> Result<Vec<Vec<usize>>, CloudError> {
        self.check_thread_cap(cap)?;
        let images: Vec<Vec<Vec<usize>>> = self
            .links
            .iter()
            .map(|r| (0..r.left_len()).map(|x| r.image(x)).collect())
            .collect();
        let mut out = Vec::new();
        let mut path = Vec::with_capacity(self.depth());
        fn walk(images: &[Vec<Vec<usize>>], path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            let layer = path.len() - 1;
            if layer == images.len() {
                out.push(path.clone());
                return;
            }
            for &y in &images[layer][path[layer]] {
                path.push(y);
                walk(images, path, out);
                path.pop();
            }
        }
        for x in 0..self.spaces[0].len() {
            path.push(x);
            walk(&images, &mut path, &mut out);
            path.pop();
        }
        Ok(out)
    }

    /// The threads with pseudodistance `|xₙ x′ₙ|` at layer `n` (1-based).
    pub fn layer_space(&self, layer: usize, cap: u128) -> Result<FiniteMetricSpace, CloudError> {
        if layer == 0 || layer > self.depth() {
            return Err(CloudError::LayerOutOfRange(layer));
        }
        let threads = self.threads(cap)?;
        let x = &self.spaces[layer - 1];
        let labels = threads
            .iter()
            .map(|t| t.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("-"))
            .collect();
        let matrix = threads
            .iter()
            .map(|s| threads.iter().map(|t| *x.dist(s[layer - 1], t[layer - 1])).collect())
            .collect();
        Ok(FiniteMetricSpace::validate(labels, matrix, Mode::Pseudo)?)
    }
}

/// `1/2ⁿ`, the allowed distortion of link `n`.
pub fn link_budget(n: usize) -> Rational {
    Rational::new(1, 1i128 << n)
}

/// The chain `λX, λ²X, …, λ^depth X` linked by the identity bijections.
pub fn contraction_chain(x: &FiniteMetricSpace, lambda: &Rational, depth: usize) -> Result<ThreadChain, CloudError> {
    if depth == 0 {
        return Err(CloudError::EmptyChain);
    }
    if !is_positive(lambda) {
        return Err(CloudError::LambdaOutOfRange("(0, inf)", *lambda));
    }
    let spaces = (1..=depth)
        .map(|n| x.scale(&pow(lambda, n as u32)))
        .collect::<Result<Vec<_>, _>>()?;
    let links = vec![Correspondence::identity(x.len()); depth - 1];
    ThreadChain::new(spaces, links)
}

/// The finite-depth limit of a chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreadLimit {
    /// Last-layer points up to zero distance.
    pub approx: FiniteMetricSpace,
    /// Class in `approx` of every point of the last space.
    pub class_of: Vec<usize>,
    /// `R′ₙ`: a class related to every `xₙ` lying on a thread through it.
    pub to_layers: Vec<Correspondence>,
    /// `½ dis R′ₙ` for each layer.
    pub certificates: Vec<Rational>,
    pub thread_count: u128,
}

/// Threads with pseudodistance `|x_k x′_k|`, quotiented by zero distance.
pub fn thread_limit(chain: &ThreadChain) -> Result<ThreadLimit, CloudError> {
    let thread_count = chain.check_thread_cap(THREAD_CAP)?;
    let k = chain.depth();
    let last = &chain.spaces[k - 1];

    let mut reps: Vec<usize> = Vec::new();
    let mut class_of = Vec::with_capacity(last.len());
    for p in 0..last.len() {
        match reps.iter().position(|&r| last.dist(r, p).is_zero()) {
            Some(c) => class_of.push(c),
            None => {
                class_of.push(reps.len());
                reps.push(p);
            }
        }
    }
    let labels = reps.iter().map(|&r| last.label(r).to_string()).collect();
    let matrix = reps
        .iter()
        .map(|&a| reps.iter().map(|&b| *last.dist(a, b)).collect())
        .collect();
    let approx = FiniteMetricSpace::validate(labels, matrix, Mode::Strict)?;

    // reach[x] for the current layer: last-layer classes on threads through x
    let mut reach: Vec<BTreeSet<usize>> = class_of.iter().map(|&c| BTreeSet::from([c])).collect();
    let mut to_layers = vec![None; k];
    for n in (0..k).rev() {
        if n + 1 < k {
            let link = &chain.links[n];
            let mut next = vec![BTreeSet::new(); chain.spaces[n].len()];
            for &(x, y) in link.pairs() {
                next[x].extend(reach[y].iter().copied());
            }
            reach = next;
        }
        let pairs = reach
            .iter()
            .enumerate()
            .flat_map(|(x, cs)| cs.iter().map(move |&c| (c, x)));
        to_layers[n] = Some(Correspondence::new(approx.len(), chain.spaces[n].len(), pairs)?);
    }
    let to_layers: Vec<Correspondence> = to_layers.into_iter().map(|r| r.expect("filled")).collect();
    let certificates = to_layers
        .par_iter()
        .zip(chain.spaces.par_iter())
        .map(|(r, x)| distortion(r, &approx, x).map(|d| d / 2))
        .collect::<Result<Vec<_>, _>>()?;

    Ok(ThreadLimit {
        approx,
        class_of,
        to_layers,
        certificates,
        thread_count,
    })
}

/// `d(λ) = d_GH(X, λX)` at the sampled `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaProbe {
    pub base: FiniteMetricSpace,
    pub samples: Vec<(Rational, Rational)>,
}

impl LambdaProbe {
    pub fn get(&self, lambda: &Rational) -> Option<Rational> {
        self.samples.iter().find(|(l, _)| l == lambda).map(|(_, d)| *d)
    }

    /// `½|λ − 1|·diam X`
    pub fn closed_form(&self, lambda: &Rational) -> Rational {
        abs_diff(lambda, &Rational::one()) * self.base.diameter() / 2
    }
}

pub fn d_lambda(x: &FiniteMetricSpace, lambda: &Rational) -> Result<Rational, CloudError> {
    if !is_positive(lambda) {
        return Err(CloudError::LambdaOutOfRange("(0, inf)", *lambda));
    }
    Ok(gh_exact(x, &x.scale(lambda)?)?.value)
}

/// Repeated `λ` are evaluated once.
pub fn d_lambda_probe(x: &FiniteMetricSpace, lambdas: &[Rational]) -> Result<LambdaProbe, CloudError> {
    let mut distinct: Vec<Rational> = Vec::new();
    for l in lambdas {
        if !distinct.contains(l) {
            distinct.push(*l);
        }
    }
    let samples = distinct
        .par_iter()
        .map(|l| d_lambda(x, l).map(|d| (*l, d)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LambdaProbe {
        base: x.clone(),
        samples,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeometricRow {
    pub n: u32,
    /// `d(λⁿ)`
    pub value: Rational,
    /// `(1 − λⁿ)/(1 − λ)·d(λ)`
    pub bound: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeometricBoundReport {
    pub lambda: Rational,
    pub d_lambda: Rational,
    /// `d(λ)/(1 − λ)`, strictly above every bound when `d(λ) > 0`.
    pub limit: Rational,
    pub rows: Vec<GeometricRow>,
}

impl GeometricBoundReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

/// `d(λⁿ) ≤ (1 − λⁿ)/(1 − λ)·d(λ) < d(λ)/(1 − λ)` for `n = 1..=nmax`.
pub fn geometric_bound_check(
    x: &FiniteMetricSpace,
    lambda: &Rational,
    nmax: u32,
) -> Result<GeometricBoundReport, CloudError> {
    let one = Rational::one();
    if !is_positive(lambda) || *lambda >= one {
        return Err(CloudError::LambdaOutOfRange("(0, 1)", *lambda));
    }
    let d = d_lambda(x, lambda)?;
    let limit = d / (one - lambda);
    let rows = (1..=nmax)
        .into_par_iter()
        .map(|n| {
            let ln = pow(lambda, n);
            let value = d_lambda(x, &ln)?;
            let bound = (one - ln) / (one - lambda) * d;
            let holds = value <= bound && (bound < limit || d.is_zero());
            Ok(GeometricRow { n, value, bound, holds })
        })
        .collect::<Result<Vec<_>, CloudError>>()?;
    Ok(GeometricBoundReport {
        lambda: *lambda,
        d_lambda: d,
        limit,
        rows,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CenterIterate {
    /// `λⁿX`
    pub space: FiniteMetricSpace,
    pub d_lambda: Rational,
    /// `λⁿ·d(λ)/(1 − λ)`, bounding `d_GH(X_m, X_n)` for every `m > n`.
    pub tail: Rational,
}

pub fn center_iterate(x: &FiniteMetricSpace, lambda: &Rational, n: u32) -> Result<CenterIterate, CloudError> {
    let one = Rational::one();
    if !is_positive(lambda) || *lambda >= one {
        return Err(CloudError::LambdaOutOfRange("(0, 1)", *lambda));
    }
    let d = d_lambda(x, lambda)?;
    let ln = pow(lambda, n);
    Ok(CenterIterate {
        space: x.scale(&ln)?,
        d_lambda: d,
        tail: ln * d / (one - lambda),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailRow {
    pub m: u32,
    pub n: u32,
    pub actual: Rational,
    pub tail: Rational,
}

/// `d_GH(X_m, X_n) ≤ λⁿ·d(λ)/(1 − λ)` for every `0 ≤ n < m ≤ nmax`; returns the
/// violating pairs (empty when the bound dominates).
pub fn center_tail_check(x: &FiniteMetricSpace, lambda: &Rational, nmax: u32) -> Result<Vec<TailRow>, CloudError> {
    let pairs: Vec<(u32, u32)> = (0..=nmax).flat_map(|n| (n + 1..=nmax).map(move |m| (m, n))).collect();
    let d = d_lambda(x, lambda)?;
    let one = Rational::one();
    let rows = pairs
        .par_iter()
        .map(|&(m, n)| {
            let xm = x.scale(&pow(lambda, m))?;
            let xn = x.scale(&pow(lambda, n))?;
            let actual = gh_exact(&xm, &xn)?.value;
            Ok(TailRow {
                m,
                n,
                actual,
                tail: pow(lambda, n) * d / (one - lambda),
            })
        })
        .collect::<Result<Vec<_>, CloudError>>()?;
    Ok(rows.into_iter().filter(|r| r.actual > r.tail).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerReport {
    /// Every `λ` tried: ratios of distances (or lengths), the samples and 1.
    pub candidates: Vec<Rational>,
    /// Candidates with `λX` isometric to `X`.
    pub stabilizer: Vec<Rational>,
    /// Samples with `d(λ) = 0`.
    pub zero_distance: Vec<Rational>,
    /// Samples with `d(λ) < ∞`: all of them, since finite spaces are bounded.
    pub finite_distance: Vec<Rational>,
}

fn candidate_set(values: &[Rational], samples: &[Rational]) -> Vec<Rational> {
    let mut c: BTreeSet<Rational> = samples.iter().filter(|l| is_positive(l)).copied().collect();
    c.insert(int(1));
    for a in values {
        for b in values {
            c.insert(a / b);
        }
    }
    c.into_iter().collect()
}

/// Only a ratio of two distances can carry the distance set onto itself, so those
/// (with the samples) are the candidates; each is tested by `d_GH(λX, X) = 0`.
pub fn stabilizer_space(x: &FiniteMetricSpace, samples: &[Rational]) -> Result<StabilizerReport, CloudError> {
    let values: Vec<Rational> = x.distance_values().into_iter().filter(|d| !d.is_zero()).collect();
    let candidates = candidate_set(&values, samples);
    let fixes = |l: &Rational| -> Result<bool, CloudError> {
        let y = x.scale(l)?;
        if gh_lower_bound(x, &y) > Rational::zero() {
            return Ok(false);
        }
        Ok(gh_exact(x, &y)?.value.is_zero())
    };
    let flags = candidates.par_iter().map(fixes).collect::<Result<Vec<_>, _>>()?;
    let stabilizer: Vec<Rational> = candidates.iter().zip(&flags).filter(|(_, &f)| f).map(|(l, _)| *l).collect();
    let zero_distance = samples.iter().filter(|l| stabilizer.contains(l)).copied().collect();
    Ok(StabilizerReport {
        candidates,
        stabilizer,
        zero_distance,
        finite_distance: samples.to_vec(),
    })
}

/// Tested by equality of the scaled needle multiset.
pub fn stabilizer_hedgehog(spec: &HedgehogSpec, samples: &[Rational]) -> StabilizerReport {
    let values: Vec<Rational> = spec.needles().map(|(l, _)| *l).collect();
    let candidates = candidate_set(&values, samples);
    let stabilizer: Vec<Rational> = candidates
        .iter()
        .filter(|l| spec.scale(l).is_ok_and(|s| &s == spec))
        .copied()
        .collect();
    let zero_distance = samples.iter().filter(|l| stabilizer.contains(l)).copied().collect();
    StabilizerReport {
        candidates,
        stabilizer,
        zero_distance,
        finite_distance: samples.to_vec(),
    }
}
