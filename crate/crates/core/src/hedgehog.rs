//! Discrete hedgehogs: a center `0` plus needle endpoints, where the endpoint of a
//! needle of length `x` sits at `x` from the center and distinct endpoints are at
//! `x₁ + x₂` from each other (the path runs through the center).
//!
//! Also here: the bucket correspondence between hedgehogs whose needle counts
//! agree on every interval `((n−1)ε, nε]`, the center-location checks for two
//! hedgehogs sitting close together in a glued space, and the pair of needle
//! families at Gromov–Hausdorff distance zero that are not isometric.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::correspondence::{Correspondence, CorrespondenceError};
use crate::gluing::{glue_pair, GluedSpace, GluingError};
use crate::rational::{abs_diff, int, is_positive, rat, Rational};
use crate::space::{directed_hausdorff, hausdorff, FiniteMetricSpace, MetricError, Mode, SubsetRef};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HedgehogError {
    #[error("a hedgehog needs at least one needle")]
    EmptySpec,
    #[error("needle length must be positive, got {0}")]
    NonpositiveLength(Rational),
    #[error("needle {0} has multiplicity zero")]
    ZeroMultiplicity(Rational),
    #[error("{0} must be positive")]
    NonpositiveParameter(&'static str),
    #[error("bucket {bucket}: {left} points on the left, {right} on the right")]
    BucketMismatch { bucket: i128, left: usize, right: usize },
    #[error("premise violated: {0}")]
    PremiseViolated(Premise),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error(transparent)]
    Gluing(#[from] GluingError),
    #[error(transparent)]
    Correspondence(#[from] CorrespondenceError),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Which hypothesis of a center-location check failed, with its witness.
#[derive(Debug, Clone, PartialEq)]
pub enum Premise {
    /// Fewer than two needles of length at least `2M`.
    FarNeedles { threshold: Rational, found: usize },
    /// A point of the first hedgehog is not within `radius` of the second.
    Neighborhood {
        point: usize,
        distance: Rational,
        radius: Rational,
    },
    /// The centers are not within `radius` of each other.
    CenterGap { distance: Rational, radius: Rational },
}

impl fmt::Display for Premise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Premise::FarNeedles { threshold, found } => {
                write!(f, "need two needles of length >= {threshold}, found {found}")
            }
            Premise::Neighborhood {
                point,
                distance,
                radius,
            } => write!(f, "point {point} is at {distance} from the other hedgehog, not below {radius}"),
            Premise::CenterGap { distance, radius } => {
                write!(f, "centers are {distance} apart, not below {radius}")
            }
        }
    }
}

/// Needle lengths with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HedgehogSpec {
    needles: BTreeMap<Rational, u32>,
}

impl HedgehogSpec {
    /// Equal lengths listed more than once are merged by adding multiplicities.
    pub fn new(needles: impl IntoIterator<Item = (Rational, u32)>) -> Result<Self, HedgehogError> {
        let mut map = BTreeMap::new();
        for (len, mult) in needles {
            if !is_positive(&len) {
                return Err(HedgehogError::NonpositiveLength(len));
            }
            if mult == 0 {
                return Err(HedgehogError::ZeroMultiplicity(len));
            }
            *map.entry(len).or_insert(0) += mult;
        }
        if map.is_empty() {
            return Err(HedgehogError::EmptySpec);
        }
        Ok(HedgehogSpec { needles: map })
    }

    /// One needle per listed length (repeats add multiplicity).
    pub fn from_lengths(lengths: impl IntoIterator<Item = Rational>) -> Result<Self, HedgehogError> {
        Self::new(lengths.into_iter().map(|l| (l, 1)))
    }

    /// `(length, multiplicity)`, ascending by length.
    pub fn needles(&self) -> impl Iterator<Item = (&Rational, u32)> {
        self.needles.iter().map(|(l, &m)| (l, m))
    }

    /// Number of distinct lengths.
    pub fn distinct_lengths(&self) -> usize {
        self.needles.len()
    }

    /// `1 + Σ multiplicities`
    pub fn point_count(&self) -> usize {
        1 + self.needles.values().map(|&m| m as usize).sum::<usize>()
    }

    /// Needle length of every non-center point, in compiled order.
    pub fn expanded_lengths(&self) -> Vec<Rational> {
        self.needles
            .iter()
            .flat_map(|(l, &m)| std::iter::repeat_n(*l, m as usize))
            .collect()
    }

    pub fn max_length(&self) -> Rational {
        *self.needles.keys().next_back().expect("specs are nonempty")
    }

    pub fn min_length(&self) -> Rational {
        *self.needles.keys().next().expect("specs are nonempty")
    }

    /// The hedgehog over `λ·lengths`, which is the compiled hedgehog scaled by `λ`.
    pub fn scale(&self, lambda: &Rational) -> Result<Self, HedgehogError> {
        if !is_positive(lambda) {
            return Err(HedgehogError::NonpositiveParameter("scale factor"));
        }
        Ok(HedgehogSpec {
            needles: self.needles.iter().map(|(l, &m)| (l * lambda, m)).collect(),
        })
    }
}

/// Length of carrier point `i` of a compiled hedgehog (0 for the center).
fn length_of(lengths: &[Rational], i: usize) -> Rational {
    if i == 0 {
        Rational::zero()
    } else {
        lengths[i - 1]
    }
}

/// Point 0 is the center (label `0`); then every needle copy ascending by length,
/// labeled `length_copy`.
pub fn compile_hedgehog(spec: &HedgehogSpec) -> FiniteMetricSpace {
    let mut labels = vec!["0".to_string()];
    for (len, mult) in spec.needles() {
        for copy in 0..mult {
            labels.push(format!("{len}_{copy}"));
        }
    }
    let lengths = spec.expanded_lengths();
    FiniteMetricSpace::from_fn_unchecked(labels, Mode::Strict, |i, j| {
        length_of(&lengths, i) + length_of(&lengths, j)
    })
}

/// Hedgehogs are isometric exactly when their needle multisets agree.
pub fn hedgehog_isometric(a: &HedgehogSpec, b: &HedgehogSpec) -> bool {
    a == b
}

/// Whether `λ·H` is isometric to `H`, i.e. `λ·lengths = lengths` as multisets.
pub fn hedgehog_scale_isometry_check(spec: &HedgehogSpec, lambda: &Rational) -> Result<bool, HedgehogError> {
    Ok(hedgehog_isometric(&spec.scale(lambda)?, spec))
}

/// `n` with `x ∈ ((n−1)ε, nε]`.
pub fn bucket_index(x: &Rational, eps: &Rational) -> i128 {
    (x / eps).ceil().to_integer()
}

/// Centers matched to centers, and within every bucket `((n−1)ε, nε]` the needle
/// points of both sides paired off in ascending order of length. Requires equal
/// counts per bucket; the result then has distortion at most `2ε`.
pub fn bucket_correspondence(
    a: &HedgehogSpec,
    b: &HedgehogSpec,
    eps: &Rational,
) -> Result<Correspondence, HedgehogError> {
    if !is_positive(eps) {
        return Err(HedgehogError::NonpositiveParameter("epsilon"));
    }
    let buckets = |spec: &HedgehogSpec| {
        let mut map: BTreeMap<i128, Vec<usize>> = BTreeMap::new();
        for (i, len) in spec.expanded_lengths().iter().enumerate() {
            map.entry(bucket_index(len, eps)).or_default().push(i + 1);
        }
        map
    };
    let (ba, bb) = (buckets(a), buckets(b));
    let mut keys: Vec<i128> = ba.keys().chain(bb.keys()).copied().collect();
    keys.sort_unstable();
    keys.dedup();

    let mut pairs = vec![(0, 0)];
    for k in keys {
        let left = ba.get(&k).map_or(&[][..], |v| v.as_slice());
        let right = bb.get(&k).map_or(&[][..], |v| v.as_slice());
        if left.len() != right.len() {
            return Err(HedgehogError::BucketMismatch {
                bucket: k,
                left: left.len(),
                right: right.len(),
            });
        }
        pairs.extend(left.iter().copied().zip(right.iter().copied()));
    }
    Ok(Correspondence::new(a.point_count(), b.point_count(), pairs)?)
}

/// A needle of the first hedgehog with length at least `5M` and the point of the
/// second hedgehog covering it.
#[derive(Clone, Debug, PartialEq)]
pub struct FarNeedle {
    /// Index in the first compiled hedgehog.
    pub point: usize,
    pub length: Rational,
    /// Closest non-center point of the second hedgehog (index in its compiled space).
    pub partner: Option<usize>,
    pub partner_distance: Option<Rational>,
    /// `|x − y|` between the two needle lengths; always below `5M`.
    pub length_gap: Option<Rational>,
    /// Distance from the point to the second center; at least `M` when the conclusion holds.
    pub distance_to_center: Rational,
    pub covered: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CenterLocationReport {
    pub radius: Rational,
    pub center_distance: Rational,
    pub centers_close: bool,
    pub far_needles: Vec<FarNeedle>,
    pub glued: GluedSpace,
}

impl CenterLocationReport {
    pub fn holds(&self) -> bool {
        self.centers_close && self.far_needles.iter().all(|f| f.covered)
    }
}

/// Glues the compiled hedgehogs along `R` and checks, given at least two needles of
/// `A` of length `≥ 2M` and `Â` inside the open `M`-neighborhood of `B̂`, that
/// the centers are closer than `4M` and that every needle of `A` with length `≥ 5M`
/// is within `M` of a needle point (not the center) of `B̂`.
pub fn check_center_location(
    a: &HedgehogSpec,
    b: &HedgehogSpec,
    r: &Correspondence,
    radius: &Rational,
) -> Result<CenterLocationReport, HedgehogError> {
    if !is_positive(radius) {
        return Err(HedgehogError::NonpositiveParameter("M"));
    }
    let lengths_a = a.expanded_lengths();
    let lengths_b = b.expanded_lengths();
    let threshold = radius * 2;
    let far = lengths_a.iter().filter(|l| **l >= threshold).count();
    if far < 2 {
        return Err(HedgehogError::PremiseViolated(Premise::FarNeedles {
            threshold,
            found: far,
        }));
    }

    let (ha, hb) = (compile_hedgehog(a), compile_hedgehog(b));
    let glued = glue_pair(&ha, &hb, r)?;
    let z = glued.carrier();
    let part_b = glued.part(1);
    for p in 0..ha.len() {
        let d = part_b.distance_to(glued.point(0, p));
        if &d >= radius {
            return Err(HedgehogError::PremiseViolated(Premise::Neighborhood {
                point: p,
                distance: d,
                radius: *radius,
            }));
        }
    }

    let (center_a, center_b) = (glued.point(0, 0), glued.point(1, 0));
    let center_distance = *z.dist(center_a, center_b);
    let far_threshold = radius * 5;
    let mut far_needles = Vec::new();
    for (i, len) in lengths_a.iter().enumerate() {
        if *len < far_threshold {
            continue;
        }
        let p = glued.point(0, i + 1);
        let partner = (1..hb.len())
            .map(|q| (z.dist(p, glued.point(1, q)), q))
            .min()
            .map(|(d, q)| (*d, q));
        let distance_to_center = *z.dist(p, center_b);
        let covered = partner.is_some_and(|(d, _)| &d < radius) && &distance_to_center >= radius;
        far_needles.push(FarNeedle {
            point: i + 1,
            length: *len,
            partner: partner.map(|(_, q)| q),
            partner_distance: partner.map(|(d, _)| d),
            length_gap: partner.map(|(_, q)| abs_diff(len, &lengths_b[q - 1])),
            distance_to_center,
            covered,
        });
    }

    Ok(CenterLocationReport {
        radius: *radius,
        center_distance,
        centers_close: center_distance < radius * 4,
        far_needles,
        glued,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProximityEntry {
    /// Index of a far point `t` in the first hedgehog.
    pub point: usize,
    /// Index of a point `t'` of the second hedgehog with `|t t'| < ε`.
    pub partner: usize,
    /// `|0 t| − |0' t'|`, which must lie in `(−2ε, 2ε)`.
    pub offset: Rational,
    pub holds: bool,
}

/// For hedgehogs glued with centers closer than `ε` and Hausdorff distance below `ε`:
/// every point `t` with `|0 t| ≥ 2ε` has a non-center partner `t'` within `ε`, and
/// `−2ε < |0 t| − |0' t'| < 2ε`.
pub fn needle_proximity_probe(
    a: &HedgehogSpec,
    b: &HedgehogSpec,
    r: &Correspondence,
    eps: &Rational,
) -> Result<Vec<ProximityEntry>, HedgehogError> {
    if !is_positive(eps) {
        return Err(HedgehogError::NonpositiveParameter("epsilon"));
    }
    let (ha, hb) = (compile_hedgehog(a), compile_hedgehog(b));
    let glued = glue_pair(&ha, &hb, r)?;
    let z = glued.carrier();
    let gap = hausdorff(&glued.part(0), &glued.part(1))?;
    if &gap >= eps {
        return Err(HedgehogError::PremiseViolated(Premise::Neighborhood {
            point: 0,
            distance: gap,
            radius: *eps,
        }));
    }
    let (c0, c1) = (glued.point(0, 0), glued.point(1, 0));
    if z.dist(c0, c1) >= eps {
        return Err(HedgehogError::PremiseViolated(Premise::CenterGap {
            distance: *z.dist(c0, c1),
            radius: *eps,
        }));
    }
    let lengths_b = b.expanded_lengths();
    let two_eps = eps * 2;
    let mut out = Vec::new();
    for (i, len) in a.expanded_lengths().iter().enumerate() {
        if *len < two_eps {
            continue;
        }
        let t = glued.point(0, i + 1);
        let (d, q) = (0..hb.len())
            .map(|q| (*z.dist(t, glued.point(1, q)), q))
            .min()
            .expect("hedgehogs are nonempty");
        debug_assert!(&d < eps);
        let offset = len - length_of(&lengths_b, q);
        let holds = q != 0 && offset > -two_eps && offset < two_eps;
        out.push(ProximityEntry {
            point: i + 1,
            partner: q,
            offset,
            holds,
        });
    }
    Ok(out)
}

/// Which needle a point lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Needle {
    Finite(usize),
    Infinite,
}

impl fmt::Display for Needle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Needle::Finite(n) => write!(f, "{n}"),
            Needle::Infinite => f.write_str("inf"),
        }
    }
}

/// A point at coordinate `coord` along a needle; different needles meet only at 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NeedlePoint {
    pub needle: Needle,
    pub coord: Rational,
}

impl NeedlePoint {
    pub fn new(needle: Needle, coord: Rational) -> Self {
        NeedlePoint { needle, coord }
    }

    /// Along the needle when shared, otherwise through the center.
    pub fn distance(&self, other: &NeedlePoint) -> Rational {
        if self.needle == other.needle {
            abs_diff(&self.coord, &other.coord)
        } else {
            self.coord + other.coord
        }
    }
}

impl fmt::Display for NeedlePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.needle, self.coord)
    }
}

/// The metric space on a list of distinct needle points with positive coordinates.
pub fn needle_space(points: &[NeedlePoint]) -> Result<FiniteMetricSpace, MetricError> {
    let labels = points.iter().map(|p| format!("{}:{}", p.needle, p.coord)).collect();
    let matrix = points
        .iter()
        .map(|p| points.iter().map(|q| if p == q { Rational::zero() } else { p.distance(q) }).collect())
        .collect();
    FiniteMetricSpace::validate(labels, matrix, Mode::Strict)
}

/// `N` finite needles and the `∞`-needle cut at depth `K`, with `K ≥ N ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NeedleFamilyConfig {
    needles: usize,
    depth: usize,
}

impl NeedleFamilyConfig {
    pub fn new(needles: usize, depth: usize) -> Result<Self, HedgehogError> {
        if needles < 2 || depth < needles {
            return Err(HedgehogError::InvalidConfig(format!(
                "need K >= N >= 2, got N = {needles}, K = {depth}"
            )));
        }
        Ok(NeedleFamilyConfig { needles, depth })
    }

    pub fn needles(&self) -> usize {
        self.needles
    }

    pub fn depth(&self) -> usize {
        self.depth
    }
}

/// `{1 + 1/k : 1 ≤ k ≤ n}`, ascending.
pub fn needle_coords(n: usize) -> Vec<Rational> {
    (1..=n).rev().map(|k| int(1) + rat(1, k as i128)).collect()
}

/// The two needle families: `X` has needles `1..=N+1` with `n` points on needle
/// `n`; `Y` has needles `1..=N` the same way plus the `∞`-needle carrying
/// `{1 + 1/k : k ≤ K} ∪ {1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct NeedleFamilies {
    pub x_points: Vec<NeedlePoint>,
    pub y_points: Vec<NeedlePoint>,
    pub x: FiniteMetricSpace,
    pub y: FiniteMetricSpace,
}

pub fn needle_families(cfg: &NeedleFamilyConfig) -> Result<NeedleFamilies, HedgehogError> {
    let family = |upto: usize| {
        (1..=upto).flat_map(|n| needle_coords(n).into_iter().map(move |c| NeedlePoint::new(Needle::Finite(n), c)))
    };
    let x_points: Vec<NeedlePoint> = family(cfg.needles + 1).collect();
    let mut y_points: Vec<NeedlePoint> = family(cfg.needles).collect();
    y_points.push(NeedlePoint::new(Needle::Infinite, Rational::one()));
    y_points.extend(needle_coords(cfg.depth).into_iter().map(|c| NeedlePoint::new(Needle::Infinite, c)));
    Ok(NeedleFamilies {
        x: needle_space(&x_points)?,
        y: needle_space(&y_points)?,
        x_points,
        y_points,
    })
}

/// `h_m`: needles below `m` stay, needles `n ≥ m` shift to `n + 1`, and the `∞`-needle
/// lands on needle `m`. Returns the image of every point of `Y`, in order.
pub fn needle_embedding(cfg: &NeedleFamilyConfig, m: usize) -> Result<Vec<NeedlePoint>, HedgehogError> {
    if m == 0 || m > cfg.needles {
        return Err(HedgehogError::IndexOutOfRange(m));
    }
    let spaces = needle_families(cfg)?;
    Ok(spaces
        .y_points
        .iter()
        .map(|p| {
            let needle = match p.needle {
                Needle::Finite(n) if n < m => Needle::Finite(n),
                Needle::Finite(n) => Needle::Finite(n + 1),
                Needle::Infinite => Needle::Finite(m),
            };
            NeedlePoint::new(needle, p.coord)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct NeedleFamilyReport {
    pub m: usize,
    /// `h_m` preserves every pairwise distance of `Y`.
    pub preserves_distances: bool,
    /// `d_H(X, h_m(Y))` inside the needle space holding both.
    pub hausdorff: Rational,
    /// A point attaining the Hausdorff distance and its nearest point in the other set.
    pub witness: (NeedlePoint, NeedlePoint),
}

pub fn needle_family_check(cfg: &NeedleFamilyConfig, m: usize) -> Result<NeedleFamilyReport, HedgehogError> {
    let spaces = needle_families(cfg)?;
    let image = needle_embedding(cfg, m)?;
    let preserves_distances = spaces.y_points.iter().enumerate().all(|(i, p)| {
        spaces.y_points[i + 1..]
            .iter()
            .enumerate()
            .all(|(off, q)| p.distance(q) == image[i].distance(&image[i + 1 + off]))
    });

    let mut ambient: Vec<NeedlePoint> = spaces.x_points.iter().chain(image.iter()).copied().collect();
    ambient.sort();
    ambient.dedup();
    let z = needle_space(&ambient)?;
    let locate = |p: &NeedlePoint| ambient.binary_search(p).expect("point is in the ambient set");
    let xs = SubsetRef::new(&z, spaces.x_points.iter().map(locate).collect())?;
    let hs = SubsetRef::new(&z, image.iter().map(locate).collect())?;
    let value = hausdorff(&xs, &hs)?;

    let witness = [(&xs, &hs), (&hs, &xs)]
        .into_iter()
        .find_map(|(from, to)| {
            from.indices().iter().find_map(|&p| {
                (to.distance_to(p) == value).then(|| {
                    let q = *to
                        .indices()
                        .iter()
                        .min_by_key(|&&q| (*z.dist(p, q), q))
                        .expect("nonempty");
                    (ambient[p], ambient[q])
                })
            })
        })
        .expect("the Hausdorff distance is attained");
    debug_assert_eq!(directed_hausdorff(&xs, &hs)?.max(directed_hausdorff(&hs, &xs)?), value);

    Ok(NeedleFamilyReport {
        m,
        preserves_distances,
        hausdorff: value,
        witness,
    })
}

/// `d_H` between the coordinate sets of needles `n` and `m` placed on one needle.
pub fn common_needle_hausdorff(n: usize, m: usize) -> Result<Rational, HedgehogError> {
    let mut coords = needle_coords(n.max(m));
    coords.sort();
    let points: Vec<NeedlePoint> = coords.iter().map(|&c| NeedlePoint::new(Needle::Finite(1), c)).collect();
    let z = needle_space(&points)?;
    let pick = |k: usize| -> Vec<usize> {
        needle_coords(k)
            .iter()
            .map(|c| coords.binary_search(c).expect("coords are nested"))
            .collect()
    };
    let a = SubsetRef::new(&z, pick(n))?;
    let b = SubsetRef::new(&z, pick(m))?;
    Ok(hausdorff(&a, &b)?)
}

/// The evenly spaced needles `{ε, 2ε, …}` up to `max`.
pub fn grid_hedgehog(eps: &Rational, max: &Rational) -> Result<HedgehogSpec, HedgehogError> {
    if !is_positive(eps) || !is_positive(max) {
        return Err(HedgehogError::NonpositiveParameter("grid step and bound"));
    }
    let steps = (max / eps).floor().to_integer();
    HedgehogSpec::from_lengths((1..=steps).map(|k| eps * k))
}

/// Needle lengths expressed over the least common denominator, for display.
pub fn common_denominator(spec: &HedgehogSpec) -> i128 {
    spec.needles().fold(1, |acc, (l, _)| acc.lcm(l.denom()))
}
