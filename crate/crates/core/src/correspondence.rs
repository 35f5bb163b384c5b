//! Correspondences between finite point sets and their distortion.

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::rational::{abs_diff, Rational};
use crate::space::FiniteMetricSpace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorrespondenceError {
    #[error("a correspondence needs at least one pair")]
    Empty,
    #[error("pair ({0},{1}) is out of range for sizes {2}x{3}")]
    IndexOutOfRange(usize, usize, usize, usize),
    #[error("left point {0} has no partner")]
    LeftUncovered(usize),
    #[error("right point {0} has no partner")]
    RightUncovered(usize),
    #[error("correspondence is {0}x{1} but the spaces have {2} and {3} points")]
    SizeMismatch(usize, usize, usize, usize),
    #[error("enumerating all correspondences of a {0}x{1} grid is too large (n*m must be <= 20)")]
    TooLarge(usize, usize),
}

/// A relation between `0..left` and `0..right` that covers both sides.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Correspondence {
    left: usize,
    right: usize,
    pairs: BTreeSet<(usize, usize)>,
}

impl Correspondence {
    pub fn new(
        left: usize,
        right: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, CorrespondenceError> {
        let pairs: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return Err(CorrespondenceError::Empty);
        }
        let mut seen_left = vec![false; left];
        let mut seen_right = vec![false; right];
        for &(i, j) in &pairs {
            if i >= left || j >= right {
                return Err(CorrespondenceError::IndexOutOfRange(i, j, left, right));
            }
            seen_left[i] = true;
            seen_right[j] = true;
        }
        if let Some(i) = seen_left.iter().position(|s| !s) {
            return Err(CorrespondenceError::LeftUncovered(i));
        }
        if let Some(j) = seen_right.iter().position(|s| !s) {
            return Err(CorrespondenceError::RightUncovered(j));
        }
        Ok(Correspondence { left, right, pairs })
    }

    /// `{(i, i)}`
    pub fn identity(n: usize) -> Self {
        Correspondence {
            left: n,
            right: n,
            pairs: (0..n).map(|i| (i, i)).collect(),
        }
    }

    /// Every pair of `left x right`.
    pub fn full(left: usize, right: usize) -> Self {
        Correspondence {
            left,
            right,
            pairs: (0..left)
                .flat_map(|i| (0..right).map(move |j| (i, j)))
                .collect(),
        }
    }

    /// `graph(f) ∪ graph(g)⁻¹` for `f: left -> right` and `g: right -> left`.
    pub fn from_maps(f: &[usize], g: &[usize]) -> Result<Self, CorrespondenceError> {
        let pairs = f
            .iter()
            .enumerate()
            .map(|(x, &y)| (x, y))
            .chain(g.iter().enumerate().map(|(y, &x)| (x, y)));
        Correspondence::new(f.len(), g.len(), pairs)
    }

    /// Graph of a bijection `i -> image[i]`.
    pub fn from_bijection(image: &[usize]) -> Result<Self, CorrespondenceError> {
        Correspondence::new(
            image.len(),
            image.len(),
            image.iter().enumerate().map(|(i, &j)| (i, j)),
        )
    }

    pub fn left_len(&self) -> usize {
        self.left
    }

    pub fn right_len(&self) -> usize {
        self.right
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x, y))
    }

    /// `R(x)`, ascending.
    pub fn image(&self, x: usize) -> Vec<usize> {
        self.pairs
            .range((x, 0)..(x + 1, 0))
            .map(|&(_, y)| y)
            .collect()
    }

    pub fn inverse(&self) -> Self {
        Correspondence {
            left: self.right,
            right: self.left,
            pairs: self.pairs.iter().map(|&(i, j)| (j, i)).collect(),
        }
    }

    /// `self ∘ next`: pairs `(x, z)` with `(x, y) ∈ self` and `(y, z) ∈ next`.
    pub fn compose(&self, next: &Correspondence) -> Result<Self, CorrespondenceError> {
        if self.right != next.left {
            return Err(CorrespondenceError::SizeMismatch(
                self.left, self.right, next.left, next.right,
            ));
        }
        let pairs = self
            .pairs
            .iter()
            .flat_map(|&(x, y)| next.image(y).into_iter().map(move |z| (x, z)));
        Correspondence::new(self.left, next.right, pairs)
    }

    /// A bijection contained in the relation, if one exists and the sides match in size.
    pub fn contained_bijection(&self) -> Option<Vec<usize>> {
        if self.left != self.right {
            return None;
        }
        let mut image = vec![usize::MAX; self.left];
        let mut used = vec![false; self.right];
        fn go(
            r: &Correspondence,
            x: usize,
            image: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if x == image.len() {
                return true;
            }
            for y in r.image(x) {
                if !used[y] {
                    used[y] = true;
                    image[x] = y;
                    if go(r, x + 1, image, used) {
                        return true;
                    }
                    used[y] = false;
                }
            }
            false
        }
        go(self, 0, &mut image, &mut used).then_some(image)
    }

    pub fn check_spaces(
        &self,
        x: &FiniteMetricSpace,
        y: &FiniteMetricSpace,
    ) -> Result<(), CorrespondenceError> {
        if self.left != x.len() || self.right != y.len() {
            return Err(CorrespondenceError::SizeMismatch(
                self.left,
                self.right,
                x.len(),
                y.len(),
            ));
        }
        Ok(())
    }
}

/// `max | |xx'| - |yy'| |` over pairs of pairs of `r`.
pub fn distortion(
    r: &Correspondence,
    x: &FiniteMetricSpace,
    y: &FiniteMetricSpace,
) -> Result<Rational, CorrespondenceError> {
    r.check_spaces(x, y)?;
    let pairs: Vec<_> = r.pairs.iter().copied().collect();
    let mut worst = Rational::zero();
    for (a, &(x1, y1)) in pairs.iter().enumerate() {
        for &(x2, y2) in &pairs[a + 1..] {
            let d = abs_diff(x.dist(x1, x2), y.dist(y1, y2));
            if d > worst {
                worst = d;
            }
        }
    }
    Ok(worst)
}

/// Every correspondence between `0..n` and `0..m`, each exactly once, in increasing
/// bitmask order (bit `i*m + j` is the pair `(i, j)`).
pub fn enumerate_correspondences(
    n: usize,
    m: usize,
) -> Result<impl Iterator<Item = Correspondence>, CorrespondenceError> {
    if n == 0 || m == 0 || n * m > 20 {
        return Err(CorrespondenceError::TooLarge(n, m));
    }
    let cells = n * m;
    let row_mask: Vec<u32> = (0..n).map(|i| ((1u32 << m) - 1) << (i * m)).collect();
    let col_mask: Vec<u32> = (0..m)
        .map(|j| (0..n).fold(0u32, |acc, i| acc | 1 << (i * m + j)))
        .collect();
    Ok((1u32..(1u32 << cells)).filter_map(move |mask| {
        let covers = row_mask.iter().all(|r| mask & r != 0) && col_mask.iter().all(|c| mask & c != 0);
        covers.then(|| Correspondence {
            left: n,
            right: m,
            pairs: (0..cells)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| (b / m, b % m))
                .collect(),
        })
    }))
}
