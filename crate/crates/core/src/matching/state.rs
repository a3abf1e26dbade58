use serde::Serialize;

use super::{BipartiteRelation, MatchingError};

pub(crate) const NONE: u32 = u32::MAX;

/// A partial injection `g : L ⇀ R` compatible with a relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingState {
    mate_left: Vec<u32>,
    mate_right: Vec<u32>,
    size: usize,
    /// Number of completed phases.
    pub phase: usize,
}

/// An alternating sequence `(x_0, y_0, ..., x_m, y_m)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AugmentingPath {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
}

impl AugmentingPath {
    pub fn new(left: Vec<u32>, right: Vec<u32>) -> Self {
        AugmentingPath { left, right }
    }

    /// `m`: the number of matched edges the path reroutes.
    pub fn length(&self) -> usize {
        self.left.len().saturating_sub(1)
    }

    pub fn origin(&self) -> usize {
        self.left[0] as usize
    }
}

impl MatchingState {
    pub fn empty(r: &BipartiteRelation) -> Self {
        MatchingState {
            mate_left: vec![NONE; r.left_len()],
            mate_right: vec![NONE; r.right_len()],
            size: 0,
            phase: 0,
        }
    }

    /// Builds a state from pairs, checking injectivity and compatibility.
    pub fn from_pairs(r: &BipartiteRelation, pairs: &[(usize, usize)]) -> Result<Self, MatchingError> {
        let mut g = MatchingState::empty(r);
        for &(x, y) in pairs {
            if !r.contains(x, y) {
                return Err(MatchingError::Incompatible { left: x, right: y });
            }
            if g.mate_left[x] != NONE || g.mate_right[y] != NONE {
                return Err(MatchingError::NotInjective { left: x, right: y });
            }
            g.mate_left[x] = y as u32;
            g.mate_right[y] = x as u32;
            g.size += 1;
        }
        Ok(g)
    }

    #[inline]
    pub fn get(&self, x: usize) -> Option<usize> {
        let y = self.mate_left[x];
        (y != NONE).then_some(y as usize)
    }

    #[inline]
    pub fn preimage(&self, y: usize) -> Option<usize> {
        let x = self.mate_right[y];
        (x != NONE).then_some(x as usize)
    }

    #[inline]
    pub(crate) fn mate_left_raw(&self, x: usize) -> u32 {
        self.mate_left[x]
    }

    #[inline]
    pub(crate) fn mate_right_raw(&self, y: usize) -> u32 {
        self.mate_right[y]
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn left_len(&self) -> usize {
        self.mate_left.len()
    }

    pub fn unmatched_left(&self) -> usize {
        self.mate_left.len() - self.size
    }

    pub fn free_left(&self) -> impl Iterator<Item = usize> + '_ {
        self.mate_left
            .iter()
            .enumerate()
            .filter(|(_, &y)| y == NONE)
            .map(|(x, _)| x)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.mate_left
            .iter()
            .enumerate()
            .filter(|(_, &y)| y != NONE)
            .map(|(x, &y)| (x, y as usize))
            .collect()
    }

    /// Injective, mutually consistent, and `graph(g) ⊆ R`.
    pub fn is_compatible(&self, r: &BipartiteRelation) -> bool {
        if self.mate_left.len() != r.left_len() || self.mate_right.len() != r.right_len() {
            return false;
        }
        let mut count = 0;
        for (x, &y) in self.mate_left.iter().enumerate() {
            if y == NONE {
                continue;
            }
            count += 1;
            if self.mate_right[y as usize] != x as u32 || !r.contains(x, y as usize) {
                return false;
            }
        }
        let right_count = self.mate_right.iter().filter(|&&x| x != NONE).count();
        count == self.size && right_count == self.size
    }

    /// Checks the defining conditions of a `g`-augmenting path.
    pub fn check_augmenting(&self, r: &BipartiteRelation, z: &AugmentingPath) -> Result<(), MatchingError> {
        let bad = |reason: &'static str| Err(MatchingError::NotAugmenting(reason));
        let m = z.left.len();
        if m == 0 || z.right.len() != m {
            return bad("malformed path");
        }
        if z.left.iter().any(|&x| x as usize >= r.left_len()) || z.right.iter().any(|&y| y as usize >= r.right_len()) {
            return bad("vertex out of range");
        }
        if self.mate_left[z.left[0] as usize] != NONE {
            return bad("origin is matched");
        }
        let mut ys = z.right.clone();
        ys.sort_unstable();
        if ys.windows(2).any(|w| w[0] == w[1]) {
            return bad("repeated right vertex");
        }
        for i in 0..m {
            if !r.contains(z.left[i] as usize, z.right[i] as usize) {
                return bad("edge not in relation");
            }
            if i + 1 < m && self.mate_left[z.left[i + 1] as usize] != z.right[i] {
                return bad("right vertex is not the image of the next left vertex");
            }
        }
        if self.mate_right[z.right[m - 1] as usize] != NONE {
            return bad("terminal right vertex is matched");
        }
        Ok(())
    }

    /// The flip along `z`: `x_i ↦ y_i` for every `i`.
    pub fn flip(&mut self, r: &BipartiteRelation, z: &AugmentingPath) -> Result<(), MatchingError> {
        self.check_augmenting(r, z)?;
        self.flip_unchecked(z);
        Ok(())
    }

    pub(crate) fn flip_unchecked(&mut self, z: &AugmentingPath) {
        for (&x, &y) in z.left.iter().zip(&z.right) {
            self.mate_left[x as usize] = y;
            self.mate_right[y as usize] = x;
        }
        self.size += 1;
    }
}

/// Functional form of [`MatchingState::flip`].
pub fn flip(
    r: &BipartiteRelation,
    g: &MatchingState,
    z: &AugmentingPath,
) -> Result<MatchingState, MatchingError> {
    let mut out = g.clone();
    out.flip(r, z)?;
    debug_assert!(out.is_compatible(r));
    Ok(out)
}
