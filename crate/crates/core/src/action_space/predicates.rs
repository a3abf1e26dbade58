use serde::Serialize;

use super::{ActionError, ActionWindow, PointSet};
use crate::group_model::{Rational, Shape};

/// Outcome of a `∀x` predicate, with the first failing point in carrier order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCheck {
    pub holds: bool,
    pub witness: Option<usize>,
}

impl PointCheck {
    pub fn pass() -> Self {
        PointCheck {
            holds: true,
            witness: None,
        }
    }

    pub fn fail(x: usize) -> Self {
        PointCheck {
            holds: false,
            witness: Some(x),
        }
    }
}

/// `num < r * den` for `r = p/q`, division-free.
#[inline]
pub(crate) fn below_ratio(num: u64, den: u64, r: &Rational, parts: Option<(u64, u64)>) -> bool {
    match parts {
        Some((p, q)) => (num as u128) * (q as u128) < (p as u128) * (den as u128),
        None => r.exceeds_count(num as usize, den as usize),
    }
}

/// `A` is `(K, δ)*`-invariant with respect to `F`: at every `x`,
/// `|(KA △ A) ∩ Fx| < δ |A ∩ Fx|`.
///
/// A point where both sides vanish places no constraint; a point where only
/// the right side vanishes is a failure.
pub fn is_star_invariant(
    window: &ActionWindow,
    a: &PointSet,
    k: &Shape,
    delta: &Rational,
    f: &Shape,
) -> Result<PointCheck, ActionError> {
    if a.is_empty() {
        return Err(ActionError::EmptySet("A"));
    }
    window.check_shape("F", f)?;
    let ka = window.translate_points(k, a);
    let b = ka.symmetric_difference(a);
    let cb = window.window_counts(&b, f);
    let ca = window.window_counts(a, f);
    let parts = delta.to_u64_parts();
    for x in 0..window.size() {
        let (nb, na) = (cb[x] as u64, ca[x] as u64);
        if nb == 0 && na == 0 {
            continue;
        }
        if !below_ratio(nb, na, delta, parts) {
            return Ok(PointCheck::fail(x));
        }
    }
    Ok(PointCheck::pass())
}

/// Why a family of translates fails to be ε-disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DisjointFailure {
    WitnessNotSubset { tile: usize },
    WitnessTooSmall { tile: usize, witness: usize, size: usize },
    Overlap { tile: usize, point: usize },
}

/// Checks that every witness `F'_c ⊆ F_c` has `|F'_c| > (1 − ε)|F_c|` and that
/// the translates `F'_c c` are pairwise disjoint.
pub fn check_epsilon_disjoint(
    window: &ActionWindow,
    tiles: &[(Shape, usize)],
    witnesses: &[Shape],
    eps: &Rational,
) -> Result<Option<DisjointFailure>, ActionError> {
    if tiles.len() != witnesses.len() {
        return Err(ActionError::Misaligned {
            tiles: tiles.len(),
            witnesses: witnesses.len(),
        });
    }
    let keep = Rational::one() - eps.clone();
    let mut occupied = window.empty_set();
    for (i, ((tile, c), w)) in tiles.iter().zip(witnesses).enumerate() {
        if !w.is_subset(tile) {
            return Ok(Some(DisjointFailure::WitnessNotSubset { tile: i }));
        }
        if !keep.below_count(w.len(), tile.len()) {
            return Ok(Some(DisjointFailure::WitnessTooSmall {
                tile: i,
                witness: w.len(),
                size: tile.len(),
            }));
        }
        for g in w {
            let y = window.act(g, *c);
            if occupied.contains(y) {
                return Ok(Some(DisjointFailure::Overlap { tile: i, point: y }));
            }
            occupied.insert(y);
        }
    }
    Ok(None)
}
