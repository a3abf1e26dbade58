use serde::Serialize;

use super::QuasitileError;
use crate::group_model::{is_invariant, GroupModel, Rational, Shape};

/// Longest ladder considered; smaller parameters are rejected.
const MAX_LADDER: usize = 1 << 20;

/// Smallest `n` with `(1 − ε)^n < ε`.
pub fn ladder_length(eps: &Rational) -> Result<usize, QuasitileError> {
    check_epsilon(eps)?;
    first_power_below(&(Rational::one() - eps.clone()), eps).ok_or_else(|| QuasitileError::InvalidEpsilon(eps.clone()))
}

/// Smallest `n` with `(1 − β/2)^n < β`.
pub fn group_ladder_length(beta: &Rational) -> Result<usize, QuasitileError> {
    check_beta(beta)?;
    let keep = Rational::one() - beta.clone() / Rational::from_integer(2);
    first_power_below(&keep, beta).ok_or_else(|| QuasitileError::InvalidBeta(beta.clone()))
}

/// Smallest `n >= 1` with `keep^n < target`, for `0 < keep, target < 1`.
/// A floating-point estimate is corrected by exact comparisons.
fn first_power_below(keep: &Rational, target: &Rational) -> Option<usize> {
    let below = |n: usize| keep.pow(n as u32) < *target;
    let est = (target.to_f64().ln() / keep.to_f64().ln()).ceil();
    if !est.is_finite() || est > MAX_LADDER as f64 {
        return None;
    }
    let mut n = (est as usize).max(1);
    while n > 1 && below(n - 1) {
        n -= 1;
    }
    while !below(n) {
        n += 1;
        if n > MAX_LADDER {
            return None;
        }
    }
    Some(n)
}

pub fn check_epsilon(eps: &Rational) -> Result<(), QuasitileError> {
    if eps.is_positive() && *eps < Rational::new(1, 2) {
        Ok(())
    } else {
        Err(QuasitileError::InvalidEpsilon(eps.clone()))
    }
}

pub fn check_beta(beta: &Rational) -> Result<(), QuasitileError> {
    if beta.is_positive() && *beta < Rational::new(1, 2) {
        Ok(())
    } else {
        Err(QuasitileError::InvalidBeta(beta.clone()))
    }
}

/// `(1+δ)^{-1}(1 − (1+δ)ε)^n < ε − 1 + (1+δ)^{-1}` with `(1+δ)ε < 1`.
pub fn slack_inequality_holds(eps: &Rational, delta: &Rational, n: usize) -> bool {
    let one = Rational::one();
    let grow = &one + delta;
    let shrink = &one - &(&grow * eps);
    if !shrink.is_positive() {
        return false;
    }
    let inv = grow.recip();
    let lhs = &inv * &shrink.pow(n as u32);
    let rhs = &(eps - &one) + &inv;
    lhs < rhs
}

/// Largest dyadic `δ ≤ 1` (denominator at most `2^30`) satisfying
/// [`slack_inequality_holds`], by bisection.
pub fn slack_delta(eps: &Rational, n: usize) -> Result<Rational, QuasitileError> {
    if slack_inequality_holds(eps, &Rational::one(), n) {
        return Ok(Rational::one());
    }
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    let half = Rational::new(1, 2);
    for _ in 0..30 {
        let mid = &(&lo + &hi) * &half;
        if slack_inequality_holds(eps, &mid, n) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo.is_zero() || !slack_inequality_holds(eps, &lo, n) {
        return Err(QuasitileError::NoSlack {
            eps: eps.clone(),
            n,
        });
    }
    Ok(lo)
}

/// Density guaranteed after stage `i` (1-based) of an `n`-level ladder:
/// `(1+δ)^{-1} − (1+δ)^{-1}(1 − ε(1+δ))^{n+1−i}`.
pub fn recursion_bound(eps: &Rational, delta: &Rational, n: usize, i: usize) -> Rational {
    let one = Rational::one();
    let grow = &one + delta;
    let inv = grow.recip();
    let base = &one - &(eps * &grow);
    &inv - &(&inv * &base.pow((n + 1 - i) as u32))
}

/// Parameters of one quasitiling run.
#[derive(Clone, Debug, Serialize)]
pub struct QuasitileParams {
    pub k: Shape,
    pub eps: Rational,
    pub n: usize,
    pub delta: Rational,
    pub ladder: Vec<Shape>,
}

impl QuasitileParams {
    /// Fills in `n` and the slack `δ` for `ε`.
    pub fn new(k: Shape, eps: Rational, ladder: Vec<Shape>) -> Result<Self, QuasitileError> {
        let n = ladder_length(&eps)?;
        let delta = slack_delta(&eps, n)?;
        Ok(QuasitileParams {
            k,
            eps,
            n,
            delta,
            ladder,
        })
    }
}

/// First pair `(i, j)`, `j < i`, 0-based, in order of increasing `i` then `j`,
/// for which `F_i` is not `(F_j^{-1}, τ)`-invariant.
pub fn first_cross_failure(model: &GroupModel, ladder: &[Shape], tau: &Rational) -> Option<(usize, usize)> {
    for i in 0..ladder.len() {
        for j in 0..i {
            let inv = ladder[j].inverse(model);
            if !is_invariant(model, &inv, tau, &ladder[i]) {
                return Some((i, j));
            }
        }
    }
    None
}
