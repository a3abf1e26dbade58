use serde::Serialize;

use super::ExactTilingError;
use crate::action_space::ActionWindow;
use crate::group_model::{invariance_defect, is_invariant, Rational, Shape};

/// `((|K|+1)·6ε + ε) / (1 − 6ε) < δ`.
pub fn epsilon_inequality_holds(k_len: usize, eps: &Rational, delta: &Rational) -> bool {
    let one = Rational::one();
    let six = eps.scale(6);
    if six >= one {
        return false;
    }
    let num = &six.scale(k_len + 1) + eps;
    num < delta * &(&one - &six)
}

/// Largest `ε = 2^-k < 1/2` satisfying [`epsilon_inequality_holds`].
pub fn choose_epsilon(k: &Shape, delta: &Rational) -> Result<Rational, ExactTilingError> {
    if !delta.is_positive() || *delta >= Rational::one() {
        return Err(ExactTilingError::InvalidDelta(delta.clone()));
    }
    // The inequality is monotone in ε, so the first power of two that passes
    // is the largest.
    let mut eps = Rational::new(1, 4);
    let half = Rational::new(1, 2);
    for _ in 0..200 {
        if epsilon_inequality_holds(k.len(), &eps, delta) {
            return Ok(eps);
        }
        eps = &eps * &half;
    }
    Err(ExactTilingError::InvalidDelta(delta.clone()))
}

/// One admissible Følner index with the shape it names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LadderRung {
    pub index: usize,
    pub size: usize,
    pub defect: Rational,
}

/// Følner indices `1..=cap` whose sets lie within the freeness radius, are
/// `(K, τ)`-invariant and satisfy `ε(1−ε)|F| > 1`; returns up to `n` of them
/// spread evenly from the smallest to the largest, ascending.
pub fn build_ladder(
    window: &ActionWindow,
    k: &Shape,
    eps: &Rational,
    tau: &Rational,
    n: usize,
    cap: usize,
) -> Result<(Vec<LadderRung>, Vec<Shape>), ExactTilingError> {
    let model = window.model();
    let room = eps * &(Rational::one() - eps.clone());
    let mut valid: Vec<(LadderRung, Shape)> = Vec::new();
    for index in 1..=cap {
        let f = match model.folner_set(index) {
            Ok(f) => f,
            Err(_) => break,
        };
        if f.len() > window.size() || window.check_shape("F", &f).is_err() {
            break;
        }
        if !is_invariant(model, k, tau, &f) || !room.exceeds_count(1, f.len()) {
            continue;
        }
        let defect = invariance_defect(model, k, &f)?;
        valid.push((
            LadderRung {
                index,
                size: f.len(),
                defect,
            },
            f,
        ));
    }
    if valid.is_empty() {
        return Err(ExactTilingError::NoLadder(format!(
            "no Følner index up to {cap} is (K, {tau})-invariant with eps(1-eps)|F| > 1 inside the radius"
        )));
    }
    let picks = spread(valid.len(), n);
    Ok(picks.into_iter().map(|i| valid[i].clone()).unzip())
}

/// Up to `n` distinct positions in `0..len`, evenly spread, ascending, always
/// including both ends.
fn spread(len: usize, n: usize) -> Vec<usize> {
    if n == 0 || len == 0 {
        return Vec::new();
    }
    if len <= n {
        return (0..len).collect();
    }
    if n == 1 {
        return vec![len - 1];
    }
    let mut out: Vec<usize> = (0..n).map(|j| (j * (len - 1) + (n - 1) / 2) / (n - 1)).collect();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_model::GroupModel;

    #[test]
    fn five_point_k_quarter() {
        let k = GroupModel::Lattice { dim: 2 }.generators();
        assert_eq!(k.len(), 5);
        let eps = choose_epsilon(&k, &Rational::new(1, 4)).unwrap();
        assert_eq!(eps, Rational::new(1, 256));
        assert!(epsilon_inequality_holds(5, &eps, &Rational::new(1, 4)));
        assert!(!epsilon_inequality_holds(5, &Rational::new(1, 128), &Rational::new(1, 4)));
    }

    #[test]
    fn spread_hits_ends() {
        assert_eq!(spread(10, 3), vec![0, 5, 9]);
        assert_eq!(spread(3, 5), vec![0, 1, 2]);
        assert_eq!(spread(44, 8).len(), 8);
        assert_eq!(*spread(44, 8).last().unwrap(), 43);
    }

    #[test]
    fn ladder_on_torus() {
        let w = ActionWindow::torus(2, 128).unwrap();
        let k = GroupModel::Lattice { dim: 2 }.generators();
        let eps = Rational::new(1, 5);
        let (rungs, shapes) = build_ladder(&w, &k, &eps, &eps, 8, 200).unwrap();
        assert_eq!(rungs.len(), 8);
        assert_eq!(rungs[0].index, 21);
        assert_eq!(rungs[7].index, 64);
        assert!(shapes.windows(2).all(|p| p[0].len() < p[1].len()));
    }
}
