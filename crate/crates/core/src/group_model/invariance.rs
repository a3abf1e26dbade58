use rustc_hash::FxHashSet as HashSet;

use super::{GroupError, GroupModel, GroupPoint, Rational, Shape};

/// `KF = {k f : k in K, f in F}`.
pub fn multiply_set(model: &GroupModel, k: &Shape, f: &Shape) -> Shape {
    let mut out: HashSet<GroupPoint> = HashSet::with_capacity_and_hasher(k.len().max(f.len()), Default::default());
    for a in k {
        for b in f {
            out.insert(model.multiply(a, b));
        }
    }
    Shape::from_points(out.into_iter().collect())
}

/// `|KF △ F|`, computed without materializing the sorted product.
pub fn invariance_defect_count(model: &GroupModel, k: &Shape, f: &Shape) -> usize {
    let fset: HashSet<&GroupPoint> = f.iter().collect();
    let mut outside: HashSet<GroupPoint> = HashSet::default();
    let mut hit: HashSet<&GroupPoint> = HashSet::default();
    for b in f {
        for a in k {
            let p = model.multiply(a, b);
            if let Some(q) = fset.get(&p) {
                hit.insert(q);
            } else {
                outside.insert(p);
            }
        }
    }
    outside.len() + (f.len() - hit.len())
}

/// `|KF △ F| / |F|`.
pub fn invariance_defect(model: &GroupModel, k: &Shape, f: &Shape) -> Result<Rational, GroupError> {
    if f.is_empty() {
        return Err(GroupError::EmptyShape);
    }
    Ok(Rational::ratio(invariance_defect_count(model, k, f), f.len()))
}

/// `F` is `(K, δ)`-invariant: `|KF △ F| < δ|F|`.
pub fn is_invariant(model: &GroupModel, k: &Shape, delta: &Rational, f: &Shape) -> bool {
    !f.is_empty() && delta.exceeds_count(invariance_defect_count(model, k, f), f.len())
}

/// `∂_F A = {s in A : Fs meets both A and its complement}`.
pub fn boundary(model: &GroupModel, f: &Shape, a: &Shape) -> Shape {
    let pts = a
        .iter()
        .filter(|s| {
            let mut inside = false;
            let mut outside = false;
            for g in f {
                if a.contains(&model.multiply(g, s)) {
                    inside = true;
                } else {
                    outside = true;
                }
                if inside && outside {
                    return true;
                }
            }
            false
        })
        .cloned()
        .collect();
    Shape::from_sorted_unchecked(pts)
}

/// `((|K| + 1) ε + δ) / (1 − ε)`: the invariance retained by any `F'` with
/// `|F' △ F| < ε|F|` when `F` is `(K, δ)`-invariant.
pub fn propagate_invariance(k: &Shape, delta: &Rational, eps: &Rational) -> Result<Rational, GroupError> {
    if *eps >= 1 {
        return Err(GroupError::EpsilonTooLarge(eps.clone()));
    }
    let kp1 = Rational::from_integer(k.len() as i64 + 1);
    Ok(&(&(&kp1 * eps) + delta) / &(Rational::one() - eps.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z: GroupModel = GroupModel::Lattice { dim: 1 };
    const Z2: GroupModel = GroupModel::Lattice { dim: 2 };

    fn interval(lo: i64, hi: i64) -> Shape {
        Shape::from_coords((lo..hi).map(|i| [i]))
    }

    fn cross() -> Shape {
        Shape::from_coords([[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1]])
    }

    #[test]
    fn products() {
        assert_eq!(multiply_set(&Z, &interval(0, 1), &interval(0, 10)), interval(0, 10));
        assert_eq!(multiply_set(&Z, &interval(-1, 2), &interval(0, 100)), interval(-1, 101));
        let f = Z2.folner_set(10).unwrap();
        assert_eq!(multiply_set(&Z2, &cross(), &f).len(), 140);
    }

    #[test]
    fn defects() {
        assert_eq!(invariance_defect(&Z, &interval(-1, 2), &interval(0, 100)).unwrap(), Rational::new(2, 100));
        assert_eq!(invariance_defect(&Z, &interval(0, 1), &interval(5, 9)).unwrap(), Rational::zero());
        let f = Z2.folner_set(10).unwrap();
        assert_eq!(invariance_defect(&Z2, &cross(), &f).unwrap(), Rational::new(40, 100));
        assert!(invariance_defect(&Z, &interval(0, 1), &Shape::empty()).is_err());
        assert!(is_invariant(&Z, &interval(-1, 2), &Rational::new(1, 20), &interval(0, 100)));
        assert!(!is_invariant(&Z, &interval(-1, 2), &Rational::new(1, 50), &interval(0, 100)));
    }

    #[test]
    fn boundaries() {
        assert_eq!(boundary(&Z, &interval(0, 2), &interval(0, 10)), interval(9, 10));
        assert!(boundary(&Z, &interval(0, 1), &interval(0, 10)).is_empty());
        assert_eq!(
            boundary(&Z, &interval(-1, 2), &interval(0, 10)),
            Shape::from_coords([[0], [9]])
        );
    }

    #[test]
    fn propagation() {
        let k2 = interval(0, 2);
        assert_eq!(
            propagate_invariance(&k2, &Rational::new(1, 10), &Rational::new(1, 20)).unwrap(),
            Rational::new(5, 19)
        );
        assert_eq!(
            propagate_invariance(&k2, &Rational::new(1, 10), &Rational::zero()).unwrap(),
            Rational::new(1, 10)
        );
        assert_eq!(
            propagate_invariance(&interval(0, 5), &Rational::zero(), &Rational::new(1, 100)).unwrap(),
            Rational::new(6, 99)
        );
        assert!(propagate_invariance(&k2, &Rational::zero(), &Rational::one()).is_err());
    }

    #[test]
    fn heisenberg_defect_halves() {
        let h = GroupModel::Heisenberg;
        let s = h.generators();
        let d: Vec<f64> = [4, 8, 16]
            .iter()
            .map(|&n| invariance_defect(&h, &s, &h.folner_set(n).unwrap()).unwrap().to_f64())
            .collect();
        assert!(d[1] < 0.6 * d[0] && d[2] < 0.6 * d[1], "{d:?}");
    }

    #[test]
    fn lamplighter_defect_decreases() {
        let l = GroupModel::Lamplighter;
        let s = l.generators();
        for n in [2usize, 4, 8] {
            let d = invariance_defect(&l, &s, &l.folner_set(n).unwrap()).unwrap();
            assert_eq!(d, Rational::new(2, n as i64));
        }
    }
}
