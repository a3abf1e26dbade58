use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::{smallvec, SmallVec};

use super::{GroupError, Shape};

/// Largest lamplighter Følner index; the set has `n * 2^n` elements.
pub const MAX_LAMPLIGHTER_INDEX: usize = 16;

/// A group element in the coordinates of its model.
///
/// - `Lattice { dim }`: the integer vector.
/// - `Heisenberg`: the triple `(x, y, z)` standing for the upper unitriangular
///   matrix with entries `x`, `y` above the diagonal and `z` in the corner.
/// - `Lamplighter`: `[position, lamp_1, ..., lamp_k]` with the lit lamps
///   strictly increasing.
///
/// The coordinate tuple is a normal form, so equality of points is equality of
/// group elements and the derived `Ord` is the canonical lexicographic order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupPoint(pub SmallVec<[i64; 4]>);

impl GroupPoint {
    pub fn new(coords: &[i64]) -> Self {
        GroupPoint(SmallVec::from_slice(coords))
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Debug for GroupPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

/// The finitely generated amenable groups this crate knows how to multiply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupModel {
    /// `Z^dim` for `1 <= dim <= 3`.
    Lattice { dim: usize },
    /// The discrete Heisenberg group `H3(Z)`.
    Heisenberg,
    /// The lamplighter group `Z2 wr Z`.
    Lamplighter,
}

impl GroupModel {
    pub fn name(&self) -> String {
        match self {
            GroupModel::Lattice { dim } => format!("z{dim}"),
            GroupModel::Heisenberg => "heis".into(),
            GroupModel::Lamplighter => "lamplighter".into(),
        }
    }

    pub fn identity(&self) -> GroupPoint {
        match self {
            GroupModel::Lattice { dim } => GroupPoint(smallvec![0; *dim]),
            GroupModel::Heisenberg => GroupPoint(smallvec![0; 3]),
            GroupModel::Lamplighter => GroupPoint(smallvec![0]),
        }
    }

    /// Number of coordinates of a point, or `None` for variable-length models.
    pub fn arity(&self) -> Option<usize> {
        match self {
            GroupModel::Lattice { dim } => Some(*dim),
            GroupModel::Heisenberg => Some(3),
            GroupModel::Lamplighter => None,
        }
    }

    pub fn validate(&self, p: &GroupPoint) -> Result<(), GroupError> {
        let ok = match self {
            GroupModel::Lattice { dim } => p.0.len() == *dim,
            GroupModel::Heisenberg => p.0.len() == 3,
            GroupModel::Lamplighter => {
                !p.0.is_empty() && p.0[1..].windows(2).all(|w| w[0] < w[1])
            }
        };
        if ok {
            Ok(())
        } else {
            Err(GroupError::InvalidPoint {
                model: self.name(),
                point: p.0.to_vec(),
            })
        }
    }

    pub fn multiply(&self, a: &GroupPoint, b: &GroupPoint) -> GroupPoint {
        match self {
            GroupModel::Lattice { .. } => {
                GroupPoint(a.0.iter().zip(b.0.iter()).map(|(x, y)| x + y).collect())
            }
            GroupModel::Heisenberg => {
                let (x, y, z) = (a.0[0], a.0[1], a.0[2]);
                let (u, v, w) = (b.0[0], b.0[1], b.0[2]);
                GroupPoint(smallvec![x + u, y + v, z + w + x * v])
            }
            GroupModel::Lamplighter => {
                // (f, p)(g, q) = (f + shift_p g, p + q)
                let p = a.0[0];
                let shifted = b.0[1..].iter().map(|l| l + p);
                let lamps = symmetric_merge(a.0[1..].iter().copied(), shifted);
                let mut out: SmallVec<[i64; 4]> = smallvec![p + b.0[0]];
                out.extend(lamps);
                GroupPoint(out)
            }
        }
    }

    pub fn invert(&self, a: &GroupPoint) -> GroupPoint {
        match self {
            GroupModel::Lattice { .. } => GroupPoint(a.0.iter().map(|x| -x).collect()),
            GroupModel::Heisenberg => {
                let (x, y, z) = (a.0[0], a.0[1], a.0[2]);
                GroupPoint(smallvec![-x, -y, -z + x * y])
            }
            GroupModel::Lamplighter => {
                let p = a.0[0];
                let mut out: SmallVec<[i64; 4]> = smallvec![-p];
                out.extend(a.0[1..].iter().map(|l| l - p));
                GroupPoint(out)
            }
        }
    }

    /// The standard symmetric generating set, identity included.
    pub fn generators(&self) -> Shape {
        let pts: Vec<GroupPoint> = match self {
            GroupModel::Lattice { dim } => {
                let mut v = vec![self.identity()];
                for i in 0..*dim {
                    for s in [-1, 1] {
                        let mut c = vec![0; *dim];
                        c[i] = s;
                        v.push(GroupPoint::new(&c));
                    }
                }
                v
            }
            GroupModel::Heisenberg => [
                [0, 0, 0],
                [1, 0, 0],
                [-1, 0, 0],
                [0, 1, 0],
                [0, -1, 0],
            ]
            .iter()
            .map(|c| GroupPoint::new(c))
            .collect(),
            GroupModel::Lamplighter => vec![
                GroupPoint::new(&[0]),
                GroupPoint::new(&[1]),
                GroupPoint::new(&[-1]),
                GroupPoint::new(&[0, 0]),
            ],
        };
        Shape::from_points(pts)
    }

    /// The `index`-th set of the built-in Følner sequence.
    ///
    /// - lattice: the box `[0, index)^dim`;
    /// - Heisenberg: `{0 <= x, y < index, 0 <= z < index^2}`;
    /// - lamplighter: `{(f, p) : -index < p <= 0, supp f within [p, p + index)}`,
    ///   the lamp window travelling with the cursor so that left translation
    ///   by the generators moves little mass.
    pub fn folner_set(&self, index: usize) -> Result<Shape, GroupError> {
        if index == 0 {
            return Err(GroupError::InvalidIndex(index));
        }
        let n = index as i64;
        let pts = match self {
            GroupModel::Lattice { dim } => lattice_box(*dim, 0, n),
            GroupModel::Heisenberg => {
                let mut v = Vec::with_capacity(index.pow(4));
                for x in 0..n {
                    for y in 0..n {
                        for z in 0..n * n {
                            v.push(GroupPoint(smallvec![x, y, z]));
                        }
                    }
                }
                v
            }
            GroupModel::Lamplighter => {
                if index > MAX_LAMPLIGHTER_INDEX {
                    return Err(GroupError::InvalidIndex(index));
                }
                let mut v = Vec::with_capacity(index << index);
                for p in (1 - n)..=0 {
                    for mask in 0u64..(1u64 << index) {
                        let mut c: SmallVec<[i64; 4]> = smallvec![p];
                        c.extend((0..n).filter(|i| mask >> i & 1 == 1).map(|i| p + i));
                        v.push(GroupPoint(c));
                    }
                }
                v
            }
        };
        Ok(Shape::from_points(pts))
    }

    /// A symmetric (`U = U^{-1}`) Følner-type set: the centered box
    /// `[-index, index]^dim` for lattices, `F ∪ F^{-1}` otherwise.
    pub fn symmetric_folner_set(&self, index: usize) -> Result<Shape, GroupError> {
        match self {
            GroupModel::Lattice { dim } => {
                let n = index as i64;
                Ok(Shape::from_points(lattice_box(*dim, -n, n + 1)))
            }
            _ => {
                let f = self.folner_set(index)?;
                Ok(f.union(&f.inverse(self)))
            }
        }
    }
}

fn lattice_box(dim: usize, lo: i64, hi: i64) -> Vec<GroupPoint> {
    let side = (hi - lo).max(0) as usize;
    let mut v = Vec::with_capacity(side.pow(dim as u32));
    let mut c = vec![lo; dim];
    if side == 0 {
        return v;
    }
    loop {
        v.push(GroupPoint::new(&c));
        let mut i = dim;
        loop {
            if i == 0 {
                return v;
            }
            i -= 1;
            c[i] += 1;
            if c[i] < hi {
                break;
            }
            c[i] = lo;
        }
    }
}

/// Symmetric difference of two strictly increasing sequences.
fn symmetric_merge(
    a: impl Iterator<Item = i64>,
    b: impl Iterator<Item = i64>,
) -> SmallVec<[i64; 4]> {
    let mut out = SmallVec::new();
    let mut a = a.peekable();
    let mut b = b.peekable();
    loop {
        match (a.peek().copied(), b.peek().copied()) {
            (Some(x), Some(y)) if x == y => {
                a.next();
                b.next();
            }
            (Some(x), Some(y)) if x < y => {
                out.push(x);
                a.next();
            }
            (Some(_), Some(y)) => {
                out.push(y);
                b.next();
            }
            (Some(x), None) => {
                out.push(x);
                a.next();
            }
            (None, Some(y)) => {
                out.push(y);
                b.next();
            }
            (None, None) => return out,
        }
    }
}

impl fmt::Display for GroupModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for GroupModel {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "z1" | "z" => Ok(GroupModel::Lattice { dim: 1 }),
            "z2" => Ok(GroupModel::Lattice { dim: 2 }),
            "z3" => Ok(GroupModel::Lattice { dim: 3 }),
            "heis" | "heisenberg" => Ok(GroupModel::Heisenberg),
            "lamplighter" => Ok(GroupModel::Lamplighter),
            other => Err(GroupError::UnsupportedModel(other.to_string())),
        }
    }
}

impl Serialize for GroupModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for GroupModel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
