use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{GroupModel, GroupPoint};

/// A finite subset of a group, stored sorted and duplicate-free.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shape {
    points: Vec<GroupPoint>,
}

impl Shape {
    pub fn empty() -> Self {
        Shape::default()
    }

    pub fn from_points(mut points: Vec<GroupPoint>) -> Self {
        points.sort_unstable();
        points.dedup();
        Shape { points }
    }

    pub fn from_coords<C: AsRef<[i64]>>(coords: impl IntoIterator<Item = C>) -> Self {
        Shape::from_points(
            coords
                .into_iter()
                .map(|c| GroupPoint::new(c.as_ref()))
                .collect(),
        )
    }

    /// Wraps a vector already in canonical order.
    pub(crate) fn from_sorted_unchecked(points: Vec<GroupPoint>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        Shape { points }
    }

    pub fn points(&self) -> &[GroupPoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<GroupPoint> {
        self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroupPoint> {
        self.points.iter()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &GroupPoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn is_subset(&self, other: &Shape) -> bool {
        self.len() <= other.len() && self.iter().all(|p| other.contains(p))
    }

    pub fn inverse(&self, model: &GroupModel) -> Shape {
        Shape::from_points(self.iter().map(|p| model.invert(p)).collect())
    }

    /// The right translate `F g`.
    pub fn right_translate(&self, model: &GroupModel, g: &GroupPoint) -> Shape {
        Shape::from_points(self.iter().map(|p| model.multiply(p, g)).collect())
    }

    pub fn union(&self, other: &Shape) -> Shape {
        let mut v = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.len() && j < other.len() {
            match self.points[i].cmp(&other.points[j]) {
                std::cmp::Ordering::Less => {
                    v.push(self.points[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    v.push(other.points[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    v.push(self.points[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        v.extend_from_slice(&self.points[i..]);
        v.extend_from_slice(&other.points[j..]);
        Shape { points: v }
    }

    pub fn intersection(&self, other: &Shape) -> Shape {
        Shape {
            points: self.iter().filter(|p| other.contains(p)).cloned().collect(),
        }
    }

    pub fn difference(&self, other: &Shape) -> Shape {
        Shape {
            points: self.iter().filter(|p| !other.contains(p)).cloned().collect(),
        }
    }

    pub fn symmetric_difference_len(&self, other: &Shape) -> usize {
        let common = self.iter().filter(|p| other.contains(p)).count();
        self.len() + other.len() - 2 * common
    }

    /// Largest absolute value seen at each coordinate position.
    pub fn coordinate_extent(&self) -> Vec<i64> {
        let mut ext: Vec<i64> = Vec::new();
        for p in &self.points {
            for (i, c) in p.coords().iter().enumerate() {
                if ext.len() <= i {
                    ext.push(0);
                }
                ext[i] = ext[i].max(c.abs());
            }
        }
        ext
    }
}

impl<'a> IntoIterator for &'a Shape {
    type Item = &'a GroupPoint;
    type IntoIter = std::slice::Iter<'a, GroupPoint>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

impl Serialize for Shape {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.points.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Shape {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(Shape::from_points(Vec::<GroupPoint>::deserialize(deserializer)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalizes() {
        let s = Shape::from_coords([[2, 0], [0, 1], [2, 0], [0, 0]]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.points()[0].coords(), &[0, 0]);
        assert_eq!(serde_json::to_string(&s).unwrap(), "[[0,0],[0,1],[2,0]]");
    }

    #[test]
    fn set_algebra() {
        let a = Shape::from_coords([[0], [1], [2]]);
        let b = Shape::from_coords([[2], [3]]);
        assert_eq!(a.union(&b).len(), 4);
        assert_eq!(a.intersection(&b), Shape::from_coords([[2]]));
        assert_eq!(a.difference(&b).len(), 2);
        assert_eq!(a.symmetric_difference_len(&b), 3);
        assert!(Shape::from_coords([[1]]).is_subset(&a));
    }
}
