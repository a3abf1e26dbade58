use fixedbitset::FixedBitSet;

/// A subset of a carrier `{0, .., size - 1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    bits: FixedBitSet,
}

impl PointSet {
    pub fn empty(size: usize) -> Self {
        PointSet {
            bits: FixedBitSet::with_capacity(size),
        }
    }

    pub fn full(size: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(size);
        bits.insert_range(..);
        PointSet { bits }
    }

    pub fn from_indices(size: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = PointSet::empty(size);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Size of the ambient carrier.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        self.bits.insert(x)
    }

    #[inline]
    pub fn remove(&mut self, x: usize) {
        self.bits.set(x, false)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn union_with(&mut self, other: &PointSet) {
        self.bits.union_with(&other.bits)
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.bits.intersect_with(&other.bits);
        s
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.bits.difference_with(&other.bits);
        s
    }

    pub fn symmetric_difference(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.bits.symmetric_difference_with(&other.bits);
        s
    }

    pub fn complement(&self) -> PointSet {
        let mut s = self.clone();
        s.bits.toggle_range(..);
        s
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn intersection_len(&self, other: &PointSet) -> usize {
        self.bits.intersection_count(&other.bits)
    }

    /// Maximal runs `[start, end)` of members, in increasing order.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut runs: Vec<(usize, usize)> = Vec::new();
        for x in self.iter() {
            match runs.last_mut() {
                Some(r) if r.1 == x => r.1 = x + 1,
                _ => runs.push((x, x + 1)),
            }
        }
        runs
    }
}

impl std::fmt::Debug for PointSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PointSet({}/{})", self.len(), self.universe())
    }
}
