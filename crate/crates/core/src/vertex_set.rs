use std::fmt;

use fixedbitset::FixedBitSet;

/// A subset of `{0, .., universe-1}`.
///
/// Used for vertex sets of a graph as well as for the members of a
/// [`SetFamily`](crate::coverfree::SetFamily) over a ground set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        VertexSet { bits }
    }

    /// Panics if a member is outside the universe.
    pub fn from_members<I: IntoIterator<Item = usize>>(universe: usize, members: I) -> Self {
        let mut set = VertexSet::empty(universe);
        for v in members {
            set.insert(v);
        }
        set
    }

    /// Like [`from_members`](Self::from_members) but reports out-of-range members.
    pub fn try_from_members<I: IntoIterator<Item = usize>>(
        universe: usize,
        members: I,
    ) -> Option<Self> {
        let mut set = VertexSet::empty(universe);
        for v in members {
            if v >= universe {
                return None;
            }
            set.insert(v);
        }
        Some(set)
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    pub fn insert(&mut self, v: usize) {
        assert!(
            v < self.universe(),
            "vertex {v} outside universe {}",
            self.universe()
        );
        self.bits.insert(v);
    }

    pub fn remove(&mut self, v: usize) {
        if v < self.universe() {
            self.bits.set(v, false);
        }
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.bits.minimum()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        !self.is_disjoint(other)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn complement(&self) -> VertexSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        VertexSet { bits }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.bits.intersection_count(&other.bits)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_algebra() {
        let a = VertexSet::from_members(6, [0, 2, 4]);
        let b = VertexSet::from_members(6, [2, 3]);
        assert_eq!(a.intersection(&b).to_vec(), vec![2]);
        assert_eq!(a.union(&b).to_vec(), vec![0, 2, 3, 4]);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 4]);
        assert_eq!(a.complement().to_vec(), vec![1, 3, 5]);
        assert_eq!(VertexSet::full(3).to_vec(), vec![0, 1, 2]);
        assert!(VertexSet::empty(0).is_empty());
        assert_eq!(a.first(), Some(0));
        assert!(VertexSet::try_from_members(3, [3]).is_none());
    }

    #[test]
    fn equality_includes_universe() {
        assert_ne!(VertexSet::empty(3), VertexSet::empty(4));
    }

    proptest! {
        #[test]
        fn complement_partitions_universe(members in proptest::collection::btree_set(0usize..70, 0..40)) {
            let s = VertexSet::from_members(70, members.iter().copied());
            let c = s.complement();
            prop_assert!(s.is_disjoint(&c));
            prop_assert_eq!(s.len() + c.len(), 70);
            prop_assert_eq!(s.union(&c), VertexSet::full(70));
            prop_assert_eq!(s.to_vec(), members.into_iter().collect::<Vec<_>>());
        }
    }
}
