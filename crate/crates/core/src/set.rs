use std::fmt;

use fixedbitset::FixedBitSet;

use crate::psg::ElemId;

/// A subset of an instance universe, stored as a bitset over element ids.
///
/// Iteration always yields ids in increasing (canonical) order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElemSet {
    bits: FixedBitSet,
}

impl ElemSet {
    pub fn empty(universe_len: usize) -> Self {
        ElemSet {
            bits: FixedBitSet::with_capacity(universe_len),
        }
    }

    pub fn full(universe_len: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe_len);
        bits.insert_range(..);
        ElemSet { bits }
    }

    pub fn from_ids<I: IntoIterator<Item = ElemId>>(universe_len: usize, ids: I) -> Self {
        let mut s = Self::empty(universe_len);
        for id in ids {
            s.insert(id);
        }
        s
    }

    /// Size of the universe this set lives in (not the number of members).
    pub fn universe_len(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, id: ElemId) -> bool {
        self.bits.contains(id.index())
    }

    pub fn insert(&mut self, id: ElemId) {
        self.bits.insert(id.index());
    }

    pub fn remove(&mut self, id: ElemId) {
        self.bits.set(id.index(), false);
    }

    pub fn iter(&self) -> impl Iterator<Item = ElemId> + '_ {
        self.bits.ones().map(|i| ElemId(i as u32))
    }

    pub fn first(&self) -> Option<ElemId> {
        self.bits.minimum().map(|i| ElemId(i as u32))
    }

    pub fn intersect_with(&mut self, other: &ElemSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn union_with(&mut self, other: &ElemSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &ElemSet) {
        self.bits.difference_with(&other.bits);
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn complement(&self) -> ElemSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        ElemSet { bits }
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe_len()
    }

    pub fn to_vec(&self) -> Vec<ElemId> {
        self.iter().collect()
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|e| e.0)).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_algebra() {
        let a = ElemSet::from_ids(8, [ElemId(1), ElemId(3), ElemId(5)]);
        let b = ElemSet::from_ids(8, [ElemId(3), ElemId(4)]);
        assert_eq!(a.intersection(&b).to_vec(), vec![ElemId(3)]);
        assert_eq!(a.complement().len(), 5);
        assert!(ElemSet::from_ids(8, [ElemId(3)]).is_subset(&a));
        assert!(ElemSet::full(8).is_full());
        assert_eq!(a.first(), Some(ElemId(1)));
        assert!(ElemSet::empty(8).is_empty());
    }
}
