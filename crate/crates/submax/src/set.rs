//! Dense ground sets and the bitset-backed element sets used everywhere else.
//!
//! Elements are identified by contiguous ids `0..n`. All subsets, samples,
//! spans and solutions are [`ElementSet`]s over the same id space, so views
//! (contractions, restrictions) never reindex.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::fmt;

/// Contiguous ground set `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        0..self.n
    }

    pub fn empty_set(&self) -> ElementSet {
        ElementSet::empty(self.n)
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.n)
    }
}

/// Fixed-capacity set of element ids, stored as a bitmask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet {
    words: Vec<u64>,
    capacity: usize,
}

impl ElementSet {
    pub fn empty(capacity: usize) -> Self {
        Self {
            words: vec![0; capacity.div_ceil(64)],
            capacity,
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::empty(capacity);
        for e in 0..capacity {
            s.insert(e);
        }
        s
    }

    pub fn singleton(capacity: usize, e: usize) -> Self {
        let mut s = Self::empty(capacity);
        s.insert(e);
        s
    }

    pub fn from_ids<I: IntoIterator<Item = usize>>(capacity: usize, ids: I) -> Self {
        let mut s = Self::empty(capacity);
        for e in ids {
            s.insert(e);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn insert(&mut self, e: usize) {
        assert!(
            e < self.capacity,
            "element {e} out of range {}",
            self.capacity
        );
        self.words[e / 64] |= 1u64 << (e % 64);
    }

    pub fn remove(&mut self, e: usize) {
        assert!(e < self.capacity);
        self.words[e / 64] &= !(1u64 << (e % 64));
    }

    pub fn contains(&self, e: usize) -> bool {
        e < self.capacity && self.words[e / 64] >> (e % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        debug_assert_eq!(self.capacity, other.capacity);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &ElementSet) {
        debug_assert_eq!(self.capacity, other.capacity);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &ElementSet) {
        debug_assert_eq!(self.capacity, other.capacity);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        let mut s = self.clone();
        s.subtract(other);
        s
    }

    pub fn with(&self, e: usize) -> ElementSet {
        let mut s = self.clone();
        s.insert(e);
        s
    }

    pub fn without(&self, e: usize) -> ElementSet {
        let mut s = self.clone();
        s.remove(e);
        s
    }

    pub fn is_subset_of(&self, other: &ElementSet) -> bool {
        debug_assert_eq!(self.capacity, other.capacity);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &ElementSet) -> bool {
        debug_assert_eq!(self.capacity, other.capacity);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn iter(&self) -> SetIter<'_> {
        SetIter {
            set: self,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn ids(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Interpret a `0..2^capacity` mask as a set; only usable for small grounds.
    pub fn from_mask(capacity: usize, mask: u64) -> Self {
        assert!(capacity <= 63);
        let mut s = Self::empty(capacity);
        if capacity > 0 {
            s.words[0] = mask;
        }
        s
    }
}

pub struct SetIter<'a> {
    set: &'a ElementSet,
    word_idx: usize,
    current: u64,
}

impl Iterator for SetIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_idx * 64 + bit);
            }
            self.word_idx += 1;
            if self.word_idx >= self.set.words.len() {
                return None;
            }
            self.current = self.set.words[self.word_idx];
        }
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ElementSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let ids = self.ids();
        let mut seq = serializer.serialize_seq(Some(ids.len()))?;
        for e in ids {
            seq.serialize_element(&e)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_ops() {
        let mut s = ElementSet::empty(100);
        assert!(s.is_empty());
        s.insert(0);
        s.insert(63);
        s.insert(64);
        s.insert(99);
        assert_eq!(s.len(), 4);
        assert!(s.contains(63) && s.contains(64));
        assert!(!s.contains(1));
        s.remove(63);
        assert_eq!(s.ids(), vec![0, 64, 99]);
    }

    #[test]
    fn full_and_complement_sizes() {
        let g = GroundSet::new(70);
        assert_eq!(g.full_set().len(), 70);
        assert_eq!(g.empty_set().len(), 0);
    }

    proptest! {
        #[test]
        fn union_intersection_laws(a in prop::collection::vec(0usize..90, 0..40),
                                   b in prop::collection::vec(0usize..90, 0..40)) {
            let sa = ElementSet::from_ids(90, a.iter().copied());
            let sb = ElementSet::from_ids(90, b.iter().copied());
            let u = sa.union(&sb);
            let i = sa.intersection(&sb);
            prop_assert!(sa.is_subset_of(&u) && sb.is_subset_of(&u));
            prop_assert!(i.is_subset_of(&sa) && i.is_subset_of(&sb));
            prop_assert_eq!(u.len() + i.len(), sa.len() + sb.len());
            let d = sa.difference(&sb);
            prop_assert!(d.is_disjoint_from(&sb));
            prop_assert_eq!(d.len() + i.len(), sa.len());
        }

        #[test]
        fn iter_round_trips(ids in prop::collection::btree_set(0usize..200, 0..60)) {
            let s = ElementSet::from_ids(200, ids.iter().copied());
            prop_assert_eq!(s.ids(), ids.into_iter().collect::<Vec<_>>());
        }
    }
}
