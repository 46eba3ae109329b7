//! Growable bit set over atom ids.

use fixedbitset::FixedBitSet;

use super::table::AtomId;

/// A set of atom ids. Ids beyond the current capacity are simply absent.
#[derive(Clone, Debug, Default)]
pub struct AtomSet {
    bits: FixedBitSet,
}

impl AtomSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        AtomSet { bits: FixedBitSet::with_capacity(n) }
    }

    /// The set `{0, …, n-1}`.
    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        AtomSet { bits }
    }

    pub fn contains(&self, a: AtomId) -> bool {
        self.bits.contains(a as usize)
    }

    /// Inserts `a`; returns true if it was newly added.
    pub fn insert(&mut self, a: AtomId) -> bool {
        let i = a as usize;
        if i >= self.bits.len() {
            self.bits.grow(i + 1);
        }
        !self.bits.put(i)
    }

    pub fn remove(&mut self, a: AtomId) -> bool {
        let i = a as usize;
        if i >= self.bits.len() {
            return false;
        }
        let was = self.bits.contains(i);
        self.bits.set(i, false);
        was
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.bits.ones().map(|i| i as AtomId)
    }

    pub fn union_with(&mut self, other: &AtomSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.iter().all(|a| other.contains(a))
    }

    pub fn difference(&self, other: &AtomSet) -> AtomSet {
        self.iter().filter(|&a| !other.contains(a)).collect()
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        self.iter().filter(|&a| other.contains(a)).collect()
    }

    pub fn to_vec(&self) -> Vec<AtomId> {
        self.iter().collect()
    }
}

impl PartialEq for AtomSet {
    fn eq(&self, other: &Self) -> bool {
        self.iter().eq(other.iter())
    }
}

impl Eq for AtomSet {}

impl FromIterator<AtomId> for AtomSet {
    fn from_iter<I: IntoIterator<Item = AtomId>>(iter: I) -> Self {
        let mut s = AtomSet::new();
        for a in iter {
            s.insert(a);
        }
        s
    }
}

impl Extend<AtomId> for AtomSet {
    fn extend<I: IntoIterator<Item = AtomId>>(&mut self, iter: I) {
        for a in iter {
            self.insert(a);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_ignores_capacity() {
        let mut a = AtomSet::with_capacity(100);
        a.insert(3);
        let b: AtomSet = [3].into_iter().collect();
        assert_eq!(a, b);
        assert!(a.insert(70));
        assert!(!a.insert(70));
        assert_ne!(a, b);
        assert!(b.is_subset(&a));
        assert_eq!(a.difference(&b).to_vec(), vec![70]);
    }
}
