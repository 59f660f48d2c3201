//! Fixed-width alternative sets.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Not, Sub};

/// Hard upper bound on the number of alternatives any graph can hold.
pub const MAX_ALTERNATIVES: usize = 128;

/// A subset of a graph's alternatives, indexed by the graph's alternative order.
///
/// The set itself does not know which graph it belongs to; operations that
/// take a graph validate that no bit beyond the graph's size is set.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct AltSet(u128);

impl AltSet {
    pub const EMPTY: AltSet = AltSet(0);

    pub const fn from_bits(bits: u128) -> Self {
        AltSet(bits)
    }

    pub const fn bits(self) -> u128 {
        self.0
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_ALTERNATIVES);
        if n == MAX_ALTERNATIVES {
            AltSet(u128::MAX)
        } else {
            AltSet((1u128 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        AltSet(1u128 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(AltSet::EMPTY, |s, i| s.with(i))
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < MAX_ALTERNATIVES && self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        AltSet(self.0 | 1u128 << i)
    }

    #[inline]
    pub fn without(self, i: usize) -> Self {
        AltSet(self.0 & !(1u128 << i))
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u128 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u128 << i);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: AltSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: AltSet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn is_disjoint(self, other: AltSet) -> bool {
        self.0 & other.0 == 0
    }

    /// Index of the highest member plus one (0 for the empty set).
    pub fn span(self) -> usize {
        MAX_ALTERNATIVES - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Sorted member indices.
    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Orders sets by cardinality, then lexicographically on their sorted
    /// member lists. This is the enumeration order of every search.
    pub fn canonical_cmp(self, other: AltSet) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.len().cmp(&other.len()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        // Equal cardinality: the set owning the lowest differing index wins.
        let low = diff.trailing_zeros();
        if self.0 >> low & 1 == 1 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl fmt::Debug for AltSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter(u128);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for AltSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for AltSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        AltSet::from_indices(iter)
    }
}

impl BitOr for AltSet {
    type Output = AltSet;
    fn bitor(self, rhs: AltSet) -> AltSet {
        AltSet(self.0 | rhs.0)
    }
}

impl BitOrAssign for AltSet {
    fn bitor_assign(&mut self, rhs: AltSet) {
        self.0 |= rhs.0;
    }
}

impl BitAnd for AltSet {
    type Output = AltSet;
    fn bitand(self, rhs: AltSet) -> AltSet {
        AltSet(self.0 & rhs.0)
    }
}

impl BitAndAssign for AltSet {
    fn bitand_assign(&mut self, rhs: AltSet) {
        self.0 &= rhs.0;
    }
}

impl Sub for AltSet {
    type Output = AltSet;
    fn sub(self, rhs: AltSet) -> AltSet {
        AltSet(self.0 & !rhs.0)
    }
}

impl Not for AltSet {
    type Output = AltSet;
    fn not(self) -> AltSet {
        AltSet(!self.0)
    }
}
