use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

/// A set of edge indices packed into a single machine word.
///
/// Everything in this crate addresses edges by their index in
/// [`OrderedGraph::edges`](crate::OrderedGraph::edges), so a set of edges is a
/// bitmask. The word is 64 bits wide, which caps instances at 64 edges; the
/// subset-enumeration solvers impose their own, much smaller limits on top.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EdgeSubset(pub u64);

/// Hard cap implied by the bitmask representation.
pub const MAX_EDGES: usize = 64;

impl EdgeSubset {
    pub const EMPTY: EdgeSubset = EdgeSubset(0);

    /// The full set {0, .., m-1}.
    pub fn full(m: usize) -> Self {
        debug_assert!(m <= MAX_EDGES);
        if m == MAX_EDGES {
            EdgeSubset(!0)
        } else {
            EdgeSubset((1u64 << m) - 1)
        }
    }

    pub fn single(e: usize) -> Self {
        EdgeSubset(1u64 << e)
    }

    pub fn contains(self, e: usize) -> bool {
        self.0 >> e & 1 == 1
    }

    pub fn insert(&mut self, e: usize) {
        self.0 |= 1u64 << e;
    }

    pub fn remove(&mut self, e: usize) {
        self.0 &= !(1u64 << e);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: EdgeSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: EdgeSubset) -> bool {
        self.0 & other.0 != 0
    }

    /// Ascending edge indices.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(e)
        })
    }

    pub fn smallest(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }
}

impl FromIterator<usize> for EdgeSubset {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = EdgeSubset::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

impl BitOr for EdgeSubset {
    type Output = EdgeSubset;
    fn bitor(self, rhs: EdgeSubset) -> EdgeSubset {
        EdgeSubset(self.0 | rhs.0)
    }
}

impl BitAnd for EdgeSubset {
    type Output = EdgeSubset;
    fn bitand(self, rhs: EdgeSubset) -> EdgeSubset {
        EdgeSubset(self.0 & rhs.0)
    }
}

impl Sub for EdgeSubset {
    type Output = EdgeSubset;
    fn sub(self, rhs: EdgeSubset) -> EdgeSubset {
        EdgeSubset(self.0 & !rhs.0)
    }
}

impl fmt::Debug for EdgeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
