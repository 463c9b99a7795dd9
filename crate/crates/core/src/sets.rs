//! Bitset-backed sets of node and edge identifiers.
//!
//! Both set types store their members in 64-bit words. Sets over at most 64
//! identifiers live inline without allocating; larger universes spill to the
//! heap. Complements are always taken with respect to an explicit universe
//! size, since a set does not know which graph it belongs to.

use smallvec::{smallvec, SmallVec};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

type Words = SmallVec<[u64; 1]>;

macro_rules! id_set {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Default)]
        pub struct $name {
            words: Words,
        }

        impl $name {
            pub fn new() -> Self {
                Self { words: SmallVec::new() }
            }

            /// The set `{0, 1, ..., n-1}`.
            pub fn full(n: usize) -> Self {
                let mut words: Words = smallvec![u64::MAX; n / 64];
                if n % 64 != 0 {
                    words.push((1u64 << (n % 64)) - 1);
                }
                let mut set = Self { words };
                set.trim();
                set
            }

            pub fn singleton(x: usize) -> Self {
                let mut s = Self::new();
                s.insert(x);
                s
            }

            /// Builds a set from the low bits of `mask`.
            pub fn from_mask(mask: u64) -> Self {
                let mut set = Self { words: smallvec![mask] };
                set.trim();
                set
            }

            /// The members as a bit mask, if they all fit below 64.
            pub fn to_mask(&self) -> Option<u64> {
                match self.words.len() {
                    0 => Some(0),
                    1 => Some(self.words[0]),
                    _ => None,
                }
            }

            fn trim(&mut self) {
                while self.words.last() == Some(&0) {
                    self.words.pop();
                }
            }

            pub fn insert(&mut self, x: usize) -> bool {
                let (w, b) = (x / 64, x % 64);
                if self.words.len() <= w {
                    self.words.resize(w + 1, 0);
                }
                let had = self.words[w] & (1 << b) != 0;
                self.words[w] |= 1 << b;
                !had
            }

            pub fn remove(&mut self, x: usize) -> bool {
                let (w, b) = (x / 64, x % 64);
                if w >= self.words.len() {
                    return false;
                }
                let had = self.words[w] & (1 << b) != 0;
                self.words[w] &= !(1 << b);
                self.trim();
                had
            }

            #[inline]
            pub fn contains(&self, x: usize) -> bool {
                let (w, b) = (x / 64, x % 64);
                w < self.words.len() && self.words[w] & (1 << b) != 0
            }

            pub fn len(&self) -> usize {
                self.words.iter().map(|w| w.count_ones() as usize).sum()
            }

            pub fn is_empty(&self) -> bool {
                self.words.is_empty()
            }

            /// Smallest member.
            pub fn first(&self) -> Option<usize> {
                self.iter().next()
            }

            pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
                self.words.iter().enumerate().flat_map(|(wi, &word)| {
                    let mut rest = word;
                    std::iter::from_fn(move || {
                        if rest == 0 {
                            return None;
                        }
                        let b = rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        Some(wi * 64 + b)
                    })
                })
            }

            pub fn union(&self, other: &Self) -> Self {
                let len = self.words.len().max(other.words.len());
                let words = (0..len)
                    .map(|i| self.word(i) | other.word(i))
                    .collect();
                Self { words }
            }

            pub fn intersection(&self, other: &Self) -> Self {
                let len = self.words.len().min(other.words.len());
                let mut set = Self {
                    words: (0..len).map(|i| self.word(i) & other.word(i)).collect(),
                };
                set.trim();
                set
            }

            pub fn difference(&self, other: &Self) -> Self {
                let mut set = Self {
                    words: (0..self.words.len())
                        .map(|i| self.word(i) & !other.word(i))
                        .collect(),
                };
                set.trim();
                set
            }

            /// `{0..n} - self`.
            pub fn complement(&self, n: usize) -> Self {
                Self::full(n).difference(self)
            }

            pub fn is_subset(&self, other: &Self) -> bool {
                (0..self.words.len()).all(|i| self.word(i) & !other.word(i) == 0)
            }

            pub fn is_disjoint(&self, other: &Self) -> bool {
                (0..self.words.len().min(other.words.len()))
                    .all(|i| self.word(i) & other.word(i) == 0)
            }

            #[inline]
            fn word(&self, i: usize) -> u64 {
                self.words.get(i).copied().unwrap_or(0)
            }

            /// Ascending member list.
            pub fn to_vec(&self) -> Vec<usize> {
                self.iter().collect()
            }
        }

        impl PartialEq for $name {
            fn eq(&self, other: &Self) -> bool {
                self.words == other.words
            }
        }

        impl Eq for $name {}

        impl Hash for $name {
            fn hash<H: Hasher>(&self, state: &mut H) {
                self.words.hash(state);
            }
        }

        /// Lexicographic order of the ascending member sequences.
        impl Ord for $name {
            fn cmp(&self, other: &Self) -> Ordering {
                self.iter().cmp(other.iter())
            }
        }

        impl PartialOrd for $name {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }

        impl FromIterator<usize> for $name {
            fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
                let mut s = Self::new();
                for x in iter {
                    s.insert(x);
                }
                s
            }
        }

        impl<const N: usize> From<[usize; N]> for $name {
            fn from(items: [usize; N]) -> Self {
                items.into_iter().collect()
            }
        }

        impl Extend<usize> for $name {
            fn extend<I: IntoIterator<Item = usize>>(&mut self, iter: I) {
                for x in iter {
                    self.insert(x);
                }
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_set().entries(self.iter()).finish()
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{{")?;
                for (i, x) in self.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "}}")
            }
        }
    };
}

id_set!(
    /// A subset of the nodes `0..n` of some graph.
    NodeSet
);

id_set!(
    /// A subset of edge ids.
    EdgeSet
);

/// Iterates over every subset of `{0..n}` as a [`NodeSet`], in mask order.
///
/// Panics if `n >= 64`; callers enforce much smaller caps.
pub fn all_subsets(n: usize) -> impl Iterator<Item = NodeSet> {
    assert!(n < 64, "subset enumeration over {n} nodes");
    (0..1u64 << n).map(NodeSet::from_mask)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_and_complement() {
        let s = NodeSet::from([1, 3]);
        assert_eq!(s.complement(5), NodeSet::from([0, 2, 4]));
        assert_eq!(NodeSet::full(0), NodeSet::new());
        assert_eq!(NodeSet::full(64).len(), 64);
        assert_eq!(NodeSet::full(130).len(), 130);
        assert!(NodeSet::full(70).contains(69));
        assert!(!NodeSet::full(70).contains(70));
    }

    #[test]
    fn growable_beyond_one_word() {
        let mut s = NodeSet::new();
        s.insert(200);
        s.insert(3);
        assert_eq!(s.to_vec(), vec![3, 200]);
        assert_eq!(s.to_mask(), None);
        s.remove(200);
        assert_eq!(s.to_mask(), Some(8));
        assert_eq!(s, NodeSet::from([3]));
    }

    #[test]
    fn lexicographic_order() {
        // [0,1,2,4,5] < [0,1,3,4,5] < [0,2,3,4,5] < [1,2,3,4,5]
        let a = EdgeSet::from([0, 1, 2, 4, 5]);
        let b = EdgeSet::from([0, 1, 3, 4, 5]);
        let c = EdgeSet::from([1, 2, 3, 4, 5]);
        assert!(a < b && b < c);
        // a prefix sorts first
        assert!(EdgeSet::from([0]) < EdgeSet::from([0, 1]));
        assert!(EdgeSet::new() < EdgeSet::from([0]));
    }

    proptest! {
        #[test]
        fn set_algebra_matches_masks(a in any::<u64>(), b in any::<u64>()) {
            let (sa, sb) = (NodeSet::from_mask(a), NodeSet::from_mask(b));
            prop_assert_eq!(sa.union(&sb).to_mask(), Some(a | b));
            prop_assert_eq!(sa.intersection(&sb).to_mask(), Some(a & b));
            prop_assert_eq!(sa.difference(&sb).to_mask(), Some(a & !b));
            prop_assert_eq!(sa.is_subset(&sb), a & !b == 0);
            prop_assert_eq!(sa.len(), a.count_ones() as usize);
        }
    }
}
