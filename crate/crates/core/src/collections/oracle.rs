//! Oracle facade over a collection, with call counters.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use super::{Collection, Language};
use crate::error::Result;
use crate::langset::SymbolicSet;

/// Narrow interface for algorithms that may only ask "is `w` in `L_i`?".
pub trait MembershipOracle {
    fn member(&self, i: usize, w: i64) -> Result<bool>;
}

/// Number of calls made to each oracle.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCounts {
    pub membership: u64,
    pub infinite_intersection: u64,
    pub subset: u64,
    pub finite_difference: u64,
}

impl OracleCounts {
    pub fn non_membership(&self) -> u64 {
        self.infinite_intersection + self.subset + self.finite_difference
    }
}

/// The four oracles of a collection. Every answer is computed from the
/// language bodies with the set algebra; the facade only adds counting and
/// a cache of the first languages.
#[derive(Debug)]
pub struct Oracles<'a> {
    collection: &'a Collection,
    cache: Vec<Language>,
    membership: AtomicU64,
    infinite_intersection: AtomicU64,
    subset: AtomicU64,
    finite_difference: AtomicU64,
}

impl<'a> Oracles<'a> {
    /// Facade caching `L_1 .. L_n`.
    pub fn new(collection: &'a Collection, n: usize) -> Self {
        Oracles {
            collection,
            cache: collection.prefix(n),
            membership: AtomicU64::new(0),
            infinite_intersection: AtomicU64::new(0),
            subset: AtomicU64::new(0),
            finite_difference: AtomicU64::new(0),
        }
    }

    pub fn collection(&self) -> &Collection {
        self.collection
    }

    fn with_language<T>(&self, i: usize, f: impl FnOnce(&SymbolicSet) -> T) -> Result<T> {
        match self.cache.get(i.wrapping_sub(1)) {
            Some(l) => Ok(f(l)),
            None => Ok(f(self.collection.language(i)?.body())),
        }
    }

    fn language(&self, i: usize) -> Result<Language> {
        match self.cache.get(i.wrapping_sub(1)) {
            Some(l) => Ok(l.clone()),
            None => self.collection.language(i),
        }
    }

    /// Is the intersection of the indexed languages infinite? The empty
    /// index set intersects to the whole universe.
    pub fn infinite_intersection(&self, indices: &BTreeSet<usize>) -> Result<bool> {
        self.infinite_intersection.fetch_add(1, Ordering::Relaxed);
        let mut acc = SymbolicSet::universe();
        for &i in indices {
            acc = self.with_language(i, |l| acc.intersect(l))?;
        }
        Ok(acc.is_infinite())
    }

    /// Is `L_i \ L_j` finite?
    pub fn finite_difference(&self, i: usize, j: usize) -> Result<bool> {
        self.finite_difference.fetch_add(1, Ordering::Relaxed);
        let lj = self.language(j)?;
        self.with_language(i, |li| li.difference(&lj).is_finite())
    }

    /// Is `L_i` a subset of `L_j`?
    pub fn subset(&self, i: usize, j: usize) -> Result<bool> {
        self.subset.fetch_add(1, Ordering::Relaxed);
        let lj = self.language(j)?;
        self.with_language(i, |li| li.is_subset(&lj))
    }

    pub fn counts(&self) -> OracleCounts {
        OracleCounts {
            membership: self.membership.load(Ordering::Relaxed),
            infinite_intersection: self.infinite_intersection.load(Ordering::Relaxed),
            subset: self.subset.load(Ordering::Relaxed),
            finite_difference: self.finite_difference.load(Ordering::Relaxed),
        }
    }
}

impl MembershipOracle for Oracles<'_> {
    fn member(&self, i: usize, w: i64) -> Result<bool> {
        self.membership.fetch_add(1, Ordering::Relaxed);
        self.with_language(i, |l| l.member(w))
    }
}

#[cfg(test)]
mod tests {
    use super::super::build_collection;
    use super::*;

    #[test]
    fn membership_examples() {
        let c1 = build_collection("cofinite1", None).unwrap();
        let o = Oracles::new(&c1, 4);
        assert!(!o.member(2, 0).unwrap());
        let t = build_collection("tails", None).unwrap();
        assert!(Oracles::new(&t, 4).member(1, -100).unwrap());
        let eo = build_collection("evenodd", None).unwrap();
        assert!(!Oracles::new(&eo, 4).member(2, -2).unwrap());
        assert_eq!(o.counts().membership, 1);
    }

    #[test]
    fn intersection_examples() {
        let t = build_collection("tails", None).unwrap();
        let o = Oracles::new(&t, 16);
        // L_inf, tail(0), tail(-5): tail(-5) sits at canonical rank 9, index 11
        assert!(o.infinite_intersection(&BTreeSet::from([1, 2, 11])).unwrap());
        let eo = build_collection("evenodd", None).unwrap();
        let o = Oracles::new(&eo, 8);
        assert!(!o.infinite_intersection(&BTreeSet::from([5, 6])).unwrap());
        assert!(o.infinite_intersection(&BTreeSet::new()).unwrap());
    }

    #[test]
    fn difference_and_subset_examples() {
        let c1 = build_collection("cofinite1", None).unwrap();
        let o = Oracles::new(&c1, 16);
        // Z \ {3} is index rank(3) + 2 = 8
        assert!(o.finite_difference(1, 8).unwrap());
        assert!(!o.subset(1, 4).unwrap());
        assert!(o.subset(3, 3).unwrap());
        let t = build_collection("tails", None).unwrap();
        let o = Oracles::new(&t, 4);
        assert!(!o.finite_difference(1, 2).unwrap());
        assert!(o.subset(2, 3).unwrap());
        assert!(o.finite_difference(2, 2).unwrap());
        assert_eq!(o.counts().non_membership(), 3);
        assert_eq!(o.counts().membership, 0);
    }

    #[test]
    fn out_of_range_reported() {
        let s = build_collection("singleton", None).unwrap();
        let o = Oracles::new(&s, 4);
        assert!(o.member(2, 0).is_err());
        assert!(o.subset(1, 2).is_err());
    }
}
