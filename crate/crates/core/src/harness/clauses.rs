//! Generate-only requirements evaluated on symbolic supports.

use std::collections::BTreeSet;

use crate::langset::SymbolicSet;

/// `|Z_{>=t} \ K| < inf`
pub fn finite_excess(support: &SymbolicSet, k: &SymbolicSet) -> bool {
    support.difference(k).is_finite()
}

/// `Z_{>=t} ⊆ K`
pub fn contained(support: &SymbolicSet, k: &SymbolicSet) -> bool {
    support.is_subset(k)
}

/// `K \ (Z_{>=t} ∪ Z_{<t} ∪ S_t)`; coverage holds iff this is empty.
pub fn uncovered(support: &SymbolicSet, k: &SymbolicSet, seen: &BTreeSet<i64>, earlier: &BTreeSet<i64>) -> SymbolicSet {
    let finite = SymbolicSet::finite(seen.iter().chain(earlier).copied());
    k.difference(&support.union(&finite))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clauses_on_small_cases() {
        let k = SymbolicSet::cofinite([3]);
        let z = SymbolicSet::universe();
        assert!(finite_excess(&z, &k));
        assert!(!contained(&z, &k));
        assert!(!finite_excess(&z, &SymbolicSet::tail(0)));
        let gap = uncovered(
            &SymbolicSet::tail(5),
            &k,
            &BTreeSet::from([0, 1]),
            &BTreeSet::from([2, 4]),
        );
        assert_eq!(gap, SymbolicSet::head(-1));
        assert!(uncovered(
            &SymbolicSet::tail(0),
            &SymbolicSet::tail(2),
            &BTreeSet::new(),
            &BTreeSet::new()
        )
        .is_empty());
    }
}
