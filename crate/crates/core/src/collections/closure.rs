//! Closed forms for intersections over a whole built-in collection.

use std::collections::BTreeSet;

use super::{evenodd_block, evenodd_block_of, Collection, Family, Language};
use crate::langset::{CanonicalOrder, SymbolicSet};

/// Intersection of the languages in `langs` containing `pos` and avoiding `neg`.
pub(super) fn over(langs: &[Language], pos: &BTreeSet<i64>, neg: &BTreeSet<i64>) -> Option<SymbolicSet> {
    let mut acc: Option<SymbolicSet> = None;
    for l in langs {
        if l.contains_all(pos) && !neg.iter().any(|x| l.member(*x)) {
            acc = Some(match acc {
                None => l.body().clone(),
                Some(a) => a.intersect(l),
            });
        }
    }
    acc
}

pub(super) fn exact(c: &Collection, pos: &BTreeSet<i64>, neg: &BTreeSet<i64>) -> Option<SymbolicSet> {
    if pos.iter().any(|x| neg.contains(x)) {
        return None;
    }
    match c.family() {
        Family::Explicit(ls) => over(ls, pos, neg),
        Family::Tails => tails(pos, neg),
        Family::Cofinite1 => match neg.len() {
            0 => Some(SymbolicSet::finite(pos.iter().copied())),
            1 => Some(SymbolicSet::cofinite(neg.iter().copied())),
            _ => None,
        },
        Family::Cofinite12 => match neg.len() {
            0 | 1 => Some(SymbolicSet::finite(pos.iter().copied())),
            2 => Some(SymbolicSet::cofinite(neg.iter().copied())),
            _ => None,
        },
        Family::EvenOdd => evenodd(pos, neg),
    }
}

// Languages: Z and tail(s) for every integer s. tail(s) qualifies iff
// max(neg) < s <= min(pos).
fn tails(pos: &BTreeSet<i64>, neg: &BTreeSet<i64>) -> Option<SymbolicSet> {
    match (pos.first(), neg.last()) {
        (Some(p), Some(n)) if p <= n => None,
        (Some(p), _) => Some(SymbolicSet::tail(*p)),
        (None, _) => Some(SymbolicSet::empty()),
    }
}

fn evenodd(pos: &BTreeSet<i64>, neg: &BTreeSet<i64>) -> Option<SymbolicSet> {
    if pos.contains(&0) {
        return None;
    }
    let positive: Vec<i64> = pos.iter().copied().filter(|x| *x > 0).collect();
    let fixed = match positive.first() {
        None => None,
        Some(x) => {
            let d = evenodd_block_of(*x).expect("positive");
            if positive.iter().any(|y| evenodd_block_of(*y) != Some(d)) {
                return None;
            }
            Some(d)
        }
    };
    let side = |base: SymbolicSet| -> Option<SymbolicSet> {
        if pos.iter().any(|x| *x < 0 && !base.member(*x)) || neg.iter().any(|x| base.member(*x)) {
            return None;
        }
        let ok = |d: u64| !neg.iter().any(|x| evenodd_block_of(*x) == Some(d));
        match fixed {
            Some(d) => ok(d).then(|| base.union(&evenodd_block(d))),
            // Every block avoiding `neg` qualifies; all but finitely many do,
            // and two distinct blocks already intersect to the base.
            None => Some(base),
        }
    };
    match (side(SymbolicSet::evens_neg()), side(SymbolicSet::odds_neg())) {
        (None, None) => None,
        (Some(a), None) | (None, Some(a)) => Some(a),
        (Some(a), Some(b)) => Some(a.intersect(&b)),
    }
}

fn rank_index(x: i64) -> usize {
    CanonicalOrder::rank(x) as usize
}

pub(super) fn sufficient_prefix(c: &Collection, m: u64) -> usize {
    let m = m as i64;
    match c.family() {
        Family::Explicit(ls) => ls.len(),
        // Tails starting anywhere in [-m, m+1], plus Z.
        Family::Tails => rank_index(m + 1) + 2,
        // Every point of the window, plus one point outside it.
        Family::Cofinite1 => rank_index(m + 1) + 2,
        Family::Cofinite12 => {
            let r = rank_index(m + 1);
            (r * (r + 1)).max(2 * r + 1)
        }
        Family::EvenOdd => {
            let d = evenodd_block_of(m.max(1)).expect("positive") as usize;
            2 * (d + 2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::build_collection;
    use super::*;
    use proptest::prelude::*;

    fn set(xs: &[i64]) -> BTreeSet<i64> {
        xs.iter().copied().collect()
    }

    #[test]
    fn closed_forms() {
        let t = build_collection("tails", None).unwrap();
        assert_eq!(t.closure(&set(&[0, 1]), &set(&[])), Some(SymbolicSet::tail(0)));
        assert_eq!(t.closure(&set(&[]), &set(&[])), Some(SymbolicSet::empty()));
        assert_eq!(t.closure(&set(&[0]), &set(&[0])), None);
        let c1 = build_collection("cofinite1", None).unwrap();
        assert_eq!(c1.closure(&set(&[0, 1]), &set(&[])), Some(SymbolicSet::finite([0, 1])));
        assert_eq!(c1.closure(&set(&[0, 1]), &set(&[5])), Some(SymbolicSet::cofinite([5])));
        let c12 = build_collection("cofinite12", None).unwrap();
        assert_eq!(c12.closure(&set(&[1, 2]), &set(&[])), Some(SymbolicSet::finite([1, 2])));
        assert_eq!(
            c12.closure(&set(&[1]), &set(&[3, 4])),
            Some(SymbolicSet::cofinite([3, 4]))
        );
        let eo = build_collection("evenodd", None).unwrap();
        assert_eq!(eo.closure(&set(&[2, 3]), &set(&[])), Some(SymbolicSet::finite([2, 3])));
        assert_eq!(eo.closure(&set(&[-2]), &set(&[])), Some(SymbolicSet::evens_neg()));
        assert_eq!(
            eo.closure(&set(&[-2, 1]), &set(&[])),
            Some(SymbolicSet::evens_neg().union(&SymbolicSet::finite([1])))
        );
        assert_eq!(eo.closure(&set(&[1, 2]), &set(&[])), None);
    }

    fn window_set(lo: i64, hi: i64) -> impl Strategy<Value = BTreeSet<i64>> {
        proptest::collection::btree_set(lo..=hi, 0..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn sufficient_prefix_matches_closed_form(
            name in prop::sample::select(vec!["tails", "cofinite1", "evenodd", "cofinite12"]),
            pos in window_set(-6, 6),
            neg in window_set(-6, 6),
        ) {
            let m = 6u64;
            let c = build_collection(name, None).unwrap();
            let n = c.sufficient_prefix(m);
            let exact = c.closure(&pos, &neg);
            let pre = c.prefix_closure(n, &pos, &neg);
            let next = c.prefix_closure(n + 8, &pos, &neg);
            let win = |s: &Option<SymbolicSet>| s.as_ref().map(|s| s.members_in(-(m as i64), m as i64));
            prop_assert_eq!(win(&exact), win(&pre));
            prop_assert_eq!(win(&pre), win(&next));
        }
    }
}
