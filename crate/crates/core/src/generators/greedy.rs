//! Greedy running-intersection generator.
//!
//! At step `t` the generator starts from `I = Z` and walks `L_1 .. L_t`,
//! intersecting `I` with every language that contains `S_t` as long as the
//! intersection stays infinite. It outputs the least unseen element of `I`.

use std::collections::BTreeSet;

use super::{Context, Generator, Prefix};
use crate::collections::{Collection, Language};
use crate::dimensions::nonuniform_complexity;
use crate::error::Result;
use crate::langset::SymbolicSet;

/// `I_t` for the languages `langs = L_1 .. L_t` and inputs `seen = S_t`.
pub fn greedy_intersection(langs: &[Language], seen: &BTreeSet<i64>) -> SymbolicSet {
    let mut acc = SymbolicSet::universe();
    for l in langs {
        if !l.contains_set(seen) {
            continue;
        }
        let next = acc.intersect(l);
        if next.is_infinite() {
            acc = next;
        }
    }
    acc
}

/// The least element of `I_t \ S_t` in canonical order (also avoiding
/// `avoid`, for the no-repeat variant).
pub fn greedy_intersection_next(langs: &[Language], seen: &BTreeSet<i64>, avoid: &BTreeSet<i64>) -> i64 {
    let i = greedy_intersection(langs, seen);
    let z = i
        .iter_canonical()
        .find(|x| !seen.contains(x) && !avoid.contains(x))
        .expect("running intersection is infinite");
    z
}

/// Number of distinct inputs after which greedy is guaranteed correct for
/// target `L_{i_star}`: `max(i_star, m_C(L_{i_star}) + 1)`.
pub fn nonuniform_bound(c: &Collection, i_star: usize) -> Result<usize> {
    Ok(i_star.max(nonuniform_complexity(c, i_star)? + 1))
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Greedy {
    pub no_repeat: bool,
}

impl Generator for Greedy {
    fn name(&self) -> &str {
        "greedy"
    }

    fn next(&self, ctx: &Context<'_>, prefix: &Prefix<'_>) -> Option<i64> {
        let langs = ctx.languages(prefix.t());
        let avoid = if self.no_repeat {
            prefix.emitted()
        } else {
            BTreeSet::new()
        };
        Some(greedy_intersection_next(&langs, &prefix.seen(), &avoid))
    }
}

#[cfg(test)]
mod tests {
    use super::super::testutil::run_step;
    use super::*;
    use crate::collections::build_collection;

    #[test]
    fn worked_examples() {
        let c1 = build_collection("cofinite1", None).unwrap().prefix(3);
        let s = BTreeSet::from([5, 7, 9]);
        assert_eq!(greedy_intersection(&c1, &s), SymbolicSet::cofinite([0, -1]));
        assert_eq!(greedy_intersection_next(&c1, &s, &BTreeSet::new()), 1);

        let one = build_collection("cofinite1", None).unwrap().prefix(1);
        assert_eq!(
            greedy_intersection_next(&one, &BTreeSet::from([0]), &BTreeSet::new()),
            -1
        );

        let t = build_collection("tails", None).unwrap().prefix(3);
        let s = BTreeSet::from([0, 1, 2]);
        assert_eq!(greedy_intersection(&t, &s), SymbolicSet::tail(0));
        assert_eq!(greedy_intersection_next(&t, &s, &BTreeSet::new()), 3);
    }

    #[test]
    fn finite_intersections_are_skipped() {
        // L^E_1 and L^O_1 meet in {1}; the second one must be skipped.
        let eo = build_collection("evenodd", None).unwrap().prefix(2);
        let s = BTreeSet::from([1]);
        assert_eq!(greedy_intersection(&eo, &s), eo[0].body().clone());
    }

    #[test]
    fn bounds() {
        let eo = build_collection("evenodd", None).unwrap();
        assert_eq!(nonuniform_bound(&eo, 4).unwrap(), 4);
        assert_eq!(nonuniform_bound(&eo, 1).unwrap(), 1);
        let c1 = build_collection("cofinite1", None).unwrap();
        assert_eq!(nonuniform_bound(&c1, 1).unwrap(), 1);
    }

    #[test]
    fn no_repeat_flag_avoids_earlier_outputs() {
        let g = Greedy { no_repeat: true };
        let (z, _) = run_step(&g, "cofinite1", &[0]);
        assert_eq!(z, Some(-1));
    }
}
