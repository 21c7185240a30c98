//! The echo adversary for the cofinite12 collection: it replays every
//! unseen query as its next input and says yes to everything until round
//! `d`, where it answers truthfully about `S_d`.

use std::collections::BTreeSet;

use crate::generators::FeedbackStep;
use crate::langset::{CanonicalOrder, SymbolicSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EchoAdversary {
    pub d: usize,
}

fn seen(rounds: &[FeedbackStep]) -> BTreeSet<i64> {
    rounds.iter().map(|r| r.x).collect()
}

impl EchoAdversary {
    /// `x_t` given rounds `1 .. t-1`: the previous query if it was not an
    /// input yet, otherwise the least unseen integer.
    pub fn input(&self, rounds: &[FeedbackStep]) -> i64 {
        let s = seen(rounds);
        match rounds.last().and_then(|r| r.y) {
            Some(y) if !s.contains(&y) => y,
            _ => CanonicalOrder::iter().find(|x| !s.contains(x)).expect("infinite"),
        }
    }

    /// `a_t` for the query `y` asked after input `x` (rounds `1 .. t-1` given).
    pub fn answer(&self, rounds: &[FeedbackStep], x: i64, y: i64) -> bool {
        let t = rounds.len() + 1;
        if t < self.d {
            return true;
        }
        if t == self.d {
            let mut s = seen(rounds);
            s.insert(x);
            return s.contains(&y);
        }
        self.target(rounds).member(y)
    }

    /// The committed language once `d` rounds are known: `Z` minus one
    /// untouched integer after a final yes, or `Z \ {y_d, j}` after a final no.
    pub fn target(&self, rounds: &[FeedbackStep]) -> SymbolicSet {
        let head = &rounds[..self.d.min(rounds.len())];
        let mut touched = seen(head);
        touched.extend(head.iter().filter_map(|r| r.y));
        let spare = CanonicalOrder::iter().find(|x| !touched.contains(x)).expect("infinite");
        match head.last() {
            Some(FeedbackStep {
                y: Some(y),
                a: Some(false),
                ..
            }) => SymbolicSet::cofinite([*y, spare]),
            _ => SymbolicSet::cofinite([spare]),
        }
    }
}

/// The first `d` rounds against the generator whose queries are `queries`
/// (this fixes every deterministic generator up to its outputs, which do not
/// matter for consistency).
pub fn echo_play(adv: &EchoAdversary, queries: &[Option<i64>]) -> Vec<FeedbackStep> {
    let mut rounds = Vec::with_capacity(queries.len());
    for y in queries {
        let x = adv.input(&rounds);
        let a = y.map(|y| adv.answer(&rounds, x, y));
        rounds.push(FeedbackStep { x, y: *y, a, z: None });
    }
    rounds
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collections::build_collection;
    use crate::dimensions::{effective_intersection, Observations, Scope};

    #[test]
    fn echoes_unseen_queries() {
        let adv = EchoAdversary { d: 2 };
        let r = echo_play(&adv, &[Some(5), Some(7)]);
        assert_eq!(r[0].x, 0);
        assert_eq!(r[1].x, 5);
        assert_eq!(r[0].a, Some(true));
        assert_eq!(r[1].a, Some(false));
        let r = echo_play(&adv, &[Some(0), Some(0)]);
        assert_eq!(r[1].x, -1);
        assert_eq!(r[1].a, Some(true));
    }

    #[test]
    fn reaches_empty_effective_intersection() {
        let c = build_collection("cofinite12", None).unwrap();
        let adv = EchoAdversary { d: 2 };
        for q in [[Some(3), Some(4)], [None, Some(0)], [Some(-1), None]] {
            let r = echo_play(&adv, &q);
            let obs = Observations::from_rounds(&r, 2);
            assert_eq!(obs.seen.len(), 2);
            assert!(effective_intersection(&c, &obs, Scope::Exact).unwrap().is_empty());
            let k = adv.target(&r);
            assert!(r.iter().all(|s| k.member(s.x)));
            assert!(r.iter().all(|s| s.y.is_none() || Some(k.member(s.y.unwrap())) == s.a));
        }
    }
}
