//! Staged adversary for languages that fail the (weak) existence condition:
//! whenever the inputs so far fit inside a smaller language `L'`, it
//! enumerates `L'` until the generator settles on it, then steps outside.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{fails_at, Goal, LbConfig, LbReport, Outcome, PhaseTrace, Play, ViolationWitness};
use crate::collections::{Collection, Family, Oracles};
use crate::error::Result;
use crate::generators::{Context, Generator};
use crate::langset::SymbolicSet;

/// Which negated condition the finder looks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FinderMode {
    /// `T ⊆ L' ⊊ L` with `|L \ L'|` infinite.
    Exhaustive,
    /// `T ⊆ L' ⊊ L`.
    Breadth,
}

impl FinderMode {
    fn goal(self) -> Goal {
        match self {
            FinderMode::Exhaustive => Goal::Exhaustive,
            FinderMode::Breadth => Goal::Breadth,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Finding {
    Witness {
        index: usize,
        language: SymbolicSet,
    },
    /// No language anywhere in the collection qualifies.
    NoneProved,
    NoneWithinBudget,
}

/// Search `L_1 .. L_budget` for the least-index `L'` with
/// `t ⊆ L' ⊊ l` (and an infinite difference in exhaustive mode).
pub fn find_witness(c: &Collection, l: &SymbolicSet, t: &BTreeSet<i64>, mode: FinderMode, budget: usize) -> Finding {
    for (i, cand) in c.prefix(budget).iter().enumerate() {
        let body = cand.body();
        if !body.contains_set(t) || !body.is_subset(l) || body == l {
            continue;
        }
        if mode == FinderMode::Exhaustive && l.difference(body).is_finite() {
            continue;
        }
        return Finding::Witness {
            index: i + 1,
            language: body.clone(),
        };
    }
    if none_beyond(c, l, t, mode, budget) {
        Finding::NoneProved
    } else {
        Finding::NoneWithinBudget
    }
}

// Structural reasons no language past index `n` can qualify.
fn none_beyond(c: &Collection, l: &SymbolicSet, t: &BTreeSet<i64>, mode: FinderMode, n: usize) -> bool {
    match c.family() {
        Family::Explicit(ls) => n >= ls.len(),
        // Every language is cofinite, so differences with a cofinite `l` are
        // finite; and `Z \ {b}` is never a proper subset of `Z \ {a}`.
        Family::Cofinite1 => {
            (mode == FinderMode::Exhaustive && l.complement().is_finite()) || *l != SymbolicSet::universe()
        }
        Family::Cofinite12 => mode == FinderMode::Exhaustive && l.complement().is_finite(),
        // The blocks are disjoint, so no language sits strictly inside another.
        Family::EvenOdd => true,
        // tail(s') ⊊ tail(s) needs s' > s, and tail(s') ⊇ t needs s' <= min t.
        Family::Tails => match (tail_start(l), t.first()) {
            (Some(s), Some(m)) => *m <= s,
            _ => false,
        },
    }
}

// `s` with `l = tail(s)`.
fn tail_start(l: &SymbolicSet) -> Option<i64> {
    let (a, b) = l.window();
    (a - 1..=b + 1).find(|s| *l == SymbolicSet::tail(*s))
}

/// Run the staged adversary for `L_index` against `g`.
pub fn existence_violation_adversary(
    c: &Collection,
    index: usize,
    g: &dyn Generator,
    mode: FinderMode,
    finder_budget: usize,
    cfg: &LbConfig,
) -> Result<LbReport> {
    let l = c.language(index)?.body().clone();
    let goal = mode.goal();
    let o = Oracles::new(c, cfg.max_rounds.max(finder_budget));
    let ctx = Context::new(&o, cfg.max_rounds);
    let mut play = Play::new(&ctx, g);
    let mut phases = Vec::new();
    let mut witnesses = Vec::new();
    let mut outcome = None;
    // The fixed ordering of `l`, walked by rank.
    let mut cursor = 0u64;
    play.push(l.enumerate_rank(0)?);

    'stages: for stage in 0..cfg.max_phases {
        let t_set = play.seen(play.t());
        let (idx, sub) = match find_witness(c, &l, &t_set, mode, finder_budget) {
            Finding::Witness { index, language } => (index, language),
            Finding::NoneProved => {
                outcome = Some(Outcome::ConditionSatisfied);
                break;
            }
            Finding::NoneWithinBudget => {
                outcome = Some(Outcome::Inconclusive {
                    reason: format!("no witness among the first {finder_budget} languages at stage {stage}"),
                });
                break;
            }
        };
        let mut trace = PhaseTrace {
            phase: stage,
            language: sub.clone(),
            index: Some(idx),
            start: play.t(),
            detected: None,
            marker: None,
            end: 0,
        };
        // Enumerate `sub` in the order of `l`, skipping what was already listed.
        let mut sub_cursor = 0u64;
        loop {
            if cfg.detector.certifies(&play, &sub, goal)? {
                let t = play.t();
                trace.detected = Some(t);
                if fails_at(&play, t, &l, goal) {
                    witnesses.push(ViolationWitness {
                        step: t,
                        phase: stage,
                        language: sub.clone(),
                    });
                }
                break;
            }
            if play.t() >= cfg.max_rounds || play.t() + 1 - trace.start >= cfg.patience {
                trace.end = play.t();
                phases.push(trace);
                outcome = Some(Outcome::Inconclusive {
                    reason: format!("stage {stage} did not settle"),
                });
                break 'stages;
            }
            let seen = play.seen(play.t());
            let x = loop {
                let x = l.enumerate_rank(sub_cursor)?;
                sub_cursor += 1;
                if sub.member(x) && !seen.contains(&x) {
                    break x;
                }
            };
            play.push(x);
        }
        trace.end = play.t();
        phases.push(trace);
        // Step outside: the first unlisted element of `l \ sub` in `l`'s order.
        let seen = play.seen(play.t());
        let x = loop {
            let x = l.enumerate_rank(cursor)?;
            cursor += 1;
            if !sub.member(x) && !seen.contains(&x) {
                break x;
            }
        };
        if play.t() >= cfg.max_rounds {
            break;
        }
        play.push(x);
    }
    let mut r = LbReport::new(goal, c.name(), play, l);
    r.phases = phases;
    r.outcome = match outcome {
        Some(Outcome::ConditionSatisfied) => Outcome::ConditionSatisfied,
        _ if !witnesses.is_empty() => Outcome::Violation,
        Some(o) => o,
        None => Outcome::Inconclusive {
            reason: "no stage produced a failure".into(),
        },
    };
    r.witnesses = witnesses;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collections::build_collection;
    use crate::generators::ExhaustiveCritical;

    fn coll(name: &str) -> Collection {
        build_collection(name, None).unwrap()
    }

    #[test]
    fn finder_examples() {
        let z = SymbolicSet::universe();
        let f = find_witness(&coll("tails"), &z, &BTreeSet::from([0, 3]), FinderMode::Exhaustive, 64);
        assert_eq!(
            f,
            Finding::Witness {
                index: 2,
                language: SymbolicSet::tail(0)
            }
        );
        let f = find_witness(
            &coll("cofinite1"),
            &z,
            &BTreeSet::from([4, -7]),
            FinderMode::Exhaustive,
            64,
        );
        assert_eq!(f, Finding::NoneProved);
        let eo = coll("evenodd");
        let le2 = eo.language(3).unwrap().body().clone();
        assert_eq!(
            find_witness(&eo, &le2, &BTreeSet::new(), FinderMode::Exhaustive, 64),
            Finding::NoneProved
        );
        let f = find_witness(&coll("cofinite1"), &z, &BTreeSet::from([0]), FinderMode::Breadth, 64);
        assert!(matches!(f, Finding::Witness { index: 3, .. }));
        let f = find_witness(&coll("tails"), &z, &BTreeSet::from([40]), FinderMode::Exhaustive, 4);
        assert!(matches!(f, Finding::Witness { .. }));
        let f = find_witness(
            &coll("tails"),
            &SymbolicSet::tail(-1),
            &BTreeSet::from([-1]),
            FinderMode::Exhaustive,
            4,
        );
        assert_eq!(f, Finding::NoneProved);
        let f = find_witness(
            &coll("tails"),
            &SymbolicSet::tail(-9),
            &BTreeSet::from([-9]),
            FinderMode::Exhaustive,
            0,
        );
        assert_eq!(f, Finding::NoneProved);
        let f = find_witness(&coll("tails"), &z, &BTreeSet::from([100]), FinderMode::Exhaustive, 0);
        assert_eq!(f, Finding::NoneWithinBudget);
    }

    #[test]
    fn stages_on_tails_and_cofinite1() {
        let cfg = LbConfig {
            max_phases: 5,
            ..LbConfig::default()
        };
        let r = existence_violation_adversary(&coll("tails"), 1, &ExhaustiveCritical, FinderMode::Exhaustive, 64, &cfg)
            .unwrap();
        assert_eq!(r.outcome, Outcome::Violation);
        assert_eq!(r.phases.len(), 5);
        assert_eq!(r.witnesses.len(), 5);
        assert_eq!(r.phases[1].language, SymbolicSet::tail(-1));
        let r = existence_violation_adversary(
            &coll("cofinite1"),
            1,
            &ExhaustiveCritical,
            FinderMode::Exhaustive,
            64,
            &cfg,
        )
        .unwrap();
        assert_eq!(r.outcome, Outcome::ConditionSatisfied);
    }
}
