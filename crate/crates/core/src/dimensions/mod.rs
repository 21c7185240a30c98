//! Complexity measures: non-uniform complexity, closure witnesses, consistent
//! language sets, effective intersections and the bounded dimension games.

mod echo;
mod game;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::collections::Collection;
use crate::error::{Error, Result};
use crate::generators::FeedbackStep;
use crate::langset::{CanonicalOrder, SymbolicSet};

pub use echo::{echo_play, EchoAdversary};
pub use game::{gf_witness, gnf_witness, verify_witness, GameBudget, Reply, StrategyNode};

/// Everything a transcript prefix says about the target: inputs and answered queries.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Observations {
    pub seen: BTreeSet<i64>,
    pub yes: BTreeSet<i64>,
    pub no: BTreeSet<i64>,
}

impl Observations {
    pub fn from_inputs(inputs: &[i64]) -> Self {
        Observations {
            seen: inputs.iter().copied().collect(),
            ..Default::default()
        }
    }

    /// Observations from the first `r` rounds.
    pub fn from_rounds(rounds: &[FeedbackStep], r: usize) -> Self {
        let mut o = Observations::default();
        for s in rounds.iter().take(r) {
            o.seen.insert(s.x);
            if let (Some(y), Some(a)) = (s.y, s.a) {
                if a {
                    o.yes.insert(y);
                } else {
                    o.no.insert(y);
                }
            }
        }
        o
    }

    /// Strings the target must contain.
    pub fn positives(&self) -> BTreeSet<i64> {
        self.seen.union(&self.yes).copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty() && self.yes.is_empty() && self.no.is_empty()
    }

    fn admits(&self, l: &SymbolicSet) -> bool {
        l.contains_set(&self.seen) && l.contains_set(&self.yes) && !self.no.iter().any(|x| l.member(*x))
    }
}

/// Which languages an intersection ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// The whole collection, through the builder's closed forms.
    Exact,
    /// `L_1 .. L_n`.
    Prefix(usize),
}

/// Indices `i <= n` whose languages agree with `obs`.
pub fn consistent_languages(c: &Collection, obs: &Observations, n: usize) -> Vec<usize> {
    c.prefix(n)
        .iter()
        .enumerate()
        .filter(|(_, l)| obs.admits(l.body()))
        .map(|(i, _)| i + 1)
        .collect()
}

/// `E_r`: the intersection of the consistent languages minus the inputs.
/// With no observations at all the result is `Z`.
pub fn effective_intersection(c: &Collection, obs: &Observations, scope: Scope) -> Result<SymbolicSet> {
    if obs.is_empty() {
        return Ok(SymbolicSet::universe());
    }
    let pos = obs.positives();
    let meet = match scope {
        Scope::Exact => c.closure(&pos, &obs.no),
        Scope::Prefix(n) => c.prefix_closure(n, &pos, &obs.no),
    };
    let meet = meet.ok_or(Error::NoConsistentLanguage { t: obs.seen.len() })?;
    Ok(meet.difference(&SymbolicSet::finite(obs.seen.iter().copied())))
}

/// `m_C(L_i)`: the largest finite intersection of a subcollection of
/// `L_1 .. L_i` containing `L_i`, or 0 when every such intersection is infinite.
pub fn nonuniform_complexity(c: &Collection, i: usize) -> Result<usize> {
    let target = c.language(i)?;
    let earlier: Vec<SymbolicSet> = c.prefix(i - 1).into_iter().map(|l| l.body().clone()).collect();
    let mut best = 0;
    grow(&earlier, 0, target.body(), &mut best);
    Ok(best)
}

// Once an intersection is finite, adding languages can only shrink it, so
// the search stops extending there.
fn grow(langs: &[SymbolicSet], start: usize, acc: &SymbolicSet, best: &mut usize) {
    for j in start..langs.len() {
        let next = acc.intersect(&langs[j]);
        if &next == acc {
            continue;
        }
        match next.elements() {
            Some(e) => *best = (*best).max(e.len()),
            None => grow(langs, j + 1, &next, best),
        }
    }
}

/// Which search produced a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Closure,
    Gnf,
    Gf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimensionWitness {
    pub kind: WitnessKind,
    pub d: usize,
    /// The set `S` (closure) or the final `S_r` of the principal play.
    pub witness_set: BTreeSet<i64>,
    /// First reply at every node of the strategy; empty for closure witnesses.
    pub play: Vec<FeedbackStep>,
    /// The finite intersection of the consistent languages.
    pub certificate: SymbolicSet,
    pub strategy: Option<Arc<StrategyNode>>,
    pub budget: Option<GameBudget>,
}

/// Summary record for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub kind: WitnessKind,
    pub d: usize,
    pub found: bool,
    pub witness_set: Vec<i64>,
    pub play: Vec<FeedbackStep>,
    pub certificate: Option<SymbolicSet>,
    pub leaves: usize,
    pub verified: bool,
}

impl WitnessReport {
    pub fn new(c: &Collection, kind: WitnessKind, d: usize, w: Option<&DimensionWitness>) -> Self {
        match w {
            None => WitnessReport {
                kind,
                d,
                found: false,
                witness_set: Vec::new(),
                play: Vec::new(),
                certificate: None,
                leaves: 0,
                verified: false,
            },
            Some(w) => WitnessReport {
                kind,
                d,
                found: true,
                witness_set: w.witness_set.iter().copied().collect(),
                play: w.play.clone(),
                certificate: Some(w.certificate.clone()),
                leaves: w.strategy.as_ref().map_or(0, |s| s.leaves()),
                verified: verify_witness(c, w),
            },
        }
    }
}

/// Search size-`d` subsets of `[-window, window]` (canonical order) for one
/// whose closure is finite. With `matched = Some(r)` the closure must also
/// lie inside the window and have at most `r` elements, which is what a
/// game of `r` rounds on the same window can realize.
pub fn closure_witness(c: &Collection, d: usize, window: i64, matched: Option<usize>) -> Option<DimensionWitness> {
    let moves: Vec<i64> = (0..(2 * window as u64 + 1)).map(CanonicalOrder::at).collect();
    let mut pick = Vec::with_capacity(d);
    search_subsets(&moves, d, 0, &mut pick, &mut |s| {
        let set: BTreeSet<i64> = s.iter().copied().collect();
        let cl = c.closure(&set, &BTreeSet::new())?;
        let e = cl.elements()?;
        if let Some(r) = matched {
            if e.len() > r || e.iter().any(|x| x.abs() > window) {
                return None;
            }
        }
        Some(DimensionWitness {
            kind: WitnessKind::Closure,
            d,
            witness_set: set,
            play: Vec::new(),
            certificate: cl,
            strategy: None,
            budget: None,
        })
    })
}

fn search_subsets<T>(
    moves: &[i64],
    d: usize,
    start: usize,
    pick: &mut Vec<i64>,
    f: &mut dyn FnMut(&[i64]) -> Option<T>,
) -> Option<T> {
    if pick.len() == d {
        return f(pick);
    }
    for j in start..moves.len() {
        if moves.len() - j < d - pick.len() {
            break;
        }
        pick.push(moves[j]);
        let r = search_subsets(moves, d, j + 1, pick, f);
        pick.pop();
        if r.is_some() {
            return r;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collections::build_collection;

    fn coll(name: &str) -> Collection {
        build_collection(name, None).unwrap()
    }

    // Independent oracle: every subset of the earlier languages, by bitmask.
    fn brute_m(c: &Collection, i: usize) -> usize {
        let langs = c.prefix(i);
        let mut best = 0;
        for mask in 0u32..(1 << (i - 1)) {
            let mut acc = langs[i - 1].body().clone();
            for (j, l) in langs.iter().enumerate().take(i - 1) {
                if mask & (1 << j) != 0 {
                    acc = acc.intersect(l);
                }
            }
            if let Some(e) = acc.elements() {
                best = best.max(e.len());
            }
        }
        best
    }

    #[test]
    fn nonuniform_examples() {
        assert_eq!(nonuniform_complexity(&coll("cofinite1"), 1).unwrap(), 0);
        assert_eq!(nonuniform_complexity(&coll("evenodd"), 2).unwrap(), 1);
        assert_eq!(nonuniform_complexity(&coll("evenodd"), 4).unwrap(), 2);
        assert!(nonuniform_complexity(&coll("tails"), 0).is_err());
    }

    #[test]
    fn nonuniform_matches_brute_force() {
        for name in ["tails", "cofinite1", "evenodd", "cofinite12"] {
            let c = coll(name);
            for i in 1..=8 {
                assert_eq!(nonuniform_complexity(&c, i).unwrap(), brute_m(&c, i), "{name} {i}");
            }
        }
    }

    #[test]
    fn closure_examples() {
        let w = closure_witness(&coll("cofinite12"), 2, 3, None).unwrap();
        assert_eq!(w.certificate, SymbolicSet::finite(w.witness_set.iter().copied()));
        let eo = coll("evenodd");
        assert_eq!(
            eo.closure(&BTreeSet::from([2, 3]), &BTreeSet::new()),
            Some(SymbolicSet::finite([2, 3]))
        );
        assert!(closure_witness(&eo, 2, 4, None).is_some());
        assert!(closure_witness(&coll("singleton"), 1, 4, None).is_none());
        assert!(closure_witness(&coll("tails"), 2, 4, None).is_none());
    }

    #[test]
    fn consistent_sets() {
        let c = coll("cofinite1");
        let obs = Observations::from_inputs(&[0, 1]);
        let ids = consistent_languages(&c, &obs, 8);
        assert_eq!(ids, vec![1, 3, 5, 6, 7, 8]);
        let mut q = obs.clone();
        q.no.insert(5);
        let ids = consistent_languages(&c, &q, 20);
        assert_eq!(ids.len(), 1);
        assert_eq!(c.language(ids[0]).unwrap().body(), &SymbolicSet::cofinite([5]));
        assert_eq!(consistent_languages(&c, &Observations::default(), 6).len(), 6);
    }

    #[test]
    fn effective_examples() {
        let obs = Observations::from_inputs(&[0, 1]);
        let c1 = coll("cofinite1");
        assert!(effective_intersection(&c1, &obs, Scope::Exact).unwrap().is_empty());
        // A sufficient prefix is exact on the window it was sized for.
        let n = c1.sufficient_prefix(1);
        let e = effective_intersection(&c1, &obs, Scope::Prefix(n)).unwrap();
        assert!(e.members_in(-1, 1).is_empty());
        assert!(!e.is_empty());
        assert_eq!(
            effective_intersection(&coll("tails"), &obs, Scope::Exact).unwrap(),
            SymbolicSet::tail(2)
        );
        assert_eq!(
            effective_intersection(&coll("tails"), &Observations::default(), Scope::Exact).unwrap(),
            SymbolicSet::universe()
        );
        let mut bad = obs.clone();
        bad.no.insert(0);
        assert!(effective_intersection(&c1, &bad, Scope::Exact).is_err());
    }
}
