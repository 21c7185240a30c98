//! Round-by-round checkers for the three generation notions.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{clauses, run_plain, Transcript};
use crate::adversaries::{fair_enumerator, Schedule};
use crate::collections::{Collection, Oracles};
use crate::error::{Error, Result};
use crate::generators::{nonuniform_bound, Context, Generator};
use crate::langset::SymbolicSet;

/// Canonical order, `permutations` block shuffles seeded from `seed`, and
/// five scripted orders that front-load awkward elements of `k`.
pub fn default_family(k: &SymbolicSet, permutations: usize, seed: u64) -> Vec<Schedule> {
    let mut out = vec![Schedule::Canonical];
    out.extend((0..permutations as u64).map(|i| Schedule::Permuted(seed.wrapping_add(i))));
    let first: Vec<i64> = k.iter_canonical().take(32).collect();
    let mut reversed: Vec<i64> = first[..12.min(first.len())].to_vec();
    reversed.reverse();
    let positives: Vec<i64> = k.members_in(0, 30).into_iter().collect();
    let negatives: Vec<i64> = k.members_in(-30, -1).into_iter().rev().collect();
    let late_first: Vec<i64> = first.iter().skip(20).chain(first.iter().take(20)).copied().collect();
    let mut far_first = first[..16.min(first.len())].to_vec();
    far_first.sort_by_key(|x| std::cmp::Reverse((x.unsigned_abs(), *x)));
    out.extend(
        [reversed, positives, negatives, late_first, far_first]
            .into_iter()
            .map(Schedule::Scripted),
    );
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonuniformRun {
    pub target: usize,
    pub schedule: String,
    /// Inputs needed before every output must be valid.
    pub bound: usize,
    /// Rounds with at least `bound` distinct inputs and an invalid output.
    pub violations: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonuniformReport {
    pub collection: String,
    pub generator: String,
    pub horizon: usize,
    pub runs: Vec<NonuniformRun>,
}

impl NonuniformReport {
    pub fn violations(&self) -> usize {
        self.runs.iter().map(|r| r.violations.len()).sum()
    }
}

/// Run `g` against every target in `targets` under [`default_family`] and
/// record each round that breaks the per-target bound.
pub fn check_nonuniform(
    c: &Collection,
    g: &dyn Generator,
    targets: &[usize],
    permutations: usize,
    seed: u64,
    horizon: usize,
) -> Result<NonuniformReport> {
    let o = Oracles::new(c, horizon);
    let ctx = Context::new(&o, horizon);
    let mut jobs = Vec::new();
    for &i in targets {
        let k = c.language(i)?.body().clone();
        let bound = nonuniform_bound(c, i)?;
        for s in default_family(&k, permutations, seed) {
            jobs.push((i, k.clone(), bound, s));
        }
    }
    let runs = jobs
        .into_par_iter()
        .map(|(target, k, bound, schedule)| {
            let label = schedule.label();
            let mut adv = fair_enumerator(&k, schedule)?;
            let (t, err) = run_plain(&ctx, &k, g, &mut adv, horizon, false);
            if let Some(e) = err {
                return Err(e);
            }
            let mut seen = BTreeSet::new();
            let violations = t
                .rounds
                .iter()
                .filter(|r| {
                    seen.insert(r.x);
                    seen.len() >= bound && !r.valid
                })
                .map(|r| r.t)
                .collect();
            Ok(NonuniformRun {
                target,
                schedule: label,
                bound,
                violations,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NonuniformReport {
        collection: c.name().to_string(),
        generator: g.name().to_string(),
        horizon,
        runs,
    })
}

/// Per-round status of the exhaustive requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseRow {
    pub t: usize,
    /// `|Z_{>=t} \ K| < inf`
    pub clause1: bool,
    /// `K ⊆ Z_{>=t} ∪ Z_{<t} ∪ S_t`
    pub clause2: bool,
    /// `Z_{>=t} ⊆ K`
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExhaustiveReport {
    pub target: usize,
    pub schedule: String,
    /// Rows were derived from observed outputs inside a window instead of a
    /// symbolic support, so they are only indicative.
    pub approximate: bool,
    pub rows: Vec<ClauseRow>,
    /// Least `t` from which both clauses hold through the horizon.
    pub t_star: Option<usize>,
    /// The same with the strict first clause.
    pub strict_t_star: Option<usize>,
}

impl ExhaustiveReport {
    /// Rounds at or after `from` where either clause fails.
    pub fn failures(&self, from: usize) -> Vec<usize> {
        self.rows
            .iter()
            .filter(|r| r.t >= from && !(r.clause1 && r.clause2))
            .map(|r| r.t)
            .collect()
    }
}

fn stable_from(ok: impl DoubleEndedIterator<Item = (usize, bool)>) -> Option<usize> {
    let mut start = None;
    for (t, good) in ok.rev() {
        if !good {
            break;
        }
        start = Some(t);
    }
    start
}

/// Window used when a generator exposes no support.
pub const APPROX_WINDOW: i64 = 10;

/// Evaluate both exhaustive clauses at every round of `g` against `L_target`.
pub fn check_exhaustive(
    c: &Collection,
    g: &dyn Generator,
    target: usize,
    schedule: Schedule,
    horizon: usize,
) -> Result<ExhaustiveReport> {
    let k = c.language(target)?.body().clone();
    let label = schedule.label();
    let t = transcript(c, g, &k, schedule, horizon)?;
    let approximate = t.rounds.iter().any(|r| r.snapshot.is_none());
    let rows: Vec<ClauseRow> = t
        .rounds
        .iter()
        .map(|r| {
            let seen = t.seen(r.t);
            let earlier = t.earlier(r.t);
            match &r.snapshot {
                Some(s) => ClauseRow {
                    t: r.t,
                    clause1: clauses::finite_excess(s, &k),
                    clause2: clauses::uncovered(s, &k, &seen, &earlier).is_empty(),
                    strict: clauses::contained(s, &k),
                },
                None => {
                    let later: BTreeSet<i64> = t.rounds[r.t - 1..].iter().filter_map(|r| r.z).collect();
                    let inside = later.iter().all(|z| k.member(*z));
                    let covered = k
                        .members_in(-APPROX_WINDOW, APPROX_WINDOW)
                        .iter()
                        .all(|x| later.contains(x) || earlier.contains(x) || seen.contains(x));
                    ClauseRow {
                        t: r.t,
                        clause1: inside,
                        clause2: covered,
                        strict: inside,
                    }
                }
            }
        })
        .collect();
    let t_star = stable_from(rows.iter().map(|r| (r.t, r.clause1 && r.clause2)));
    let strict_t_star = stable_from(rows.iter().map(|r| (r.t, r.strict && r.clause2)));
    Ok(ExhaustiveReport {
        target,
        schedule: label,
        approximate,
        rows,
        t_star,
        strict_t_star,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreadthReport {
    pub target: usize,
    pub schedule: String,
    /// `(t, Z_{>=t} = K)` per round.
    pub rows: Vec<(usize, bool)>,
    pub t_star: Option<usize>,
}

/// Check `Z_{>=t} = K` exactly at every round; needs a generator with snapshots.
pub fn check_breadth(
    c: &Collection,
    g: &dyn Generator,
    target: usize,
    schedule: Schedule,
    horizon: usize,
) -> Result<BreadthReport> {
    let k = c.language(target)?.body().clone();
    let label = schedule.label();
    let t = transcript(c, g, &k, schedule, horizon)?;
    let rows = t
        .rounds
        .iter()
        .map(|r| match &r.snapshot {
            Some(s) => Ok((r.t, *s == k)),
            None => Err(Error::Config(format!("{} exposes no snapshots", g.name()))),
        })
        .collect::<Result<Vec<_>>>()?;
    let t_star = stable_from(rows.iter().copied());
    Ok(BreadthReport {
        target,
        schedule: label,
        rows,
        t_star,
    })
}

fn transcript(
    c: &Collection,
    g: &dyn Generator,
    k: &SymbolicSet,
    schedule: Schedule,
    horizon: usize,
) -> Result<Transcript> {
    let o = Oracles::new(c, horizon);
    let ctx = Context::new(&o, horizon);
    let mut adv = fair_enumerator(k, schedule)?;
    let (t, err) = run_plain(&ctx, k, g, &mut adv, horizon, true);
    match err {
        Some(e) => Err(e),
        None => Ok(t),
    }
}
