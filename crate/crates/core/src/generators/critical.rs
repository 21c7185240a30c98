//! Critical-language generators.
//!
//! Among the languages of `L_1 .. L_t` that contain `S_t`, listed by
//! increasing index, a language is critical when it is contained in every
//! earlier one. The plain generator outputs from the last critical language;
//! the exhaustive variant also patches in the finitely many strings by which
//! earlier critical languages exceed it.

use std::collections::BTreeSet;

use super::{Context, Enumerator, Generator, Prefix};
use crate::collections::{Language, MembershipOracle, Oracles};
use crate::error::{Error, Result};
use crate::langset::SymbolicSet;

/// Consistent indices (1-based, ascending) and which of them are critical.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CriticalChain {
    pub consistent: Vec<usize>,
    pub critical: Vec<usize>,
}

impl CriticalChain {
    pub fn last_critical(&self) -> Option<usize> {
        self.critical.last().copied()
    }
}

/// Criticality computed symbolically: `L_j` is critical iff it is inside
/// the intersection of all earlier consistent languages.
pub fn critical_chain(langs: &[Language], seen: &BTreeSet<i64>) -> CriticalChain {
    let mut chain = CriticalChain::default();
    let mut earlier = SymbolicSet::universe();
    for (k, l) in langs.iter().enumerate() {
        if !l.contains_set(seen) {
            continue;
        }
        chain.consistent.push(k + 1);
        if l.is_subset(&earlier) {
            chain.critical.push(k + 1);
        }
        earlier = earlier.intersect(l);
    }
    chain
}

/// The least element of the last critical language outside `S_t`.
pub fn km_critical_next(langs: &[Language], seen: &BTreeSet<i64>) -> Result<i64> {
    let chain = critical_chain(langs, seen);
    let last = chain
        .last_critical()
        .ok_or(Error::NoConsistentLanguage { t: langs.len() })?;
    Ok(langs[last - 1].least_outside(seen).expect("languages are infinite"))
}

/// Criticality computed through the oracles: membership for consistency,
/// subset for the chain.
fn oracle_chain(oracles: &Oracles<'_>, t: usize, seen: &BTreeSet<i64>) -> Result<CriticalChain> {
    let mut chain = CriticalChain::default();
    for i in 1..=t {
        let mut ok = true;
        for x in seen {
            if !oracles.member(i, *x)? {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let mut crit = true;
        for &k in &chain.consistent {
            if !oracles.subset(i, k)? {
                crit = false;
                break;
            }
        }
        chain.consistent.push(i);
        if crit {
            chain.critical.push(i);
        }
    }
    Ok(chain)
}

/// The patched generate-only support at step `t`: the last critical
/// language plus `L_j \ L_last` for every earlier critical `L_j` whose
/// excess is finite.
pub fn exhaustive_critical_snapshot(ctx: &Context<'_>, t: usize, seen: &BTreeSet<i64>) -> Result<Enumerator> {
    let t = ctx.collection.len().map_or(t, |len| t.min(len));
    let chain = oracle_chain(ctx.oracles, t, seen)?;
    let Some(last) = chain.last_critical() else {
        return Ok(Enumerator::flagged_empty());
    };
    let langs = ctx.languages(t);
    let base = langs[last - 1].body();
    let mut support = base.clone();
    for &j in &chain.critical {
        if j != last && ctx.oracles.finite_difference(j, last)? {
            support = support.union(&langs[j - 1].difference(base));
        }
    }
    Ok(Enumerator::new(support))
}

/// Last-critical generator; its snapshot is the last critical language.
#[derive(Debug, Clone, Copy, Default)]
pub struct Km;

impl Generator for Km {
    fn name(&self) -> &str {
        "km"
    }

    fn next(&self, ctx: &Context<'_>, prefix: &Prefix<'_>) -> Option<i64> {
        km_critical_next(&ctx.languages(prefix.t()), &prefix.seen()).ok()
    }

    fn snapshot(&self, ctx: &Context<'_>, prefix: &Prefix<'_>) -> Option<Enumerator> {
        let langs = ctx.languages(prefix.t());
        let chain = critical_chain(&langs, &prefix.seen());
        Some(match chain.last_critical() {
            Some(i) => Enumerator::new(langs[i - 1].body().clone()),
            None => Enumerator::flagged_empty(),
        })
    }
}

/// Last-critical generator with the finite-difference patch in its snapshot.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExhaustiveCritical;

impl Generator for ExhaustiveCritical {
    fn name(&self) -> &str {
        "exhaustive-critical"
    }

    fn next(&self, ctx: &Context<'_>, prefix: &Prefix<'_>) -> Option<i64> {
        km_critical_next(&ctx.languages(prefix.t()), &prefix.seen()).ok()
    }

    fn snapshot(&self, ctx: &Context<'_>, prefix: &Prefix<'_>) -> Option<Enumerator> {
        exhaustive_critical_snapshot(ctx, prefix.t(), &prefix.seen()).ok()
    }
}
