//! Tell-tale generator driven by membership queries alone.
//!
//! At step `n` the candidates are the `L_i`, `i <= n`, with
//! `T_i^(n) ⊆ S_n ⊆ L_i`, where `T_i^(n)` is what the tell-tale enumeration
//! of `L_i` has produced after `n` steps. The support is the candidate with
//! the smallest index.

use std::collections::BTreeSet;

use super::{Context, Enumerator, Generator, Prefix};
use crate::collections::MembershipOracle;
use crate::error::Result;

/// Finite tell-tale sets revealed gradually.
pub trait TellTaleProvider: Send + Sync {
    /// `T_i^(n)`: must grow with `n` and settle on a finite subset of `L_i`.
    fn telltale(&self, i: usize, n: usize) -> BTreeSet<i64>;
}

/// Every tell-tale is empty.
#[derive(Debug, Clone, Copy, Default)]
pub struct EmptyTellTales;

impl TellTaleProvider for EmptyTellTales {
    fn telltale(&self, _i: usize, _n: usize) -> BTreeSet<i64> {
        BTreeSet::new()
    }
}

/// `T_i` listed explicitly (index `i` at position `i - 1`); the enumeration
/// reveals one element per step.
#[derive(Debug, Clone, Default)]
pub struct ExplicitTellTales(pub Vec<Vec<i64>>);

impl TellTaleProvider for ExplicitTellTales {
    fn telltale(&self, i: usize, n: usize) -> BTreeSet<i64> {
        self.0
            .get(i.wrapping_sub(1))
            .map(|t| t.iter().take(n).copied().collect())
            .unwrap_or_default()
    }
}

/// Smallest candidate index among `1..=limit`, asking only membership questions.
pub fn telltale_choice(
    oracle: &dyn MembershipOracle,
    provider: &dyn TellTaleProvider,
    seen: &BTreeSet<i64>,
    limit: usize,
) -> Result<Option<usize>> {
    let n = limit;
    'candidates: for i in 1..=limit {
        let t = provider.telltale(i, n);
        if !t.is_subset(seen) {
            continue;
        }
        for x in seen {
            if !oracle.member(i, *x)? {
                continue 'candidates;
            }
        }
        return Ok(Some(i));
    }
    Ok(None)
}

/// Support `L_g` for the chosen candidate, or a flagged empty enumerator.
pub fn telltale_snapshot(
    ctx: &Context<'_>,
    provider: &dyn TellTaleProvider,
    seen: &BTreeSet<i64>,
    n: usize,
) -> Result<Enumerator> {
    let limit = ctx.collection.len().map_or(n, |len| n.min(len));
    Ok(match telltale_choice(ctx.oracles, provider, seen, limit)? {
        Some(g) => Enumerator::new(ctx.languages(g)[g - 1].body().clone()),
        None => Enumerator::flagged_empty(),
    })
}

pub struct TellTale {
    provider: Box<dyn TellTaleProvider>,
}

impl TellTale {
    pub fn new(provider: impl TellTaleProvider + 'static) -> Self {
        TellTale {
            provider: Box::new(provider),
        }
    }
}

impl std::fmt::Debug for TellTale {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("TellTale")
    }
}

impl Generator for TellTale {
    fn name(&self) -> &str {
        "telltale"
    }

    fn next(&self, ctx: &Context<'_>, prefix: &Prefix<'_>) -> Option<i64> {
        let seen = prefix.seen();
        let e = telltale_snapshot(ctx, self.provider.as_ref(), &seen, prefix.t()).ok()?;
        e.support.least_outside(&seen)
    }

    fn snapshot(&self, ctx: &Context<'_>, prefix: &Prefix<'_>) -> Option<Enumerator> {
        telltale_snapshot(ctx, self.provider.as_ref(), &prefix.seen(), prefix.t()).ok()
    }
}
