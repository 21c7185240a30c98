//! Generator strategies.
//!
//! A plain generator maps the transcript prefix (inputs `x_1..x_t`, earlier
//! outputs `z_1..z_{t-1}`) to the next output `z_t`. Generators that can be
//! asked to stop reading input additionally expose an [`Enumerator`], the
//! exact set they would list from now on.

mod critical;
mod feedback;
mod greedy;
mod mq;
mod telltale;
mod zigzag;

pub use critical::{
    critical_chain, exhaustive_critical_snapshot, km_critical_next, CriticalChain, ExhaustiveCritical, Km,
};
pub use feedback::{FeedbackGenerator, FeedbackPrefix, FeedbackStep, LookaheadFeedback, PlainFeedback, SingleQuery};
pub use greedy::{greedy_intersection, greedy_intersection_next, nonuniform_bound, Greedy};
pub use mq::{ClosureStyle, FirstYesProber, MqGenerator, QueryChannel, ScriptedMq};
pub use telltale::{telltale_choice, telltale_snapshot, EmptyTellTales, ExplicitTellTales, TellTale, TellTaleProvider};
pub use zigzag::{zigzag_next, Zigzag};

use std::borrow::Cow;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::collections::{Collection, Language, Oracles};
use crate::error::{Error, Result};
use crate::langset::SymbolicSet;

/// What a generator sees at step `t`.
#[derive(Debug, Clone, Copy)]
pub struct Prefix<'a> {
    /// `x_1 .. x_t`
    pub inputs: &'a [i64],
    /// `z_1 .. z_{t-1}`; `None` marks a sentinel.
    pub outputs: &'a [Option<i64>],
}

impl Prefix<'_> {
    pub fn t(&self) -> usize {
        self.inputs.len()
    }

    /// `S_t`, the distinct inputs.
    pub fn seen(&self) -> BTreeSet<i64> {
        self.inputs.iter().copied().collect()
    }

    /// Distinct earlier outputs.
    pub fn emitted(&self) -> BTreeSet<i64> {
        self.outputs.iter().flatten().copied().collect()
    }
}

/// Generate-only mode: the exact support listed in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumerator {
    pub support: SymbolicSet,
    /// Set when the generator had nothing consistent to go on.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub flagged: bool,
}

impl Enumerator {
    pub fn new(support: SymbolicSet) -> Self {
        Enumerator {
            support,
            flagged: false,
        }
    }

    pub fn flagged_empty() -> Self {
        Enumerator {
            support: SymbolicSet::empty(),
            flagged: true,
        }
    }

    /// `G_t(k + 1)`
    pub fn emit(&self, k: u64) -> Result<i64> {
        self.support.enumerate_rank(k)
    }
}

/// Shared read-only inputs for generator strategies.
#[derive(Debug)]
pub struct Context<'a> {
    pub collection: &'a Collection,
    pub oracles: &'a Oracles<'a>,
    languages: Cow<'a, [Language]>,
}

impl<'a> Context<'a> {
    /// A context whose language cache holds at least `n` languages (fewer
    /// for shorter finite collections).
    pub fn new(oracles: &'a Oracles<'a>, n: usize) -> Self {
        let collection = oracles.collection();
        let languages = Cow::Owned(collection.prefix(n));
        Context {
            collection,
            oracles,
            languages,
        }
    }

    /// `L_1 .. L_min(t, len)`.
    pub fn languages(&self, t: usize) -> Cow<'_, [Language]> {
        let n = self.collection.len().map_or(t, |len| t.min(len));
        if n <= self.languages.len() {
            Cow::Borrowed(&self.languages[..n])
        } else {
            Cow::Owned(self.collection.prefix(n))
        }
    }
}

/// A deterministic plain-mode generator.
pub trait Generator: Send + Sync {
    fn name(&self) -> &str;

    /// `z_t`, or `None` for the sentinel.
    fn next(&self, ctx: &Context<'_>, prefix: &Prefix<'_>) -> Option<i64>;

    /// The generate-only enumerator at step `t`, when the strategy has one.
    fn snapshot(&self, _ctx: &Context<'_>, _prefix: &Prefix<'_>) -> Option<Enumerator> {
        None
    }
}

/// Serializable generator choice.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    /// Greedy: never repeat an earlier output.
    #[serde(default)]
    pub no_repeat: bool,
    /// Zigzag: also skip inputs already seen.
    #[serde(default)]
    pub skip_inputs: bool,
    /// Telltale: explicit tell-tale lists per index (1-based); missing means empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub telltales: Vec<Vec<i64>>,
}

impl GeneratorSpec {
    pub fn named(name: &str) -> Self {
        GeneratorSpec {
            name: name.to_string(),
            ..Default::default()
        }
    }
}

/// Names accepted by [`build_generator`].
pub const GENERATORS: &[&str] = &["greedy", "km", "zigzag", "exhaustive-critical", "telltale"];

pub fn build_generator(spec: &GeneratorSpec) -> Result<Box<dyn Generator>> {
    Ok(match spec.name.as_str() {
        "greedy" => Box::new(Greedy {
            no_repeat: spec.no_repeat,
        }),
        "km" => Box::new(Km),
        "zigzag" => Box::new(Zigzag {
            skip_inputs: spec.skip_inputs,
        }),
        "exhaustive-critical" => Box::new(ExhaustiveCritical),
        "telltale" => {
            if spec.telltales.is_empty() {
                Box::new(TellTale::new(EmptyTellTales))
            } else {
                Box::new(TellTale::new(ExplicitTellTales(spec.telltales.clone())))
            }
        }
        other => {
            return Err(Error::Unknown {
                kind: "generator",
                name: other.to_string(),
            })
        }
    })
}

/// A generator that emits a fixed list, then falls back to the least
/// integer not yet seen. Its snapshot, when given, is the same set at every
/// step; useful for exercising the checkers.
#[derive(Debug, Clone)]
pub struct Scripted {
    pub outputs: Vec<Option<i64>>,
    pub support: Option<SymbolicSet>,
}

impl Generator for Scripted {
    fn name(&self) -> &str {
        "scripted"
    }

    fn next(&self, _ctx: &Context<'_>, prefix: &Prefix<'_>) -> Option<i64> {
        match self.outputs.get(prefix.t() - 1) {
            Some(z) => *z,
            None => SymbolicSet::universe().least_outside(&prefix.seen()),
        }
    }

    fn snapshot(&self, _ctx: &Context<'_>, _prefix: &Prefix<'_>) -> Option<Enumerator> {
        self.support.clone().map(Enumerator::new)
    }
}

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use crate::collections::build_collection;

    pub fn run_step<G: Generator + ?Sized>(g: &G, name: &str, inputs: &[i64]) -> (Option<i64>, Option<Enumerator>) {
        let c = build_collection(name, None).unwrap();
        let o = Oracles::new(&c, 64);
        let ctx = Context::new(&o, 64);
        let outputs = vec![None; inputs.len().saturating_sub(1)];
        let p = Prefix {
            inputs,
            outputs: &outputs,
        };
        (g.next(&ctx, &p), g.snapshot(&ctx, &p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_knows_every_name() {
        for name in GENERATORS {
            assert_eq!(build_generator(&GeneratorSpec::named(name)).unwrap().name(), *name);
        }
        assert!(build_generator(&GeneratorSpec::named("oracle-of-delphi")).is_err());
    }

    #[test]
    fn enumerator_emits_support_in_order() {
        let e = Enumerator::new(SymbolicSet::tail(0));
        assert_eq!((0..3).map(|k| e.emit(k).unwrap()).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(Enumerator::flagged_empty().emit(0).is_err());
    }
}
