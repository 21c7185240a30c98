//! Generators that may ask one membership question about the target per round.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Context, Generator, Prefix};
use crate::langset::{CanonicalOrder, SymbolicSet};

/// One round `(x_t, y_t, a_t, z_t)`; `y_t = None` means no query was made.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackStep {
    pub x: i64,
    pub y: Option<i64>,
    pub a: Option<bool>,
    pub z: Option<i64>,
}

/// What a feedback generator sees: all earlier rounds and the current input.
#[derive(Debug, Clone, Copy)]
pub struct FeedbackPrefix<'a> {
    pub rounds: &'a [FeedbackStep],
    pub x: i64,
}

impl FeedbackPrefix<'_> {
    pub fn t(&self) -> usize {
        self.rounds.len() + 1
    }

    pub fn inputs(&self) -> Vec<i64> {
        self.rounds.iter().map(|r| r.x).chain([self.x]).collect()
    }

    pub fn seen(&self) -> BTreeSet<i64> {
        self.inputs().into_iter().collect()
    }

    /// Earlier queries answered yes and no.
    pub fn answered(&self) -> (BTreeSet<i64>, BTreeSet<i64>) {
        let mut yes = BTreeSet::new();
        let mut no = BTreeSet::new();
        for r in self.rounds {
            if let (Some(y), Some(a)) = (r.y, r.a) {
                if a {
                    yes.insert(y);
                } else {
                    no.insert(y);
                }
            }
        }
        (yes, no)
    }
}

pub trait FeedbackGenerator: Send + Sync {
    fn name(&self) -> &str;

    /// `y_t`, asked after seeing `x_t`.
    fn query(&self, ctx: &Context<'_>, prefix: &FeedbackPrefix<'_>) -> Option<i64>;

    /// `z_t`, after the answer `a_t` to `y_t`.
    fn generate(&self, ctx: &Context<'_>, prefix: &FeedbackPrefix<'_>, y: Option<i64>, a: Option<bool>) -> Option<i64>;
}

/// Adapter running a plain generator with no queries.
pub struct PlainFeedback(pub Box<dyn Generator>);

impl FeedbackGenerator for PlainFeedback {
    fn name(&self) -> &str {
        self.0.name()
    }

    fn query(&self, _ctx: &Context<'_>, _prefix: &FeedbackPrefix<'_>) -> Option<i64> {
        None
    }

    fn generate(
        &self,
        ctx: &Context<'_>,
        prefix: &FeedbackPrefix<'_>,
        _y: Option<i64>,
        _a: Option<bool>,
    ) -> Option<i64> {
        let inputs = prefix.inputs();
        let outputs: Vec<Option<i64>> = prefix.rounds.iter().map(|r| r.z).collect();
        self.0.next(
            ctx,
            &Prefix {
                inputs: &inputs,
                outputs: &outputs,
            },
        )
    }
}

/// Ask about `probe` in the first round; afterwards output unseen elements
/// of `yes_side` or `no_side` depending on the answer.
#[derive(Debug, Clone)]
pub struct SingleQuery {
    pub probe: i64,
    pub yes_side: SymbolicSet,
    pub no_side: SymbolicSet,
}

impl SingleQuery {
    /// The evenodd strategy: ask about `-2`, then list negative evens or odds.
    pub fn evenodd() -> Self {
        SingleQuery {
            probe: -2,
            yes_side: SymbolicSet::evens_neg(),
            no_side: SymbolicSet::odds_neg(),
        }
    }
}

impl FeedbackGenerator for SingleQuery {
    fn name(&self) -> &str {
        "single-query"
    }

    fn query(&self, _ctx: &Context<'_>, prefix: &FeedbackPrefix<'_>) -> Option<i64> {
        (prefix.t() == 1).then_some(self.probe)
    }

    fn generate(
        &self,
        _ctx: &Context<'_>,
        prefix: &FeedbackPrefix<'_>,
        _y: Option<i64>,
        a: Option<bool>,
    ) -> Option<i64> {
        let answer = prefix.rounds.first().and_then(|r| r.a).or(a)?;
        let side = if answer { &self.yes_side } else { &self.no_side };
        side.least_outside(&prefix.seen())
    }
}

/// Keeps the effective intersection nonempty: each round it asks the first
/// integer of the window for which every possible consistent answer leaves
/// something to generate, then outputs the least element of the effective
/// intersection.
#[derive(Debug, Clone, Copy)]
pub struct LookaheadFeedback {
    pub window: i64,
}

impl LookaheadFeedback {
    fn effective(
        ctx: &Context<'_>,
        seen: &BTreeSet<i64>,
        yes: &BTreeSet<i64>,
        no: &BTreeSet<i64>,
    ) -> Option<SymbolicSet> {
        let pos: BTreeSet<i64> = seen.union(yes).copied().collect();
        ctx.collection
            .closure(&pos, no)
            .map(|c| c.difference(&SymbolicSet::finite(seen.iter().copied())))
    }
}

impl FeedbackGenerator for LookaheadFeedback {
    fn name(&self) -> &str {
        "lookahead"
    }

    fn query(&self, ctx: &Context<'_>, prefix: &FeedbackPrefix<'_>) -> Option<i64> {
        let seen = prefix.seen();
        let (yes, no) = prefix.answered();
        let span = 2 * self.window as u64 + 1;
        (0..span).map(CanonicalOrder::at).find(|y| {
            let mut y_yes = yes.clone();
            y_yes.insert(*y);
            let mut y_no = no.clone();
            y_no.insert(*y);
            [(&y_yes, &no), (&yes, &y_no)]
                .iter()
                .all(|(p, n)| match Self::effective(ctx, &seen, p, n) {
                    None => true,
                    Some(e) => !e.is_empty(),
                })
        })
    }

    fn generate(&self, ctx: &Context<'_>, prefix: &FeedbackPrefix<'_>, y: Option<i64>, a: Option<bool>) -> Option<i64> {
        let seen = prefix.seen();
        let (mut yes, mut no) = prefix.answered();
        if let (Some(y), Some(a)) = (y, a) {
            if a {
                yes.insert(y);
            } else {
                no.insert(y);
            }
        }
        Self::effective(ctx, &seen, &yes, &no)?.least()
    }
}
