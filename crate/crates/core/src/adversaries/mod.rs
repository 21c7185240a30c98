//! Enumeration strategies: fair enumerators, the membership-query adversary,
//! and the staged adversaries that defeat exhaustive and breadth generators.

mod existence;
mod fair;
mod lower;
mod mq;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::dimensions::EchoAdversary;
use crate::error::{Error, Result};
use crate::generators::{Context, FeedbackStep, Generator, Prefix};
use crate::harness::clauses;
use crate::langset::SymbolicSet;

pub use existence::{existence_violation_adversary, find_witness, FinderMode, Finding};
pub use fair::{fair_enumerator, FairEnumerator, Schedule, PERMUTE_BLOCK};
pub use lower::{breadth_lb_adversary, exhaustive_lb_adversary, next_in_order};
pub use mq::{mq_adversary_step, run_mq, MqAction, MqAdversaryState, MqEvent, MqOutcome, MqPhase, MqQuery, MqReport};

/// Names accepted by the adversary registry.
pub const ADVERSARIES: &[&str] = &[
    "fair",
    "mq",
    "exhaustive-lb",
    "breadth-lb",
    "existence-violation",
    "echo",
];

/// An input-producing strategy for plain and feedback transcripts.
pub trait Adversary: Send {
    fn name(&self) -> &str;

    /// `x_t` given the completed rounds `1 .. t-1`.
    fn next_input(&mut self, history: &[FeedbackStep]) -> Result<i64>;

    /// `a_t` for the query `y_t` asked after `x_t`.
    fn answer(&mut self, history: &[FeedbackStep], x: i64, y: i64) -> Result<bool>;

    /// The language the inputs enumerate, once it is fixed.
    fn committed(&self, _history: &[FeedbackStep]) -> Option<SymbolicSet> {
        None
    }
}

impl Adversary for EchoAdversary {
    fn name(&self) -> &str {
        "echo"
    }

    fn next_input(&mut self, history: &[FeedbackStep]) -> Result<i64> {
        if history.len() < self.d {
            return Ok(self.input(history));
        }
        // Past round d: keep enumerating the committed language.
        let k = self.target(history);
        let seen: BTreeSet<i64> = history.iter().map(|r| r.x).collect();
        Ok(k.least_outside(&seen).expect("cofinite"))
    }

    fn answer(&mut self, history: &[FeedbackStep], x: i64, y: i64) -> Result<bool> {
        Ok(EchoAdversary::answer(self, history, x, y))
    }

    fn committed(&self, history: &[FeedbackStep]) -> Option<SymbolicSet> {
        (history.len() >= self.d).then(|| self.target(history))
    }
}

/// What the staged adversaries wait for the generator to exhibit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Goal {
    /// `|Z_{>=t} \ L| < inf`
    Exhaustive,
    /// `Z_{>=t} = L`
    Breadth,
}

/// How the staged adversaries decide that a generator has settled on a language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum Detector {
    /// Exact, from the generator's symbolic snapshot.
    Transparent,
    /// Heuristic: the last `patience` outputs lie in the language (and for
    /// breadth, every member inside `[-window, window]` has shown up).
    Windowed { window: i64, patience: usize },
}

impl Detector {
    pub fn certifies(&self, play: &Play<'_>, l: &SymbolicSet, goal: Goal) -> Result<bool> {
        let t = play.t();
        match *self {
            Detector::Transparent => {
                let s = play
                    .snapshot(t)
                    .ok_or_else(|| Error::Config(format!("{} exposes no snapshots", play.generator.name())))?;
                Ok(match goal {
                    Goal::Exhaustive => clauses::finite_excess(s, l),
                    Goal::Breadth => s == l,
                })
            }
            Detector::Windowed { window, patience } => {
                if t < patience {
                    return Ok(false);
                }
                let recent = &play.outputs[t - patience..t];
                if !recent.iter().all(|z| z.is_some_and(|z| l.member(z))) {
                    return Ok(false);
                }
                Ok(goal == Goal::Exhaustive || {
                    let mut shown = play.seen(t);
                    shown.extend(play.outputs.iter().flatten());
                    l.members_in(-window, window).is_subset(&shown)
                })
            }
        }
    }
}

/// Budgets for the staged adversaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LbConfig {
    pub max_phases: usize,
    pub max_rounds: usize,
    /// Steps a phase may run without detection before the run is inconclusive.
    pub patience: usize,
    pub detector: Detector,
}

impl Default for LbConfig {
    fn default() -> Self {
        LbConfig {
            max_phases: 4,
            max_rounds: 500,
            patience: 200,
            detector: Detector::Transparent,
        }
    }
}

/// A generator driven by a growing input list, recording outputs and snapshots.
pub struct Play<'a> {
    ctx: &'a Context<'a>,
    generator: &'a dyn Generator,
    pub inputs: Vec<i64>,
    pub outputs: Vec<Option<i64>>,
    pub snapshots: Vec<Option<SymbolicSet>>,
}

impl<'a> Play<'a> {
    pub fn new(ctx: &'a Context<'a>, generator: &'a dyn Generator) -> Self {
        Play {
            ctx,
            generator,
            inputs: Vec::new(),
            outputs: Vec::new(),
            snapshots: Vec::new(),
        }
    }

    /// Feed every input of `inputs` in turn.
    pub fn replay(ctx: &'a Context<'a>, generator: &'a dyn Generator, inputs: &[i64]) -> Self {
        let mut p = Play::new(ctx, generator);
        for x in inputs {
            p.push(*x);
        }
        p
    }

    /// Feed `x_t`; returns `t`.
    pub fn push(&mut self, x: i64) -> usize {
        self.inputs.push(x);
        let prefix = Prefix {
            inputs: &self.inputs,
            outputs: &self.outputs,
        };
        let snap = self.generator.snapshot(self.ctx, &prefix).map(|e| e.support);
        let z = self.generator.next(self.ctx, &prefix);
        self.snapshots.push(snap);
        self.outputs.push(z);
        self.inputs.len()
    }

    pub fn t(&self) -> usize {
        self.inputs.len()
    }

    /// `S_t`
    pub fn seen(&self, t: usize) -> BTreeSet<i64> {
        self.inputs[..t].iter().copied().collect()
    }

    /// `Z_{<t}`
    pub fn earlier(&self, t: usize) -> BTreeSet<i64> {
        self.outputs[..t - 1].iter().flatten().copied().collect()
    }

    /// `Z_{>=t}`
    pub fn snapshot(&self, t: usize) -> Option<&SymbolicSet> {
        self.snapshots[t - 1].as_ref()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Outcome {
    Violation,
    ConditionSatisfied,
    Inconclusive { reason: String },
}

/// A step at which the generator, having settled on `language`, fails the
/// requirement for `limit`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationWitness {
    pub step: usize,
    pub phase: usize,
    pub language: SymbolicSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseTrace {
    pub phase: usize,
    pub language: SymbolicSet,
    /// Collection index of `language`, when found by search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub start: usize,
    pub detected: Option<usize>,
    /// `t_i` (exhaustive) or `n'_{i+1}` (breadth) once known.
    pub marker: Option<i64>,
    pub end: usize,
}

/// Trace of a staged adversary run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LbReport {
    pub goal: Goal,
    pub collection: String,
    pub generator: String,
    /// The language the whole stream enumerates if the phases continue forever.
    pub limit: SymbolicSet,
    pub inputs: Vec<i64>,
    pub outputs: Vec<Option<i64>>,
    pub snapshots: Vec<Option<SymbolicSet>>,
    pub phases: Vec<PhaseTrace>,
    pub witnesses: Vec<ViolationWitness>,
    pub outcome: Outcome,
}

impl LbReport {
    fn new(goal: Goal, collection: &str, play: Play<'_>, limit: SymbolicSet) -> Self {
        LbReport {
            goal,
            collection: collection.to_string(),
            generator: play.generator.name().to_string(),
            limit,
            inputs: play.inputs,
            outputs: play.outputs,
            snapshots: play.snapshots,
            phases: Vec::new(),
            witnesses: Vec::new(),
            outcome: Outcome::Inconclusive {
                reason: "not started".into(),
            },
        }
    }
}

/// Whether the requirement for `limit` fails at step `t` of `play`.
pub(crate) fn fails_at(play: &Play<'_>, t: usize, limit: &SymbolicSet, goal: Goal) -> bool {
    let Some(s) = play.snapshot(t) else { return false };
    match goal {
        Goal::Exhaustive => !clauses::uncovered(s, limit, &play.seen(t), &play.earlier(t)).is_empty(),
        Goal::Breadth => s != limit,
    }
}

/// Serializable adversary choice for run configs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversarySpec {
    pub name: String,
    /// Fair: `canonical`, `permuted` or `scripted`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub script: Vec<i64>,
    /// Echo: round at which the answers turn truthful.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Mq: queries allowed per phase.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query_budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lb: Option<LbConfig>,
    /// Existence-violation: the language index, the finder budget and the mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finder_budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finder_mode: Option<FinderMode>,
}

impl AdversarySpec {
    pub fn named(name: &str) -> Self {
        AdversarySpec {
            name: name.to_string(),
            ..Default::default()
        }
    }

    /// Build a transcript adversary (`fair` or `echo`) for `target`; `seed`
    /// drives the permuted schedule.
    pub fn build(&self, target: &SymbolicSet, seed: u64) -> Result<Box<dyn Adversary>> {
        match self.name.as_str() {
            "fair" => {
                let schedule = match self.schedule.as_deref().unwrap_or("canonical") {
                    "canonical" => Schedule::Canonical,
                    "permuted" => Schedule::Permuted(seed),
                    "scripted" => Schedule::Scripted(self.script.clone()),
                    other => {
                        return Err(Error::Unknown {
                            kind: "schedule",
                            name: other.to_string(),
                        })
                    }
                };
                Ok(Box::new(fair_enumerator(target, schedule)?))
            }
            "echo" => Ok(Box::new(EchoAdversary { d: self.d.unwrap_or(2) })),
            other if ADVERSARIES.contains(&other) => Err(Error::Config(format!(
                "adversary `{other}` drives its own run; use the adversary command"
            ))),
            other => Err(Error::Unknown {
                kind: "adversary",
                name: other.to_string(),
            }),
        }
    }
}
