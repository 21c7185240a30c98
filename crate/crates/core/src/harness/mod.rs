//! Transcript engine, run configuration, checkers and violation verification.

mod check;
pub mod clauses;
mod verify;

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::adversaries::{Adversary, AdversarySpec};
use crate::collections::{CollectionSpec, Oracles};
use crate::error::{Error, Result};
use crate::generators::{
    build_generator, Context, FeedbackGenerator, FeedbackPrefix, FeedbackStep, Generator, GeneratorSpec,
    LookaheadFeedback, PlainFeedback, Prefix, SingleQuery,
};
use crate::langset::SymbolicSet;

pub use check::{
    check_breadth, check_exhaustive, check_nonuniform, default_family, BreadthReport, ClauseRow, ExhaustiveReport,
    NonuniformReport, NonuniformRun,
};
pub use verify::{verify_violation, Claim, Verdict};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Plain,
    Feedback,
    /// Plain rounds plus a symbolic snapshot of the generator's support.
    Exhaustive,
}

/// One round of a transcript. Field order is the report format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub t: usize,
    pub x: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<bool>,
    /// `None` is the sentinel for a generator that declined.
    pub z: Option<i64>,
    pub valid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot: Option<SymbolicSet>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub rounds: Vec<Round>,
}

/// Feedback runs use the same record with `y` and `a` filled in.
pub type FeedbackTranscript = Transcript;

impl Transcript {
    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn inputs(&self) -> Vec<i64> {
        self.rounds.iter().map(|r| r.x).collect()
    }

    /// `S_t`
    pub fn seen(&self, t: usize) -> BTreeSet<i64> {
        self.rounds[..t].iter().map(|r| r.x).collect()
    }

    /// `Z_{<t}`
    pub fn earlier(&self, t: usize) -> BTreeSet<i64> {
        self.rounds[..t - 1].iter().filter_map(|r| r.z).collect()
    }

    pub fn steps(&self) -> Vec<FeedbackStep> {
        self.rounds
            .iter()
            .map(|r| FeedbackStep {
                x: r.x,
                y: r.y,
                a: r.a,
                z: r.z,
            })
            .collect()
    }

    /// Recompute every validity flag against `k`.
    pub fn revalidate(&mut self, k: &SymbolicSet) {
        let mut seen = BTreeSet::new();
        for r in &mut self.rounds {
            seen.insert(r.x);
            r.valid = is_valid(k, &seen, r.z);
        }
    }

    /// Least `t` from which every round is valid, if the last one is.
    pub fn stable_from(&self) -> Option<usize> {
        match self.rounds.iter().rposition(|r| !r.valid) {
            None => Some(1),
            Some(i) if i + 1 < self.rounds.len() => Some(i + 2),
            Some(_) => None,
        }
    }
}

/// `z ∈ K \ S_t`; the sentinel is never valid.
pub fn is_valid(k: &SymbolicSet, seen: &BTreeSet<i64>, z: Option<i64>) -> bool {
    z.is_some_and(|z| k.member(z) && !seen.contains(&z))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    /// Horizon-relative: the least round after which every output was valid.
    pub t_star: Option<usize>,
    pub violations: Vec<usize>,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub transcript: Transcript,
    pub summary: Summary,
}

impl RunReport {
    pub fn new(transcript: Transcript, aborted: Option<String>) -> Self {
        let violations = transcript.rounds.iter().filter(|r| !r.valid).map(|r| r.t).collect();
        let t_star = transcript.stable_from();
        let verdict = match (&aborted, t_star) {
            (Some(e), _) => format!("aborted: {e}"),
            (None, Some(_)) => "stable".to_string(),
            (None, None) => "unstable".to_string(),
        };
        RunReport {
            transcript,
            summary: Summary {
                t_star,
                violations,
                verdict,
            },
        }
    }

    /// One JSON object per round, then `{"summary": ...}`.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.transcript.rounds {
            out.push_str(&serde_json::to_string(r).expect("rounds serialize"));
            out.push('\n');
        }
        let tail = serde_json::json!({ "summary": self.summary });
        out.push_str(&tail.to_string());
        out.push('\n');
        out
    }
}

fn fair() -> AdversarySpec {
    AdversarySpec::named("fair")
}

/// A complete description of one run, read from TOML.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub collection: CollectionSpec,
    /// 1-based index of the target language.
    pub target: usize,
    pub generator: GeneratorSpec,
    #[serde(default = "fair")]
    pub adversary: AdversarySpec,
    pub horizon: usize,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn from_toml(s: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configs serialize")
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        self.collection.build()?.language(self.target)?;
        Ok(())
    }
}

/// Feedback strategies by name; other names run a plain generator that never queries.
pub fn build_feedback_generator(spec: &GeneratorSpec) -> Result<Box<dyn FeedbackGenerator>> {
    Ok(match spec.name.as_str() {
        "single-query" => Box::new(SingleQuery::evenodd()),
        "lookahead" => Box::new(LookaheadFeedback { window: 6 }),
        _ => Box::new(PlainFeedback(build_generator(spec)?)),
    })
}

/// Drive `adv` against `g` for `horizon` rounds. Adversary errors stop the
/// run; the rounds so far are kept and the error is returned alongside.
pub fn run_plain(
    ctx: &Context<'_>,
    k: &SymbolicSet,
    g: &dyn Generator,
    adv: &mut dyn Adversary,
    horizon: usize,
    snapshots: bool,
) -> (Transcript, Option<Error>) {
    let mut inputs = Vec::with_capacity(horizon);
    let mut outputs = Vec::with_capacity(horizon);
    let mut steps: Vec<FeedbackStep> = Vec::with_capacity(horizon);
    let mut rounds = Vec::with_capacity(horizon);
    let mut seen = BTreeSet::new();
    for t in 1..=horizon {
        let x = match adv.next_input(&steps) {
            Ok(x) => x,
            Err(e) => return (Transcript { rounds }, Some(e)),
        };
        inputs.push(x);
        seen.insert(x);
        let prefix = Prefix {
            inputs: &inputs,
            outputs: &outputs,
        };
        let snapshot = if snapshots {
            g.snapshot(ctx, &prefix).map(|e| e.support)
        } else {
            None
        };
        let z = g.next(ctx, &prefix);
        outputs.push(z);
        steps.push(FeedbackStep { x, y: None, a: None, z });
        rounds.push(Round {
            t,
            x,
            y: None,
            a: None,
            z,
            valid: is_valid(k, &seen, z),
            snapshot,
        });
    }
    (Transcript { rounds }, None)
}

/// Four-beat rounds: input, query, answer, output. Validity is judged
/// against the adversary's committed language when it has one, else `k`.
pub fn run_feedback(
    ctx: &Context<'_>,
    k: &SymbolicSet,
    g: &dyn FeedbackGenerator,
    adv: &mut dyn Adversary,
    horizon: usize,
) -> (FeedbackTranscript, Option<Error>) {
    let mut steps: Vec<FeedbackStep> = Vec::with_capacity(horizon);
    let mut err = None;
    for _ in 1..=horizon {
        let x = match adv.next_input(&steps) {
            Ok(x) => x,
            Err(e) => {
                err = Some(e);
                break;
            }
        };
        let prefix = FeedbackPrefix { rounds: &steps, x };
        let y = g.query(ctx, &prefix);
        let a = match y.map(|y| adv.answer(&steps, x, y)).transpose() {
            Ok(a) => a,
            Err(e) => {
                err = Some(e);
                break;
            }
        };
        let z = g.generate(ctx, &prefix, y, a);
        steps.push(FeedbackStep { x, y, a, z });
    }
    let target = adv.committed(&steps).unwrap_or_else(|| k.clone());
    let mut t = Transcript {
        rounds: steps
            .iter()
            .enumerate()
            .map(|(i, s)| Round {
                t: i + 1,
                x: s.x,
                y: s.y,
                a: s.a,
                z: s.z,
                valid: false,
                snapshot: None,
            })
            .collect(),
    };
    t.revalidate(&target);
    (t, err)
}

/// Execute a plain or exhaustive-mode config.
pub fn run_transcript(cfg: &RunConfig) -> Result<RunReport> {
    if cfg.mode == Mode::Feedback {
        return run_feedback_transcript(cfg);
    }
    cfg.validate()?;
    let c = cfg.collection.build()?;
    let k = c.language(cfg.target)?.body().clone();
    let g = build_generator(&cfg.generator)?;
    let mut adv = cfg.adversary.build(&k, cfg.seed)?;
    let o = Oracles::new(&c, cfg.horizon);
    let ctx = Context::new(&o, cfg.horizon);
    let (t, err) = run_plain(
        &ctx,
        &k,
        g.as_ref(),
        adv.as_mut(),
        cfg.horizon,
        cfg.mode == Mode::Exhaustive,
    );
    Ok(RunReport::new(t, err.map(|e| e.to_string())))
}

/// Execute a feedback-mode config.
pub fn run_feedback_transcript(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    let c = cfg.collection.build()?;
    let k = c.language(cfg.target)?.body().clone();
    let g = build_feedback_generator(&cfg.generator)?;
    let mut adv = cfg.adversary.build(&k, cfg.seed)?;
    let o = Oracles::new(&c, cfg.horizon);
    let ctx = Context::new(&o, cfg.horizon);
    let (t, err) = run_feedback(&ctx, &k, g.as_ref(), adv.as_mut(), cfg.horizon);
    Ok(RunReport::new(t, err.map(|e| e.to_string())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collections::build_collection;
    use crate::dimensions::{effective_intersection, Observations, Scope};

    fn cfg(collection: &str, target: usize, generator: &str, horizon: usize) -> RunConfig {
        RunConfig {
            collection: CollectionSpec::named(collection),
            target,
            generator: GeneratorSpec::named(generator),
            adversary: fair(),
            horizon,
            mode: Mode::Plain,
            seed: 0,
        }
    }

    #[test]
    fn greedy_on_cofinite1() {
        // Target index 2 is Z \ {0}.
        let r = run_transcript(&cfg("cofinite1", 2, "greedy", 10)).unwrap();
        assert_eq!(r.transcript.len(), 10);
        let bound = crate::generators::nonuniform_bound(&build_collection("cofinite1", None).unwrap(), 2).unwrap();
        let mut seen = BTreeSet::new();
        for round in &r.transcript.rounds {
            seen.insert(round.x);
            if seen.len() >= bound {
                assert!(round.valid, "round {}", round.t);
            }
        }
    }

    #[test]
    fn zigzag_is_valid_on_z() {
        let r = run_transcript(&cfg("cofinite1", 1, "zigzag", 12)).unwrap();
        assert_eq!(r.summary.t_star, None.or(r.summary.t_star));
        let mut c = cfg("cofinite1", 1, "zigzag", 12);
        c.generator.skip_inputs = true;
        let r = run_transcript(&c).unwrap();
        assert!(r.transcript.rounds.iter().all(|r| r.valid));
        assert_eq!(r.summary.t_star, Some(1));
    }

    #[test]
    fn scripted_km_on_tails() {
        let mut c = cfg("tails", 2, "km", 3);
        c.adversary.schedule = Some("scripted".into());
        c.adversary.script = vec![0, 1, 2];
        let r = run_transcript(&c).unwrap();
        assert_eq!(r.transcript.rounds[2].z, Some(3));
        assert!(r.transcript.rounds[2].valid);
    }

    #[test]
    fn feedback_runs() {
        let mut c = cfg("evenodd", 1, "single-query", 6);
        c.mode = Mode::Feedback;
        let r = run_transcript(&c).unwrap();
        assert!(r.transcript.rounds.iter().all(|r| r.valid));
        assert_eq!(r.transcript.rounds[0].y, Some(-2));

        let mut c = cfg("cofinite12", 1, "zigzag", 4);
        c.mode = Mode::Feedback;
        c.adversary = AdversarySpec {
            d: Some(2),
            ..AdversarySpec::named("echo")
        };
        let r = run_transcript(&c).unwrap();
        let steps = r.transcript.steps();
        let coll = build_collection("cofinite12", None).unwrap();
        let e = effective_intersection(&coll, &Observations::from_rounds(&steps, 2), Scope::Exact).unwrap();
        assert!(e.is_empty());

        let mut c = cfg("cofinite1", 1, "greedy", 5);
        c.mode = Mode::Feedback;
        let fb = run_transcript(&c).unwrap();
        c.mode = Mode::Plain;
        let plain = run_transcript(&c).unwrap();
        assert_eq!(fb.transcript, plain.transcript);
    }

    #[test]
    fn sentinel_counts_as_invalid() {
        let mut t = Transcript {
            rounds: vec![Round {
                t: 1,
                x: 0,
                y: None,
                a: None,
                z: None,
                valid: true,
                snapshot: None,
            }],
        };
        t.revalidate(&SymbolicSet::universe());
        assert!(!t.rounds[0].valid);
        assert_eq!(t.stable_from(), None);
    }

    #[test]
    fn config_round_trip_and_validation() {
        let c = cfg("tails", 3, "greedy", 5);
        assert_eq!(RunConfig::from_toml(&c.to_toml()).unwrap(), c);
        assert!(RunConfig::from_toml("target = 1").is_err());
        let mut bad = c.clone();
        bad.horizon = 0;
        assert!(bad.validate().is_err());
        let mut bad = c;
        bad.collection = CollectionSpec::named("singleton");
        bad.target = 2;
        assert!(bad.validate().is_err());
    }
}
