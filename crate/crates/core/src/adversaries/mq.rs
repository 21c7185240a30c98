//! Adversary against membership-query generators for two-language
//! collections. Both languages are built while the generator runs: every
//! input goes into both, every untouched string the generator asks about or
//! outputs is placed in exactly one of them, alternating. After the declared
//! bound the adversary commits to the language missing the last output.

use serde::{Deserialize, Serialize};

use crate::collections::{Assignment, DynamicLanguagePair, Slot};
use crate::error::{Error, Result};
use crate::generators::{MqGenerator, QueryChannel};
use crate::langset::SymbolicSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MqEvent {
    NeedInput,
    Query { w: i64, which: u8 },
    Generated(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MqAction {
    Input(i64),
    Answer(bool),
    Placed(Slot),
    /// The true language is `L_b`.
    Commit(u8),
}

#[derive(Debug, Clone, Default)]
pub struct MqAdversaryState {
    pub pair: DynamicLanguagePair,
    pub phase: usize,
    pub declared: Option<u8>,
    /// Phase at which the adversary commits.
    pub commit_phase: usize,
}

impl MqAdversaryState {
    pub fn new(commit_phase: usize) -> Self {
        MqAdversaryState {
            commit_phase: commit_phase.max(1),
            ..Default::default()
        }
    }
}

pub fn mq_adversary_step(state: &mut MqAdversaryState, event: MqEvent) -> Result<MqAction> {
    if state.declared.is_some() {
        return Err(Error::Validation("the adversary has already committed".into()));
    }
    Ok(match event {
        MqEvent::NeedInput => {
            state.phase += 1;
            MqAction::Input(state.pair.fresh_input())
        }
        MqEvent::Query { w, which } => MqAction::Answer(state.pair.query(w, which)),
        MqEvent::Generated(z) => {
            let slot = state.pair.place(z);
            if state.phase < state.commit_phase {
                return Ok(MqAction::Placed(slot));
            }
            let b = if slot == Slot::Zero { 1 } else { 0 };
            state.declared = Some(b);
            MqAction::Commit(b)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MqQuery {
    pub w: i64,
    pub which: u8,
    pub answer: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MqPhase {
    pub x: i64,
    pub queries: Vec<MqQuery>,
    pub z: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MqOutcome {
    /// Committed; the last output is outside the true language or repeats an input.
    Mistake {
        phase: usize,
    },
    /// Committed but the last output was correct (only possible if the
    /// generator answered with a fresh input, which cannot happen).
    NoMistake,
    BudgetExhausted {
        phase: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MqReport {
    pub generator: String,
    pub declared_bound: usize,
    pub phases: Vec<MqPhase>,
    pub committed: Option<u8>,
    pub log: Vec<Assignment>,
    pub counts: (usize, usize, usize),
    pub outcome: MqOutcome,
}

impl MqReport {
    /// The committed language rebuilt from the placement log.
    pub fn true_language(&self) -> Option<SymbolicSet> {
        self.committed
            .map(|b| DynamicLanguagePair::replay(&self.log).language(b))
    }
}

struct Channel<'a> {
    state: &'a mut MqAdversaryState,
    asked: Vec<MqQuery>,
    budget: usize,
}

impl QueryChannel for Channel<'_> {
    fn ask(&mut self, w: i64, which: u8) -> Result<bool> {
        if self.asked.len() >= self.budget {
            return Err(Error::BudgetExhausted {
                step: self.state.phase,
                budget: self.budget,
            });
        }
        let which = which.min(1);
        let MqAction::Answer(answer) = mq_adversary_step(self.state, MqEvent::Query { w, which })? else {
            unreachable!("queries are always answered")
        };
        self.asked.push(MqQuery { w, which, answer });
        Ok(answer)
    }
}

/// Run the adversary against `g`, allowing `query_budget` queries per phase.
pub fn run_mq(g: &dyn MqGenerator, query_budget: usize) -> Result<MqReport> {
    let mut state = MqAdversaryState::new(g.declared_bound());
    let mut phases = Vec::new();
    let mut inputs = Vec::new();
    let outcome = loop {
        let MqAction::Input(x) = mq_adversary_step(&mut state, MqEvent::NeedInput)? else {
            unreachable!("inputs are always supplied")
        };
        inputs.push(x);
        let mut ch = Channel {
            state: &mut state,
            asked: Vec::new(),
            budget: query_budget,
        };
        let z = g.step(&inputs, &mut ch);
        let asked = ch.asked;
        let z = match z {
            Ok(z) => z,
            Err(Error::BudgetExhausted { .. }) => {
                phases.push(MqPhase {
                    x,
                    queries: asked,
                    z: None,
                });
                break MqOutcome::BudgetExhausted { phase: state.phase };
            }
            Err(e) => return Err(e),
        };
        phases.push(MqPhase {
            x,
            queries: asked,
            z: Some(z),
        });
        if let MqAction::Commit(b) = mq_adversary_step(&mut state, MqEvent::Generated(z))? {
            let k = state.pair.language(b);
            break if !k.member(z) || inputs.contains(&z) {
                MqOutcome::Mistake { phase: state.phase }
            } else {
                MqOutcome::NoMistake
            };
        }
    };
    Ok(MqReport {
        generator: g.name().to_string(),
        declared_bound: g.declared_bound(),
        phases,
        committed: state.declared,
        log: state.pair.log().to_vec(),
        counts: state.pair.counts(),
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{ClosureStyle, FirstYesProber, ScriptedMq};

    #[test]
    fn phase_one_trace() {
        let mut s = MqAdversaryState::new(3);
        assert_eq!(
            mq_adversary_step(&mut s, MqEvent::NeedInput).unwrap(),
            MqAction::Input(0)
        );
        assert_eq!(s.pair.get(0), Some(Slot::Both));
        let a = mq_adversary_step(&mut s, MqEvent::Query { w: 1, which: 0 }).unwrap();
        assert_eq!(a, MqAction::Answer(true));
        assert_eq!(s.pair.toggle(), 1);
        let a = mq_adversary_step(&mut s, MqEvent::Query { w: 0, which: 1 }).unwrap();
        assert_eq!(a, MqAction::Answer(true));
        assert_eq!(s.pair.toggle(), 1);
    }

    #[test]
    fn commits_against_the_last_output() {
        for g in [
            Box::new(ClosureStyle {
                bound: 3,
                search_cap: 32,
            }) as Box<dyn MqGenerator>,
            Box::new(FirstYesProber {
                bound: 2,
                search_cap: 32,
            }),
            Box::new(ScriptedMq {
                bound: 4,
                script: vec![7, 8],
            }),
        ] {
            let r = run_mq(g.as_ref(), 256).unwrap();
            assert!(matches!(r.outcome, MqOutcome::Mistake { phase } if phase <= g.declared_bound() + 2));
            let k = r.true_language().unwrap();
            assert!(r.phases.iter().all(|p| k.member(p.x)));
        }
    }

    #[test]
    fn budget_is_reported() {
        let g = FirstYesProber {
            bound: 5,
            search_cap: 64,
        };
        let r = run_mq(&g, 0).unwrap();
        assert_eq!(r.outcome, MqOutcome::BudgetExhausted { phase: 1 });
        assert!(mq_adversary_step(
            &mut MqAdversaryState {
                declared: Some(0),
                ..Default::default()
            },
            MqEvent::NeedInput
        )
        .is_err());
    }

    #[test]
    fn both_languages_keep_growing() {
        let g = ScriptedMq {
            bound: 40,
            script: (1000..1040).collect(),
        };
        let r = run_mq(&g, 8).unwrap();
        assert_eq!(r.counts, (20, 20, 40));
    }
}
