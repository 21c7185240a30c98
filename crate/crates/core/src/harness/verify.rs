//! Independent re-checking of adversary reports. Nothing from the original
//! run is trusted: the generator is replayed and every witness re-derived.

use serde::{Deserialize, Serialize};

use super::clauses;
use crate::adversaries::{Goal, LbReport, MqOutcome, MqReport, Outcome, Play};
use crate::collections::{Collection, DynamicLanguagePair, Oracles};
use crate::error::{Error, Result};
use crate::generators::{Context, Generator, MqGenerator, QueryChannel};

pub enum Claim<'a> {
    Lb {
        collection: &'a Collection,
        generator: &'a dyn Generator,
        report: &'a LbReport,
    },
    Mq {
        generator: &'a dyn MqGenerator,
        report: &'a MqReport,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "reason")]
pub enum Verdict {
    Confirmed,
    Rejected(String),
}

impl Verdict {
    pub fn is_confirmed(&self) -> bool {
        *self == Verdict::Confirmed
    }
}

pub fn verify_violation(claim: &Claim<'_>) -> Verdict {
    let r = match claim {
        Claim::Lb {
            collection,
            generator,
            report,
        } => verify_lb(collection, *generator, report),
        Claim::Mq { generator, report } => verify_mq(*generator, report),
    };
    match r {
        Ok(()) => Verdict::Confirmed,
        Err(e) => Verdict::Rejected(e.to_string()),
    }
}

fn reject(msg: impl Into<String>) -> Result<()> {
    Err(Error::Validation(msg.into()))
}

fn verify_lb(c: &Collection, g: &dyn Generator, report: &LbReport) -> Result<()> {
    if report.outcome != Outcome::Violation || report.witnesses.is_empty() {
        return reject("the report claims no violation");
    }
    if let Some(x) = report.inputs.iter().find(|x| !report.limit.member(**x)) {
        return reject(format!("input {x} is outside {}", report.limit));
    }
    let n = report.inputs.len();
    let o = Oracles::new(c, n);
    let ctx = Context::new(&o, n);
    let play = Play::replay(&ctx, g, &report.inputs);
    if play.outputs != report.outputs {
        return reject("replayed outputs differ");
    }
    if play.snapshots != report.snapshots {
        return reject("replayed supports differ");
    }
    for w in &report.witnesses {
        if w.step == 0 || w.step > n {
            return reject(format!("witness step {} is out of range", w.step));
        }
        let Some(s) = play.snapshot(w.step) else {
            return reject(format!("no support at step {}", w.step));
        };
        let ok = match report.goal {
            Goal::Exhaustive => {
                clauses::finite_excess(s, &report.limit)
                    && clauses::finite_excess(s, &w.language)
                    && !clauses::uncovered(s, &report.limit, &play.seen(w.step), &play.earlier(w.step)).is_empty()
            }
            Goal::Breadth => *s == w.language && *s != report.limit,
        };
        if !ok {
            return reject(format!("witness at step {} does not hold", w.step));
        }
    }
    Ok(())
}

struct Replayed<'a> {
    pair: &'a DynamicLanguagePair,
    asked: Vec<(i64, u8, bool)>,
}

impl QueryChannel for Replayed<'_> {
    fn ask(&mut self, w: i64, which: u8) -> Result<bool> {
        let which = which.min(1);
        let slot = self
            .pair
            .get(w)
            .ok_or_else(|| Error::Validation(format!("query {w} was never placed")))?;
        let a = slot.contains(which);
        self.asked.push((w, which, a));
        Ok(a)
    }
}

fn verify_mq(g: &dyn MqGenerator, report: &MqReport) -> Result<()> {
    let MqOutcome::Mistake { .. } = report.outcome else {
        return reject("the report claims no mistake");
    };
    let Some(b) = report.committed else {
        return reject("the adversary never committed");
    };
    let pair = DynamicLanguagePair::replay(&report.log);
    let k = pair.language(b);
    let other = pair.language(1 - b);
    let inputs: Vec<i64> = report.phases.iter().map(|p| p.x).collect();
    if let Some(x) = inputs.iter().find(|x| !k.member(**x) || !other.member(**x)) {
        return reject(format!("input {x} is not in both languages"));
    }
    for (i, p) in report.phases.iter().enumerate() {
        let mut ch = Replayed {
            pair: &pair,
            asked: Vec::new(),
        };
        let z = g.step(&inputs[..=i], &mut ch)?;
        let recorded: Vec<(i64, u8, bool)> = p.queries.iter().map(|q| (q.w, q.which, q.answer)).collect();
        if ch.asked != recorded {
            return reject(format!("queries differ in phase {}", i + 1));
        }
        if p.z != Some(z) {
            return reject(format!("output differs in phase {}", i + 1));
        }
    }
    let Some(z) = report.phases.last().and_then(|p| p.z) else {
        return reject("no final output");
    };
    if k.member(z) && !inputs.contains(&z) {
        return reject(format!("final output {z} is correct"));
    }
    if report.phases.len() < g.declared_bound() {
        return reject("the mistake happened before the declared bound");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversaries::{exhaustive_lb_adversary, run_mq, LbConfig};
    use crate::collections::build_collection;
    use crate::generators::{ExhaustiveCritical, FirstYesProber};

    #[test]
    fn lb_claims() {
        let c = build_collection("tails", None).unwrap();
        let mut r = exhaustive_lb_adversary(&c, &ExhaustiveCritical, &LbConfig::default()).unwrap();
        let claim = Claim::Lb {
            collection: &c,
            generator: &ExhaustiveCritical,
            report: &r,
        };
        assert_eq!(verify_violation(&claim), Verdict::Confirmed);
        r.outputs[3] = Some(-100);
        let claim = Claim::Lb {
            collection: &c,
            generator: &ExhaustiveCritical,
            report: &r,
        };
        assert!(!verify_violation(&claim).is_confirmed());
    }

    #[test]
    fn mq_claims() {
        let g = FirstYesProber {
            bound: 3,
            search_cap: 32,
        };
        let mut r = run_mq(&g, 256).unwrap();
        assert!(verify_violation(&Claim::Mq {
            generator: &g,
            report: &r
        })
        .is_confirmed());
        r.committed = r.committed.map(|b| 1 - b);
        assert!(!verify_violation(&Claim::Mq {
            generator: &g,
            report: &r
        })
        .is_confirmed());
    }
}
