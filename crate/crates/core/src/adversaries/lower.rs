//! Staged adversaries defeating exhaustive generators on `tails` and breadth
//! generators on `cofinite1`.

use std::collections::VecDeque;

use super::{fails_at, Goal, LbConfig, LbReport, Outcome, PhaseTrace, Play, ViolationWitness};
use crate::collections::{Collection, Oracles};
use crate::error::{Error, Result};
use crate::generators::{Context, Generator};
use crate::langset::{CanonicalOrder, SymbolicSet};

fn require(c: &Collection, name: &str) -> Result<()> {
    if c.name() != name || c.seed().is_some() {
        return Err(Error::Config(format!(
            "this adversary needs the unshuffled `{name}` collection, got `{}`",
            c.name()
        )));
    }
    Ok(())
}

fn stalled(phase: usize, patience: usize) -> Outcome {
    Outcome::Inconclusive {
        reason: format!("phase {phase} did not settle within {patience} steps"),
    }
}

fn out_of_rounds(max_rounds: usize) -> Outcome {
    Outcome::Inconclusive {
        reason: format!("round budget {max_rounds} exhausted"),
    }
}

/// Phase `i` lists `-i, -i+1, ...` (a run of `tail(-i)`) until the generator
/// settles on `tail(-i)` at step `t*_i`, continues to the value
/// `t_i = max(t*_i, t_{i-1} + 1)`, then starts phase `i + 1`. The whole
/// stream enumerates `Z`; at the step where `t_i` appears the generator
/// cannot cover `Z`.
pub fn exhaustive_lb_adversary(c: &Collection, g: &dyn Generator, cfg: &LbConfig) -> Result<LbReport> {
    require(c, "tails")?;
    let o = Oracles::new(c, cfg.max_rounds);
    let ctx = Context::new(&o, cfg.max_rounds);
    let limit = SymbolicSet::universe();
    let mut play = Play::new(&ctx, g);
    let mut phases = Vec::new();
    let mut witnesses = Vec::new();
    let mut prev_ti: Option<i64> = None;
    let mut outcome = None;

    'phases: for i in 0..cfg.max_phases {
        let language = SymbolicSet::tail(-(i as i64));
        let mut trace = PhaseTrace {
            phase: i,
            language: language.clone(),
            index: None,
            start: play.t() + 1,
            detected: None,
            marker: None,
            end: 0,
        };
        let mut v = -(i as i64);
        loop {
            if play.t() >= cfg.max_rounds {
                trace.end = play.t();
                phases.push(trace);
                outcome = Some(out_of_rounds(cfg.max_rounds));
                break 'phases;
            }
            let t = play.push(v);
            if trace.detected.is_none() && cfg.detector.certifies(&play, &language, Goal::Exhaustive)? {
                trace.detected = Some(t);
                let ti = (t as i64).max(prev_ti.map_or(i64::MIN, |p| p + 1));
                trace.marker = Some(ti);
            }
            if trace.marker == Some(v) {
                if fails_at(&play, t, &limit, Goal::Exhaustive) {
                    witnesses.push(ViolationWitness {
                        step: t,
                        phase: i,
                        language: language.clone(),
                    });
                }
                prev_ti = Some(v);
                break;
            }
            if trace.detected.is_none() && t + 1 - trace.start >= cfg.patience {
                trace.end = t;
                phases.push(trace);
                outcome = Some(stalled(i, cfg.patience));
                break 'phases;
            }
            v += 1;
        }
        trace.end = play.t();
        phases.push(trace);
    }
    let mut r = LbReport::new(Goal::Exhaustive, c.name(), play, limit);
    r.phases = phases;
    r.outcome = match (witnesses.is_empty(), outcome) {
        (false, _) => Outcome::Violation,
        (true, Some(o)) => o,
        (true, None) => Outcome::Inconclusive {
            reason: "no phase produced a coverage failure".into(),
        },
    };
    r.witnesses = witnesses;
    Ok(r)
}

/// The integer after `x` in the order `0, -1, 1, -2, 2, ...`.
pub fn next_in_order(x: i64) -> i64 {
    match x {
        0 => -1,
        x if x < 0 => -x,
        x => -(x + 1),
    }
}

// Phase j: re-insert the element skipped in phase j - 1, replay the order up
// to n'_j, then continue the order skipping n_j.
struct BreadthStream {
    replay: VecDeque<i64>,
    rank: u64,
    skip: i64,
}

impl BreadthStream {
    fn next(&mut self) -> i64 {
        if let Some(x) = self.replay.pop_front() {
            return x;
        }
        loop {
            let x = CanonicalOrder::at(self.rank);
            self.rank += 1;
            if x != self.skip {
                return x;
            }
        }
    }
}

/// Phase 0 lists `Z \ {0}` as `-1, 1, -2, 2, ...` until the generator's
/// support equals it; phase `j` then enumerates `Z \ {n_j}` with
/// `n_j = next(n'_j)`, where `n'_j` is the input at the step the previous
/// phase settled. The whole stream enumerates `Z`, while at every settling
/// step the support is a proper subset of `Z`.
pub fn breadth_lb_adversary(c: &Collection, g: &dyn Generator, cfg: &LbConfig) -> Result<LbReport> {
    require(c, "cofinite1")?;
    let o = Oracles::new(c, cfg.max_rounds);
    let ctx = Context::new(&o, cfg.max_rounds);
    let limit = SymbolicSet::universe();
    let mut play = Play::new(&ctx, g);
    let mut phases = Vec::new();
    let mut witnesses = Vec::new();
    let mut outcome = None;
    let mut stream = BreadthStream {
        replay: VecDeque::new(),
        rank: 0,
        skip: 0,
    };
    let mut n_prime: Option<i64> = None;

    'phases: for j in 0..cfg.max_phases {
        let n = stream.skip;
        let language = SymbolicSet::cofinite([n]);
        let mut trace = PhaseTrace {
            phase: j,
            language: language.clone(),
            index: None,
            start: play.t() + 1,
            detected: None,
            marker: None,
            end: 0,
        };
        loop {
            if play.t() >= cfg.max_rounds {
                trace.end = play.t();
                phases.push(trace);
                outcome = Some(out_of_rounds(cfg.max_rounds));
                break 'phases;
            }
            let x = stream.next();
            let t = play.push(x);
            let settled = cfg.detector.certifies(&play, &language, Goal::Breadth)?;
            if settled && trace.detected.is_none() {
                trace.detected = Some(t);
            }
            if settled && n_prime.is_none_or(|p| x.abs() > p.abs()) {
                if fails_at(&play, t, &limit, Goal::Breadth) {
                    witnesses.push(ViolationWitness {
                        step: t,
                        phase: j,
                        language: language.clone(),
                    });
                }
                trace.marker = Some(x);
                n_prime = Some(x);
                break;
            }
            if t + 1 - trace.start >= cfg.patience {
                trace.end = t;
                phases.push(trace);
                outcome = Some(stalled(j, cfg.patience));
                break 'phases;
            }
        }
        trace.end = play.t();
        phases.push(trace);
        let np = n_prime.expect("set when the phase ended");
        let next_n = next_in_order(np);
        let upto = CanonicalOrder::rank(np);
        let mut replay: VecDeque<i64> = VecDeque::from([n]);
        replay.extend((0..=upto).map(CanonicalOrder::at).filter(|x| *x != n));
        stream = BreadthStream {
            replay,
            rank: upto + 1,
            skip: next_n,
        };
    }
    let mut r = LbReport::new(Goal::Breadth, c.name(), play, limit);
    r.phases = phases;
    r.outcome = match (witnesses.is_empty(), outcome) {
        (false, _) => Outcome::Violation,
        (true, Some(o)) => o,
        (true, None) => Outcome::Inconclusive {
            reason: "no phase produced a breadth failure".into(),
        },
    };
    r.witnesses = witnesses;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collections::build_collection;
    use crate::generators::{ExhaustiveCritical, Km, Scripted};

    #[test]
    fn next_examples() {
        assert_eq!(next_in_order(-3), 3);
        assert_eq!(next_in_order(2), -3);
        assert_eq!(next_in_order(0), -1);
    }

    #[test]
    fn phase_zero_stream() {
        let mut s = BreadthStream {
            replay: VecDeque::new(),
            rank: 0,
            skip: 0,
        };
        let xs: Vec<i64> = (0..6).map(|_| s.next()).collect();
        assert_eq!(xs, vec![-1, 1, -2, 2, -3, 3]);
    }

    #[test]
    fn exhaustive_lb_on_tails() {
        let c = build_collection("tails", None).unwrap();
        let r = exhaustive_lb_adversary(&c, &ExhaustiveCritical, &LbConfig::default()).unwrap();
        assert_eq!(r.outcome, Outcome::Violation);
        assert_eq!(r.phases.len(), 4);
        assert_eq!(r.phases[0].detected, Some(2));
        assert_eq!(&r.inputs[..3], &[0, 1, 2]);
        let ti: Vec<i64> = r.phases.iter().map(|p| p.marker.unwrap()).collect();
        assert!(ti.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn full_support_never_settles() {
        let c = build_collection("tails", None).unwrap();
        let g = Scripted {
            outputs: vec![],
            support: Some(SymbolicSet::universe()),
        };
        let cfg = LbConfig {
            patience: 30,
            ..LbConfig::default()
        };
        let r = exhaustive_lb_adversary(&c, &g, &cfg).unwrap();
        assert!(matches!(r.outcome, Outcome::Inconclusive { .. }));
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn breadth_lb_on_cofinite1() {
        let c = build_collection("cofinite1", None).unwrap();
        let cfg = LbConfig {
            max_phases: 3,
            ..LbConfig::default()
        };
        let r = breadth_lb_adversary(&c, &Km, &cfg).unwrap();
        assert_eq!(&r.inputs[..3], &[-1, 1, 0]);
        assert_eq!(r.outcome, Outcome::Violation);
        assert_eq!(r.witnesses.len(), 3);
        assert!(exhaustive_lb_adversary(&c, &Km, &cfg).is_err());
    }
}
