//! Enumerators that list every element of a fixed infinite language.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Adversary;
use crate::error::{Error, Result};
use crate::generators::FeedbackStep;
use crate::langset::SymbolicSet;

/// Ranks are shuffled within consecutive blocks of this size, so every
/// element still appears after finitely many steps.
pub const PERMUTE_BLOCK: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "schedule", content = "arg")]
pub enum Schedule {
    Canonical,
    Permuted(u64),
    /// Listed first, then the rest in canonical order.
    Scripted(Vec<i64>),
}

impl Schedule {
    pub fn label(&self) -> String {
        match self {
            Schedule::Canonical => "canonical".into(),
            Schedule::Permuted(seed) => format!("permuted:{seed}"),
            Schedule::Scripted(s) => format!("scripted:{s:?}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FairEnumerator {
    language: SymbolicSet,
    schedule: Schedule,
    step: usize,
    rank: u64,
    emitted: BTreeSet<i64>,
    block: Vec<i64>,
}

/// An adversary listing `l` according to `schedule`; answers queries by
/// membership in `l`.
pub fn fair_enumerator(l: &SymbolicSet, schedule: Schedule) -> Result<FairEnumerator> {
    if l.is_finite() {
        return Err(Error::FiniteLanguage(l.to_string()));
    }
    if let Schedule::Scripted(s) = &schedule {
        if let Some(x) = s.iter().find(|x| !l.member(**x)) {
            return Err(Error::Validation(format!("scripted input {x} is not in {l}")));
        }
    }
    Ok(FairEnumerator {
        language: l.clone(),
        schedule,
        step: 0,
        rank: 0,
        emitted: BTreeSet::new(),
        block: Vec::new(),
    })
}

impl FairEnumerator {
    pub fn language(&self) -> &SymbolicSet {
        &self.language
    }

    fn canonical(&mut self, skip_emitted: bool) -> i64 {
        loop {
            let x = self.language.enumerate_rank(self.rank).expect("infinite language");
            self.rank += 1;
            if !skip_emitted || !self.emitted.contains(&x) {
                return x;
            }
        }
    }

    fn permuted(&mut self, seed: u64) -> i64 {
        if self.block.is_empty() {
            let b = self.rank / PERMUTE_BLOCK;
            let mut xs: Vec<i64> = (0..PERMUTE_BLOCK)
                .map(|k| {
                    self.language
                        .enumerate_rank(b * PERMUTE_BLOCK + k)
                        .expect("infinite language")
                })
                .collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ b.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            xs.shuffle(&mut rng);
            xs.reverse();
            self.block = xs;
            self.rank += PERMUTE_BLOCK;
        }
        self.block.pop().expect("refilled above")
    }
}

impl Iterator for FairEnumerator {
    type Item = i64;

    fn next(&mut self) -> Option<i64> {
        let x = match &self.schedule {
            Schedule::Canonical => self.canonical(false),
            Schedule::Permuted(seed) => {
                let seed = *seed;
                self.permuted(seed)
            }
            Schedule::Scripted(s) => match s.get(self.step) {
                Some(x) => *x,
                None => self.canonical(true),
            },
        };
        self.step += 1;
        self.emitted.insert(x);
        Some(x)
    }
}

impl Adversary for FairEnumerator {
    fn name(&self) -> &str {
        "fair"
    }

    fn next_input(&mut self, _history: &[FeedbackStep]) -> Result<i64> {
        Ok(self.next().expect("endless"))
    }

    fn answer(&mut self, _history: &[FeedbackStep], _x: i64, y: i64) -> Result<bool> {
        Ok(self.language.member(y))
    }

    fn committed(&self, _history: &[FeedbackStep]) -> Option<SymbolicSet> {
        Some(self.language.clone())
    }
}
