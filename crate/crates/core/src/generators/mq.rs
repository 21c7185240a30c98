//! Generators for two-language collections `{L_0, L_1}` that learn about
//! the languages only by asking "is `w` in `L_i`?".

use std::collections::BTreeSet;

use crate::error::Result;
use crate::langset::CanonicalOrder;

/// Answers membership questions about `L_0` and `L_1`. May refuse with
/// [`crate::Error::BudgetExhausted`].
pub trait QueryChannel {
    fn ask(&mut self, w: i64, which: u8) -> Result<bool>;
}

pub trait MqGenerator: Send + Sync {
    fn name(&self) -> &str;

    /// The number of distinct inputs after which the generator claims to be correct.
    fn declared_bound(&self) -> usize;

    /// `z_t` for inputs `x_1 .. x_t`.
    fn step(&self, inputs: &[i64], channel: &mut dyn QueryChannel) -> Result<i64>;
}

fn unseen(seen: &BTreeSet<i64>) -> impl Iterator<Item = i64> + '_ {
    CanonicalOrder::iter().filter(move |x| !seen.contains(x))
}

/// Membership-query closure strategy: once more than `bound` inputs are in,
/// find which languages contain them all; if both do, look for a string in
/// both, otherwise for a string in the one that does.
#[derive(Debug, Clone, Copy)]
pub struct ClosureStyle {
    pub bound: usize,
    pub search_cap: usize,
}

impl MqGenerator for ClosureStyle {
    fn name(&self) -> &str {
        "closure-style"
    }

    fn declared_bound(&self) -> usize {
        self.bound
    }

    fn step(&self, inputs: &[i64], ch: &mut dyn QueryChannel) -> Result<i64> {
        let seen: BTreeSet<i64> = inputs.iter().copied().collect();
        let fallback = unseen(&seen).next().expect("infinite");
        if seen.len() <= self.bound {
            return Ok(fallback);
        }
        let mut consistent = Vec::new();
        for which in [0u8, 1] {
            let mut ok = true;
            for x in &seen {
                if !ch.ask(*x, which)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                consistent.push(which);
            }
        }
        if consistent.is_empty() {
            return Ok(fallback);
        }
        for w in unseen(&seen).take(self.search_cap) {
            let mut all = true;
            for &which in &consistent {
                if !ch.ask(w, which)? {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(w);
            }
        }
        Ok(fallback)
    }
}

/// Outputs the first unseen string that `L_0` confirms.
#[derive(Debug, Clone, Copy)]
pub struct FirstYesProber {
    pub bound: usize,
    pub search_cap: usize,
}

impl MqGenerator for FirstYesProber {
    fn name(&self) -> &str {
        "first-yes"
    }

    fn declared_bound(&self) -> usize {
        self.bound
    }

    fn step(&self, inputs: &[i64], ch: &mut dyn QueryChannel) -> Result<i64> {
        let seen: BTreeSet<i64> = inputs.iter().copied().collect();
        for w in unseen(&seen).take(self.search_cap) {
            if ch.ask(w, 0)? {
                return Ok(w);
            }
        }
        let z = unseen(&seen).next().expect("infinite");
        Ok(z)
    }
}

/// Fixed outputs without queries, then the least unseen integer.
#[derive(Debug, Clone)]
pub struct ScriptedMq {
    pub bound: usize,
    pub script: Vec<i64>,
}

impl MqGenerator for ScriptedMq {
    fn name(&self) -> &str {
        "scripted"
    }

    fn declared_bound(&self) -> usize {
        self.bound
    }

    fn step(&self, inputs: &[i64], _ch: &mut dyn QueryChannel) -> Result<i64> {
        if let Some(z) = self.script.get(inputs.len() - 1) {
            return Ok(*z);
        }
        let seen: BTreeSet<i64> = inputs.iter().copied().collect();
        let z = unseen(&seen).next().expect("infinite");
        Ok(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::langset::SymbolicSet;

    struct Fixed(SymbolicSet, SymbolicSet, usize);

    impl QueryChannel for Fixed {
        fn ask(&mut self, w: i64, which: u8) -> Result<bool> {
            self.2 += 1;
            Ok(if which == 0 { self.0.member(w) } else { self.1.member(w) })
        }
    }

    #[test]
    fn closure_style_finds_common_string() {
        let g = ClosureStyle {
            bound: 1,
            search_cap: 16,
        };
        let mut ch = Fixed(SymbolicSet::tail(0), SymbolicSet::tail(3), 0);
        assert_eq!(g.step(&[5], &mut ch).unwrap(), 0);
        assert_eq!(ch.2, 0);
        assert_eq!(g.step(&[5, 6], &mut ch).unwrap(), 3);
    }

    #[test]
    fn prober_and_script() {
        let g = FirstYesProber {
            bound: 1,
            search_cap: 16,
        };
        let mut ch = Fixed(SymbolicSet::tail(2), SymbolicSet::universe(), 0);
        assert_eq!(g.step(&[0], &mut ch).unwrap(), 2);
        let s = ScriptedMq {
            bound: 2,
            script: vec![9],
        };
        assert_eq!(s.step(&[0], &mut ch).unwrap(), 9);
        assert_eq!(s.step(&[0, -1], &mut ch).unwrap(), 1);
    }
}
