//! Input-oblivious generator listing `0, -1, 1, -2, 2, ...`.

use std::collections::BTreeSet;

use super::{Context, Enumerator, Generator, Prefix};
use crate::langset::{CanonicalOrder, SymbolicSet};

/// Next canonical integer not yet emitted (and, when given, not in `skip`).
pub fn zigzag_next(emitted: &BTreeSet<i64>, skip: Option<&BTreeSet<i64>>) -> i64 {
    CanonicalOrder::iter()
        .find(|x| !emitted.contains(x) && !skip.is_some_and(|s| s.contains(x)))
        .expect("the order is infinite")
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Zigzag {
    pub skip_inputs: bool,
}

impl Generator for Zigzag {
    fn name(&self) -> &str {
        "zigzag"
    }

    fn next(&self, _ctx: &Context<'_>, prefix: &Prefix<'_>) -> Option<i64> {
        let seen = prefix.seen();
        Some(zigzag_next(&prefix.emitted(), self.skip_inputs.then_some(&seen)))
    }

    fn snapshot(&self, _ctx: &Context<'_>, prefix: &Prefix<'_>) -> Option<Enumerator> {
        let mut gone = prefix.emitted();
        if self.skip_inputs {
            gone.extend(prefix.inputs.iter().copied());
        }
        Some(Enumerator::new(SymbolicSet::cofinite(gone)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(zigzag_next(&BTreeSet::new(), None), 0);
        assert_eq!(zigzag_next(&BTreeSet::from([0, -1, 1]), None), -2);
        assert_eq!(zigzag_next(&BTreeSet::new(), Some(&BTreeSet::from([0, -1]))), 1);
    }
}
