//! Two languages built incrementally against a running generator.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::langset::{CanonicalOrder, SymbolicSet};

/// Where an integer has been placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    Zero,
    One,
    Both,
}

impl Slot {
    pub fn of(which: u8) -> Slot {
        if which == 0 {
            Slot::Zero
        } else {
            Slot::One
        }
    }

    pub fn contains(self, which: u8) -> bool {
        match self {
            Slot::Both => true,
            Slot::Zero => which == 0,
            Slot::One => which == 1,
        }
    }
}

/// One irrevocable placement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub key: i64,
    pub slot: Slot,
}

/// A pair `L_0, L_1` whose members are decided the first time they are
/// touched. Untouched integers count as members of both once the pair is
/// frozen, so both languages are cofinite.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DynamicLanguagePair {
    assigned: BTreeMap<i64, Slot>,
    toggle: u8,
    cursor: u64,
    log: Vec<Assignment>,
}

impl DynamicLanguagePair {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuild a pair by applying a recorded log.
    pub fn replay(log: &[Assignment]) -> Self {
        let mut p = Self::new();
        for a in log {
            p.assign(a.key, a.slot);
            if a.slot != Slot::Both {
                p.toggle = 1 - p.toggle;
            }
        }
        p
    }

    pub fn toggle(&self) -> u8 {
        self.toggle
    }

    pub fn log(&self) -> &[Assignment] {
        &self.log
    }

    pub fn get(&self, x: i64) -> Option<Slot> {
        self.assigned.get(&x).copied()
    }

    fn assign(&mut self, x: i64, slot: Slot) {
        let prev = self.assigned.insert(x, slot);
        assert!(prev.is_none(), "{x} was already placed");
        self.log.push(Assignment { key: x, slot });
    }

    /// Least integer in canonical order that has not been placed yet.
    fn fresh(&mut self) -> i64 {
        loop {
            let x = CanonicalOrder::at(self.cursor);
            self.cursor += 1;
            if !self.assigned.contains_key(&x) {
                return x;
            }
        }
    }

    /// Draw a fresh integer and place it in both languages.
    pub fn fresh_input(&mut self) -> i64 {
        let x = self.fresh();
        self.assign(x, Slot::Both);
        x
    }

    /// Place an untouched integer in `L_a` and flip the toggle; placed
    /// integers are left alone. Returns the resulting slot.
    pub fn place(&mut self, x: i64) -> Slot {
        if let Some(s) = self.get(x) {
            return s;
        }
        let s = Slot::of(self.toggle);
        self.assign(x, s);
        self.toggle = 1 - self.toggle;
        s
    }

    /// Membership of `x` in `L_which`, placing `x` first if needed.
    pub fn query(&mut self, x: i64, which: u8) -> bool {
        self.place(x).contains(which)
    }

    /// How many integers sit in each slot: `(zero, one, both)`.
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for s in self.assigned.values() {
            match s {
                Slot::Zero => c.0 += 1,
                Slot::One => c.1 += 1,
                Slot::Both => c.2 += 1,
            }
        }
        c
    }

    /// `L_which` with every unplaced integer treated as a member.
    pub fn language(&self, which: u8) -> SymbolicSet {
        SymbolicSet::cofinite(
            self.assigned
                .iter()
                .filter(|(_, s)| !s.contains(which))
                .map(|(x, _)| *x),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn placement_trace() {
        let mut p = DynamicLanguagePair::new();
        assert_eq!(p.fresh_input(), 0);
        assert_eq!(p.get(0), Some(Slot::Both));
        assert!(p.query(1, 0));
        assert_eq!(p.get(1), Some(Slot::Zero));
        assert_eq!(p.toggle(), 1);
        assert!(p.query(0, 1));
        assert_eq!(p.toggle(), 1);
        assert!(!p.query(-1, 0));
        assert_eq!(p.get(-1), Some(Slot::One));
        assert_eq!(p.fresh_input(), -2);
    }

    #[test]
    fn replay_reproduces_languages() {
        let mut p = DynamicLanguagePair::new();
        for i in 0..20 {
            p.fresh_input();
            p.query(i * 3, (i % 2) as u8);
            p.place(-i * 5);
        }
        let q = DynamicLanguagePair::replay(p.log());
        assert_eq!(q.language(0), p.language(0));
        assert_eq!(q.language(1), p.language(1));
        assert_eq!(q.toggle(), p.toggle());
        let (mut p, mut q) = (p, q);
        assert_eq!(p.fresh_input(), q.fresh_input());
        assert!(p.language(0).is_infinite() && p.language(1).is_infinite());
    }
}
