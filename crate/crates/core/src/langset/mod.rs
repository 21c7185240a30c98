//! Exact algebra of two-sided eventually periodic integer sets.
//!
//! A [`SymbolicSet`] is described by a finite window `[lo, hi]` with explicit
//! membership, and two residue patterns modulo a common period that decide
//! membership strictly left and strictly right of the window. Every
//! constructor normalizes, so structural equality is set equality.

mod literal;
mod order;

pub use literal::{parse, parse_int_list};
pub use order::{successor, CanonicalOrder};

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Size of a set: exact when finite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cardinality {
    Finite(usize),
    Infinite,
}

impl Cardinality {
    pub fn is_finite(self) -> bool {
        matches!(self, Cardinality::Finite(_))
    }
}

/// Boolean operations accepted by [`SymbolicSet::algebra`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Intersect,
    Union,
    Difference,
    Complement,
}

/// Unvalidated description of an eventually periodic set.
///
/// Residues are listed as integers in `0..period`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSet {
    pub period: u32,
    pub lo: i64,
    pub hi: i64,
    pub explicit: Vec<i64>,
    pub left_residues: Vec<u32>,
    pub right_residues: Vec<u32>,
}

/// A canonical two-sided eventually periodic subset of the integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicSet {
    period: u32,
    lo: i64,
    hi: i64,
    explicit: BTreeSet<i64>,
    left: Vec<bool>,
    right: Vec<bool>,
}

fn residue(x: i64, p: u32) -> usize {
    x.rem_euclid(p as i64) as usize
}

/// Smallest divisor `q` of `pattern.len()` such that the pattern repeats with period `q`.
fn minimal_period(pattern: &[bool]) -> usize {
    let p = pattern.len();
    (1..=p)
        .filter(|q| p.is_multiple_of(*q))
        .find(|&q| (0..p).all(|r| pattern[r] == pattern[r % q]))
        .unwrap_or(p)
}

fn stretch(pattern: &[bool], q: usize, p: usize) -> Vec<bool> {
    (0..p).map(|r| pattern[r % q]).collect()
}

impl SymbolicSet {
    /// Validate a raw description and bring it to canonical form.
    pub fn normalize(raw: &RawSet) -> Result<Self> {
        if raw.period < 1 {
            return Err(Error::Validation("period must be at least 1".into()));
        }
        if raw.lo > raw.hi {
            return Err(Error::Validation(format!("window [{}, {}] is empty", raw.lo, raw.hi)));
        }
        if let Some(x) = raw.explicit.iter().find(|x| **x < raw.lo || **x > raw.hi) {
            return Err(Error::Validation(format!(
                "explicit element {x} outside window [{}, {}]",
                raw.lo, raw.hi
            )));
        }
        let p = raw.period as usize;
        let mut left = vec![false; p];
        let mut right = vec![false; p];
        for (src, dst) in [(&raw.left_residues, &mut left), (&raw.right_residues, &mut right)] {
            for &r in src {
                if r >= raw.period {
                    return Err(Error::Validation(format!(
                        "residue {r} not below period {}",
                        raw.period
                    )));
                }
                dst[r as usize] = true;
            }
        }
        let explicit: BTreeSet<i64> = raw.explicit.iter().copied().collect();
        Ok(Self::build(
            raw.period,
            raw.lo,
            raw.hi,
            &|x| explicit.contains(&x),
            left,
            right,
        ))
    }

    /// Canonicalize from a window membership function and residue patterns
    /// of length `period`.
    fn build(period: u32, lo: i64, hi: i64, inside: &dyn Fn(i64) -> bool, left: Vec<bool>, right: Vec<bool>) -> Self {
        let p = period as usize;
        let member = |x: i64| {
            if x < lo {
                left[residue(x, period)]
            } else if x > hi {
                right[residue(x, period)]
            } else {
                inside(x)
            }
        };
        let ql = minimal_period(&left);
        let qr = minimal_period(&right);
        let np = ql.lcm(&qr);
        let nleft = stretch(&left[..ql], ql, np);
        let nright = stretch(&right[..qr], qr, np);
        let npu = np as u32;
        let span = np.max(p) as i64;

        let rhi = (lo - span..=hi).rev().find(|&x| member(x) != nright[residue(x, npu)]);
        let llo = (lo..=hi + span).find(|&x| member(x) != nleft[residue(x, npu)]);
        let (wlo, whi) = match (llo, rhi) {
            (Some(a), Some(b)) if a <= b => (a, b),
            (a, b) => {
                let mut c = 0i64;
                if let Some(b) = b {
                    c = c.max(b);
                }
                if let Some(a) = a {
                    c = c.min(a);
                }
                (c, c)
            }
        };
        let explicit = (wlo..=whi).filter(|&x| member(x)).collect();
        SymbolicSet {
            period: npu,
            lo: wlo,
            hi: whi,
            explicit,
            left: nleft,
            right: nright,
        }
    }

    /// The raw fields of this (canonical) set.
    pub fn to_raw(&self) -> RawSet {
        let res = |v: &[bool]| {
            v.iter()
                .enumerate()
                .filter(|(_, b)| **b)
                .map(|(r, _)| r as u32)
                .collect()
        };
        RawSet {
            period: self.period,
            lo: self.lo,
            hi: self.hi,
            explicit: self.explicit.iter().copied().collect(),
            left_residues: res(&self.left),
            right_residues: res(&self.right),
        }
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn explicit(&self) -> &BTreeSet<i64> {
        &self.explicit
    }

    pub fn left_residues(&self) -> impl Iterator<Item = u32> + '_ {
        self.left.iter().enumerate().filter(|(_, b)| **b).map(|(r, _)| r as u32)
    }

    pub fn right_residues(&self) -> impl Iterator<Item = u32> + '_ {
        self.right
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(|(r, _)| r as u32)
    }

    pub fn empty() -> Self {
        Self::finite([])
    }

    pub fn universe() -> Self {
        Self::periodic(1, &[0], &[0])
    }

    /// `{k, k+1, k+2, ...}`
    pub fn tail(k: i64) -> Self {
        Self::build(1, k, k, &|_| true, vec![false], vec![true])
    }

    /// `{..., k-1, k}`
    pub fn head(k: i64) -> Self {
        Self::build(1, k, k, &|_| true, vec![true], vec![false])
    }

    pub fn finite(xs: impl IntoIterator<Item = i64>) -> Self {
        let set: BTreeSet<i64> = xs.into_iter().collect();
        let lo = set.first().copied().unwrap_or(0);
        let hi = set.last().copied().unwrap_or(0);
        Self::build(1, lo, hi, &|x| set.contains(&x), vec![false], vec![false])
    }

    /// Complement of a finite set.
    pub fn cofinite(xs: impl IntoIterator<Item = i64>) -> Self {
        Self::finite(xs).complement()
    }

    /// All integers whose residue modulo `p` is listed on each side; the
    /// two patterns meet at zero (negatives use `left`, non-negatives `right`).
    pub fn periodic(p: u32, left: &[u32], right: &[u32]) -> Self {
        let mut l = vec![false; p as usize];
        let mut r = vec![false; p as usize];
        for &x in left {
            l[x as usize] = true;
        }
        for &x in right {
            r[x as usize] = true;
        }
        let r0 = r[0];
        Self::build(p, 0, 0, &|_| r0, l, r)
    }

    /// Negative even integers.
    pub fn evens_neg() -> Self {
        Self::periodic(2, &[0], &[])
    }

    /// Negative odd integers.
    pub fn odds_neg() -> Self {
        Self::periodic(2, &[1], &[])
    }

    pub fn evens() -> Self {
        Self::periodic(2, &[0], &[0])
    }

    pub fn odds() -> Self {
        Self::periodic(2, &[1], &[1])
    }

    pub fn member(&self, x: i64) -> bool {
        if x < self.lo {
            self.left[residue(x, self.period)]
        } else if x > self.hi {
            self.right[residue(x, self.period)]
        } else {
            self.explicit.contains(&x)
        }
    }

    pub fn contains_all<'a>(&self, xs: impl IntoIterator<Item = &'a i64>) -> bool {
        xs.into_iter().all(|x| self.member(*x))
    }

    /// `xs ⊆ self`, using range scans so that uniform sides cost one lookup.
    pub fn contains_set(&self, xs: &BTreeSet<i64>) -> bool {
        let side = |pattern: &[bool], mut it: std::collections::btree_set::Range<'_, i64>| {
            if pattern.iter().all(|b| *b) {
                true
            } else if pattern.iter().all(|b| !*b) {
                it.next().is_none()
            } else {
                it.all(|x| pattern[residue(*x, self.period)])
            }
        };
        side(&self.left, xs.range(..self.lo))
            && side(&self.right, xs.range(self.hi + 1..))
            && xs.range(self.lo..=self.hi).all(|x| self.explicit.contains(x))
    }

    pub fn algebra(op: SetOp, a: &Self, b: Option<&Self>) -> Self {
        match (op, b) {
            (SetOp::Complement, _) => a.complement(),
            (op, Some(b)) => a.binary(b, |x, y| match op {
                SetOp::Intersect => x && y,
                SetOp::Union => x || y,
                SetOp::Difference => x && !y,
                SetOp::Complement => unreachable!(),
            }),
            (_, None) => a.clone(),
        }
    }

    pub fn complement(&self) -> Self {
        let p = self.period;
        let left = self.left.iter().map(|b| !b).collect();
        let right = self.right.iter().map(|b| !b).collect();
        Self::build(p, self.lo, self.hi, &|x| !self.explicit.contains(&x), left, right)
    }

    fn binary(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Self {
        let p = (self.period as usize).lcm(&(other.period as usize));
        let left = (0..p)
            .map(|r| f(self.left[r % self.left.len()], other.left[r % other.left.len()]))
            .collect();
        let right = (0..p)
            .map(|r| f(self.right[r % self.right.len()], other.right[r % other.right.len()]))
            .collect();
        let lo = self.lo.min(other.lo);
        let hi = self.hi.max(other.hi);
        Self::build(p as u32, lo, hi, &|x| f(self.member(x), other.member(x)), left, right)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.binary(other, |x, y| x && y)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.binary(other, |x, y| x || y)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.binary(other, |x, y| x && !y)
    }

    /// Symmetric difference.
    pub fn xor(&self, other: &Self) -> Self {
        self.binary(other, |x, y| x != y)
    }

    pub fn classify(&self) -> Cardinality {
        if self.is_finite() {
            Cardinality::Finite(self.explicit.len())
        } else {
            Cardinality::Infinite
        }
    }

    pub fn is_finite(&self) -> bool {
        !self.left.iter().any(|b| *b) && !self.right.iter().any(|b| *b)
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn is_empty(&self) -> bool {
        self.is_finite() && self.explicit.is_empty()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// Elements of a finite set, or `None` when infinite.
    pub fn elements(&self) -> Option<&BTreeSet<i64>> {
        self.is_finite().then_some(&self.explicit)
    }

    /// Members in canonical order. Finite sets yield exactly their elements.
    pub fn iter_canonical(&self) -> impl Iterator<Item = i64> + '_ {
        let bound = if self.is_finite() {
            let m = self
                .explicit
                .iter()
                .map(|x| CanonicalOrder::rank(*x) + 1)
                .max()
                .unwrap_or(0);
            Some(m)
        } else {
            None
        };
        (0u64..)
            .take_while(move |r| bound.is_none_or(|b| *r < b))
            .map(CanonicalOrder::at)
            .filter(move |x| self.member(*x))
    }

    /// The `k`-th member (0-based) in canonical order.
    pub fn enumerate_rank(&self, k: u64) -> Result<i64> {
        if let Some(els) = self.elements() {
            if k as usize >= els.len() {
                return Err(Error::OutOfRange {
                    rank: k,
                    size: els.len(),
                });
            }
        }
        Ok(self
            .iter_canonical()
            .nth(k as usize)
            .expect("infinite set or rank within size"))
    }

    /// Least member in canonical order that is not in `skip`.
    pub fn least_outside(&self, skip: &BTreeSet<i64>) -> Option<i64> {
        self.iter_canonical().find(|x| !skip.contains(x))
    }

    /// Least member in canonical order.
    pub fn least(&self) -> Option<i64> {
        self.iter_canonical().next()
    }

    /// Members inside `[a, b]`.
    pub fn members_in(&self, a: i64, b: i64) -> BTreeSet<i64> {
        (a..=b).filter(|x| self.member(*x)).collect()
    }
}

impl fmt::Debug for SymbolicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbolicSet({self})")
    }
}

impl Serialize for SymbolicSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SymbolicSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for SymbolicSet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(s: &SymbolicSet, a: i64, b: i64) -> Vec<bool> {
        (a..=b).map(|x| s.member(x)).collect()
    }

    #[test]
    fn identity_canonicalizes_to_period_one() {
        let raw = RawSet {
            period: 2,
            lo: 0,
            hi: 0,
            explicit: vec![0],
            left_residues: vec![0, 1],
            right_residues: vec![0, 1],
        };
        let s = SymbolicSet::normalize(&raw).unwrap();
        assert_eq!(s.period(), 1);
        assert_eq!(s, SymbolicSet::universe());
        assert_eq!(s.left_residues().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn finite_singleton_canonical() {
        let raw = RawSet {
            period: 4,
            lo: -2,
            hi: 5,
            explicit: vec![3],
            ..Default::default()
        };
        let s = SymbolicSet::normalize(&raw).unwrap();
        assert_eq!(s.period(), 1);
        assert_eq!(s.window(), (3, 3));
        assert_eq!(s.left_residues().count() + s.right_residues().count(), 0);
    }

    #[test]
    fn negative_evens_canonical() {
        let raw = RawSet {
            period: 2,
            lo: -10,
            hi: -1,
            explicit: (-10..=-1).filter(|x| x % 2 == 0).collect(),
            left_residues: vec![0],
            right_residues: vec![],
        };
        let s = SymbolicSet::normalize(&raw).unwrap();
        assert_eq!(s.period(), 2);
        assert_eq!(s.left_residues().collect::<Vec<_>>(), vec![0]);
        assert_eq!(s.right_residues().count(), 0);
        assert_eq!(s.window().1 - s.window().0, 0);
        for x in -100..=100 {
            assert_eq!(s.member(x), x < 0 && x % 2 == 0, "x = {x}");
        }
        assert_eq!(s, SymbolicSet::evens_neg());
    }

    #[test]
    fn malformed_inputs_rejected() {
        let bad_period = RawSet {
            period: 0,
            ..Default::default()
        };
        assert!(matches!(SymbolicSet::normalize(&bad_period), Err(Error::Validation(_))));
        let outside = RawSet {
            period: 1,
            lo: 0,
            hi: 2,
            explicit: vec![3],
            ..Default::default()
        };
        assert!(SymbolicSet::normalize(&outside).is_err());
    }

    #[test]
    fn membership_examples() {
        let s = SymbolicSet::cofinite([1, 5]);
        assert!(!s.member(5));
        assert!(!SymbolicSet::tail(0).member(-3));
        let e = SymbolicSet::evens_neg().union(&SymbolicSet::finite([1, 2, 3]));
        assert!(e.member(-4));
    }

    #[test]
    fn algebra_examples() {
        let a = SymbolicSet::tail(0).intersect(&SymbolicSet::tail(-5));
        assert_eq!(a, SymbolicSet::tail(0));
        let d = SymbolicSet::universe().difference(&SymbolicSet::tail(-1));
        assert_eq!(d, SymbolicSet::head(-2));
        assert!(d.is_infinite());
        let c = SymbolicSet::universe().difference(&SymbolicSet::cofinite([3]));
        assert_eq!(c, SymbolicSet::finite([3]));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(SymbolicSet::empty().classify(), Cardinality::Finite(0));
        let s = SymbolicSet::finite([3, 4]);
        let x = SymbolicSet::evens_neg()
            .union(&s)
            .intersect(&SymbolicSet::odds_neg().union(&s));
        assert_eq!(x.classify(), Cardinality::Finite(2));
        let y = SymbolicSet::cofinite([1]).intersect(&SymbolicSet::cofinite([2]));
        assert_eq!(y.classify(), Cardinality::Infinite);
    }

    #[test]
    fn subset_examples() {
        assert!(SymbolicSet::tail(0).is_subset(&SymbolicSet::tail(-1)));
        assert!(!SymbolicSet::universe().is_subset(&SymbolicSet::cofinite([1])));
        assert!(SymbolicSet::cofinite([1]).is_subset(&SymbolicSet::universe()));
    }

    #[test]
    fn enumerate_examples() {
        let z = SymbolicSet::universe();
        let got: Vec<i64> = (0..5).map(|k| z.enumerate_rank(k).unwrap()).collect();
        assert_eq!(got, vec![0, -1, 1, -2, 2]);
        assert_eq!(SymbolicSet::cofinite([0]).enumerate_rank(0).unwrap(), -1);
        assert_eq!(SymbolicSet::tail(0).enumerate_rank(2).unwrap(), 2);
        let f = SymbolicSet::finite([4, -7]);
        assert_eq!(f.enumerate_rank(0).unwrap(), 4);
        assert_eq!(f.enumerate_rank(1).unwrap(), -7);
        assert!(matches!(
            f.enumerate_rank(2),
            Err(Error::OutOfRange { rank: 2, size: 2 })
        ));
    }

    #[test]
    fn tail_and_head_windows() {
        assert_eq!(SymbolicSet::tail(5).window(), (4, 4));
        assert_eq!(
            brute(&SymbolicSet::tail(5), 0, 8),
            brute(&SymbolicSet::head(4).complement(), 0, 8)
        );
    }

    #[test]
    fn mixed_periods_combine() {
        let three = SymbolicSet::periodic(3, &[0], &[0]);
        let u = three.union(&SymbolicSet::evens());
        assert_eq!(u.period(), 6);
        for x in -30..30 {
            assert_eq!(u.member(x), x % 3 == 0 || x % 2 == 0);
        }
        let back = u.difference(&SymbolicSet::evens()).union(&SymbolicSet::evens());
        assert_eq!(back, u);
    }
}
