//! Indexed countable collections of infinite languages.
//!
//! Built-in families (1-based indices, `c(k)` is the k-th integer in
//! canonical order `0, -1, 1, -2, ...`):
//!
//! | name         | index 1        | index k                                                        |
//! |--------------|----------------|----------------------------------------------------------------|
//! | `tails`      | `Z`            | `tail(c(k-2))`                                                 |
//! | `cofinite1`  | `Z`            | `Z \ {c(k-2)}`                                                 |
//! | `evenodd`    | `evens<0 + S_1`| odd `2d-1`: `evens<0 + S_d`, even `2d`: `odds<0 + S_d`         |
//! | `cofinite12` | `Z \ {0}`      | odd `2m-1`: `Z \ {c(m-1)}`, even `2m`: `Z \ pair(m-1)`         |
//! | `singleton`  | `Z`            | (one language)                                                 |
//!
//! `S_d` is the block of `d` consecutive positive integers after `S_{d-1}`,
//! starting with `S_1 = {1}`. Pairs `{c(r), c(m)}` with `r < m` are listed by
//! `m`, then `r`. An optional ordering seed shuffles indices inside
//! consecutive blocks of [`SHUFFLE_BLOCK`].

mod closure;
mod dynamic;
mod oracle;

pub use dynamic::{Assignment, DynamicLanguagePair, Slot};
pub use oracle::{MembershipOracle, OracleCounts, Oracles};

use std::ops::Deref;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::langset::{CanonicalOrder, SymbolicSet};

/// Indices are permuted within blocks of this many languages when a
/// collection carries an ordering seed.
pub const SHUFFLE_BLOCK: usize = 8;

/// An infinite subset of the integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SymbolicSet", into = "SymbolicSet")]
pub struct Language(SymbolicSet);

impl Language {
    pub fn new(body: SymbolicSet) -> Result<Self> {
        if body.is_finite() {
            return Err(Error::FiniteLanguage(body.to_string()));
        }
        Ok(Language(body))
    }

    pub fn body(&self) -> &SymbolicSet {
        &self.0
    }
}

impl Deref for Language {
    type Target = SymbolicSet;
    fn deref(&self) -> &SymbolicSet {
        &self.0
    }
}

impl TryFrom<SymbolicSet> for Language {
    type Error = Error;
    fn try_from(s: SymbolicSet) -> Result<Self> {
        Language::new(s)
    }
}

impl From<Language> for SymbolicSet {
    fn from(l: Language) -> SymbolicSet {
        l.0
    }
}

/// Which built-in family a collection comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Tails,
    Cofinite1,
    EvenOdd,
    Cofinite12,
    Explicit(Vec<Language>),
}

/// Serializable description of a collection, as used in run configs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Languages for `name = "explicit"`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub languages: Vec<SymbolicSet>,
}

impl CollectionSpec {
    pub fn named(name: &str) -> Self {
        CollectionSpec {
            name: name.to_string(),
            seed: None,
            languages: Vec::new(),
        }
    }

    pub fn build(&self) -> Result<Collection> {
        let family = match self.name.as_str() {
            "tails" => Family::Tails,
            "cofinite1" => Family::Cofinite1,
            "evenodd" => Family::EvenOdd,
            "cofinite12" => Family::Cofinite12,
            "singleton" => Family::Explicit(vec![Language(SymbolicSet::universe())]),
            "explicit" => Family::Explicit(
                self.languages
                    .iter()
                    .cloned()
                    .map(Language::new)
                    .collect::<Result<_>>()?,
            ),
            other => {
                return Err(Error::Unknown {
                    kind: "collection",
                    name: other.to_string(),
                })
            }
        };
        Ok(Collection {
            name: self.name.clone(),
            family,
            seed: self.seed,
        })
    }
}

/// Build one of the named example collections.
pub fn build_collection(name: &str, seed: Option<u64>) -> Result<Collection> {
    CollectionSpec {
        seed,
        ..CollectionSpec::named(name)
    }
    .build()
}

/// An ordered, finite or lazily indexed collection of languages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collection {
    name: String,
    family: Family,
    seed: Option<u64>,
}

/// `S_d` for the evenodd family.
pub fn evenodd_block(d: u64) -> SymbolicSet {
    let start = (d * (d - 1) / 2 + 1) as i64;
    let end = (d * (d + 1) / 2) as i64;
    SymbolicSet::finite(start..=end)
}

/// Block index `d` with `x in S_d`, for positive `x`.
pub fn evenodd_block_of(x: i64) -> Option<u64> {
    if x < 1 {
        return None;
    }
    let mut d = 1u64;
    while (d * (d + 1) / 2) < x as u64 {
        d += 1;
    }
    Some(d)
}

/// The `k`-th pair (0-based) of distinct integers, as `(c(r), c(m))` with `r < m`.
pub fn cofinite12_pair(k: u64) -> (i64, i64) {
    let mut m = 1u64;
    let mut left = k;
    while left >= m {
        left -= m;
        m += 1;
    }
    (CanonicalOrder::at(left), CanonicalOrder::at(m))
}

impl Collection {
    pub fn explicit(name: &str, languages: Vec<SymbolicSet>) -> Result<Self> {
        Ok(Collection {
            name: name.to_string(),
            family: Family::Explicit(languages.into_iter().map(Language::new).collect::<Result<_>>()?),
            seed: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn spec(&self) -> CollectionSpec {
        let languages = match &self.family {
            Family::Explicit(ls) if self.name != "singleton" => ls.iter().map(|l| l.body().clone()).collect(),
            _ => Vec::new(),
        };
        CollectionSpec {
            name: self.name.clone(),
            seed: self.seed,
            languages,
        }
    }

    /// Number of languages, or `None` for infinite collections.
    pub fn len(&self) -> Option<usize> {
        match &self.family {
            Family::Explicit(ls) => Some(ls.len()),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// Unshuffled position of index `i`.
    fn natural_index(&self, i: usize) -> usize {
        let Some(seed) = self.seed else { return i };
        let block = (i - 1) / SHUFFLE_BLOCK;
        let mut perm: Vec<usize> = (0..SHUFFLE_BLOCK).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (block as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        perm.shuffle(&mut rng);
        block * SHUFFLE_BLOCK + perm[(i - 1) % SHUFFLE_BLOCK] + 1
    }

    /// The language at 1-based index `i`.
    pub fn language(&self, i: usize) -> Result<Language> {
        if i == 0 {
            return Err(self.out_of_range(i));
        }
        let k = self.natural_index(i);
        let body = match &self.family {
            Family::Explicit(ls) => return ls.get(i - 1).cloned().ok_or_else(|| self.out_of_range(i)),
            Family::Tails if k == 1 => SymbolicSet::universe(),
            Family::Tails => SymbolicSet::tail(CanonicalOrder::at(k as u64 - 2)),
            Family::Cofinite1 if k == 1 => SymbolicSet::universe(),
            Family::Cofinite1 => SymbolicSet::cofinite([CanonicalOrder::at(k as u64 - 2)]),
            Family::EvenOdd => {
                let d = k.div_ceil(2) as u64;
                let base = if k % 2 == 1 {
                    SymbolicSet::evens_neg()
                } else {
                    SymbolicSet::odds_neg()
                };
                base.union(&evenodd_block(d))
            }
            Family::Cofinite12 => {
                let m = k.div_ceil(2) as u64;
                if k % 2 == 1 {
                    SymbolicSet::cofinite([CanonicalOrder::at(m - 1)])
                } else {
                    let (a, b) = cofinite12_pair(m - 1);
                    SymbolicSet::cofinite([a, b])
                }
            }
        };
        Ok(Language(body))
    }

    fn out_of_range(&self, i: usize) -> Error {
        Error::IndexOutOfRange {
            collection: self.name.clone(),
            index: i,
            len: self.len().unwrap_or(usize::MAX),
        }
    }

    /// The first `min(n, len)` languages, `L_1 .. L_n`.
    pub fn prefix(&self, n: usize) -> Vec<Language> {
        let n = self.len().map_or(n, |len| n.min(len));
        (1..=n).map(|i| self.language(i).expect("index within range")).collect()
    }

    /// Intersection of every language in the whole collection that contains
    /// all of `pos` and none of `neg`; `None` when no language qualifies.
    pub fn closure(
        &self,
        pos: &std::collections::BTreeSet<i64>,
        neg: &std::collections::BTreeSet<i64>,
    ) -> Option<SymbolicSet> {
        closure::exact(self, pos, neg)
    }

    /// Same as [`Collection::closure`] restricted to `L_1 .. L_n`.
    pub fn prefix_closure(
        &self,
        n: usize,
        pos: &std::collections::BTreeSet<i64>,
        neg: &std::collections::BTreeSet<i64>,
    ) -> Option<SymbolicSet> {
        closure::over(&self.prefix(n), pos, neg)
    }

    /// A prefix length `n` such that, for all finite `pos`, `neg` inside
    /// `[-m, m]`, the closure over `L_1 .. L_n` agrees with the closure over
    /// the whole collection on `[-m, m]`.
    pub fn sufficient_prefix(&self, m: u64) -> usize {
        let n = closure::sufficient_prefix(self, m);
        if self.seed.is_some() {
            n.div_ceil(SHUFFLE_BLOCK) * SHUFFLE_BLOCK
        } else {
            n
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lang(name: &str, i: usize) -> SymbolicSet {
        build_collection(name, None)
            .unwrap()
            .language(i)
            .unwrap()
            .body()
            .clone()
    }

    #[test]
    fn builder_conventions() {
        assert_eq!(lang("tails", 1), SymbolicSet::universe());
        assert_eq!(lang("tails", 2), SymbolicSet::tail(0));
        assert_eq!(lang("tails", 3), SymbolicSet::tail(-1));
        assert_eq!(lang("tails", 4), SymbolicSet::tail(1));
        assert_eq!(lang("cofinite1", 2), SymbolicSet::cofinite([0]));
        assert_eq!(lang("cofinite1", 3), SymbolicSet::cofinite([-1]));
        assert_eq!(
            lang("evenodd", 1),
            SymbolicSet::evens_neg().union(&SymbolicSet::finite([1]))
        );
        assert_eq!(
            lang("evenodd", 4),
            SymbolicSet::odds_neg().union(&SymbolicSet::finite([2, 3]))
        );
        assert_eq!(lang("cofinite12", 1), SymbolicSet::cofinite([0]));
        assert_eq!(lang("cofinite12", 2), SymbolicSet::cofinite([0, -1]));
        assert_eq!(lang("cofinite12", 3), SymbolicSet::cofinite([-1]));
        assert_eq!(lang("cofinite12", 4), SymbolicSet::cofinite([0, 1]));
        assert_eq!(lang("cofinite12", 6), SymbolicSet::cofinite([-1, 1]));
        assert_eq!(lang("singleton", 1), SymbolicSet::universe());
    }

    #[test]
    fn blocks_and_pairs() {
        assert_eq!(evenodd_block(1), SymbolicSet::finite([1]));
        assert_eq!(evenodd_block(2), SymbolicSet::finite([2, 3]));
        assert_eq!(evenodd_block(3), SymbolicSet::finite([4, 5, 6]));
        assert_eq!(evenodd_block_of(5), Some(3));
        assert_eq!(evenodd_block_of(0), None);
        let pairs: Vec<_> = (0..6).map(cofinite12_pair).collect();
        assert_eq!(pairs, vec![(0, -1), (0, 1), (-1, 1), (0, -2), (-1, -2), (1, -2)]);
    }

    #[test]
    fn every_language_is_infinite() {
        for name in ["tails", "cofinite1", "evenodd", "cofinite12"] {
            for seed in [None, Some(7)] {
                let c = build_collection(name, seed).unwrap();
                for l in c.prefix(32) {
                    assert!(l.is_infinite(), "{name} {l:?}");
                }
            }
        }
    }

    #[test]
    fn seeded_order_is_a_block_permutation() {
        let plain = build_collection("cofinite1", None).unwrap().prefix(24);
        let shuffled = build_collection("cofinite1", Some(3)).unwrap().prefix(24);
        assert_ne!(plain, shuffled);
        for b in 0..3 {
            let mut x: Vec<_> = plain[b * 8..b * 8 + 8].to_vec();
            let mut y: Vec<_> = shuffled[b * 8..b * 8 + 8].to_vec();
            x.sort_by_key(|l| l.to_string());
            y.sort_by_key(|l| l.to_string());
            assert_eq!(x, y);
        }
    }

    #[test]
    fn finite_languages_rejected() {
        assert!(Collection::explicit("x", vec![SymbolicSet::finite([1])]).is_err());
        assert!(build_collection("nope", None).is_err());
        let s = build_collection("singleton", None).unwrap();
        assert!(matches!(s.language(2), Err(Error::IndexOutOfRange { .. })));
        assert!(s.language(0).is_err());
    }
}
