//! Exact symbolic laboratory for language generation in the limit.
//!
//! Languages are eventually periodic subsets of the integers ([`SymbolicSet`]),
//! so every finiteness and inclusion question the generation game asks is
//! decided exactly. On top of the set algebra sit indexed [`Collection`]s,
//! generator strategies, lower-bound adversaries, dimension searches and a
//! transcript harness that checks each generation notion round by round.

pub mod adversaries;
pub mod collections;
pub mod dimensions;
pub mod error;
pub mod generators;
pub mod harness;
pub mod langset;

pub use collections::{Collection, CollectionSpec, DynamicLanguagePair, Language, Oracles};
pub use error::{Error, Result};
pub use generators::{Enumerator, Generator, Prefix};
pub use harness::{FeedbackTranscript, RunConfig, Transcript};
pub use langset::{CanonicalOrder, Cardinality, SymbolicSet};
