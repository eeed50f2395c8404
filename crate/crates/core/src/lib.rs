//! Identifier rename analysis.
//!
//! Splits identifiers into terms, classifies renames by how they change a
//! name's meaning, mines rename candidates and refactoring co-occurrence from
//! git history, fits topic models over commit messages, expands
//! abbreviations and appraises single names.

pub mod abbrev;
pub mod appraise;
pub mod classify;
pub mod cooccur;
pub mod error;
pub mod ident;
pub mod lexicon;
pub mod miner;
pub mod stem;
pub mod topics;

pub use error::{Error, Result};
pub use ident::{normalized_equal, split, ElementKind, Identifier, Pos, Term};
pub use lexicon::{Lexicon, RelationKind};
pub use classify::{align, classify, Alignment, Category, SemanticChange, SubKind};
pub use abbrev::{ContextBag, GoldPair};
pub use appraise::{appraise, Appraisal, AppraiserConfig};
