//! Object-based finite-state models of phonotactics.
//!
//! A model is a leveled regular grammar: level-0 rules define finite sets of
//! phoneme strings, every higher level combines lower-level objects with
//! regular expressions, and the single top-level rule is the start symbol.
//! Prototype models replace the level-0 sets with set formers that are
//! filled from a corpus by [`instantiate::instantiate`].

pub mod analysis;
pub mod corpus;
pub mod error;
pub mod generalise;
pub mod instantiate;
pub mod numeric;
pub mod ofs;
pub mod pattern;
pub mod token;

pub use error::{Error, Result};
pub use ofs::{Derivation, ObjectSet, OfsModel, RegexExpr};
pub use token::Token;
