//! OFS models: representation, validation, text format and compilation.

mod automaton;
mod derivation;
mod format;
pub(crate) mod glushkov;
mod model;
mod regex;

pub use automaton::{accepts, compile, parse, Automaton};
pub(crate) use automaton::Config;
pub use derivation::Derivation;
pub use format::{parse_grammar, write_grammar, BaseSyntax};
pub use model::{
    validate_model, BaseRhs, Grammar, ObjectSet, OfsModel, Rule, RuleRef, ValidationReport,
    Violation,
};
pub use regex::RegexExpr;

/// Reads a `.ofs` model.
pub fn parse_model(text: &str) -> crate::Result<OfsModel> {
    parse_grammar(text)
}

/// Writes a `.ofs` model.
pub fn write_model(model: &OfsModel) -> String {
    write_grammar(model)
}
