use std::fmt;

use crate::token::{display_tokens, Token};

/// A derivation tree: upper-level objects with their constituents, down to
/// level-0 leaves holding the matched token string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivation {
    Object { name: String, children: Vec<Derivation> },
    Leaf { name: String, tokens: Vec<Token> },
}

impl Derivation {
    pub fn name(&self) -> &str {
        match self {
            Derivation::Object { name, .. } | Derivation::Leaf { name, .. } => name,
        }
    }

    /// Leaves in order, left to right.
    pub fn leaves(&self) -> Vec<(&str, &[Token])> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<(&'a str, &'a [Token])>) {
        match self {
            Derivation::Leaf { name, tokens } => out.push((name, tokens)),
            Derivation::Object { children, .. } => {
                for c in children {
                    c.collect(out);
                }
            }
        }
    }

    /// The token sequence this tree yields.
    pub fn yield_tokens(&self) -> Vec<Token> {
        self.leaves()
            .into_iter()
            .flat_map(|(_, t)| t.iter().cloned())
            .collect()
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivation::Leaf { name, tokens } => write!(f, "({name} {})", display_tokens(tokens)),
            Derivation::Object { name, children } => {
                write!(f, "({name}")?;
                for c in children {
                    write!(f, " {c}")?;
                }
                write!(f, ")")
            }
        }
    }
}
