use std::fmt;

/// Syllable separator.
pub const SEPARATOR: &str = "-";
/// Primary stress marker; precedes the first token of its syllable.
pub const STRESS: &str = "'";

/// A phonemic symbol or one of the two reserved markers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Token(String);

impl Token {
    /// Builds a token, returning `None` for empty text or text containing whitespace.
    pub fn new(text: impl Into<String>) -> Option<Self> {
        let text = text.into();
        if text.is_empty() || text.chars().any(char::is_whitespace) {
            None
        } else {
            Some(Token(text))
        }
    }

    pub fn separator() -> Self {
        Token(SEPARATOR.to_string())
    }

    pub fn stress() -> Self {
        Token(STRESS.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_reserved(&self) -> bool {
        self.0 == SEPARATOR || self.0 == STRESS
    }

    pub fn is_separator(&self) -> bool {
        self.0 == SEPARATOR
    }

    pub fn is_stress(&self) -> bool {
        self.0 == STRESS
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Token {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Splits on whitespace into tokens. Convenient for tests and fixtures.
pub fn tokens(text: &str) -> Vec<Token> {
    text.split_whitespace()
        .map(|t| Token(t.to_string()))
        .collect()
}

/// Space-joined rendering of a token sequence, `ε` when empty.
pub fn display_tokens(seq: &[Token]) -> String {
    if seq.is_empty() {
        "ε".to_string()
    } else {
        seq.iter().map(Token::as_str).collect::<Vec<_>>().join(" ")
    }
}
