use thiserror::Error;

use crate::ofs::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(ValidationReport),
    #[error("unknown token `{0}`")]
    UnknownToken(String),
    #[error("unknown token class `{0}`")]
    UnknownClass(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("untokenizable input at byte offset {offset}")]
    UntokenizableInput { offset: usize },
    #[error("alphabet error at line {line}: {message}")]
    Alphabet { line: usize, message: String },
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("similarity is undefined for two empty sets")]
    UndefinedSimilarity,
    #[error("model is not pruned: level-0 set `{0}` is empty")]
    UnprunedModel(String),
    #[error("determinization exceeded the state budget of {0}")]
    BudgetExceeded(usize),
    #[error("invalid threshold `{0}`: expected a decimal or fraction in (0, 1]")]
    InvalidThreshold(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}
