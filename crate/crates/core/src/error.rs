use std::io;

use thiserror::Error;

/// Errors produced by the parser and its surrounding tooling.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    /// Malformed CoNLL-U input.
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    /// Malformed rule configuration.
    #[error("rule file line {line}: {message}")]
    RuleFile { line: usize, message: String },

    #[error("sentence {sentence}, token {token}: no predicted head")]
    MissingPredictedHead { sentence: usize, token: usize },

    #[error("sentence {sentence}, token {token}: no gold head")]
    MissingGoldHead { sentence: usize, token: usize },

    /// Gold and predicted corpora do not line up.
    #[error("corpora diverge at sentence {sentence}{}: {message}", token.map(|t| format!(", token {t}")).unwrap_or_default())]
    Misaligned {
        sentence: usize,
        token: Option<usize>,
        message: String,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("head set is empty")]
    EmptyHeadSet,

    #[error("error propagation is undefined when POS accuracy is 1")]
    UndefinedErrorPropagation,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
