//! Error types shared across the crate.

use thiserror::Error;

/// Errors from the core data model (abstraction, realization).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    /// A register word that must have pairwise distinct entries repeats one.
    #[error("register word has repeated entries: {0}")]
    RepeatedRegisters(String),
    /// An equation set failed well-formedness validation.
    #[error("ill-formed equation set: {}", .0.join("; "))]
    IllFormedEquations(Vec<String>),
}

/// Errors from automaton transformations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    /// FSUBA extraction requires a rigid automaton (diagonal register moves
    /// only); compose with `rigidify` first.
    #[error("automaton is not rigid: transition {0} moves a register")]
    NotRigid(String),
}

/// Errors from formula evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    /// A variable occurs free but is not bound by the environment.
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    /// Second-order quantifiers enumerate position subsets, which is only
    /// supported up to 63 positions.
    #[error("second-order quantification over a word of length {0} (limit 63)")]
    SecondOrderOverflow(usize),
}

/// A syntax error with position information.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Errors from parsing textual artifact descriptions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
    /// The parsed artifact failed its validator.
    #[error("validation failed: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

impl SyntaxError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        SyntaxError { line, column, message: message.into() }
    }
}
