//! Exact arithmetic for finitely presented graded associative algebras.
//!
//! The pipeline goes: presentation -> diamond-lemma completion -> normal-word
//! counting and Hilbert series -> graded subspace lattices -> Koszulness
//! certificates, with the graph algebras Q_n(G) and the K_3 / gr(K_3)
//! fixtures built in.

pub mod automaton;
pub mod fastrank;
pub mod field;
pub mod graphs;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod quadratic;
pub mod rewrite;
pub mod series;
pub mod word;

use thiserror::Error as ThisError;

#[derive(ThisError, Debug)]
pub enum Error {
    #[error("coefficient fields do not match")]
    FieldMismatch,
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("prime {0} divides a coefficient denominator")]
    BadDenominator(u64),
    #[error("invalid monomial order: {0}")]
    BadOrder(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("subspace ambients do not match")]
    AmbientMismatch,
    #[error("vector lies outside the ambient component: {0}")]
    OutsideAmbient(String),
    #[error("completion exceeded the rule limit of {0}")]
    RuleLimit(usize),
    #[error("no rule with the requested leading word")]
    RuleAbsent,
    #[error("no linear recurrence of order <= {0} fits the sequence")]
    NoRecurrence(usize),
    #[error("empty forbidden word would reject every word")]
    EmptyForbiddenWord,
    #[error("{0}")]
    Invalid(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
