//! Parametric linear dynamic logic (PLDL).
//!
//! Formulas, a direct semantics on ultimately periodic words, translations to
//! alternating, nondeterministic and deterministic automata, model checking
//! with parameter synthesis, and realizability via parity games.

pub mod automata;
pub mod dot;
pub mod formula;
pub mod gen;
pub mod modelcheck;
pub mod graph;
pub mod optimize;
pub mod oracle;
pub mod realize;
pub mod syntax;
pub mod system;
pub mod word;

pub use formula::{Formula, FragmentTag, PropFormula, Regex, Valuation};
pub use system::System;
pub use word::{LassoWord, Letter};

/// Errors raised by parsing and by the decision procedures.
#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("formula is not well-formed")]
    NotWellFormed,
    #[error("wrong fragment: {0}")]
    WrongFragment(String),
    #[error("unassigned variable {0}")]
    UnassignedVariable(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/automata.md")]
    mod automata {}
    #[doc = include_str!("../../../book/src/model-checking.md")]
    mod model_checking {}
    #[doc = include_str!("../../../book/src/realizability.md")]
    mod realizability {}
}
