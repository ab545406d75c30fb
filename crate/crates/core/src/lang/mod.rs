//! The rule language: atoms, rules, inverse axioms, and the three text
//! formats (`.swrl` rules, `.swf` ground facts, `.ax` axioms).
//!
//! Rules are written the way SWRL is usually printed:
//!
//! ```text
//! # id: adult
//! Person(?a) ^ of_age(?a, ?age) ^ swrlb:greaterThan(?age, 18) -> Adult(?a)
//! ```
//!
//! Whitespace and newlines inside a rule are insignificant, `#` starts a
//! comment, and `@prefix p: <base> .` lines extend or override the preloaded
//! prefix table.

mod ast;
mod format;
mod lexer;
mod parser;
mod prefix;

pub use ast::{Atom, InverseAxiom, Rule};
pub use format::{format_axioms, format_facts, format_rule, format_rules};
pub use parser::{parse_atom, parse_axioms, parse_fact_lines, parse_facts, parse_rules};
pub use prefix::{PrefixTable, DEFAULT_BASE, OBO, SWRLB};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error("{line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("unknown prefix `{0}:`")]
    UnknownPrefix(String),
    #[error("prefix `{0}:` maps to an empty base")]
    EmptyPrefixBase(String),
    #[error("rule `{rule}` is unsafe: `?{variable}` is not bound by a class or property atom of the antecedent")]
    UnsafeRule { rule: String, variable: String },
    #[error("rule `{0}` has a built-in atom in its consequent")]
    BuiltinInConsequent(String),
    #[error("rule `{0}` needs a non-empty antecedent and consequent")]
    EmptyRuleSide(String),
    #[error("duplicate rule id `{0}`")]
    DuplicateRuleId(String),
    #[error("`{0}` is not in the swrlb namespace")]
    NotABuiltin(String),
    #[error("built-in `{builtin}` needs at least two arguments, found {found}")]
    BuiltinArity { builtin: String, found: usize },
    #[error("line {line}: facts must be ground, found `?{variable}`")]
    Groundness { line: usize, variable: String },
    #[error("{}`{property}` is declared as its own inverse", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    SelfInverse { property: String, line: Option<usize> },
    #[error("no prefix can express `{0}`")]
    NoPrefixFor(String),
    #[error("{line}:{col}: {source}")]
    Located {
        line: usize,
        col: usize,
        source: Box<LangError>,
    },
}

impl LangError {
    /// The underlying error with any position wrapper removed.
    pub fn root(&self) -> &LangError {
        match self {
            LangError::Located { source, .. } => source.root(),
            e => e,
        }
    }

    /// Line the error points at, when known.
    pub fn line(&self) -> Option<usize> {
        match self {
            LangError::Syntax { line, .. } | LangError::Located { line, .. } | LangError::Groundness { line, .. } => Some(*line),
            LangError::SelfInverse { line, .. } => *line,
            _ => None,
        }
    }

    pub(crate) fn at(self, line: usize, col: usize) -> LangError {
        match self {
            e @ (LangError::Syntax { .. } | LangError::Located { .. } | LangError::Groundness { .. }) => e,
            e => LangError::Located {
                line,
                col,
                source: Box::new(e),
            },
        }
    }
}

pub(crate) fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

/// A name usable without a prefix: starts with a letter or underscore.
pub(crate) fn is_bare_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') && s.chars().all(is_name_char) && !s.contains("->")
}

/// A local part after `prefix:`; may start with a digit.
pub(crate) fn is_local_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_name_char) && !s.contains("->")
}
