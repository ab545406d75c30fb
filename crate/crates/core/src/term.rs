//! Identifiers, terms and ground facts.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// A prefixed identifier together with its resolved expansion.
///
/// Equality, hashing and ordering only look at the expansion, so `obo:X`
/// written under two different prefix tables that agree on the base are the
/// same identifier. The prefix and local parts are kept for display.
#[derive(Clone)]
pub struct Iri {
    prefix: Arc<str>,
    local: Arc<str>,
    expansion: Arc<str>,
}

impl Iri {
    /// Builds an identifier from a prefix name, a local name and the base the
    /// prefix resolves to. An empty prefix name is the default (bare) prefix.
    pub fn new(prefix: &str, local: &str, base: &str) -> Self {
        let mut expansion = String::with_capacity(base.len() + local.len());
        expansion.push_str(base);
        expansion.push_str(local);
        Iri {
            prefix: prefix.into(),
            local: local.into(),
            expansion: expansion.into(),
        }
    }

    pub fn prefix(&self) -> &str {
        &self.prefix
    }

    pub fn local(&self) -> &str {
        &self.local
    }

    pub fn expansion(&self) -> &str {
        &self.expansion
    }

    /// True when the identifier was written without a prefix.
    pub fn is_bare(&self) -> bool {
        self.prefix.is_empty()
    }
}

impl PartialEq for Iri {
    fn eq(&self, other: &Self) -> bool {
        self.expansion == other.expansion
    }
}

impl Eq for Iri {}

impl Hash for Iri {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.expansion.hash(state)
    }
}

impl PartialOrd for Iri {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Iri {
    fn cmp(&self, other: &Self) -> Ordering {
        self.expansion.cmp(&other.expansion)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prefix.is_empty() {
            f.write_str(&self.local)
        } else {
            write!(f, "{}:{}", self.prefix, self.local)
        }
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Data values. Only integers and strings are supported.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Literal {
    Integer(i64),
    String(String),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Integer(i) => write!(f, "{i}"),
            Literal::String(s) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        '\n' => f.write_str("\\n")?,
                        '\t' => f.write_str("\\t")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
        }
    }
}

/// A ground term: what a variable can be bound to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Individual(Iri),
    Literal(Literal),
}

impl Value {
    pub fn as_individual(&self) -> Option<&Iri> {
        match self {
            Value::Individual(iri) => Some(iri),
            Value::Literal(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Individual(iri) => iri.fmt(f),
            Value::Literal(lit) => lit.fmt(f),
        }
    }
}

impl From<Iri> for Value {
    fn from(iri: Iri) -> Self {
        Value::Individual(iri)
    }
}

impl From<Literal> for Value {
    fn from(lit: Literal) -> Self {
        Value::Literal(lit)
    }
}

/// An argument of a rule atom. Variable names are stored without the `?`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Variable(String),
    Individual(Iri),
    Literal(Literal),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Variable(name.into())
    }

    pub fn as_variable(&self) -> Option<&str> {
        match self {
            Term::Variable(v) => Some(v),
            _ => None,
        }
    }

    /// The ground value of a constant term.
    pub fn as_value(&self) -> Option<Value> {
        match self {
            Term::Variable(_) => None,
            Term::Individual(iri) => Some(Value::Individual(iri.clone())),
            Term::Literal(lit) => Some(Value::Literal(lit.clone())),
        }
    }
}

impl From<Value> for Term {
    fn from(value: Value) -> Self {
        match value {
            Value::Individual(iri) => Term::Individual(iri),
            Value::Literal(lit) => Term::Literal(lit),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Variable(v) => write!(f, "?{v}"),
            Term::Individual(iri) => iri.fmt(f),
            Term::Literal(lit) => lit.fmt(f),
        }
    }
}

/// A ground class or property assertion.
///
/// Displayed in canonical atom form without the terminating period, e.g.
/// `obo:RO_0000056(I, legalconsent)`; see [`Fact::to_line`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fact {
    Class { class: Iri, individual: Iri },
    Property { property: Iri, subject: Iri, object: Value },
}

impl Fact {
    pub fn class(class: Iri, individual: Iri) -> Self {
        Fact::Class { class, individual }
    }

    pub fn property(property: Iri, subject: Iri, object: impl Into<Value>) -> Self {
        Fact::Property {
            property,
            subject,
            object: object.into(),
        }
    }

    /// The class or property identifier.
    pub fn predicate(&self) -> &Iri {
        match self {
            Fact::Class { class, .. } => class,
            Fact::Property { property, .. } => property,
        }
    }

    pub fn subject(&self) -> &Iri {
        match self {
            Fact::Class { individual, .. } => individual,
            Fact::Property { subject, .. } => subject,
        }
    }

    /// One line of the canonical fact file format, period-terminated.
    pub fn to_line(&self) -> String {
        format!("{self}.")
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::Class { class, individual } => write!(f, "{class}({individual})"),
            Fact::Property {
                property,
                subject,
                object,
            } => write!(f, "{property}({subject}, {object})"),
        }
    }
}

/// Sorts facts by their canonical text form, the order used by every
/// serialized set of facts.
pub fn sort_canonical(facts: &mut [Fact]) {
    facts.sort_by_cached_key(|f| f.to_string());
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iri_equality_uses_expansion() {
        let a = Iri::new("obo", "X", "http://purl.obolibrary.org/obo/");
        let b = Iri::new("o", "X", "http://purl.obolibrary.org/obo/");
        let c = Iri::new("obo", "x", "http://purl.obolibrary.org/obo/");
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.to_string(), "obo:X");
        assert_eq!(b.to_string(), "o:X");
    }

    #[test]
    fn canonical_fact_text() {
        let obo = "http://purl.obolibrary.org/obo/";
        let d = "urn:test#";
        let f = Fact::property(Iri::new("obo", "RO_0000056", obo), Iri::new("", "I", d), Iri::new("", "legalconsent", d));
        assert_eq!(f.to_line(), "obo:RO_0000056(I, legalconsent).");
        let g = Fact::property(Iri::new("", "name", d), Iri::new("", "a", d), Literal::String("say \"hi\"".into()));
        assert_eq!(g.to_string(), "name(a, \"say \\\"hi\\\"\")");
    }
}
