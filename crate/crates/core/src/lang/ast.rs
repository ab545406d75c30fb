use std::collections::BTreeSet;
use std::fmt;

use crate::lang::prefix::SWRLB;
use crate::lang::LangError;
use crate::reasoner::Binding;
use crate::term::{Fact, Iri, Term, Value};

/// A single rule atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Class { class: Iri, arg: Term },
    Property { property: Iri, subject: Term, object: Term },
    Builtin { builtin: Iri, args: Vec<Term> },
}

impl Atom {
    pub fn class(class: Iri, arg: Term) -> Self {
        Atom::Class { class, arg }
    }

    pub fn property(property: Iri, subject: Term, object: Term) -> Self {
        Atom::Property {
            property,
            subject,
            object,
        }
    }

    pub fn predicate(&self) -> &Iri {
        match self {
            Atom::Class { class, .. } => class,
            Atom::Property { property, .. } => property,
            Atom::Builtin { builtin, .. } => builtin,
        }
    }

    pub fn is_builtin(&self) -> bool {
        matches!(self, Atom::Builtin { .. })
    }

    pub fn args(&self) -> Vec<&Term> {
        match self {
            Atom::Class { arg, .. } => vec![arg],
            Atom::Property { subject, object, .. } => vec![subject, object],
            Atom::Builtin { args, .. } => args.iter().collect(),
        }
    }

    /// Variable names in argument order, repeats included.
    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args().into_iter().filter_map(Term::as_variable)
    }

    /// Grounds a class or property atom under `binding`. Returns `None` for
    /// built-ins, unbound variables, or a non-individual in an individual
    /// position.
    pub fn instantiate(&self, binding: &Binding) -> Option<Fact> {
        let ground = |t: &Term| match t {
            Term::Variable(v) => binding.get(v).cloned(),
            t => t.as_value(),
        };
        match self {
            Atom::Class { class, arg } => match ground(arg)? {
                Value::Individual(ind) => Some(Fact::class(class.clone(), ind)),
                Value::Literal(_) => None,
            },
            Atom::Property {
                property,
                subject,
                object,
            } => match ground(subject)? {
                Value::Individual(s) => Some(Fact::property(property.clone(), s, ground(object)?)),
                Value::Literal(_) => None,
            },
            Atom::Builtin { .. } => None,
        }
    }

    /// The atom that matches exactly `fact`.
    pub fn from_fact(fact: &Fact) -> Self {
        match fact {
            Fact::Class { class, individual } => Atom::class(class.clone(), Term::Individual(individual.clone())),
            Fact::Property {
                property,
                subject,
                object,
            } => Atom::property(property.clone(), Term::Individual(subject.clone()), object.clone().into()),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate())?;
        for (i, arg) in self.args().into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{arg}")?;
        }
        f.write_str(")")
    }
}

/// An antecedent/consequent pair. Only constructible through [`Rule::new`],
/// which enforces safety.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    id: String,
    antecedent: Vec<Atom>,
    consequent: Vec<Atom>,
}

impl Rule {
    /// Validates and builds a rule.
    ///
    /// Every consequent variable and every built-in variable must occur in a
    /// class or property atom of the antecedent, the consequent must be free
    /// of built-ins, and built-ins need at least two arguments in the `swrlb`
    /// namespace.
    pub fn new(id: impl Into<String>, antecedent: Vec<Atom>, consequent: Vec<Atom>) -> Result<Self, LangError> {
        let id = id.into();
        if antecedent.is_empty() || consequent.is_empty() {
            return Err(LangError::EmptyRuleSide(id));
        }
        if consequent.iter().any(Atom::is_builtin) {
            return Err(LangError::BuiltinInConsequent(id));
        }
        for atom in &antecedent {
            if let Atom::Builtin { builtin, args } = atom {
                if !builtin.expansion().starts_with(SWRLB) {
                    return Err(LangError::NotABuiltin(builtin.to_string()));
                }
                if args.len() < 2 {
                    return Err(LangError::BuiltinArity {
                        builtin: builtin.to_string(),
                        found: args.len(),
                    });
                }
            }
        }
        let bound: BTreeSet<&str> = antecedent
            .iter()
            .filter(|a| !a.is_builtin())
            .flat_map(Atom::variables)
            .collect();
        let needs_binding = antecedent
            .iter()
            .filter(|a| a.is_builtin())
            .chain(consequent.iter())
            .flat_map(Atom::variables);
        for var in needs_binding {
            if !bound.contains(var) {
                return Err(LangError::UnsafeRule {
                    rule: id,
                    variable: var.to_string(),
                });
            }
        }
        Ok(Rule {
            id,
            antecedent,
            consequent,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn antecedent(&self) -> &[Atom] {
        &self.antecedent
    }

    pub fn consequent(&self) -> &[Atom] {
        &self.consequent
    }

    /// Distinct variables of the antecedent in first-occurrence order.
    pub fn variables(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for v in self.antecedent.iter().flat_map(Atom::variables) {
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
        seen
    }
}

/// Declares `inverse` as the inverse of `property`: `p(a, b)` entails
/// `q(b, a)` and vice versa.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InverseAxiom {
    property: Iri,
    inverse: Iri,
}

impl InverseAxiom {
    pub fn new(property: Iri, inverse: Iri) -> Result<Self, LangError> {
        if property == inverse {
            return Err(LangError::SelfInverse {
                property: property.to_string(),
                line: None,
            });
        }
        Ok(InverseAxiom { property, inverse })
    }

    pub fn property(&self) -> &Iri {
        &self.property
    }

    pub fn inverse(&self) -> &Iri {
        &self.inverse
    }
}

impl fmt::Display for InverseAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@inverse {} {} .", self.property, self.inverse)
    }
}
