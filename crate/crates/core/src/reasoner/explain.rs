use std::collections::HashSet;
use std::fmt;

use crate::reasoner::{Closure, Justification, ReasonError};
use crate::term::Fact;

/// A justification tree for a fact in a closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Explanation {
    Asserted(Fact),
    Derived {
        fact: Fact,
        /// Each way of deriving the fact, with explanations of the facts it
        /// consumed.
        justifications: Vec<(Justification, Vec<Explanation>)>,
    },
    /// A derived fact already expanded earlier in the tree.
    Repeated(Fact),
}

impl Explanation {
    pub fn fact(&self) -> &Fact {
        match self {
            Explanation::Asserted(fact) | Explanation::Derived { fact, .. } | Explanation::Repeated(fact) => fact,
        }
    }

    /// Depth of the tree counting fact levels; leaves are 1.
    pub fn depth(&self) -> usize {
        match self {
            Explanation::Asserted(_) | Explanation::Repeated(_) => 1,
            Explanation::Derived { justifications, .. } => {
                1 + justifications
                    .iter()
                    .flat_map(|(_, subs)| subs.iter().map(Explanation::depth))
                    .max()
                    .unwrap_or(0)
            }
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        let pad = "  ".repeat(indent);
        match self {
            Explanation::Asserted(fact) => writeln!(f, "{pad}{fact}  [asserted]"),
            Explanation::Repeated(fact) => writeln!(f, "{pad}{fact}  [see above]"),
            Explanation::Derived { fact, justifications } => {
                writeln!(f, "{pad}{fact}")?;
                for (justification, subs) in justifications {
                    if justification.binding.is_empty() {
                        writeln!(f, "{pad}  <- {}", justification.source)?;
                    } else {
                        writeln!(f, "{pad}  <- {} {{{}}}", justification.source, justification.binding)?;
                    }
                    for sub in subs {
                        sub.write(f, indent + 2)?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Explanation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

/// Explains how `fact` entered the closure. Terminates because every
/// recorded justification only consumes facts from earlier iterations.
/// Each derived fact is expanded once, at its first occurrence in
/// depth-first order; later occurrences are [`Explanation::Repeated`].
pub fn explain(closure: &Closure, fact: &Fact) -> Result<Explanation, ReasonError> {
    if !closure.base().contains(fact) {
        return Err(ReasonError::FactNotInClosure(fact.to_string()));
    }
    Ok(expand(closure, fact, &mut HashSet::new()))
}

fn expand(closure: &Closure, fact: &Fact, expanded: &mut HashSet<Fact>) -> Explanation {
    let justifications = closure.provenance(fact);
    if closure.is_input(fact) || justifications.is_empty() {
        return Explanation::Asserted(fact.clone());
    }
    if !expanded.insert(fact.clone()) {
        return Explanation::Repeated(fact.clone());
    }
    let justifications = justifications
        .iter()
        .map(|j| {
            let subs = j.antecedents.iter().map(|a| expand(closure, a, expanded)).collect();
            (j.clone(), subs)
        })
        .collect();
    Explanation::Derived {
        fact: fact.clone(),
        justifications,
    }
}
