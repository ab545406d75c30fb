//! Forward-chaining evaluation of rules and inverse-property axioms to a
//! fixpoint, with a justification recorded for every derived fact.
//!
//! Each iteration evaluates every rule against the current base and applies
//! the inverse axioms, collects the facts that are not yet present, and then
//! asserts them all at once. Evaluation stops at the first iteration that
//! adds nothing. The semi-naive strategy only explores matches that use at
//! least one fact added by the previous iteration; the naive strategy
//! re-explores everything. Both reach the same closure.

mod builtins;
mod explain;
pub mod export;
mod join;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::kb::{FactBase, FactId};
use crate::lang::{Atom, InverseAxiom, Rule};
use crate::term::{sort_canonical, Fact, Iri, Value};

pub use builtins::eval_builtin;
pub use explain::{explain, Explanation};
use join::{CompiledRule, Delta};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonError {
    #[error("unknown built-in `{0}`")]
    UnknownBuiltin(String),
    #[error("built-in `{builtin}` expects integers, got `{value}`")]
    TypeMismatch { builtin: String, value: String },
    #[error("built-in `{builtin}` takes exactly two arguments, got {found}")]
    BuiltinArity { builtin: String, found: usize },
    #[error("built-in `{builtin}` evaluated with `?{variable}` unbound")]
    UnboundArgument { builtin: String, variable: String },
    #[error("rule `{rule}` would assert `{atom}` about a literal")]
    LiteralSubject { rule: String, atom: String },
    #[error("fixpoint not reached within {0} iterations")]
    IterationLimitExceeded(usize),
    #[error("`{0}` is not in the closure")]
    FactNotInClosure(String),
}

/// Variable assignments, keyed by variable name without the `?`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binding(BTreeMap<String, Value>);

impl Binding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &str) -> Option<&Value> {
        self.0.get(var)
    }

    /// Binds `var` to `value`. Returns false, leaving the binding unchanged,
    /// if `var` is already bound to something else.
    pub fn bind(&mut self, var: &str, value: Value) -> bool {
        match self.0.get(var) {
            Some(existing) => *existing == value,
            None => {
                self.0.insert(var.to_string(), value);
                true
            }
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Value)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (var, value)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "?{var} = {value}")?;
        }
        Ok(())
    }
}

/// What produced a derived fact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Rule(String),
    Inverse { property: Iri, inverse: Iri },
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Rule(id) => write!(f, "rule {id}"),
            Source::Inverse { property, inverse } => write!(f, "inverse {property} {inverse}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Justification {
    pub source: Source,
    /// Empty for axioms.
    pub binding: Binding,
    /// The facts the rule body (or the axiom) consumed, in body order.
    pub antecedents: Vec<Fact>,
}

/// A fact together with one way of deriving it.
pub type Derivation = (Fact, Justification);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    Naive,
    #[default]
    SemiNaive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_iterations: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_iterations: 10_000 }
    }
}

/// A rule that never fired, with the antecedent classes that have no
/// instances at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LintNote {
    pub rule: String,
    pub unmatched_classes: Vec<Iri>,
}

impl fmt::Display for LintNote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "note: rule `{}` never fired", self.rule)?;
        if !self.unmatched_classes.is_empty() {
            let names: Vec<String> = self.unmatched_classes.iter().map(Iri::to_string).collect();
            write!(f, "; no individuals of {}", names.join(", "))?;
        }
        Ok(())
    }
}

/// The result of running to a fixpoint.
#[derive(Clone, Debug)]
pub struct Closure {
    base: FactBase,
    input_len: usize,
    iterations: usize,
    firings: BTreeMap<String, usize>,
    lints: Vec<LintNote>,
}

impl Closure {
    /// Every fact, asserted or derived, with provenance attached.
    pub fn base(&self) -> &FactBase {
        &self.base
    }

    pub fn into_base(self) -> FactBase {
        self.base
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn is_input(&self, fact: &Fact) -> bool {
        self.base.id_of(fact).is_some_and(|id| id < self.input_len)
    }

    pub fn is_derived(&self, fact: &Fact) -> bool {
        self.base.id_of(fact).is_some_and(|id| id >= self.input_len)
    }

    pub fn input(&self) -> &[Fact] {
        &self.base.facts()[..self.input_len]
    }

    /// Derived facts sorted canonically.
    pub fn derived(&self) -> Vec<Fact> {
        let mut facts = self.base.facts()[self.input_len..].to_vec();
        sort_canonical(&mut facts);
        facts
    }

    pub fn derived_len(&self) -> usize {
        self.base.len() - self.input_len
    }

    pub fn derived_base(&self) -> FactBase {
        FactBase::from_facts(self.base.facts()[self.input_len..].iter().cloned())
    }

    pub fn provenance(&self, fact: &Fact) -> &[Justification] {
        self.base.provenance(fact)
    }

    /// Number of satisfying antecedent matches seen per rule id.
    pub fn firings(&self) -> &BTreeMap<String, usize> {
        &self.firings
    }

    pub fn lints(&self) -> &[LintNote] {
        &self.lints
    }
}

/// Every consequent fact `rule` yields against `fb`, with justifications.
/// Includes facts already present; sorted and deduplicated.
pub fn evaluate_rule(fb: &FactBase, rule: &Rule) -> Result<Vec<Derivation>, ReasonError> {
    let compiled = CompiledRule::compile(rule)?;
    let mut out = BTreeSet::new();
    compiled.for_each_match(fb, None, &mut |slots, used| {
        let justification = compiled.justification(fb, slots, used);
        for fact in compiled.heads(slots)? {
            out.insert((fact, justification.clone()));
        }
        Ok(())
    })?;
    Ok(out.into_iter().collect())
}

fn inverse_step(fb: &FactBase, axioms: &[InverseAxiom], from: FactId, emit: &mut dyn FnMut(Fact, Justification)) {
    for axiom in axioms {
        for (p, q) in [(axiom.property(), axiom.inverse()), (axiom.inverse(), axiom.property())] {
            let ids = fb.by_predicate(p);
            let start = ids.partition_point(|&id| id < from);
            for &id in &ids[start..] {
                let fact = fb.get(id);
                let Fact::Property { subject, object: Value::Individual(object), .. } = fact else {
                    continue;
                };
                let flipped = Fact::property(q.clone(), object.clone(), subject.clone());
                if fb.contains(&flipped) {
                    continue;
                }
                emit(
                    flipped,
                    Justification {
                        source: Source::Inverse {
                            property: axiom.property().clone(),
                            inverse: axiom.inverse().clone(),
                        },
                        binding: Binding::new(),
                        antecedents: vec![fact.clone()],
                    },
                );
            }
        }
    }
}

/// The inverse facts missing from `fb`, with justifications.
pub fn apply_inverse_axioms(fb: &FactBase, axioms: &[InverseAxiom]) -> Vec<Derivation> {
    let mut out = BTreeSet::new();
    inverse_step(fb, axioms, 0, &mut |f, j| {
        out.insert((f, j));
    });
    out.into_iter().collect()
}

/// Runs rules and axioms to a fixpoint with the semi-naive strategy.
pub fn run_fixpoint(fb: FactBase, rules: &[Rule], axioms: &[InverseAxiom], limits: &Limits) -> Result<Closure, ReasonError> {
    run_fixpoint_with(fb, rules, axioms, limits, Strategy::SemiNaive)
}

pub fn run_fixpoint_with(
    mut fb: FactBase,
    rules: &[Rule],
    axioms: &[InverseAxiom],
    limits: &Limits,
    strategy: Strategy,
) -> Result<Closure, ReasonError> {
    let compiled = rules.iter().map(CompiledRule::compile).collect::<Result<Vec<_>, _>>()?;
    let input_len = fb.len();
    let mut firings: BTreeMap<String, usize> = rules.iter().map(|r| (r.id().to_string(), 0)).collect();
    let mut delta_from = 0;
    let mut iterations = 0;
    loop {
        iterations += 1;
        if iterations > limits.max_iterations {
            return Err(ReasonError::IterationLimitExceeded(limits.max_iterations));
        }
        let mut found: HashMap<Fact, BTreeSet<Justification>> = HashMap::new();
        let explore_all = iterations == 1 || strategy == Strategy::Naive;
        for rule in &compiled {
            let deltas: Vec<Option<Delta>> = if explore_all {
                vec![None]
            } else {
                (0..rule.body_len()).map(|atom| Some(Delta { atom, from: delta_from })).collect()
            };
            let mut matches = 0;
            for delta in deltas {
                rule.for_each_match(&fb, delta, &mut |slots, used| {
                    matches += 1;
                    let mut justification = None;
                    for fact in rule.heads(slots)? {
                        if !fb.contains(&fact) {
                            let j = justification.get_or_insert_with(|| rule.justification(&fb, slots, used));
                            found.entry(fact).or_default().insert(j.clone());
                        }
                    }
                    Ok(())
                })?;
            }
            *firings.get_mut(rule.rule().id()).expect("every rule has a counter") += matches;
        }
        let from = if explore_all { 0 } else { delta_from };
        inverse_step(&fb, axioms, from, &mut |fact, justification| {
            found.entry(fact).or_default().insert(justification);
        });

        if found.is_empty() {
            break;
        }
        delta_from = fb.len();
        let mut new_facts: Vec<(Fact, BTreeSet<Justification>)> = found.into_iter().collect();
        new_facts.sort_by(|a, b| a.0.cmp(&b.0));
        for (fact, justifications) in new_facts {
            let (id, fresh) = fb.insert(fact);
            debug_assert!(fresh);
            fb.set_provenance(id, justifications.into_iter().collect());
        }
    }

    let lints = rules
        .iter()
        .filter(|r| firings[r.id()] == 0)
        .map(|r| {
            let mut unmatched: Vec<Iri> = r
                .antecedent()
                .iter()
                .filter_map(|a| match a {
                    Atom::Class { class, .. } if fb.by_predicate(class).is_empty() => Some(class.clone()),
                    _ => None,
                })
                .collect();
            unmatched.sort();
            unmatched.dedup();
            LintNote {
                rule: r.id().to_string(),
                unmatched_classes: unmatched,
            }
        })
        .collect();

    Ok(Closure {
        base: fb,
        input_len,
        iterations,
        firings,
        lints,
    })
}
