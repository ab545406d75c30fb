//! The fact base: a deduplicating set of ground facts with predicate and
//! subject indexes, plus the provenance attached to derived facts.

use std::collections::HashMap;

use crate::lang::Atom;
use crate::reasoner::{Binding, Justification};
use crate::term::{sort_canonical, Fact, Iri, Term, Value};

/// Position of a fact in insertion order. Ids are dense and never reused.
pub type FactId = usize;

#[derive(Clone, Debug, Default)]
pub struct FactBase {
    facts: Vec<Fact>,
    ids: HashMap<Fact, FactId>,
    by_predicate: HashMap<Iri, Vec<FactId>>,
    by_subject: HashMap<Iri, Vec<FactId>>,
    by_property_subject: HashMap<(Iri, Iri), Vec<FactId>>,
    by_property_object: HashMap<(Iri, Value), Vec<FactId>>,
    provenance: HashMap<FactId, Vec<Justification>>,
}

impl FactBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_facts(facts: impl IntoIterator<Item = Fact>) -> Self {
        let mut fb = FactBase::new();
        for fact in facts {
            fb.assert_fact(fact);
        }
        fb
    }

    /// Inserts a fact. Returns true iff it was not already present.
    pub fn assert_fact(&mut self, fact: Fact) -> bool {
        self.insert(fact).1
    }

    /// Inserts a fact, returning its id and whether it was new.
    pub fn insert(&mut self, fact: Fact) -> (FactId, bool) {
        if let Some(&id) = self.ids.get(&fact) {
            return (id, false);
        }
        let id = self.facts.len();
        self.by_predicate.entry(fact.predicate().clone()).or_default().push(id);
        self.by_subject.entry(fact.subject().clone()).or_default().push(id);
        if let Fact::Property {
            property,
            subject,
            object,
        } = &fact
        {
            self.by_property_subject
                .entry((property.clone(), subject.clone()))
                .or_default()
                .push(id);
            self.by_property_object
                .entry((property.clone(), object.clone()))
                .or_default()
                .push(id);
        }
        self.ids.insert(fact.clone(), id);
        self.facts.push(fact);
        (id, true)
    }

    pub fn contains(&self, fact: &Fact) -> bool {
        self.ids.contains_key(fact)
    }

    pub fn id_of(&self, fact: &Fact) -> Option<FactId> {
        self.ids.get(fact).copied()
    }

    pub fn get(&self, id: FactId) -> &Fact {
        &self.facts[id]
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// Facts in insertion order.
    pub fn facts(&self) -> &[Fact] {
        &self.facts
    }

    pub fn iter(&self) -> impl Iterator<Item = &Fact> {
        self.facts.iter()
    }

    /// Ids of all facts with the given class or property, ascending.
    pub fn by_predicate(&self, predicate: &Iri) -> &[FactId] {
        self.by_predicate.get(predicate).map_or(&[], Vec::as_slice)
    }

    /// Ids of all facts whose subject (or typed individual) is `subject`.
    pub fn by_subject(&self, subject: &Iri) -> &[FactId] {
        self.by_subject.get(subject).map_or(&[], Vec::as_slice)
    }

    pub fn by_property_subject(&self, property: &Iri, subject: &Iri) -> &[FactId] {
        // The key has to be owned; clones of Iri are reference-count bumps.
        self.by_property_subject
            .get(&(property.clone(), subject.clone()))
            .map_or(&[], Vec::as_slice)
    }

    pub fn by_property_object(&self, property: &Iri, object: &Value) -> &[FactId] {
        self.by_property_object
            .get(&(property.clone(), object.clone()))
            .map_or(&[], Vec::as_slice)
    }

    /// Index entries of every predicate bucket, for consistency checks.
    pub fn predicate_buckets(&self) -> impl Iterator<Item = (&Iri, &[FactId])> {
        self.by_predicate.iter().map(|(k, v)| (k, v.as_slice()))
    }

    pub fn subject_buckets(&self) -> impl Iterator<Item = (&Iri, &[FactId])> {
        self.by_subject.iter().map(|(k, v)| (k, v.as_slice()))
    }

    /// Ids of facts that could match `pattern` under `binding`, narrowed by
    /// whatever arguments are already ground. Callers still have to unify.
    pub fn candidates(&self, pattern: &Atom, binding: &Binding) -> &[FactId] {
        let ground = |t: &Term| match t {
            Term::Variable(v) => binding.get(v).cloned(),
            t => t.as_value(),
        };
        match pattern {
            Atom::Class { class, arg } => match ground(arg) {
                Some(Value::Individual(ind)) => self.exact(&Fact::class(class.clone(), ind)),
                Some(Value::Literal(_)) => &[],
                None => self.by_predicate(class),
            },
            Atom::Property {
                property,
                subject,
                object,
            } => match (ground(subject), ground(object)) {
                (Some(Value::Literal(_)), _) => &[],
                (Some(Value::Individual(s)), Some(o)) => self.exact(&Fact::property(property.clone(), s, o)),
                (Some(Value::Individual(s)), None) => self.by_property_subject(property, &s),
                (None, Some(o)) => self.by_property_object(property, &o),
                (None, None) => self.by_predicate(property),
            },
            Atom::Builtin { .. } => &[],
        }
    }

    fn exact(&self, fact: &Fact) -> &[FactId] {
        self.ids.get(fact).map_or(&[], std::slice::from_ref)
    }

    /// Every extension of `partial` under which `pattern` becomes a fact of
    /// this base. Built-in patterns never match.
    pub fn match_pattern<'a>(&'a self, pattern: &'a Atom, partial: &'a Binding) -> impl Iterator<Item = Binding> + 'a {
        self.candidates(pattern, partial)
            .iter()
            .filter_map(move |&id| unify(pattern, &self.facts[id], partial))
    }

    /// Justifications recorded for a derived fact; empty for asserted facts.
    pub fn provenance(&self, fact: &Fact) -> &[Justification] {
        self.id_of(fact)
            .and_then(|id| self.provenance.get(&id))
            .map_or(&[], Vec::as_slice)
    }

    pub(crate) fn set_provenance(&mut self, id: FactId, justifications: Vec<Justification>) {
        self.provenance.insert(id, justifications);
    }

    /// All facts sorted by canonical text form.
    pub fn sorted_facts(&self) -> Vec<Fact> {
        let mut facts = self.facts.clone();
        sort_canonical(&mut facts);
        facts
    }

    /// The whole base as a canonical, sorted fact file.
    pub fn to_canonical_text(&self) -> String {
        crate::lang::format_facts(&self.sorted_facts())
    }
}

/// Extends `binding` so that `pattern` instantiates to `fact`, or `None` on
/// a mismatch or a conflicting variable.
pub fn unify(pattern: &Atom, fact: &Fact, binding: &Binding) -> Option<Binding> {
    fn bind(term: &Term, value: &Value, binding: &mut Binding) -> bool {
        match term {
            Term::Variable(v) => binding.bind(v, value.clone()),
            t => t.as_value().as_ref() == Some(value),
        }
    }
    let mut out = binding.clone();
    let ok = match (pattern, fact) {
        (Atom::Class { class, arg }, Fact::Class { class: c, individual }) => {
            class == c && bind(arg, &Value::Individual(individual.clone()), &mut out)
        }
        (
            Atom::Property {
                property,
                subject,
                object,
            },
            Fact::Property {
                property: p,
                subject: s,
                object: o,
            },
        ) => property == p && bind(subject, &Value::Individual(s.clone()), &mut out) && bind(object, o, &mut out),
        _ => false,
    };
    ok.then_some(out)
}

/// Facts only in `a` and facts only in `b`, each sorted canonically.
pub fn diff(a: &FactBase, b: &FactBase) -> (Vec<Fact>, Vec<Fact>) {
    let mut only_a: Vec<Fact> = a.iter().filter(|f| !b.contains(f)).cloned().collect();
    let mut only_b: Vec<Fact> = b.iter().filter(|f| !a.contains(f)).cloned().collect();
    sort_canonical(&mut only_a);
    sort_canonical(&mut only_b);
    (only_a, only_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{parse_atom, parse_facts, PrefixTable};

    fn iri(q: &str) -> Iri {
        PrefixTable::default().resolve_qname(q).unwrap()
    }

    fn base(text: &str) -> FactBase {
        FactBase::from_facts(parse_facts(text, &PrefixTable::default()).unwrap())
    }

    #[test]
    fn assert_is_idempotent() {
        let mut fb = FactBase::new();
        let f = Fact::class(iri("obo:ICO_0000398"), iri("I"));
        assert!(!fb.contains(&f));
        assert!(fb.assert_fact(f.clone()));
        assert!(!fb.assert_fact(f.clone()));
        assert!(fb.contains(&f));
        assert_eq!(fb.len(), 1);
    }

    #[test]
    fn property_fact_is_indexed_by_subject() {
        let mut fb = FactBase::new();
        let f = Fact::property(iri("obo:IAO_0000136"), iri("agree"), iri("data"));
        assert!(fb.assert_fact(f.clone()));
        let ids = fb.by_subject(&iri("agree"));
        assert_eq!(ids.len(), 1);
        assert_eq!(fb.get(ids[0]), &f);
        assert_eq!(fb.by_predicate(&iri("obo:IAO_0000136")), ids);
    }

    #[test]
    fn ground_pattern_yields_one_empty_extension() {
        let fb = base("A(x).\n");
        let pattern = parse_atom("A(x)", &PrefixTable::default()).unwrap();
        let results: Vec<Binding> = fb.match_pattern(&pattern, &Binding::new()).collect();
        assert_eq!(results, vec![Binding::new()]);
        let miss = parse_atom("A(y)", &PrefixTable::default()).unwrap();
        assert_eq!(fb.match_pattern(&miss, &Binding::new()).count(), 0);
    }

    #[test]
    fn partial_binding_narrows_match() {
        let fb = base("obo:IAO_0000136(agree, pi).\nobo:IAO_0000136(agree, team).\nobo:IAO_0000136(other, pi).\n");
        let pattern = parse_atom("obo:IAO_0000136(?agree, ?pi)", &PrefixTable::default()).unwrap();
        let mut partial = Binding::new();
        partial.bind("agree", Value::Individual(iri("agree")));
        partial.bind("pi", Value::Individual(iri("pi")));
        let results: Vec<Binding> = fb.match_pattern(&pattern, &partial).collect();
        assert_eq!(results, vec![partial.clone()]);

        let mut only_agree = Binding::new();
        only_agree.bind("agree", Value::Individual(iri("agree")));
        assert_eq!(fb.match_pattern(&pattern, &only_agree).count(), 2);
    }

    #[test]
    fn repeated_variable_must_agree() {
        let fb = base("p(a, a).\np(a, b).\n");
        let pattern = parse_atom("p(?x, ?x)", &PrefixTable::default()).unwrap();
        let results: Vec<Binding> = fb.match_pattern(&pattern, &Binding::new()).collect();
        assert_eq!(results.len(), 1);
        assert_eq!(results[0].get("x"), Some(&Value::Individual(iri("a"))));
    }

    #[test]
    fn conflicting_partial_is_no_match() {
        let fb = base("A(x).\n");
        let pattern = parse_atom("A(?v)", &PrefixTable::default()).unwrap();
        let mut partial = Binding::new();
        partial.bind("v", Value::Individual(iri("y")));
        assert_eq!(fb.match_pattern(&pattern, &partial).count(), 0);
    }

    #[test]
    fn diff_sides_are_sorted() {
        let a = base("B(x).\nA(x).\nC(x).\n");
        let b = base("C(x).\nD(x).\n");
        let (only_a, only_b) = diff(&a, &b);
        let names: Vec<String> = only_a.iter().map(|f| f.to_string()).collect();
        assert_eq!(names, ["A(x)", "B(x)"]);
        assert_eq!(only_b.len(), 1);
        assert_eq!(diff(&a, &a), (vec![], vec![]));
    }
}
