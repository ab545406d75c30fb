//! Random programs and a brute-force evaluator used as an oracle.
//!
//! The oracle shares nothing with the engine beyond the data types: it
//! matches each body atom against every fact with its predicate (and subject,
//! once bound),
//! checks comparisons itself, and repeats whole passes until nothing changes.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use icorule::lang::{SWRLB, DEFAULT_BASE};
use icorule::{Atom, Fact, InverseAxiom, Iri, Literal, Rule, Term, Value};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub const COMPARISONS: [&str; 6] = [
    "greaterThan",
    "greaterThanOrEqual",
    "lessThan",
    "lessThanOrEqual",
    "equal",
    "notEqual",
];

pub fn name(local: &str) -> Iri {
    Iri::new("", local, DEFAULT_BASE)
}

pub fn builtin(local: &str) -> Iri {
    Iri::new("swrlb", local, SWRLB)
}

#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub individuals: usize,
    pub classes: usize,
    pub properties: usize,
    pub max_facts: usize,
    pub max_rules: usize,
    pub max_axioms: usize,
    pub max_body: usize,
}

impl Shape {
    pub const SMALL: Shape = Shape {
        individuals: 60,
        classes: 6,
        properties: 5,
        max_facts: 1000,
        max_rules: 20,
        max_axioms: 3,
        max_body: 4,
    };

    /// Desk-scale workload.
    pub const DESK: Shape = Shape {
        individuals: 2000,
        classes: 20,
        properties: 10,
        max_facts: 10_000,
        max_rules: 50,
        max_axioms: 3,
        max_body: 4,
    };

    /// Small enough for the brute-force oracle.
    pub const ORACLE: Shape = Shape {
        individuals: 30,
        classes: 6,
        properties: 5,
        max_facts: 300,
        max_rules: 12,
        max_axioms: 3,
        max_body: 4,
    };
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub facts: Vec<Fact>,
    pub rules: Vec<Rule>,
    pub axioms: Vec<InverseAxiom>,
}

struct Vocab {
    individuals: Vec<Iri>,
    classes: Vec<Iri>,
    properties: Vec<Iri>,
    /// Integer-valued property.
    number: Iri,
}

impl Vocab {
    fn new(shape: &Shape) -> Self {
        Vocab {
            individuals: (0..shape.individuals).map(|i| name(&format!("e{i}"))).collect(),
            classes: (0..shape.classes).map(|i| name(&format!("C{i}"))).collect(),
            properties: (0..shape.properties).map(|i| name(&format!("p{i}"))).collect(),
            number: name("n"),
        }
    }
}

fn pick<'a, T>(rng: &mut StdRng, items: &'a [T]) -> &'a T {
    items.choose(rng).expect("non-empty")
}

fn random_fact(rng: &mut StdRng, v: &Vocab) -> Fact {
    let ind = pick(rng, &v.individuals).clone();
    match rng.gen_range(0..10) {
        0..=3 => Fact::class(pick(rng, &v.classes).clone(), ind),
        4..=8 => Fact::property(pick(rng, &v.properties).clone(), ind, pick(rng, &v.individuals).clone()),
        _ => Fact::property(v.number.clone(), ind, Literal::Integer(rng.gen_range(0..20))),
    }
}

fn random_rule(rng: &mut StdRng, v: &Vocab, id: String, max_body: usize) -> Option<Rule> {
    let mut ind_vars: Vec<String> = vec!["x0".into()];
    let mut num_vars: Vec<String> = Vec::new();
    let mut body = Vec::new();
    let fresh = |vars: &mut Vec<String>, prefix: &str, n: usize| {
        let name = format!("{prefix}{n}");
        vars.push(name.clone());
        name
    };
    let mut counter = 1;
    let atoms = rng.gen_range(1..=max_body);
    for _ in 0..atoms {
        let anchor = Term::var(pick(rng, &ind_vars).clone());
        match rng.gen_range(0..10) {
            0..=2 => body.push(Atom::class(pick(rng, &v.classes).clone(), anchor)),
            3..=8 => {
                let other = match rng.gen_range(0..10) {
                    0 => Term::Individual(pick(rng, &v.individuals).clone()),
                    1..=3 => Term::var(pick(rng, &ind_vars).clone()),
                    _ => {
                        counter += 1;
                        Term::var(fresh(&mut ind_vars, "x", counter))
                    }
                };
                let p = pick(rng, &v.properties).clone();
                if rng.gen_bool(0.5) {
                    body.push(Atom::property(p, anchor, other));
                } else if let Term::Individual(_) = other {
                    body.push(Atom::property(p, anchor, other));
                } else {
                    body.push(Atom::property(p, other, anchor));
                }
            }
            _ => {
                counter += 1;
                let k = fresh(&mut num_vars, "k", counter);
                body.push(Atom::property(v.number.clone(), anchor, Term::var(&k)));
                let rhs = if num_vars.len() > 1 && rng.gen_bool(0.3) {
                    Term::var(pick(rng, &num_vars).clone())
                } else {
                    Term::Literal(Literal::Integer(rng.gen_range(0..20)))
                };
                let args = if rng.gen_bool(0.5) { vec![Term::var(&k), rhs] } else { vec![rhs, Term::var(&k)] };
                let b = Atom::Builtin {
                    builtin: builtin(pick(rng, &COMPARISONS)),
                    args,
                };
                let at = rng.gen_range(0..=body.len());
                body.insert(at, b);
            }
        }
    }
    if body.iter().all(Atom::is_builtin) {
        return None;
    }
    // Only variables that actually occur in a matching atom may be used in the head.
    let bound: BTreeSet<String> = body
        .iter()
        .filter(|a| !a.is_builtin())
        .flat_map(|a| a.variables().map(str::to_string).collect::<Vec<_>>())
        .collect();
    ind_vars.retain(|x| bound.contains(x));
    num_vars.retain(|x| bound.contains(x));
    if ind_vars.is_empty() {
        return None;
    }
    // Property heads only relate variables already related in the body, so
    // derived edges stay within the input's pair graph and joins stay sparse.
    let pairs: Vec<(Term, Term)> = body
        .iter()
        .filter_map(|a| match a {
            Atom::Property { property, subject, object } if *property != v.number && matches!(object, Term::Variable(_)) => {
                Some((subject.clone(), object.clone()))
            }
            _ => None,
        })
        .filter(|(s, _)| matches!(s, Term::Variable(_)))
        .collect();
    let mut head = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let a = Term::var(pick(rng, &ind_vars).clone());
        head.push(match rng.gen_range(0..10) {
            0..=3 => Atom::class(pick(rng, &v.classes).clone(), a),
            4..=8 if !pairs.is_empty() => {
                let (s, o) = pick(rng, &pairs).clone();
                let (s, o) = if rng.gen_bool(0.5) { (s, o) } else { (o, s) };
                Atom::property(pick(rng, &v.properties).clone(), s, o)
            }
            4..=8 => Atom::class(pick(rng, &v.classes).clone(), a),
            _ if !num_vars.is_empty() => Atom::property(v.number.clone(), a, Term::var(pick(rng, &num_vars).clone())),
            _ => Atom::class(pick(rng, &v.classes).clone(), a),
        });
    }
    Rule::new(id, body, head).ok()
}

/// A random instance with at most `shape.max_facts` facts and `shape.max_rules` rules.
pub fn instance(seed: u64, shape: &Shape) -> Instance {
    build(seed, shape, None, None)
}

/// A random instance with exactly `facts` facts (duplicates included) and `rules` rules.
pub fn instance_of_size(seed: u64, shape: &Shape, facts: usize, rules: usize) -> Instance {
    build(seed, shape, Some(facts), Some(rules))
}

fn build(seed: u64, shape: &Shape, n_facts: Option<usize>, n_rules: Option<usize>) -> Instance {
    let mut rng = StdRng::seed_from_u64(seed);
    let v = Vocab::new(shape);
    let n_facts = n_facts.unwrap_or_else(|| rng.gen_range(0..=shape.max_facts));
    let facts = (0..n_facts).map(|_| random_fact(&mut rng, &v)).collect();
    let n_rules = n_rules.unwrap_or_else(|| rng.gen_range(0..=shape.max_rules));
    let mut rules = Vec::new();
    let mut i = 0;
    while rules.len() < n_rules {
        if let Some(r) = random_rule(&mut rng, &v, format!("r{i}"), shape.max_body) {
            rules.push(r);
        }
        i += 1;
    }
    let mut axioms = Vec::new();
    if shape.properties > 1 {
        for _ in 0..rng.gen_range(0..=shape.max_axioms) {
            let p = pick(&mut rng, &v.properties).clone();
            let q = pick(&mut rng, &v.properties).clone();
            if let Ok(a) = InverseAxiom::new(p, q) {
                if !axioms.contains(&a) {
                    axioms.push(a);
                }
            }
        }
    }
    Instance { facts, rules, axioms }
}

pub type Env = BTreeMap<String, Value>;

/// Pairs an atom's terms with a fact's values; `None` if the predicates differ.
fn align(atom: &Atom, fact: &Fact) -> Option<Vec<(Term, Value)>> {
    match (atom, fact) {
        (Atom::Class { class, arg }, Fact::Class { class: c, individual }) if class == c => {
            Some(vec![(arg.clone(), Value::Individual(individual.clone()))])
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
        ) if property == p => Some(vec![(subject.clone(), Value::Individual(s.clone())), (object.clone(), o.clone())]),
        _ => None,
    }
}

/// Extends `env` so that `atom` denotes `fact`.
pub fn brute_unify(atom: &Atom, fact: &Fact, env: &Env) -> Option<Env> {
    let pairs = align(atom, fact)?;
    let mut fresh: Vec<(String, Value)> = Vec::new();
    for (term, value) in pairs {
        let ok = match &term {
            Term::Variable(v) => match env.get(v).or_else(|| fresh.iter().find(|(n, _)| n == v).map(|(_, x)| x)) {
                Some(existing) => *existing == value,
                None => {
                    fresh.push((v.clone(), value));
                    true
                }
            },
            Term::Individual(i) => value == Value::Individual(i.clone()),
            Term::Literal(l) => value == Value::Literal(l.clone()),
        };
        if !ok {
            return None;
        }
    }
    let mut env = env.clone();
    env.extend(fresh);
    Some(env)
}

fn value_of(term: &Term, env: &Env) -> Option<Value> {
    match term {
        Term::Variable(v) => env.get(v).cloned(),
        Term::Individual(i) => Some(Value::Individual(i.clone())),
        Term::Literal(l) => Some(Value::Literal(l.clone())),
    }
}

/// Integer comparison by built-in local name.
pub fn compare(op: &str, a: i64, b: i64) -> bool {
    match op {
        "greaterThan" => a > b,
        "greaterThanOrEqual" => a >= b,
        "lessThan" => a < b,
        "lessThanOrEqual" => a <= b,
        "equal" => a == b,
        "notEqual" => a != b,
        other => panic!("oracle has no built-in `{other}`"),
    }
}

pub fn builtin_holds(atom: &Atom, env: &Env) -> bool {
    let Atom::Builtin { builtin, args } = atom else {
        unreachable!()
    };
    let op = builtin.expansion().strip_prefix(SWRLB).expect("swrlb built-in");
    let ints: Vec<i64> = args
        .iter()
        .map(|t| match value_of(t, env) {
            Some(Value::Literal(Literal::Integer(i))) => i,
            other => panic!("non-integer built-in argument {other:?}"),
        })
        .collect();
    compare(op, ints[0], ints[1])
}

fn ground(atom: &Atom, env: &Env) -> Option<Fact> {
    match atom {
        Atom::Class { class, arg } => match value_of(arg, env)? {
            Value::Individual(i) => Some(Fact::class(class.clone(), i)),
            Value::Literal(_) => None,
        },
        Atom::Property {
            property,
            subject,
            object,
        } => match value_of(subject, env)? {
            Value::Individual(s) => Some(Fact::property(property.clone(), s, value_of(object, env)?)),
            Value::Literal(_) => None,
        },
        Atom::Builtin { .. } => None,
    }
}

/// Every binding of the non-built-in atoms against `facts`, in full.
pub fn brute_bindings(atoms: &[&Atom], facts: &[Fact]) -> Vec<Env> {
    let mut envs = vec![Env::new()];
    for atom in atoms {
        let mut next = Vec::new();
        for env in &envs {
            for fact in facts {
                if let Some(e) = brute_unify(atom, fact, env) {
                    next.push(e);
                }
            }
        }
        envs = next;
    }
    envs
}

/// Facts by predicate, and by predicate and subject.
type Bucket = (Iri, Option<Value>);

/// Bindings of a whole body, taking next the atom with the most bound
/// arguments. A fully ground atom is a membership test; otherwise every fact
/// of its predicate is tried. Built-ins filter as soon as their arguments are
/// bound.
fn body_bindings(body: &[Atom], seen: &HashSet<Fact>, by_predicate: &HashMap<Bucket, Vec<Fact>>) -> Vec<Env> {
    let mut envs = vec![Env::new()];
    let mut pending: Vec<&Atom> = body.iter().filter(|a| a.is_builtin()).collect();
    let mut remaining: Vec<&Atom> = body.iter().filter(|a| !a.is_builtin()).collect();
    let mut bound: BTreeSet<&str> = BTreeSet::new();
    while !remaining.is_empty() {
        let score = |a: &Atom| a.args().iter().filter(|t| !matches!(t, Term::Variable(v) if !bound.contains(v.as_str()))).count();
        let best = (0..remaining.len()).rev().max_by_key(|&i| score(remaining[i])).expect("non-empty");
        let atom = remaining.remove(best);
        bound.extend(atom.variables());
        let mut next = Vec::new();
        for env in &envs {
            let subject = match atom.args()[0] {
                Term::Variable(v) => env.get(v).cloned(),
                t => t.as_value(),
            };
            let key = (atom.predicate().clone(), subject);
            let bucket = by_predicate.get(&key).map_or(&[][..], Vec::as_slice);
            match ground(atom, env) {
                Some(f) => {
                    if seen.contains(&f) {
                        next.push(env.clone());
                    }
                }
                None => next.extend(bucket.iter().filter_map(|f| brute_unify(atom, f, env))),
            }
        }
        envs = next;
        let Some(first) = envs.first() else {
            return envs;
        };
        let (ready, rest): (Vec<&Atom>, Vec<&Atom>) = pending.into_iter().partition(|b| b.variables().all(|v| first.contains_key(v)));
        pending = rest;
        envs.retain(|env| ready.iter().all(|b| builtin_holds(b, env)));
    }
    envs
}

/// Closure as a set of canonical fact lines.
pub fn oracle_closure(facts: &[Fact], rules: &[Rule], axioms: &[InverseAxiom]) -> BTreeSet<String> {
    let mut all: Vec<Fact> = Vec::new();
    let mut seen: HashSet<Fact> = HashSet::new();
    for f in facts {
        if seen.insert(f.clone()) {
            all.push(f.clone());
        }
    }
    loop {
        let mut by_predicate: HashMap<Bucket, Vec<Fact>> = HashMap::new();
        for f in &all {
            let subject = Value::Individual(f.subject().clone());
            by_predicate.entry((f.predicate().clone(), None)).or_default().push(f.clone());
            by_predicate.entry((f.predicate().clone(), Some(subject))).or_default().push(f.clone());
        }
        let mut new = Vec::new();
        for rule in rules {
            for env in body_bindings(rule.antecedent(), &seen, &by_predicate) {
                for head in rule.consequent() {
                    new.push(ground(head, &env).expect("safe heads ground to facts"));
                }
            }
        }
        for axiom in axioms {
            for f in &all {
                if let Fact::Property {
                    property,
                    subject,
                    object: Value::Individual(o),
                } = f
                {
                    if property == axiom.property() {
                        new.push(Fact::property(axiom.inverse().clone(), o.clone(), subject.clone()));
                    }
                    if property == axiom.inverse() {
                        new.push(Fact::property(axiom.property().clone(), o.clone(), subject.clone()));
                    }
                }
            }
        }
        let before = all.len();
        for f in new {
            if seen.insert(f.clone()) {
                all.push(f);
            }
        }
        if all.len() == before {
            break;
        }
    }
    all.iter().map(Fact::to_line).collect()
}
