//! Rule bodies compiled to slot-indexed join plans.

use crate::kb::{FactBase, FactId};
use crate::lang::{Atom, Rule};
use crate::reasoner::builtins::{compare, Comparison};
use crate::reasoner::{Binding, Justification, ReasonError, Source};
use crate::term::{Fact, Iri, Term, Value};

#[derive(Clone, Debug)]
enum Slot {
    Var(usize),
    Const(Value),
}

#[derive(Clone, Debug)]
struct Pattern {
    predicate: Iri,
    subject: Slot,
    /// `None` for class atoms.
    object: Option<Slot>,
}

#[derive(Clone, Debug)]
struct Guard {
    op: Comparison,
    builtin: Iri,
    args: Vec<Slot>,
}

pub(crate) struct CompiledRule<'r> {
    rule: &'r Rule,
    vars: Vec<String>,
    body: Vec<Pattern>,
    guards: Vec<Guard>,
    head: Vec<Pattern>,
}

/// A join order plus the guards to test after each step.
struct Plan {
    order: Vec<usize>,
    /// `guards_after[k]` runs once the first `k` atoms of `order` matched.
    guards_after: Vec<Vec<usize>>,
    pivot: Option<usize>,
}

/// Receives the slots and antecedent fact ids of each match.
pub(crate) type Emit<'a> = dyn FnMut(&[Option<Value>], &[FactId]) -> Result<(), ReasonError> + 'a;

/// Restricts one body atom to facts with id `>= from`.
#[derive(Clone, Copy)]
pub(crate) struct Delta {
    pub atom: usize,
    pub from: FactId,
}

impl<'r> CompiledRule<'r> {
    pub(crate) fn compile(rule: &'r Rule) -> Result<Self, ReasonError> {
        let vars: Vec<String> = rule.variables().into_iter().map(str::to_string).collect();
        let slot = |t: &Term| match t {
            Term::Variable(v) => Slot::Var(vars.iter().position(|n| n == v).expect("rule variables are collected from the antecedent")),
            t => Slot::Const(t.as_value().expect("non-variable terms are ground")),
        };
        let pattern = |atom: &Atom| match atom {
            Atom::Class { class, arg } => Pattern {
                predicate: class.clone(),
                subject: slot(arg),
                object: None,
            },
            Atom::Property {
                property,
                subject,
                object,
            } => Pattern {
                predicate: property.clone(),
                subject: slot(subject),
                object: Some(slot(object)),
            },
            Atom::Builtin { .. } => unreachable!("built-ins are compiled as guards"),
        };
        let mut body = Vec::new();
        let mut guards = Vec::new();
        for atom in rule.antecedent() {
            match atom {
                Atom::Builtin { builtin, args } => guards.push(Guard {
                    op: Comparison::lookup(builtin)?,
                    builtin: builtin.clone(),
                    args: args.iter().map(slot).collect(),
                }),
                atom => body.push(pattern(atom)),
            }
        }
        let head = rule.consequent().iter().map(pattern).collect();
        Ok(CompiledRule {
            rule,
            vars,
            body,
            guards,
            head,
        })
    }

    pub(crate) fn rule(&self) -> &Rule {
        self.rule
    }

    pub(crate) fn body_len(&self) -> usize {
        self.body.len()
    }

    fn plan(&self, pivot: Option<usize>) -> Plan {
        let mut bound = vec![false; self.vars.len()];
        let is_bound = |s: &Slot, bound: &[bool]| match s {
            Slot::Var(i) => bound[*i],
            Slot::Const(_) => true,
        };
        let mut remaining: Vec<usize> = (0..self.body.len()).collect();
        let mut order = Vec::with_capacity(self.body.len());
        let mut next = pivot;
        loop {
            let chosen = match next.take() {
                Some(p) => p,
                None => {
                    // Most bound positions first; textual order breaks ties.
                    let Some(&best) = remaining.iter().max_by_key(|&&i| {
                        let p = &self.body[i];
                        let slots = std::iter::once(&p.subject).chain(p.object.as_ref());
                        let (n, b) = slots.fold((0, 0), |(n, b), s| (n + 1, b + is_bound(s, &bound) as usize));
                        (b == n, b, std::cmp::Reverse(i))
                    }) else {
                        break;
                    };
                    best
                }
            };
            remaining.retain(|&i| i != chosen);
            let p = &self.body[chosen];
            for s in std::iter::once(&p.subject).chain(p.object.as_ref()) {
                if let Slot::Var(v) = s {
                    bound[*v] = true;
                }
            }
            order.push(chosen);
        }

        let mut guards_after = vec![Vec::new(); order.len() + 1];
        let mut bound = vec![false; self.vars.len()];
        let ready = |g: &Guard, bound: &[bool]| g.args.iter().all(|s| is_bound(s, bound));
        let mut scheduled = vec![false; self.guards.len()];
        for k in 0..=order.len() {
            if k > 0 {
                let p = &self.body[order[k - 1]];
                for s in std::iter::once(&p.subject).chain(p.object.as_ref()) {
                    if let Slot::Var(v) = s {
                        bound[*v] = true;
                    }
                }
            }
            for (g, guard) in self.guards.iter().enumerate() {
                if !scheduled[g] && ready(guard, &bound) {
                    scheduled[g] = true;
                    guards_after[k].push(g);
                }
            }
        }
        debug_assert!(scheduled.iter().all(|&s| s), "safety guarantees every guard becomes ready");
        Plan {
            order,
            guards_after,
            pivot,
        }
    }

    /// Enumerates every satisfying assignment, optionally restricting one
    /// atom to the delta, and calls `emit` with the slots and the fact ids
    /// matched by each body atom (in textual order).
    pub(crate) fn for_each_match(
        &self,
        fb: &FactBase,
        delta: Option<Delta>,
        emit: &mut Emit<'_>,
    ) -> Result<(), ReasonError> {
        let plan = self.plan(delta.map(|d| d.atom));
        let mut slots = vec![None; self.vars.len()];
        let mut used = vec![0; self.body.len()];
        let from = delta.map_or(0, |d| d.from);
        if !self.guards_hold(&plan.guards_after[0], &slots)? {
            return Ok(());
        }
        self.search(fb, &plan, from, 0, &mut slots, &mut used, emit)
    }

    fn guards_hold(&self, guards: &[usize], slots: &[Option<Value>]) -> Result<bool, ReasonError> {
        for &g in guards {
            let guard = &self.guards[g];
            let args = guard
                .args
                .iter()
                .map(|s| match s {
                    Slot::Var(i) => slots[*i].clone().ok_or_else(|| ReasonError::UnboundArgument {
                        builtin: guard.builtin.to_string(),
                        variable: self.vars[*i].clone(),
                    }),
                    Slot::Const(v) => Ok(v.clone()),
                })
                .collect::<Result<Vec<_>, _>>()?;
            if !compare(guard.op, &guard.builtin, &args)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    #[allow(clippy::too_many_arguments)]
    fn search(
        &self,
        fb: &FactBase,
        plan: &Plan,
        delta_from: FactId,
        step: usize,
        slots: &mut Vec<Option<Value>>,
        used: &mut Vec<FactId>,
        emit: &mut Emit<'_>,
    ) -> Result<(), ReasonError> {
        if step == plan.order.len() {
            return emit(slots, used);
        }
        let atom_index = plan.order[step];
        let pattern = &self.body[atom_index];
        let value_of = |s: &Slot, slots: &[Option<Value>]| match s {
            Slot::Var(i) => slots[*i].clone(),
            Slot::Const(v) => Some(v.clone()),
        };
        let subject = value_of(&pattern.subject, slots);
        let one: [FactId; 1];
        let candidates: &[FactId] = match (&pattern.object, subject) {
            (_, Some(Value::Literal(_))) => &[],
            (None, Some(Value::Individual(ind))) => match fb.id_of(&Fact::class(pattern.predicate.clone(), ind)) {
                Some(id) => {
                    one = [id];
                    &one
                }
                None => &[],
            },
            (None, None) => fb.by_predicate(&pattern.predicate),
            (Some(object), Some(Value::Individual(s))) => match value_of(object, slots) {
                Some(o) => match fb.id_of(&Fact::property(pattern.predicate.clone(), s, o)) {
                    Some(id) => {
                        one = [id];
                        &one
                    }
                    None => &[],
                },
                None => fb.by_property_subject(&pattern.predicate, &s),
            },
            (Some(object), None) => match value_of(object, slots) {
                Some(o) => fb.by_property_object(&pattern.predicate, &o),
                None => fb.by_predicate(&pattern.predicate),
            },
        };
        let candidates = if plan.pivot == Some(atom_index) {
            let start = candidates.partition_point(|&id| id < delta_from);
            &candidates[start..]
        } else {
            candidates
        };
        for &id in candidates {
            let fact = fb.get(id);
            let mut newly = [usize::MAX; 2];
            let ok = match (fact, &pattern.object) {
                (Fact::Class { individual, .. }, None) => {
                    bind_slot(&pattern.subject, &Value::Individual(individual.clone()), slots, &mut newly[0])
                }
                (Fact::Property { subject, object, .. }, Some(obj_slot)) => {
                    bind_slot(&pattern.subject, &Value::Individual(subject.clone()), slots, &mut newly[0])
                        && bind_slot(obj_slot, object, slots, &mut newly[1])
                }
                _ => false,
            };
            if ok && self.guards_hold(&plan.guards_after[step + 1], slots)? {
                used[atom_index] = id;
                self.search(fb, plan, delta_from, step + 1, slots, used, emit)?;
            }
            for n in newly {
                if n != usize::MAX {
                    slots[n] = None;
                }
            }
        }
        Ok(())
    }

    /// The consequent facts for one match.
    pub(crate) fn heads(&self, slots: &[Option<Value>]) -> Result<Vec<Fact>, ReasonError> {
        let value_of = |s: &Slot| match s {
            Slot::Var(i) => slots[*i].clone().expect("safe rules bind every consequent variable"),
            Slot::Const(v) => v.clone(),
        };
        let mut facts = Vec::with_capacity(self.head.len());
        for p in &self.head {
            let Value::Individual(subject) = value_of(&p.subject) else {
                return Err(ReasonError::LiteralSubject {
                    rule: self.rule.id().to_string(),
                    atom: p.predicate.to_string(),
                });
            };
            facts.push(match &p.object {
                None => Fact::class(p.predicate.clone(), subject),
                Some(o) => Fact::property(p.predicate.clone(), subject, value_of(o)),
            });
        }
        Ok(facts)
    }

    /// The binding and antecedent facts of one match.
    pub(crate) fn justification(&self, fb: &FactBase, slots: &[Option<Value>], used: &[FactId]) -> Justification {
        let mut binding = Binding::new();
        for (name, value) in self.vars.iter().zip(slots) {
            if let Some(v) = value {
                binding.bind(name, v.clone());
            }
        }
        Justification {
            source: Source::Rule(self.rule.id().to_string()),
            binding,
            antecedents: used.iter().map(|&id| fb.get(id).clone()).collect(),
        }
    }
}

fn bind_slot(slot: &Slot, value: &Value, slots: &mut [Option<Value>], newly: &mut usize) -> bool {
    match slot {
        Slot::Const(c) => c == value,
        Slot::Var(i) => match &slots[*i] {
            Some(existing) => existing == value,
            None => {
                slots[*i] = Some(value.clone());
                *newly = *i;
                true
            }
        },
    }
}
