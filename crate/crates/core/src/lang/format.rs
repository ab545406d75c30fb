use crate::lang::{Atom, InverseAxiom, LangError, PrefixTable, Rule};
use crate::term::{Fact, Term};

fn format_term(term: &Term, prefixes: &PrefixTable) -> Result<String, LangError> {
    Ok(match term {
        Term::Individual(iri) => prefixes.shorten(iri)?.to_string(),
        t => t.to_string(),
    })
}

fn format_atom(atom: &Atom, prefixes: &PrefixTable) -> Result<String, LangError> {
    let args = atom
        .args()
        .into_iter()
        .map(|t| format_term(t, prefixes))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(format!("{}({})", prefixes.shorten(atom.predicate())?, args.join(", ")))
}

fn format_conjunction(atoms: &[Atom], prefixes: &PrefixTable) -> Result<String, LangError> {
    Ok(atoms
        .iter()
        .map(|a| format_atom(a, prefixes))
        .collect::<Result<Vec<_>, _>>()?
        .join(" ^ "))
}

/// Canonical single-line form of a rule, without its id.
pub fn format_rule(rule: &Rule, prefixes: &PrefixTable) -> Result<String, LangError> {
    Ok(format!(
        "{} -> {}",
        format_conjunction(rule.antecedent(), prefixes)?,
        format_conjunction(rule.consequent(), prefixes)?
    ))
}

/// A rule file: each rule preceded by its `# id:` line.
pub fn format_rules(rules: &[Rule], prefixes: &PrefixTable) -> Result<String, LangError> {
    let mut out = String::new();
    for rule in rules {
        out.push_str(&format!("# id: {}\n{}\n", rule.id(), format_rule(rule, prefixes)?));
    }
    Ok(out)
}

/// Canonical fact lines in the given order.
pub fn format_facts<'a>(facts: impl IntoIterator<Item = &'a Fact>) -> String {
    let mut out = String::new();
    for fact in facts {
        out.push_str(&fact.to_line());
        out.push('\n');
    }
    out
}

pub fn format_axioms(axioms: &[InverseAxiom]) -> String {
    axioms.iter().map(|a| format!("{a}\n")).collect()
}
