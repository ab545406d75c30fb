//! Consent forms as permissions, consent directives and designated
//! entities, validated and lowered to ground facts.
//!
//! A form document is TOML:
//!
//! ```toml
//! id = "uc1"
//!
//! [prefixes]            # optional, extends the preloaded table
//! ex = "http://example.org/"
//!
//! [[permission]]
//! id = "take-part"
//! directive_text = "I freely and willingly choose to take part."
//!
//! [permission.directive]
//! individual = "agree"
//! class = "obo:ICO_0000322"   # optional, this is the default
//! about = ["I", "legalconsent"]
//!
//! [[permission.entity]]
//! individual = "I"
//! kind = "actor"              # actor | action | purpose | object
//! class = "obo:ICO_0000398"
//!
//! [[permission.context]]
//! individual = "legalconsent"
//! classes = ["obo:ICO_0000142"]
//! ```
//!
//! Names are qualified names resolved against the prefix table; a bare
//! name uses the default prefix.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Deserialize;
use thiserror::Error;

use crate::kb::FactBase;
use crate::lang::{InverseAxiom, LangError, PrefixTable, Rule, OBO};
use crate::reasoner::{run_fixpoint, Closure, Limits, ReasonError};
use crate::term::{Fact, Iri};

/// `obo:IAO_0000136`, "is about".
pub const IS_ABOUT: &str = "IAO_0000136";
/// `obo:ICO_0000322`, the default directive class.
pub const CONSENT_DIRECTIVE: &str = "ICO_0000322";

fn obo(local: &str) -> Iri {
    Iri::new("obo", local, OBO)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Actor,
    Action,
    Purpose,
    Object,
}

impl EntityKind {
    const ALL: [EntityKind; 4] = [EntityKind::Actor, EntityKind::Action, EntityKind::Purpose, EntityKind::Object];

    /// Catalog classes known to belong to this kind.
    pub fn classes(self) -> &'static [&'static str] {
        match self {
            EntityKind::Actor => &["ICO_0000381", "ICO_0000382", "ICO_0000395", "ICO_0000396", "ICO_0000398"],
            EntityKind::Action => &["ICO_0000332", "ICO_0000334", "ICO_0000336", "ICO_0000330", "ICO_0000339", "ICO_0000365"],
            EntityKind::Purpose => &["ICO_0000344", "ICO_0000345", "ICO_0000354"],
            EntityKind::Object => &["ICO_0000370", "ICO_0000375"],
        }
    }

    /// The kind a class is fixed to, if any.
    pub fn of_class(class: &Iri) -> Option<EntityKind> {
        let local = class.expansion().strip_prefix(OBO)?;
        Self::ALL.into_iter().find(|k| k.classes().contains(&local))
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntityKind::Actor => "actor",
            EntityKind::Action => "action",
            EntityKind::Purpose => "purpose",
            EntityKind::Object => "object",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsentForm {
    pub id: String,
    pub permissions: Vec<Permission>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permission {
    pub id: String,
    /// Carried for display only.
    pub directive_text: String,
    pub consent_directive: ConsentDirective,
    pub entities: Vec<DesignatedEntity>,
    pub context: Vec<ContextIndividual>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsentDirective {
    pub individual: Iri,
    pub directive_class: Iri,
    /// Entities or context individuals of the same permission.
    pub about: Vec<Iri>,
}

impl ConsentDirective {
    pub fn new(individual: Iri, about: Vec<Iri>) -> Self {
        ConsentDirective {
            individual,
            directive_class: obo(CONSENT_DIRECTIVE),
            about,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesignatedEntity {
    pub individual: Iri,
    pub kind: EntityKind,
    pub class: Iri,
}

/// An individual that rules match by class alone, such as a planned
/// process, possibly with several classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextIndividual {
    pub individual: Iri,
    pub classes: Vec<Iri>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoPermissions,
    DuplicatePermission(String),
    EmptyAbout { permission: String },
    DanglingAbout { permission: String, target: String },
    KindMismatch {
        permission: String,
        individual: String,
        kind: EntityKind,
        class: String,
        expected: EntityKind,
    },
    NoContextClasses { permission: String, individual: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoPermissions => write!(f, "form has no permissions"),
            Violation::DuplicatePermission(id) => write!(f, "permission id `{id}` is used more than once"),
            Violation::EmptyAbout { permission } => {
                write!(f, "permission `{permission}`: the consent directive is about nothing")
            }
            Violation::DanglingAbout { permission, target } => write!(
                f,
                "permission `{permission}`: `{target}` is not an entity or context individual of this permission"
            ),
            Violation::KindMismatch {
                permission,
                individual,
                kind,
                class,
                expected,
            } => write!(
                f,
                "permission `{permission}`: `{individual}` is declared {kind} but `{class}` is a class of kind {expected}"
            ),
            Violation::NoContextClasses { permission, individual } => {
                write!(f, "permission `{permission}`: context individual `{individual}` has no classes")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum ConsentError {
    #[error("{0}")]
    Toml(#[from] toml::de::Error),
    #[error("`{name}`: {source}")]
    Name { name: String, source: LangError },
    #[error("invalid consent form:\n{}", .0.iter().map(|v| format!("  {v}")).collect::<Vec<_>>().join("\n"))]
    InvalidForm(Vec<Violation>),
    #[error(transparent)]
    Reason(#[from] ReasonError),
}

/// Every problem with the form; empty when it is valid.
pub fn validate(cf: &ConsentForm) -> Vec<Violation> {
    let mut out = Vec::new();
    if cf.permissions.is_empty() {
        out.push(Violation::NoPermissions);
    }
    let mut ids = HashSet::new();
    let mut reported = HashSet::new();
    for p in &cf.permissions {
        if !ids.insert(p.id.as_str()) && reported.insert(p.id.as_str()) {
            out.push(Violation::DuplicatePermission(p.id.clone()));
        }
    }
    for p in &cf.permissions {
        let cd = &p.consent_directive;
        if cd.about.is_empty() {
            out.push(Violation::EmptyAbout {
                permission: p.id.clone(),
            });
        }
        let declared: HashSet<&Iri> = p
            .entities
            .iter()
            .map(|e| &e.individual)
            .chain(p.context.iter().map(|c| &c.individual))
            .collect();
        for target in &cd.about {
            if !declared.contains(target) {
                out.push(Violation::DanglingAbout {
                    permission: p.id.clone(),
                    target: target.to_string(),
                });
            }
        }
        for e in &p.entities {
            if let Some(expected) = EntityKind::of_class(&e.class) {
                if expected != e.kind {
                    out.push(Violation::KindMismatch {
                        permission: p.id.clone(),
                        individual: e.individual.to_string(),
                        kind: e.kind,
                        class: e.class.to_string(),
                        expected,
                    });
                }
            }
        }
        for c in &p.context {
            if c.classes.is_empty() {
                out.push(Violation::NoContextClasses {
                    permission: p.id.clone(),
                    individual: c.individual.to_string(),
                });
            }
        }
    }
    out
}

/// Ground facts for a valid form. Per permission: the directive typing,
/// entity typings, context typings, then one `is about` link per target.
/// Repeats, including facts shared between permissions, are emitted once.
pub fn lower_to_facts(cf: &ConsentForm) -> Result<Vec<Fact>, ConsentError> {
    let violations = validate(cf);
    if !violations.is_empty() {
        return Err(ConsentError::InvalidForm(violations));
    }
    let is_about = obo(IS_ABOUT);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut push = |f: Fact| {
        if seen.insert(f.clone()) {
            out.push(f);
        }
    };
    for p in &cf.permissions {
        let cd = &p.consent_directive;
        push(Fact::class(cd.directive_class.clone(), cd.individual.clone()));
        for e in &p.entities {
            push(Fact::class(e.class.clone(), e.individual.clone()));
        }
        for c in &p.context {
            for class in &c.classes {
                push(Fact::class(class.clone(), c.individual.clone()));
            }
        }
        for target in &cd.about {
            push(Fact::property(is_about.clone(), cd.individual.clone(), target.clone()));
        }
    }
    Ok(out)
}

/// The closure of the lowered form under `rules` and `axioms`.
pub fn effective_permissions(cf: &ConsentForm, rules: &[Rule], axioms: &[InverseAxiom]) -> Result<Closure, ConsentError> {
    let facts = lower_to_facts(cf)?;
    Ok(run_fixpoint(FactBase::from_facts(facts), rules, axioms, &Limits::default())?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FormDoc {
    id: String,
    #[serde(default)]
    prefixes: BTreeMap<String, String>,
    #[serde(default, rename = "permission")]
    permissions: Vec<PermissionDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PermissionDoc {
    id: String,
    #[serde(default)]
    directive_text: String,
    directive: DirectiveDoc,
    #[serde(default, rename = "entity")]
    entities: Vec<EntityDoc>,
    #[serde(default)]
    context: Vec<ContextDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DirectiveDoc {
    individual: String,
    class: Option<String>,
    #[serde(default)]
    about: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntityDoc {
    individual: String,
    kind: EntityKind,
    class: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ContextDoc {
    individual: String,
    #[serde(default)]
    classes: Vec<String>,
}

impl ConsentForm {
    /// Parses a form document. The result is not validated.
    pub fn from_toml(text: &str) -> Result<Self, ConsentError> {
        Self::from_toml_with(text, PrefixTable::default())
    }

    pub fn from_toml_with(text: &str, mut prefixes: PrefixTable) -> Result<Self, ConsentError> {
        let doc: FormDoc = toml::from_str(text)?;
        for (prefix, base) in &doc.prefixes {
            prefixes.insert(prefix, base).map_err(|source| ConsentError::Name {
                name: prefix.clone(),
                source,
            })?;
        }
        let iri = |name: &str| {
            prefixes.resolve_qname(name).map_err(|source| ConsentError::Name {
                name: name.to_string(),
                source,
            })
        };
        let iris = |names: &[String]| names.iter().map(|n| iri(n)).collect::<Result<Vec<_>, _>>();
        let mut permissions = Vec::with_capacity(doc.permissions.len());
        for p in doc.permissions {
            permissions.push(Permission {
                id: p.id,
                directive_text: p.directive_text,
                consent_directive: ConsentDirective {
                    individual: iri(&p.directive.individual)?,
                    directive_class: match &p.directive.class {
                        Some(c) => iri(c)?,
                        None => obo(CONSENT_DIRECTIVE),
                    },
                    about: iris(&p.directive.about)?,
                },
                entities: p
                    .entities
                    .iter()
                    .map(|e| {
                        Ok(DesignatedEntity {
                            individual: iri(&e.individual)?,
                            kind: e.kind,
                            class: iri(&e.class)?,
                        })
                    })
                    .collect::<Result<_, ConsentError>>()?,
                context: p
                    .context
                    .iter()
                    .map(|c| {
                        Ok(ContextIndividual {
                            individual: iri(&c.individual)?,
                            classes: iris(&c.classes)?,
                        })
                    })
                    .collect::<Result<_, ConsentError>>()?,
            });
        }
        Ok(ConsentForm { id: doc.id, permissions })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse_rules;

    fn name(q: &str) -> Iri {
        PrefixTable::default().resolve_qname(q).unwrap()
    }

    fn minimal() -> ConsentForm {
        ConsentForm {
            id: "mini".into(),
            permissions: vec![Permission {
                id: "p1".into(),
                directive_text: String::new(),
                consent_directive: ConsentDirective::new(name("agree"), vec![name("I")]),
                entities: vec![DesignatedEntity {
                    individual: name("I"),
                    kind: EntityKind::Actor,
                    class: name("obo:ICO_0000398"),
                }],
                context: vec![],
            }],
        }
    }

    #[test]
    fn minimal_form_lowers_to_three_facts() {
        let facts = lower_to_facts(&minimal()).unwrap();
        let lines: Vec<String> = facts.iter().map(Fact::to_line).collect();
        assert_eq!(
            lines,
            ["obo:ICO_0000322(agree).", "obo:ICO_0000398(I).", "obo:IAO_0000136(agree, I)."]
        );
    }

    #[test]
    fn dangling_about_is_one_violation() {
        let mut cf = minimal();
        cf.permissions[0].consent_directive.about.push(name("ghost"));
        let v = validate(&cf);
        assert_eq!(
            v,
            [Violation::DanglingAbout {
                permission: "p1".into(),
                target: "ghost".into()
            }]
        );
        assert!(matches!(lower_to_facts(&cf), Err(ConsentError::InvalidForm(_))));
    }

    #[test]
    fn empty_about_is_one_violation() {
        let mut cf = minimal();
        cf.permissions[0].consent_directive.about.clear();
        assert_eq!(validate(&cf), [Violation::EmptyAbout { permission: "p1".into() }]);
    }

    #[test]
    fn structural_violations() {
        let empty = ConsentForm {
            id: "e".into(),
            permissions: vec![],
        };
        assert_eq!(validate(&empty), [Violation::NoPermissions]);

        let mut cf = minimal();
        cf.permissions.push(cf.permissions[0].clone());
        cf.permissions.push(cf.permissions[0].clone());
        assert_eq!(validate(&cf), [Violation::DuplicatePermission("p1".into())]);

        let mut cf = minimal();
        cf.permissions[0].entities[0].kind = EntityKind::Object;
        assert!(matches!(&validate(&cf)[..], [Violation::KindMismatch { expected: EntityKind::Actor, .. }]));

        let mut cf = minimal();
        cf.permissions[0].context.push(ContextIndividual {
            individual: name("x"),
            classes: vec![],
        });
        assert!(matches!(&validate(&cf)[..], [Violation::NoContextClasses { .. }]));
    }

    #[test]
    fn unlisted_classes_accept_any_kind() {
        let mut cf = minimal();
        cf.permissions[0].entities[0].class = name("obo:ICO_0000046");
        cf.permissions[0].entities[0].kind = EntityKind::Action;
        assert!(validate(&cf).is_empty());
    }

    #[test]
    fn shared_entities_are_lowered_once() {
        let mut cf = minimal();
        let mut second = cf.permissions[0].clone();
        second.id = "p2".into();
        cf.permissions.push(second);
        assert_eq!(lower_to_facts(&cf).unwrap().len(), 3);
    }

    #[test]
    fn toml_document_round_trip() {
        let text = r#"
id = "mini"

[[permission]]
id = "p1"
directive_text = "I agree."

[permission.directive]
individual = "agree"
about = ["I"]

[[permission.entity]]
individual = "I"
kind = "actor"
class = "obo:ICO_0000398"
"#;
        let mut expected = minimal();
        expected.permissions[0].directive_text = "I agree.".into();
        assert_eq!(ConsentForm::from_toml(text).unwrap(), expected);
    }

    #[test]
    fn toml_rejects_unknown_kind_and_prefix() {
        let bad_kind = "id='x'\n[[permission]]\nid='p'\n[permission.directive]\nindividual='a'\n[[permission.entity]]\nindividual='b'\nkind='thing'\nclass='C'\n";
        assert!(matches!(ConsentForm::from_toml(bad_kind), Err(ConsentError::Toml(_))));
        let bad_prefix = "id='x'\n[[permission]]\nid='p'\n[permission.directive]\nindividual='nope:a'\n";
        assert!(matches!(ConsentForm::from_toml(bad_prefix), Err(ConsentError::Name { .. })));
    }

    #[test]
    fn effective_permissions_runs_the_rules() {
        let cf = minimal();
        let none = effective_permissions(&cf, &[], &[]).unwrap();
        assert_eq!(none.derived_len(), 0);
        let rules = parse_rules(
            "obo:ICO_0000322(?a) ^ obo:IAO_0000136(?a, ?p) ^ obo:ICO_0000398(?p) -> Consented(?p)",
            &PrefixTable::default(),
        )
        .unwrap();
        let closure = effective_permissions(&cf, &rules, &[]).unwrap();
        assert_eq!(closure.derived().iter().map(Fact::to_line).collect::<Vec<_>>(), ["Consented(I)."]);
    }
}
