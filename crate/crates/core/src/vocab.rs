//! Catalog of the ontology identifiers used by the packs, with
//! human-readable labels for diagnostics and annotated output.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use thiserror::Error;

use crate::lang::{parse_fact_lines, LangError, PrefixTable};
use crate::term::{Fact, Iri, Value};

const BUILTIN_CATALOG: &str = include_str!("../assets/vocab.tsv");

#[derive(Debug, Error)]
pub enum VocabError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: {source}")]
    Iri { line: usize, source: LangError },
    #[error("line {line}: `{iri}` is listed twice")]
    Duplicate { line: usize, iri: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelSource {
    Curated,
    Unlabeled,
}

impl LabelSource {
    fn as_str(self) -> &'static str {
        match self {
            LabelSource::Curated => "curated",
            LabelSource::Unlabeled => "unlabeled",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Class,
    ObjectProperty,
    DataProperty,
    Builtin,
}

impl Kind {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "class" => Kind::Class,
            "object-property" => Kind::ObjectProperty,
            "data-property" => Kind::DataProperty,
            "builtin" => Kind::Builtin,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VocabEntry {
    pub iri: Iri,
    pub label: Option<String>,
    pub kind: Kind,
}

impl VocabEntry {
    pub fn label_source(&self) -> LabelSource {
        if self.label.is_some() {
            LabelSource::Curated
        } else {
            LabelSource::Unlabeled
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Label {
    pub text: String,
    pub source: LabelSource,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Vocabulary {
    entries: HashMap<Iri, VocabEntry>,
    order: Vec<Iri>,
}

impl Vocabulary {
    /// The catalog shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_CATALOG, &PrefixTable::default()).expect("shipped catalog is well formed")
    }

    pub fn load(path: &Path, prefixes: &PrefixTable) -> Result<Self, VocabError> {
        Self::parse(&std::fs::read_to_string(path)?, prefixes)
    }

    /// Parses `iri<TAB>label<TAB>source<TAB>kind` rows. `#` lines and the
    /// header row are skipped; an empty label means unlabeled.
    pub fn parse(text: &str, prefixes: &PrefixTable) -> Result<Self, VocabError> {
        let mut vocab = Vocabulary::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() || raw.starts_with('#') || raw.starts_with("iri\t") {
                continue;
            }
            let cols: Vec<&str> = raw.split('\t').collect();
            let [iri, label, source, kind] = cols[..] else {
                return Err(VocabError::Format {
                    line,
                    message: format!("expected 4 tab-separated columns, found {}", cols.len()),
                });
            };
            let iri = prefixes
                .resolve_qname(iri.trim())
                .map_err(|source| VocabError::Iri { line, source })?;
            let kind = Kind::parse(kind.trim()).ok_or_else(|| VocabError::Format {
                line,
                message: format!("unknown kind `{kind}`"),
            })?;
            let label = match (source.trim(), label.trim()) {
                ("curated", l) if !l.is_empty() => Some(l.to_string()),
                ("unlabeled", "") => None,
                (s, l) => {
                    return Err(VocabError::Format {
                        line,
                        message: format!("label `{l}` does not fit source `{s}`"),
                    })
                }
            };
            if vocab.entries.contains_key(&iri) {
                return Err(VocabError::Duplicate {
                    line,
                    iri: iri.to_string(),
                });
            }
            vocab.order.push(iri.clone());
            vocab.entries.insert(iri.clone(), VocabEntry { iri, label, kind });
        }
        Ok(vocab)
    }

    pub fn get(&self, iri: &Iri) -> Option<&VocabEntry> {
        self.entries.get(iri)
    }

    pub fn contains(&self, iri: &Iri) -> bool {
        self.entries.contains_key(iri)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in catalog file order.
    pub fn entries(&self) -> impl Iterator<Item = &VocabEntry> {
        self.order.iter().map(|iri| &self.entries[iri])
    }

    /// The catalog label, or the local name marked unlabeled.
    pub fn label_of(&self, iri: &Iri) -> Label {
        match self.get(iri).and_then(|e| e.label.as_ref()) {
            Some(text) => Label {
                text: text.clone(),
                source: LabelSource::Curated,
            },
            None => Label {
                text: iri.local().to_string(),
                source: LabelSource::Unlabeled,
            },
        }
    }

    fn fact_labels(&self, fact: &Fact, out: &mut Vec<String>) {
        let mut push = |s: String| {
            if !out.contains(&s) {
                out.push(s);
            }
        };
        push(self.label_of(fact.predicate()).text);
        let mut others = vec![fact.subject()];
        if let Fact::Property {
            object: Value::Individual(o),
            ..
        } = fact
        {
            others.push(o);
        }
        for iri in others {
            if self.contains(iri) {
                push(self.label_of(iri).text);
            }
        }
    }

    /// Appends ` # <labels>` to every fact line of a canonical fact file.
    /// The predicate is always labelled; individuals only when catalogued.
    /// Lines that already carry a comment, and non-fact lines, are kept as
    /// they are, so stripping the added suffixes restores the input exactly.
    pub fn annotate(&self, text: &str, prefixes: &PrefixTable) -> Result<String, LangError> {
        let mut by_line: HashMap<usize, Vec<Fact>> = HashMap::new();
        for (line, fact) in parse_fact_lines(text, prefixes)? {
            by_line.entry(line).or_default().push(fact);
        }
        let mut out = String::with_capacity(text.len() * 2);
        for (i, line) in text.split_inclusive('\n').enumerate() {
            let (body, newline) = match line.strip_suffix('\n') {
                Some(body) => (body, "\n"),
                None => (line, ""),
            };
            out.push_str(body);
            if let Some(facts) = by_line.get(&(i + 1)) {
                if !has_comment(body) {
                    let mut labels = Vec::new();
                    for fact in facts {
                        self.fact_labels(fact, &mut labels);
                    }
                    out.push_str(" # ");
                    out.push_str(&labels.join("; "));
                }
            }
            out.push_str(newline);
        }
        Ok(out)
    }

    /// Catalog in its file format.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("iri\tlabel\tsource\tkind\n");
        for e in self.entries() {
            let kind = match e.kind {
                Kind::Class => "class",
                Kind::ObjectProperty => "object-property",
                Kind::DataProperty => "data-property",
                Kind::Builtin => "builtin",
            };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                e.iri,
                e.label.as_deref().unwrap_or(""),
                e.label_source().as_str(),
                kind
            ));
        }
        out
    }
}

/// True if the line has a `#` outside a string literal.
fn has_comment(line: &str) -> bool {
    let mut in_string = false;
    let mut escaped = false;
    for c in line.chars() {
        match c {
            _ if escaped => escaped = false,
            '\\' if in_string => escaped = true,
            '"' => in_string = !in_string,
            '#' if !in_string => return true,
            _ => {}
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(q: &str) -> Iri {
        PrefixTable::default().resolve_qname(q).unwrap()
    }

    #[test]
    fn curated_labels() {
        let v = Vocabulary::builtin();
        let l = v.label_of(&iri("obo:ICO_0000378"));
        assert_eq!(l.text, "designated permitted actor");
        assert_eq!(l.source, LabelSource::Curated);
        assert_eq!(v.label_of(&iri("obo:IAO_0000136")).text, "is about");
    }

    #[test]
    fn unlabeled_falls_back_to_local_name() {
        let v = Vocabulary::builtin();
        let l = v.label_of(&iri("obo:ICO_0000121"));
        assert_eq!(l.text, "ICO_0000121");
        assert_eq!(l.source, LabelSource::Unlabeled);
        let l = v.label_of(&iri("obo:NOT_IN_CATALOG"));
        assert_eq!((l.text.as_str(), l.source), ("NOT_IN_CATALOG", LabelSource::Unlabeled));
    }

    #[test]
    fn annotate_adds_predicate_label() {
        let v = Vocabulary::builtin();
        let out = v.annotate("obo:RO_0000056(I, legalconsent).\n", &PrefixTable::default()).unwrap();
        assert_eq!(out, "obo:RO_0000056(I, legalconsent). # participates in\n");
    }

    #[test]
    fn annotate_empty_and_unlabeled() {
        let v = Vocabulary::builtin();
        assert_eq!(v.annotate("", &PrefixTable::default()).unwrap(), "");
        let out = v.annotate("obo:ICO_0000105(explained).", &PrefixTable::default()).unwrap();
        assert_eq!(out, "obo:ICO_0000105(explained). # ICO_0000105");
    }

    #[test]
    fn annotate_keeps_existing_comments_and_blank_lines() {
        let v = Vocabulary::builtin();
        let input = "# header\n\nobo:ICO_0000378(pi). # mine\nobo:ICO_0000378(team).\n";
        let out = v.annotate(input, &PrefixTable::default()).unwrap();
        assert_eq!(
            out,
            "# header\n\nobo:ICO_0000378(pi). # mine\nobo:ICO_0000378(team). # designated permitted actor\n"
        );
    }

    #[test]
    fn annotate_propagates_parse_errors() {
        let v = Vocabulary::builtin();
        assert!(v.annotate("A(?x).\n", &PrefixTable::default()).is_err());
    }

    #[test]
    fn catalog_rejects_duplicates_and_bad_rows() {
        let t = PrefixTable::default();
        let dup = "obo:X\tx\tcurated\tclass\nobo:X\t\tunlabeled\tclass\n";
        assert!(matches!(Vocabulary::parse(dup, &t), Err(VocabError::Duplicate { line: 2, .. })));
        assert!(matches!(Vocabulary::parse("obo:X\tx\tclass\n", &t), Err(VocabError::Format { .. })));
        assert!(matches!(Vocabulary::parse("obo:X\t\tcurated\tclass\n", &t), Err(VocabError::Format { .. })));
    }

    #[test]
    fn catalog_round_trips_through_tsv() {
        let v = Vocabulary::builtin();
        let again = Vocabulary::parse(&v.to_tsv(), &PrefixTable::default()).unwrap();
        assert_eq!(again.len(), v.len());
        assert!(v.entries().all(|e| again.get(&e.iri) == Some(e)));
    }

    #[test]
    fn has_comment_ignores_hash_in_strings() {
        assert!(!has_comment("name(a, \"#1\")."));
        assert!(has_comment("name(a, \"#1\"). # note"));
    }
}
