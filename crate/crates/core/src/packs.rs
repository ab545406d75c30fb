//! Reference use-case packs: asserted facts, one rule, inverse axioms and
//! the expected derived facts, stored under `<pack-dir>/<id>/`.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::consent::{ConsentError, ConsentForm};
use crate::kb::{diff, FactBase};
use crate::lang::{parse_axioms, parse_facts, parse_rules, InverseAxiom, LangError, PrefixTable, Rule};
use crate::reasoner::{run_fixpoint, Closure, Limits, ReasonError};
use crate::term::{sort_canonical, Fact};

/// The four consent use cases, in `check --all` order.
pub const USE_CASES: [&str; 4] = ["uc1", "uc2", "uc3", "uc4"];
/// Every shipped pack.
pub const ALL_PACKS: [&str; 5] = ["uc1", "uc2", "uc3", "uc4", "adult"];

pub const FACTS_FILE: &str = "data.swf";
pub const RULES_FILE: &str = "rule.swrl";
pub const AXIOMS_FILE: &str = "axioms.ax";
pub const EXPECTED_FILE: &str = "expected.swf";
pub const NARRATIVE_FILE: &str = "narrative.txt";
/// Optional consent-form document for the pack's facts.
pub const FORM_FILE: &str = "form.toml";

pub const PACK_DIR_ENV: &str = "ICORULE_PACK_DIR";

#[derive(Debug, Error)]
pub enum PackError {
    #[error("unknown pack `{0}`")]
    UnknownPack(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}{}{source}", path.display(), path_separator(source))]
    Parse { path: PathBuf, source: LangError },
    #[error("{}: {source}", path.display())]
    Form { path: PathBuf, source: ConsentError },
    #[error("{}: {message}", path.display())]
    Invalid { path: PathBuf, message: String },
    #[error("pack `{pack}`: {source}")]
    Reason { pack: String, source: ReasonError },
}

/// `file:line:col: message` for positioned errors, `file: message` otherwise.
fn path_separator(e: &LangError) -> &'static str {
    match e {
        LangError::Syntax { .. } | LangError::Located { .. } => ":",
        _ => ": ",
    }
}

#[derive(Clone, Debug)]
pub struct UseCasePack {
    pub id: String,
    pub dir: PathBuf,
    pub facts: Vec<Fact>,
    pub rules: Vec<Rule>,
    pub axioms: Vec<InverseAxiom>,
    /// Canonically sorted.
    pub expected: Vec<Fact>,
    pub narrative: String,
}

impl UseCasePack {
    pub fn rule(&self) -> &Rule {
        &self.rules[0]
    }

    pub fn form_path(&self) -> PathBuf {
        self.dir.join(FORM_FILE)
    }

    pub fn load_form(&self) -> Result<Option<ConsentForm>, PackError> {
        let path = self.form_path();
        if !path.exists() {
            return Ok(None);
        }
        let text = read(&path)?;
        ConsentForm::from_toml(&text)
            .map(Some)
            .map_err(|source| PackError::Form { path, source })
    }
}

/// `$ICORULE_PACK_DIR`, else the `packs/` directory of the source tree.
pub fn default_pack_dir() -> PathBuf {
    match std::env::var_os(PACK_DIR_ENV) {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../packs"),
    }
}

fn read(path: &Path) -> Result<String, PackError> {
    fs::read_to_string(path).map_err(|source| PackError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parsed<T>(path: &Path, f: impl FnOnce(&str) -> Result<T, LangError>) -> Result<T, PackError> {
    f(&read(path)?).map_err(|source| PackError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads and checks the structure of pack `id` under `dir`.
pub fn load_pack(dir: &Path, id: &str) -> Result<UseCasePack, PackError> {
    if !ALL_PACKS.contains(&id) {
        return Err(PackError::UnknownPack(id.to_string()));
    }
    let root = dir.join(id);
    let prefixes = PrefixTable::default();
    let facts = parsed(&root.join(FACTS_FILE), |t| parse_facts(t, &prefixes))?;
    let rules_path = root.join(RULES_FILE);
    let rules = parsed(&rules_path, |t| parse_rules(t, &prefixes))?;
    if rules.len() != 1 {
        return Err(PackError::Invalid {
            path: rules_path,
            message: format!("expected exactly one rule, found {}", rules.len()),
        });
    }
    let axioms = parsed(&root.join(AXIOMS_FILE), |t| parse_axioms(t, &prefixes))?;
    let expected_path = root.join(EXPECTED_FILE);
    let expected = parsed(&expected_path, |t| parse_facts(t, &prefixes))?;
    let mut sorted = expected.clone();
    sort_canonical(&mut sorted);
    sorted.dedup();
    if sorted != expected {
        return Err(PackError::Invalid {
            path: expected_path,
            message: "facts are not in canonical sorted order".into(),
        });
    }
    let asserted = FactBase::from_facts(facts.iter().cloned());
    if let Some(f) = expected.iter().find(|f| asserted.contains(f)) {
        return Err(PackError::Invalid {
            path: expected_path,
            message: format!("`{f}` is already asserted in {FACTS_FILE}"),
        });
    }
    let narrative = read(&root.join(NARRATIVE_FILE))?;
    Ok(UseCasePack {
        id: id.to_string(),
        dir: root,
        facts,
        rules,
        axioms,
        expected,
        narrative,
    })
}

#[derive(Debug)]
pub struct CheckReport {
    pub id: String,
    pub closure: Closure,
    /// Derived but not expected.
    pub unexpected: Vec<Fact>,
    /// Expected but not derived.
    pub missing: Vec<Fact>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.unexpected.is_empty() && self.missing.is_empty()
    }

    /// Two-sided diff against the expected file: `-` lines are expected
    /// facts that were not derived, `+` lines derived facts that were not
    /// expected.
    pub fn diff_text(&self) -> String {
        let mut lines: Vec<(String, char)> = self
            .missing
            .iter()
            .map(|f| (f.to_line(), '-'))
            .chain(self.unexpected.iter().map(|f| (f.to_line(), '+')))
            .collect();
        lines.sort_by(|a, b| a.0[..a.0.len() - 1].cmp(&b.0[..b.0.len() - 1]));
        lines.into_iter().map(|(l, sign)| format!("{sign}{l}\n")).collect()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "PASS {} ({} derived)", self.id, self.closure.derived_len())
        } else {
            write!(
                f,
                "FAIL {} ({} derived, {} missing, {} unexpected)",
                self.id,
                self.closure.derived_len(),
                self.missing.len(),
                self.unexpected.len()
            )
        }
    }
}

/// Runs the pack's fixpoint and compares the derived set with the expected
/// file.
pub fn check_loaded(pack: &UseCasePack, limits: &Limits) -> Result<CheckReport, PackError> {
    let closure = run_fixpoint(FactBase::from_facts(pack.facts.iter().cloned()), &pack.rules, &pack.axioms, limits).map_err(
        |source| PackError::Reason {
            pack: pack.id.clone(),
            source,
        },
    )?;
    let expected = FactBase::from_facts(pack.expected.iter().cloned());
    let (unexpected, missing) = diff(&closure.derived_base(), &expected);
    Ok(CheckReport {
        id: pack.id.clone(),
        closure,
        unexpected,
        missing,
    })
}

pub fn check_pack(dir: &Path, id: &str) -> Result<CheckReport, PackError> {
    check_loaded(&load_pack(dir, id)?, &Limits::default())
}
