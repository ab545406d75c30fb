use std::collections::BTreeMap;

use crate::lang::{is_bare_name, is_local_name, LangError};
use crate::term::Iri;

pub const OBO: &str = "http://purl.obolibrary.org/obo/";
pub const SWRLB: &str = "http://www.w3.org/2003/11/swrlb#";
/// Base for bare names such as pack individuals.
pub const DEFAULT_BASE: &str = "http://example.org/icorule#";

/// Maps prefix names to base identifiers. The empty prefix name is the
/// default prefix used for bare names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixTable {
    entries: BTreeMap<String, String>,
}

impl Default for PrefixTable {
    fn default() -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(String::new(), DEFAULT_BASE.to_string());
        entries.insert("obo".to_string(), OBO.to_string());
        entries.insert("swrlb".to_string(), SWRLB.to_string());
        PrefixTable { entries }
    }
}

impl PrefixTable {
    /// A table with no entries at all, not even the default prefix.
    pub fn empty() -> Self {
        PrefixTable {
            entries: BTreeMap::new(),
        }
    }

    /// Adds or overrides a prefix. Empty bases are rejected.
    pub fn insert(&mut self, prefix: &str, base: &str) -> Result<(), LangError> {
        if base.is_empty() {
            return Err(LangError::EmptyPrefixBase(prefix.to_string()));
        }
        self.entries.insert(prefix.to_string(), base.to_string());
        Ok(())
    }

    pub fn base(&self, prefix: &str) -> Option<&str> {
        self.entries.get(prefix).map(String::as_str)
    }

    pub fn resolve(&self, prefix: &str, local: &str) -> Result<Iri, LangError> {
        let base = self
            .base(prefix)
            .ok_or_else(|| LangError::UnknownPrefix(prefix.to_string()))?;
        Ok(Iri::new(prefix, local, base))
    }

    /// Resolves a qualified name such as `obo:ICO_0000322` or a bare `agree`.
    pub fn resolve_qname(&self, qname: &str) -> Result<Iri, LangError> {
        match qname.split_once(':') {
            Some((prefix, local)) => self.resolve(prefix, local),
            None => self.resolve("", qname),
        }
    }

    /// Re-expresses an identifier under this table, preferring the longest
    /// matching base. Fails when no base yields a tokenizable local name.
    pub fn shorten(&self, iri: &Iri) -> Result<Iri, LangError> {
        // The identifier's own spelling wins when it still resolves the same way.
        if self.base(iri.prefix()).is_some_and(|b| iri.expansion() == format!("{b}{}", iri.local())) {
            return Ok(iri.clone());
        }
        self.entries
            .iter()
            .filter_map(|(prefix, base)| {
                let local = iri.expansion().strip_prefix(base.as_str())?;
                let ok = if prefix.is_empty() { is_bare_name(local) } else { is_local_name(local) };
                ok.then(|| (base.len(), Iri::new(prefix, local, base)))
            })
            .max_by_key(|(len, _)| *len)
            .map(|(_, iri)| iri)
            .ok_or_else(|| LangError::NoPrefixFor(iri.expansion().to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(p, b)| (p.as_str(), b.as_str()))
    }
}
