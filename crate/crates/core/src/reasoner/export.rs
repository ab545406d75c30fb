//! Closure serialization: the canonical fact text and a JSON document.
//!
//! The JSON document has the shape
//!
//! ```json
//! {
//!   "iterations": 2,
//!   "asserted": ["obo:ICO_0000322(agree)", "..."],
//!   "derived": ["obo:ICO_0000378(pi)", "..."],
//!   "provenance": [
//!     {
//!       "fact": "obo:ICO_0000378(pi)",
//!       "source": "rule uc1",
//!       "binding": [["I", "I"], ["agree", "agree"]],
//!       "antecedents": ["obo:ICO_0000322(agree)", "..."]
//!     }
//!   ]
//! }
//! ```
//!
//! Facts are in canonical text form without the terminating period, every
//! list of facts is sorted, `asserted` is empty unless the full closure was
//! requested, and there is one provenance record per justification.

use serde::{Deserialize, Serialize};

use crate::lang::format_facts;
use crate::reasoner::Closure;
use crate::term::sort_canonical;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureExport {
    pub iterations: usize,
    pub asserted: Vec<String>,
    pub derived: Vec<String>,
    pub provenance: Vec<ProvenanceRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceRecord {
    pub fact: String,
    pub source: String,
    /// `(variable, value)` pairs, variables without `?`.
    pub binding: Vec<(String, String)>,
    pub antecedents: Vec<String>,
}

/// Canonical text of the derived facts, or of the whole closure when `full`.
pub fn closure_text(closure: &Closure, full: bool) -> String {
    if full {
        closure.base().to_canonical_text()
    } else {
        format_facts(&closure.derived())
    }
}

pub fn to_export(closure: &Closure, full: bool) -> ClosureExport {
    let asserted = if full {
        let mut facts = closure.input().to_vec();
        sort_canonical(&mut facts);
        facts.iter().map(ToString::to_string).collect()
    } else {
        Vec::new()
    };
    let derived = closure.derived();
    let provenance = derived
        .iter()
        .flat_map(|fact| {
            closure.provenance(fact).iter().map(move |j| ProvenanceRecord {
                fact: fact.to_string(),
                source: j.source.to_string(),
                binding: j.binding.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
                antecedents: j.antecedents.iter().map(ToString::to_string).collect(),
            })
        })
        .collect();
    ClosureExport {
        iterations: closure.iterations(),
        asserted,
        derived: derived.iter().map(ToString::to_string).collect(),
        provenance,
    }
}

pub fn to_json(closure: &Closure, full: bool) -> String {
    let mut text = serde_json::to_string_pretty(&to_export(closure, full)).expect("export is plain data");
    text.push('\n');
    text
}
