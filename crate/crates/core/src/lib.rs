//! A SWRL rule engine with an informed-consent permission model.
//!
//! Rules, facts and inverse-property axioms are read from small text
//! formats ([`lang`]), stored in an indexed [`kb::FactBase`], and evaluated
//! to a fixpoint by [`reasoner::run_fixpoint`]. Consent forms
//! ([`consent`]) lower to facts, and [`packs`] bundles the reference use
//! cases with their expected closures.

pub mod consent;
pub mod kb;
pub mod lang;
pub mod packs;
pub mod reasoner;
pub mod term;
pub mod vocab;

pub use kb::FactBase;
pub use lang::{Atom, InverseAxiom, PrefixTable, Rule};
pub use reasoner::{run_fixpoint, Closure, Limits};
pub use term::{Fact, Iri, Literal, Term, Value};
