//! Diagrammatic calculus for braided monoidal categories generated by a
//! ribbon Hopf algebra object.
//!
//! The crate is `no_std` and needs only `alloc`. File access, reports and
//! the command line live in the companion `ribbon` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod corpus;
pub mod diagram;
pub mod gamma;
pub mod gen;
mod layout;
pub mod model;
pub mod parse;
pub mod rewrite;
pub mod suite;
pub mod term;
pub mod theory;

pub use diagram::{canonicalize, Cell, Diagram, Slice};
pub use gen::{Gen, TheoryName};
pub use model::{GroupTable, HopfModel, Matrix, RuleCheck, Witness, Q};
pub use parse::{parse, print, ParseError};
pub use rewrite::{
    apply_rule, check_proof, find_matches, q14_tactic, register_derived, search_equal, Position,
    ProofScript, SearchBudget, SearchOutcome, Step, Verdict,
};
pub use term::{
    braiding_family, inverse_braiding_family, typecheck, Obj, Scope, Signature, Term, TypeError,
};
pub use theory::{build_alpha, load_theory, Dir, Evidence, Rule, Status, Theory, TheoryError};
