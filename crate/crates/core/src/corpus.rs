//! Shipped proof scripts.
//!
//! Rule entries are listed in derivation order: each script may use only
//! axioms, reconstructed rules and rules proved by earlier entries.

use alloc::string::String;
use alloc::vec::Vec;

use crate::rewrite::{check_proof, ProofScript, Verdict};
use crate::theory::{Evidence, Status, Theory};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    /// A rule of the theory named in the script.
    Rule(&'static str),
    /// The image of an ALGBAR axiom, proved in HBB.
    Image(&'static str),
}

#[derive(Clone, Copy, Debug)]
pub struct Entry {
    pub file: &'static str,
    pub target: Target,
    pub text: &'static str,
}

impl Entry {
    pub fn script(&self) -> ProofScript {
        ProofScript::parse(self.text).expect("shipped script parses")
    }
}

macro_rules! entry {
    ($file:literal, $target:expr) => {
        Entry {
            file: $file,
            target: $target,
            text: include_str!(concat!("../data/corpus/", $file)),
        }
    };
}

pub const ENTRIES: &[Entry] = &[
    entry!("s5.proof", Target::Rule("s5")),
    entry!("s6.proof", Target::Rule("s6")),
    entry!("f4.proof", Target::Rule("f4")),
    entry!("f3.proof", Target::Rule("f3")),
    entry!("f5.proof", Target::Rule("f5")),
    entry!("h5-lemma.proof", Target::Rule("h5-lemma")),
    entry!("r5-prime.proof", Target::Rule("r5'")),
    entry!("f5-prime.proof", Target::Rule("f5'")),
    entry!("p2-prime.proof", Target::Rule("p2'")),
    entry!("p2.proof", Target::Rule("p2")),
    entry!("gamma-h1.proof", Target::Image("h1")),
    entry!("gamma-h2.proof", Target::Image("h2")),
    entry!("gamma-h3.proof", Target::Image("h3")),
    entry!("gamma-h4.proof", Target::Image("h4")),
    entry!("gamma-h5.proof", Target::Image("h5")),
    entry!("gamma-h9.proof", Target::Image("h9")),
];

pub fn for_rule(name: &str) -> Option<&'static Entry> {
    ENTRIES
        .iter()
        .find(|e| matches!(e.target, Target::Rule(n) if n == name))
}

pub fn for_image(axiom: &str) -> Option<&'static Entry> {
    ENTRIES
        .iter()
        .find(|e| matches!(e.target, Target::Image(n) if n == axiom))
}

/// Rule names proved at or after entry `i`.
fn not_yet_proved(i: usize) -> Vec<&'static str> {
    ENTRIES[i..]
        .iter()
        .filter_map(|e| match e.target {
            Target::Rule(n) => Some(n),
            Target::Image(_) => None,
        })
        .collect()
}

/// Checks a rule entry against `th` without the rules it must not use.
pub fn check_rule_entry(th: &Theory, i: usize) -> Option<Verdict> {
    let Target::Rule(name) = ENTRIES[i].target else {
        return None;
    };
    let rule = th.rule(name)?;
    let script = ENTRIES[i].script();
    let prior = th.without(&not_yet_proved(i));
    let ends = (
        prior.diagram(&script.start).ok()?,
        prior.diagram(&script.goal).ok()?,
    );
    if ends != (rule.lhs.clone(), rule.rhs.clone()) {
        return Some(Verdict::Rejected {
            step: None,
            reason: String::from("script endpoints are not the rule sides"),
            state: ends.0,
        });
    }
    check_proof(&script, &prior).ok()
}

/// Records script evidence for every rule the corpus proves in `th`.
/// Rules declared derived that end up without a script are downgraded to
/// reconstructed.
pub fn attach(mut th: Theory) -> Theory {
    for (i, e) in ENTRIES.iter().enumerate() {
        if let Target::Rule(name) = e.target {
            if matches!(check_rule_entry(&th, i), Some(Verdict::Accepted)) {
                th.record(name, Evidence::Script(e.file.into()), Status::Derived);
            }
        }
    }
    let unproved: Vec<String> = th
        .rules()
        .iter()
        .filter(|r| {
            r.status == Status::Derived
                && !r.evidence.iter().any(|e| matches!(e, Evidence::Script(_)))
        })
        .map(|r| r.name.clone())
        .collect();
    for name in unproved {
        th.set_status(&name, Status::Reconstructed);
    }
    th
}
