//! Theory presentations as data: signatures, macros and rule tables.
//!
//! Rule files are line based:
//!
//! ```text
//! # comment
//! macro NAME : TERM
//! rule NAME [tags] : TERM = TERM
//! slot NAME
//! drop NAME
//! ```
//!
//! `slot` reserves a rule name with no content yet; `drop` removes a rule
//! loaded from an earlier file. Tags `derived` and `reconstructed` set the
//! rule status; anything else is carried along as a label.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::diagram::{canonicalize, Diagram};
use crate::gen::{Gen, TheoryName};
use crate::model::{HopfModel, RuleCheck};
use crate::parse::{parse, ParseError};
use crate::term::{braiding_family, typecheck, Scope, Term, TypeError};

pub const HOPF_RULES: &str = include_str!("../data/theories/hopf.rules");
pub const HR_RULES: &str = include_str!("../data/theories/hr.rules");
pub const LEMMA_RULES: &str = include_str!("../data/theories/lemmas.rules");
pub const HBB_RULES: &str = include_str!("../data/theories/hbb.rules");
pub const HBB_ALT_RULES: &str = include_str!("../data/theories/hbb-alt.rules");
pub const ALGBAR_RULES: &str = include_str!("../data/theories/algbar.rules");
pub const H10_VARIANT_RULES: &str = include_str!("../data/theories/h10-variants.rules");

/// Rule files making up a theory, in load order.
pub fn theory_files(name: TheoryName) -> &'static [&'static str] {
    match name {
        TheoryName::Hr => &["hopf.rules", "hr.rules", "lemmas.rules"],
        TheoryName::Hbb => &["hopf.rules", "hr.rules", "lemmas.rules", "hbb.rules"],
        TheoryName::HbbAlt => &["hopf.rules", "hr.rules", "hbb.rules", "hbb-alt.rules"],
        TheoryName::AlgBar => &["hopf.rules", "algbar.rules"],
    }
}

/// Text of a shipped rule file.
pub fn builtin_file(file: &str) -> Option<&'static str> {
    Some(match file {
        "hopf.rules" => HOPF_RULES,
        "hr.rules" => HR_RULES,
        "lemmas.rules" => LEMMA_RULES,
        "hbb.rules" => HBB_RULES,
        "hbb-alt.rules" => HBB_ALT_RULES,
        "algbar.rules" => ALGBAR_RULES,
        "h10-variants.rules" => H10_VARIANT_RULES,
        _ => return None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Axiom,
    Derived,
    Reconstructed,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Axiom => "axiom",
            Status::Derived => "derived",
            Status::Reconstructed => "reconstructed",
        })
    }
}

/// Support for a non-axiom rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// Exact equality of both sides in the named model.
    Oracle(String),
    /// A proof script that the checker accepted.
    Script(String),
    /// A published theorem the rule instantiates.
    Theorem(String),
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::Oracle(m) => write!(f, "oracle:{m}"),
            Evidence::Script(s) => write!(f, "script:{s}"),
            Evidence::Theorem(t) => write!(f, "theorem:{t}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub tags: Vec<String>,
    pub status: Status,
    /// Sides as written, macros unexpanded.
    pub source: (Term, Term),
    pub lhs: Diagram,
    pub rhs: Diagram,
    /// File the rule came from.
    pub origin: String,
    pub evidence: Vec<Evidence>,
}

impl Rule {
    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.iter().any(|t| t == tag)
    }

    /// Axioms always; other rules once some evidence backs them.
    pub fn usable(&self) -> bool {
        self.status == Status::Axiom || !self.evidence.is_empty()
    }

    pub fn arity(&self) -> (usize, usize) {
        (self.lhs.dom(), self.lhs.cod())
    }

    /// The side a direction rewrites from and the side it rewrites to.
    pub fn sides(&self, dir: Dir) -> (&Diagram, &Diagram) {
        match dir {
            Dir::Fwd => (&self.lhs, &self.rhs),
            Dir::Bwd => (&self.rhs, &self.lhs),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    Fwd,
    Bwd,
}

impl Dir {
    pub fn as_str(self) -> &'static str {
        match self {
            Dir::Fwd => "fwd",
            Dir::Bwd => "bwd",
        }
    }

    pub fn parse(s: &str) -> Option<Dir> {
        match s {
            "fwd" => Some(Dir::Fwd),
            "bwd" => Some(Dir::Bwd),
            _ => None,
        }
    }

    pub fn flip(self) -> Dir {
        match self {
            Dir::Fwd => Dir::Bwd,
            Dir::Bwd => Dir::Fwd,
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("{file}:{line}: {message}")]
    Syntax {
        file: String,
        line: usize,
        message: String,
    },
    #[error("{file}:{line}: {source}")]
    Term {
        file: String,
        line: usize,
        source: ParseError,
    },
    #[error("rule {rule}: {source}")]
    Type { rule: String, source: TypeError },
    #[error("rule {rule}: left side has arity {lhs:?} but right side has arity {rhs:?}")]
    ArityMismatch {
        rule: String,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    #[error("rule {0} is defined twice")]
    Duplicate(String),
    #[error("cannot drop unknown rule {0}")]
    UnknownRule(String),
    #[error("unknown macro `{0}`")]
    UnknownMacro(String),
    #[error("unknown rule file `{0}`")]
    UnknownFile(String),
}

#[derive(Clone, Debug)]
pub struct Theory {
    pub name: TheoryName,
    gens: BTreeSet<Gen>,
    macros: BTreeMap<String, (Term, (usize, usize))>,
    rules: Vec<Rule>,
    slots: Vec<String>,
}

impl Scope for Theory {
    fn has_generator(&self, g: Gen) -> bool {
        self.gens.contains(&g)
    }

    fn macro_arity(&self, name: &str, index: Option<usize>) -> Option<(usize, usize)> {
        match index {
            Some(n) if name == "alpha" => Some((1 + n, n)),
            Some(_) => None,
            None => self.macros.get(name).map(|m| m.1),
        }
    }
}

/// The adjoint morphism `α_n : H ◇ H^n → H^n`.
pub fn build_alpha(n: usize) -> Term {
    let alpha1 = || {
        Term::compose([
            Term::gen(Gen::Mul),
            Term::tensor(Term::gen(Gen::Mul), Term::gen(Gen::Ant)),
            Term::tensor(Term::id(1), Term::gen(Gen::Br)),
            Term::tensor(Term::gen(Gen::Cop), Term::id(1)),
        ])
    };
    match n {
        0 => Term::gen(Gen::Cou),
        1 => alpha1(),
        _ => {
            let k = n - 1;
            Term::compose([
                Term::tensor(build_alpha(k), alpha1()),
                Term::tensor_all([Term::id(1), braiding_family(1, k), Term::id(1)]),
                Term::tensor_all([Term::gen(Gen::Cop), Term::id(k + 1)]),
            ])
        }
    }
}

enum Item {
    Macro(String, Term),
    Rule {
        name: String,
        tags: Vec<String>,
        lhs: Term,
        rhs: Term,
    },
    Slot(String),
    Drop(String),
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '\'' | '.')
}

fn parse_file(file: &str, text: &str) -> Result<Vec<Item>, TheoryError> {
    let mut items = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: &str| TheoryError::Syntax {
            file: file.into(),
            line,
            message: message.into(),
        };
        let term = |src: &str| {
            parse(src).map_err(|source| TheoryError::Term {
                file: file.into(),
                line,
                source,
            })
        };
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .unwrap_or((content, ""));
        let rest = rest.trim();
        match keyword {
            "slot" | "drop" => {
                if rest.is_empty() || !rest.chars().all(is_name_char) {
                    return Err(syntax("expected a rule name"));
                }
                items.push(if keyword == "slot" {
                    Item::Slot(rest.into())
                } else {
                    Item::Drop(rest.into())
                });
            }
            "macro" => {
                let (name, body) = rest
                    .split_once(':')
                    .ok_or_else(|| syntax("expected `macro NAME : TERM`"))?;
                let name = name.trim();
                if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(syntax("bad macro name"));
                }
                items.push(Item::Macro(name.into(), term(body)?));
            }
            "rule" => {
                let (head, body) = rest
                    .split_once(':')
                    .ok_or_else(|| syntax("expected `rule NAME [tags] : TERM = TERM`"))?;
                let head = head.trim();
                let (name, tags) = match head.split_once('[') {
                    Some((name, tags)) => {
                        let tags = tags
                            .strip_suffix(']')
                            .ok_or_else(|| syntax("unterminated tag list"))?;
                        (
                            name.trim(),
                            tags.split(|c: char| c.is_whitespace() || c == ',')
                                .filter(|t| !t.is_empty())
                                .map(String::from)
                                .collect(),
                        )
                    }
                    None => (head, Vec::new()),
                };
                if name.is_empty() || !name.chars().all(is_name_char) {
                    return Err(syntax("bad rule name"));
                }
                let (lhs, rhs) = body
                    .split_once('=')
                    .ok_or_else(|| syntax("expected `=` between the two sides"))?;
                items.push(Item::Rule {
                    name: name.into(),
                    tags,
                    lhs: term(lhs)?,
                    rhs: term(rhs)?,
                });
            }
            _ => return Err(syntax("expected `rule`, `macro`, `slot` or `drop`")),
        }
    }
    Ok(items)
}

/// The model non-axiom rules are checked in when a theory loads.
pub const VALIDATION_MODEL: &str = "s3";

impl Theory {
    /// An empty theory over the signature of `name`.
    pub fn empty(name: TheoryName) -> Theory {
        Theory {
            name,
            gens: name.generators(),
            macros: BTreeMap::new(),
            rules: Vec::new(),
            slots: Vec::new(),
        }
    }

    /// Builds a theory from rule files in order.
    pub fn from_sources(name: TheoryName, sources: &[(&str, &str)]) -> Result<Theory, TheoryError> {
        let mut th = Theory::empty(name);
        for (file, text) in sources {
            th.add_file(file, text)?;
        }
        th.validate();
        Ok(th)
    }

    /// Loads one more rule file on top of the current rules.
    pub fn add_file(&mut self, file: &str, text: &str) -> Result<(), TheoryError> {
        for item in parse_file(file, text)? {
            match item {
                Item::Macro(name, body) => {
                    let expanded = self.expand(&body)?;
                    let (d, c) =
                        typecheck(&expanded, self).map_err(|source| TheoryError::Type {
                            rule: name.clone(),
                            source,
                        })?;
                    self.macros.insert(name, (expanded, (d.0, c.0)));
                }
                Item::Slot(name) => {
                    if self.slots.contains(&name) || self.rule(&name).is_some() {
                        return Err(TheoryError::Duplicate(name));
                    }
                    self.slots.push(name);
                }
                Item::Drop(name) => {
                    let before = self.rules.len();
                    self.rules.retain(|r| r.name != name);
                    if self.rules.len() == before {
                        return Err(TheoryError::UnknownRule(name));
                    }
                }
                Item::Rule {
                    name,
                    tags,
                    lhs,
                    rhs,
                } => {
                    let rule = self.make_rule(&name, tags, lhs, rhs, file)?;
                    self.push_rule(rule)?;
                }
            }
        }
        Ok(())
    }

    fn push_rule(&mut self, rule: Rule) -> Result<(), TheoryError> {
        if self.rule(&rule.name).is_some() || self.slots.contains(&rule.name) {
            return Err(TheoryError::Duplicate(rule.name));
        }
        self.rules.push(rule);
        Ok(())
    }

    /// Type-checks both sides and builds their diagrams.
    pub fn make_rule(
        &self,
        name: &str,
        tags: Vec<String>,
        lhs: Term,
        rhs: Term,
        origin: &str,
    ) -> Result<Rule, TheoryError> {
        let ty = |t: &Term| {
            typecheck(t, self).map_err(|source| TheoryError::Type {
                rule: name.into(),
                source,
            })
        };
        let (ld, lc) = ty(&lhs)?;
        let (rd, rc) = ty(&rhs)?;
        if (ld, lc) != (rd, rc) {
            return Err(TheoryError::ArityMismatch {
                rule: name.into(),
                lhs: (ld.0, lc.0),
                rhs: (rd.0, rc.0),
            });
        }
        let status = if tags.iter().any(|t| t == "derived") {
            Status::Derived
        } else if tags.iter().any(|t| t == "reconstructed") {
            Status::Reconstructed
        } else {
            Status::Axiom
        };
        let diagram = |t: &Term| -> Result<Diagram, TheoryError> {
            let e = self.expand(t)?;
            canonicalize(&e).map_err(|source| TheoryError::Type {
                rule: name.into(),
                source,
            })
        };
        Ok(Rule {
            name: name.into(),
            tags,
            status,
            lhs: diagram(&lhs)?,
            rhs: diagram(&rhs)?,
            source: (lhs, rhs),
            origin: origin.into(),
            evidence: Vec::new(),
        })
    }

    /// Checks every non-axiom rule in the validation model and records the
    /// outcome as evidence.
    fn validate(&mut self) {
        let model = HopfModel::builtin(VALIDATION_MODEL).expect("validation model");
        let algbar = self.name == TheoryName::AlgBar;
        let hbb = if algbar {
            load_theory(TheoryName::Hbb).ok()
        } else {
            None
        };
        for rule in &mut self.rules {
            if rule.status == Status::Axiom || !rule.evidence.is_empty() {
                continue;
            }
            let (lhs, rhs) = match &hbb {
                Some(hbb) => {
                    let tr = |d: &Diagram| {
                        crate::gamma::translate(&d.to_term(), hbb)
                            .ok()
                            .and_then(|t| canonicalize(&t).ok())
                    };
                    match (tr(&rule.lhs), tr(&rule.rhs)) {
                        (Some(a), Some(b)) => (a, b),
                        _ => continue,
                    }
                }
                None => (rule.lhs.clone(), rule.rhs.clone()),
            };
            if let Ok(RuleCheck::Holds) = model.check(&lhs, &rhs) {
                rule.evidence
                    .push(Evidence::Oracle(VALIDATION_MODEL.into()));
            }
        }
    }

    pub fn generators(&self) -> &BTreeSet<Gen> {
        &self.gens
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, name: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.name == name)
    }

    pub fn slots(&self) -> &[String] {
        &self.slots
    }

    pub fn macro_names(&self) -> impl Iterator<Item = &str> {
        self.macros.keys().map(|s| s.as_str())
    }

    /// Adds a rule with the given evidence already checked by the caller.
    pub fn with_rule(&self, mut rule: Rule, evidence: Evidence) -> Result<Theory, TheoryError> {
        let mut th = self.clone();
        rule.evidence.push(evidence);
        th.push_rule(rule)?;
        Ok(th)
    }

    pub(crate) fn record(&mut self, name: &str, evidence: Evidence, status: Status) {
        if let Some(r) = self.rules.iter_mut().find(|r| r.name == name) {
            r.evidence.push(evidence);
            r.status = status;
        }
    }

    pub(crate) fn set_status(&mut self, name: &str, status: Status) {
        if let Some(r) = self.rules.iter_mut().find(|r| r.name == name) {
            r.status = status;
        }
    }

    /// Removes the named rules.
    pub fn without(&self, names: &[&str]) -> Theory {
        let mut th = self.clone();
        th.rules.retain(|r| !names.contains(&r.name.as_str()));
        th
    }

    /// Replaces macro references by their definitions.
    pub fn expand(&self, t: &Term) -> Result<Term, TheoryError> {
        let mut err = None;
        let out = t.map_leaves(&mut |leaf| match leaf {
            Term::Named {
                name,
                index: Some(n),
            } if name == "alpha" => Some(build_alpha(*n)),
            Term::Named { name, index } => {
                if index.is_none() {
                    if let Some((body, _)) = self.macros.get(name) {
                        return Some(body.clone());
                    }
                }
                err.get_or_insert(TheoryError::UnknownMacro(match index {
                    Some(i) => alloc::format!("{name}[{i}]"),
                    None => name.clone(),
                }));
                None
            }
            Term::Gen(g) if !self.gens.contains(g) => {
                self.macros.get(g.name()).map(|(body, _)| body.clone())
            }
            _ => None,
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// Expands macros and canonicalizes.
    pub fn diagram(&self, t: &Term) -> Result<Diagram, TheoryError> {
        typecheck(t, self).map_err(|source| TheoryError::Type {
            rule: t.to_string(),
            source,
        })?;
        let e = self.expand(t)?;
        canonicalize(&e).map_err(|source| TheoryError::Type {
            rule: t.to_string(),
            source,
        })
    }
}

/// The built-in theory.
pub fn load_theory(name: TheoryName) -> Result<Theory, TheoryError> {
    let sources: Vec<(&str, &str)> = theory_files(name)
        .iter()
        .map(|f| (*f, builtin_file(f).expect("shipped rule file")))
        .collect();
    Theory::from_sources(name, &sources).map(crate::corpus::attach)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Obj;

    fn hr() -> Theory {
        load_theory(TheoryName::Hr).unwrap()
    }

    #[test]
    fn every_theory_loads() {
        for name in TheoryName::ALL {
            let th = load_theory(name).unwrap();
            for r in th.rules() {
                assert_eq!(
                    (r.lhs.dom(), r.lhs.cod()),
                    (r.rhs.dom(), r.rhs.cod()),
                    "{}",
                    r.name
                );
            }
        }
    }

    #[test]
    fn hr_signature_and_groups() {
        let th = hr();
        assert_eq!(th.generators().len(), 13);
        for name in [
            "a1", "a8", "s2'", "i3", "r6", "r8", "r9", "b1", "yb", "br-cop-l",
        ] {
            assert!(th.rule(name).is_some(), "{name}");
        }
        assert!(th.slots().iter().any(|s| s == "q8"));
    }

    #[test]
    fn hbb_extends_hr() {
        let hr = hr();
        let hbb = load_theory(TheoryName::Hbb).unwrap();
        assert_eq!(hbb.generators(), hr.generators());
        for r in hr.rules() {
            assert!(hbb.rule(&r.name).is_some(), "{}", r.name);
        }
        let extra: Vec<&str> = hbb
            .rules()
            .iter()
            .filter(|r| hr.rule(&r.name).is_none())
            .map(|r| r.name.as_str())
            .collect();
        assert_eq!(extra, ["d", "n", "d2", "d2'"]);
    }

    #[test]
    fn algbar_has_twelve_axiom_groups() {
        let th = load_theory(TheoryName::AlgBar).unwrap();
        let hs: Vec<&str> = th
            .rules()
            .iter()
            .filter(|r| r.origin == "algbar.rules" && r.status == Status::Axiom)
            .map(|r| r.name.as_str())
            .collect();
        assert_eq!(
            hs,
            [
                "h1", "h2", "h3", "h4", "h5", "h6", "h6'", "h7", "h7'", "h8", "h8'", "h9", "h10",
                "h11", "h12"
            ]
        );
        for g in [Gen::Intg, Gen::Cointg, Gen::Rib, Gen::RibInv] {
            assert!(!th.generators().contains(&g));
        }
    }

    #[test]
    fn hbb_alt_swaps_ribbon_axioms() {
        let th = load_theory(TheoryName::HbbAlt).unwrap();
        assert!(th.rule("r8").is_none() && th.rule("r9").is_none());
        assert_eq!(th.rule("q").unwrap().status, Status::Axiom);
        assert_eq!(th.rule("h10").unwrap().arity(), (2, 2));
    }

    #[test]
    fn macro_expansions() {
        let th = hr();
        let mu = th.expand(&parse("mu").unwrap()).unwrap();
        assert_eq!(mu, parse("(mul * mul) . (id[1] * cpr * id[1])").unwrap());
        assert_eq!(typecheck(&parse("mu").unwrap(), &th), Ok((Obj(2), Obj(2))));
        assert_eq!(
            typecheck(&parse("rho_l").unwrap(), &th),
            Ok((Obj(1), Obj(2)))
        );
        assert_eq!(
            typecheck(&parse("rho_r").unwrap(), &th),
            Ok((Obj(1), Obj(2)))
        );
        assert_eq!(
            th.expand(&parse("alpha[0]").unwrap()).unwrap(),
            parse("cou").unwrap()
        );
        assert!(matches!(
            th.expand(&parse("nu").unwrap()),
            Err(TheoryError::UnknownMacro(_))
        ));
    }

    #[test]
    fn alpha_literals_and_arities() {
        assert_eq!(
            build_alpha(1),
            parse("mul . (mul * ant) . (id[1] * br) . (cop * id[1])").unwrap()
        );
        let th = hr();
        for n in 0..=4 {
            assert_eq!(
                typecheck(&build_alpha(n), &th),
                Ok((Obj(1 + n), Obj(n))),
                "alpha[{n}]"
            );
        }
    }

    #[test]
    fn ribbon_axiom_arities_pinned() {
        let th = hr();
        assert_eq!(th.rule("r9").unwrap().arity(), (2, 2));
        assert_eq!(th.rule("r8").unwrap().arity(), (1, 2));
        let hbb = load_theory(TheoryName::Hbb).unwrap();
        assert_eq!(hbb.rule("d").unwrap().arity(), (0, 1));
        assert_eq!(hbb.rule("n").unwrap().arity(), (0, 0));
        assert_eq!(typecheck(&parse("pr").unwrap(), &hbb), Ok((Obj(2), Obj(0))));
    }

    #[test]
    fn ill_typed_user_rule_is_rejected() {
        let mut th = hr();
        let err = th
            .add_file("user.rules", "rule bad : mul = cop\n")
            .unwrap_err();
        assert_eq!(
            err,
            TheoryError::ArityMismatch {
                rule: "bad".into(),
                lhs: (2, 1),
                rhs: (1, 2)
            }
        );
        let err = th
            .add_file("user.rules", "rule worse : mul . unit = unit\n")
            .unwrap_err();
        assert!(matches!(err, TheoryError::Type { .. }));
        let err = th
            .add_file("user.rules", "rule a1 : cop = cop\n")
            .unwrap_err();
        assert_eq!(err, TheoryError::Duplicate("a1".into()));
    }

    #[test]
    fn file_syntax_errors_carry_lines() {
        let mut th = hr();
        let err = th
            .add_file("x.rules", "# fine\nrule broken mul = mul\n")
            .unwrap_err();
        assert!(matches!(err, TheoryError::Syntax { line: 2, .. }));
        let err = th
            .add_file("x.rules", "rule t : mul . = mul\n")
            .unwrap_err();
        assert!(matches!(err, TheoryError::Term { line: 1, .. }));
    }

    #[test]
    fn reconstructed_rules_carry_oracle_records() {
        for name in TheoryName::ALL {
            let th = load_theory(name).unwrap();
            for r in th.rules() {
                assert!(r.usable(), "{name}: {} has no evidence", r.name);
            }
        }
    }
}
