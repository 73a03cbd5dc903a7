//! Batch checks over theories, models and the proof corpus.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::corpus::{self, Target};
use crate::diagram::Diagram;
use crate::gamma;
use crate::gen::{Gen, TheoryName};
use crate::model::{EvalError, HopfModel, RuleCheck, Witness};
use crate::parse::parse;
use crate::rewrite::{
    check_proof, q14_tactic, search_equal, ProofScript, SearchBudget, SearchOutcome, Verdict,
};
use crate::term::typecheck;
use crate::theory::{build_alpha, load_theory, Rule, Status, Theory, TheoryError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check {
    Holds,
    Fails(Witness),
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelCheck {
    pub model: String,
    pub check: Check,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Proof {
    /// The two sides are literally the sides of this rule.
    Coincides(String),
    /// A shipped script replays.
    Script(String),
    Search(ProofScript),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Standing {
    Proved(Proof),
    /// No proof, but every oracle check holds.
    OracleOnly,
    Holds,
    Fails,
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item {
    pub name: String,
    pub standing: Standing,
    pub checks: Vec<ModelCheck>,
    pub notes: Vec<String>,
}

impl Item {
    fn new(name: &str, standing: Standing) -> Item {
        Item {
            name: name.into(),
            standing,
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn proved(&self) -> bool {
        matches!(self.standing, Standing::Proved(_))
    }

    /// Every model check holds and at least one ran.
    pub fn oracle_holds(&self) -> bool {
        self.checks.iter().any(|c| c.check == Check::Holds)
            && self
                .checks
                .iter()
                .all(|c| !matches!(c.check, Check::Fails(_)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub suite: String,
    pub items: Vec<Item>,
}

impl Report {
    pub fn item(&self, name: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.name == name)
    }
}

fn check_in(model: &HopfModel, lhs: &Diagram, rhs: &Diagram) -> ModelCheck {
    let check = match model.check(lhs, rhs) {
        Ok(RuleCheck::Holds) => Check::Holds,
        Ok(RuleCheck::Fails(w)) => Check::Fails(w),
        Err(EvalError::NotInterpreted(g, _)) => Check::Skipped(format!("{g} not interpreted")),
        Err(e) => Check::Skipped(e.to_string()),
    };
    ModelCheck {
        model: model.name().into(),
        check,
    }
}

fn oracle_item(rule: &Rule, models: &[HopfModel]) -> Item {
    let checks: Vec<ModelCheck> = models
        .iter()
        .map(|m| check_in(m, &rule.lhs, &rule.rhs))
        .collect();
    let standing = if checks.iter().any(|c| matches!(c.check, Check::Fails(_))) {
        Standing::Fails
    } else if checks.iter().any(|c| c.check == Check::Holds) {
        Standing::Holds
    } else {
        Standing::Unresolved
    };
    let mut item = Item::new(&rule.name, standing);
    item.checks = checks;
    if rule.has_tag("lemma") {
        item.notes.push("lemma".into());
    }
    if rule.status != Status::Axiom {
        item.notes.push(status_name(rule.status).into());
    }
    item
}

pub fn status_name(s: Status) -> &'static str {
    match s {
        Status::Axiom => "axiom",
        Status::Derived => "derived",
        Status::Reconstructed => "reconstructed",
    }
}

/// Every rule of `th` in every model.
pub fn axioms_suite(th: &Theory, models: &[HopfModel]) -> Report {
    Report {
        suite: "axioms".into(),
        items: th.rules().iter().map(|r| oracle_item(r, models)).collect(),
    }
}

/// Every HR rule in one model, by default the function algebra of S3.
pub fn independence_suite(th: &Theory, model: &HopfModel) -> Report {
    Report {
        suite: "independence".into(),
        items: th
            .rules()
            .iter()
            .map(|r| oracle_item(r, core::slice::from_ref(model)))
            .collect(),
    }
}

fn reconstructed_steps(p: &ProofScript, th: &Theory) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in &p.steps {
        if let Some(r) = th.rule(&s.rule) {
            if r.status == Status::Reconstructed && !out.contains(&r.name) {
                out.push(r.name.clone());
            }
        }
    }
    out
}

fn models(names: &[&str]) -> Vec<HopfModel> {
    names
        .iter()
        .map(|n| HopfModel::builtin(n).expect("builtin model"))
        .collect()
}

/// Attempts coincidence, a shipped script, then search, and always runs
/// the oracle. Lemmas whose sides coincide are withheld from search.
fn prove(
    name: &str,
    lhs: &Diagram,
    rhs: &Diagram,
    th: &Theory,
    script: Option<&corpus::Entry>,
    budget: SearchBudget,
    oracle: &[HopfModel],
) -> Item {
    let mut item = Item::new(name, Standing::Unresolved);
    item.checks = oracle.iter().map(|m| check_in(m, lhs, rhs)).collect();
    let mut withheld: Vec<&str> = Vec::new();
    for r in th.rules() {
        let same = (&r.lhs, &r.rhs) == (lhs, rhs) || (&r.lhs, &r.rhs) == (rhs, lhs);
        if !same {
            continue;
        }
        if r.has_tag("lemma") {
            // the lemmas are what is being checked
            item.notes.push(format!("coincides with lemma {}", r.name));
            withheld.push(&r.name);
        } else if !item.proved() {
            if r.status == Status::Reconstructed {
                item.notes.push(format!("{} is reconstructed", r.name));
            }
            item.standing = Standing::Proved(Proof::Coincides(r.name.clone()));
        }
    }
    if !item.proved() {
        if let Some(e) = script {
            let p = e.script();
            let ends = (th.diagram(&p.start).ok(), th.diagram(&p.goal).ok());
            let ok = ends == (Some(lhs.clone()), Some(rhs.clone()))
                && matches!(check_proof(&p, th), Ok(Verdict::Accepted));
            if ok {
                for r in reconstructed_steps(&p, th) {
                    item.notes.push(format!("uses reconstructed {r}"));
                }
                item.standing = Standing::Proved(Proof::Script(e.file.into()));
            } else {
                item.notes.push(format!("script {} rejected", e.file));
            }
        }
    }
    if !item.proved() {
        let search_th = th.without(&withheld);
        if let Ok(SearchOutcome::Found(p)) =
            search_equal(&lhs.to_term(), &rhs.to_term(), &search_th, budget)
        {
            for r in reconstructed_steps(&p, th) {
                item.notes.push(format!("uses reconstructed {r}"));
            }
            item.standing = Standing::Proved(Proof::Search(p));
        }
    }
    if !item.proved() {
        item.standing = if item.oracle_holds() {
            Standing::OracleOnly
        } else {
            Standing::Unresolved
        };
    }
    item
}

/// Images of the ALGBAR axioms under the translation, proved in HBB.
pub fn gamma_suite(budget: SearchBudget) -> Result<Report, TheoryError> {
    let alg = load_theory(TheoryName::AlgBar)?;
    let hbb = load_theory(TheoryName::Hbb)?;
    let group_models = models(&["z3", "s3"]);
    let trivial = models(&["trivial"]);
    let mut items = Vec::new();
    for rule in alg
        .rules()
        .iter()
        .filter(|r| r.status == Status::Axiom && r.origin == "algbar.rules")
    {
        let tr = |d: &Diagram| -> Result<Diagram, TheoryError> {
            let t = gamma::translate(&d.to_term(), &hbb).map_err(|source| TheoryError::Type {
                rule: rule.name.clone(),
                source,
            })?;
            hbb.diagram(&t)
        };
        let (a, b) = (tr(&rule.lhs)?, tr(&rule.rhs)?);
        let pairing = [&rule.lhs, &rule.rhs]
            .iter()
            .any(|d| d.slices().iter().any(|s| s.gen == Gen::Pr));
        let oracle = if pairing { &trivial } else { &group_models };
        let mut item = prove(
            &rule.name,
            &a,
            &b,
            &hbb,
            corpus::for_image(&rule.name),
            budget,
            oracle,
        );
        if pairing {
            item.notes
                .push("pairing: oracle in the trivial model only".into());
        }
        items.push(item);
    }
    Ok(Report {
        suite: "gamma".into(),
        items,
    })
}

/// Models in which every HR axiom holds.
pub const HR_MODELS: [&str; 6] = ["trivial", "z2", "z3", "s3", "fun-z2", "fun-z3"];

/// The relations (q) and (h10) in HR models, and the proof corpus
/// replayed in the variant theory where they replace (r8) and (r9).
pub fn alt_axioms_suite(budget: SearchBudget) -> Result<Report, TheoryError> {
    let hr = load_theory(TheoryName::Hr)?;
    let alt = load_theory(TheoryName::HbbAlt)?;
    let hr_models = models(&HR_MODELS);
    let mut items = Vec::new();
    for (name, lemma) in [("q", "q"), ("h10", "h10-lemma")] {
        let rule = hr.rule(lemma).expect("shipped lemma");
        let mut item = oracle_item(rule, &hr_models);
        item.name = name.into();
        items.push(item);
    }
    let mut load = Item::new("hbb-alt loads", Standing::Holds);
    load.notes.push(format!(
        "{} rules, {} generators",
        alt.rules().len(),
        alt.generators().len()
    ));
    let hbb = load_theory(TheoryName::Hbb)?;
    if alt.generators() != hbb.generators() {
        load.standing = Standing::Fails;
        load.notes.push("signature differs from hbb".into());
    }
    items.push(load);
    for (i, e) in corpus::ENTRIES.iter().enumerate() {
        let p = e.script();
        let name = format!("corpus {}", e.file);
        if alt.diagram(&p.start).is_err() || alt.diagram(&p.goal).is_err() {
            items.push(Item::new(&name, Standing::Unresolved));
            continue;
        }
        // the target rule and rules proved after it are off limits
        let mut off: Vec<&str> = corpus::ENTRIES[i..]
            .iter()
            .filter_map(|e| match e.target {
                Target::Rule(n) => Some(n),
                Target::Image(_) => None,
            })
            .collect();
        if let Target::Image(_) = e.target {
            off.clear();
        }
        let th = alt.without(&off);
        let mut item = Item::new(&name, Standing::Unresolved);
        if matches!(check_proof(&p, &th), Ok(Verdict::Accepted)) {
            item.standing = Standing::Proved(Proof::Script(e.file.into()));
        } else if let Ok(SearchOutcome::Found(q)) = search_equal(&p.start, &p.goal, &th, budget) {
            item.notes.push("re-searched".into());
            item.standing = Standing::Proved(Proof::Search(q));
        }
        items.push(item);
    }
    Ok(Report {
        suite: "alt-axioms".into(),
        items,
    })
}

/// Adjoint action arities and instances of the intertwining schema.
pub fn adjoint_suite(model: &HopfModel) -> Result<Report, TheoryError> {
    let hr = load_theory(TheoryName::Hr)?;
    let mut items = Vec::new();
    for n in 0..=4 {
        let ty = typecheck(&build_alpha(n), &hr).map(|(d, c)| (d.0, c.0));
        let mut item = Item::new(
            &format!("alpha[{n}]"),
            if ty == Ok((1 + n, n)) {
                Standing::Holds
            } else {
                Standing::Fails
            },
        );
        item.notes.push(match ty {
            Ok((d, c)) => format!("arity ({d}, {c})"),
            Err(e) => e.to_string(),
        });
        items.push(item);
    }
    for f in ["mul", "unit", "cop", "ant", "br", "cpr"] {
        let rule = q14_tactic(&parse(f).expect("generator"), &hr)?;
        items.push(oracle_item(&rule, core::slice::from_ref(model)));
    }
    let inst = q14_tactic(&parse("cpr").expect("generator"), &hr)?;
    let q = hr.rule("q").expect("shipped lemma");
    let same = inst.lhs == q.rhs && inst.rhs == q.lhs;
    let mut item = Item::new(
        "q14[cpr] is (q)",
        if same {
            Standing::Holds
        } else {
            Standing::Fails
        },
    );
    item.notes.push("sides swapped".into());
    items.push(item);
    Ok(Report {
        suite: "adjoint".into(),
        items,
    })
}
