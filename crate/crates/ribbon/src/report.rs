//! Text and JSON forms of suite reports. Both list the same items in the
//! same order and contain nothing time-dependent.

use std::fmt::Write as _;

use ribbon_core::suite::{Check, ModelCheck, Proof, Report, Standing};
use ribbon_core::{Matrix, ProofScript, Witness};
use serde_json::{json, Value};

pub fn standing_label(s: &Standing) -> &'static str {
    match s {
        Standing::Proved(_) => "PROVED",
        Standing::OracleOnly => "ORACLE-ONLY",
        Standing::Holds => "HOLDS",
        Standing::Fails => "FAILS",
        Standing::Unresolved => "UNRESOLVED",
    }
}

fn proof_text(p: &Proof) -> String {
    match p {
        Proof::Coincides(r) => format!("coincides with {r}"),
        Proof::Script(f) => format!("script {f}"),
        Proof::Search(s) => format!("search, {} steps", s.steps.len()),
    }
}

fn check_text(c: &ModelCheck) -> String {
    match &c.check {
        Check::Holds => format!("{}=holds", c.model),
        Check::Fails(w) => format!("{}=fails at {w}", c.model),
        Check::Skipped(why) => format!("{}=skipped ({why})", c.model),
    }
}

pub fn text(r: &Report) -> String {
    let width = r.items.iter().map(|i| i.name.len()).max().unwrap_or(0);
    let mut out = format!("suite {}\n", r.suite);
    for item in &r.items {
        let mut line = format!(
            "{:width$}  {:11}",
            item.name,
            standing_label(&item.standing)
        );
        if let Standing::Proved(p) = &item.standing {
            let _ = write!(line, "  {}", proof_text(p));
        }
        if !item.checks.is_empty() {
            let checks: Vec<String> = item.checks.iter().map(check_text).collect();
            let _ = write!(line, "  [{}]", checks.join(", "));
        }
        if !item.notes.is_empty() {
            let _ = write!(line, "  ({})", item.notes.join("; "));
        }
        out.push_str(line.trim_end());
        out.push('\n');
        if let Standing::Proved(Proof::Search(s)) = &item.standing {
            for step in &s.steps {
                let _ = writeln!(out, "{:width$}    {step}", "");
            }
        }
    }
    let count = |f: fn(&Standing) -> bool| r.items.iter().filter(|i| f(&i.standing)).count();
    let _ = writeln!(
        out,
        "total {}: proved {}, oracle-only {}, holds {}, fails {}, unresolved {}",
        r.items.len(),
        count(|s| matches!(s, Standing::Proved(_))),
        count(|s| matches!(s, Standing::OracleOnly)),
        count(|s| matches!(s, Standing::Holds)),
        count(|s| matches!(s, Standing::Fails)),
        count(|s| matches!(s, Standing::Unresolved)),
    );
    out
}

pub fn witness_json(w: &Witness) -> Value {
    json!({
        "row": w.row,
        "col": w.col,
        "lhs": w.lhs.to_string(),
        "rhs": w.rhs.to_string(),
    })
}

pub fn script_json(p: &ProofScript) -> Value {
    json!({
        "theory": p.theory.as_str(),
        "start": ribbon_core::print(&p.start),
        "goal": ribbon_core::print(&p.goal),
        "steps": p.steps.iter().map(|s| json!({
            "rule": s.rule,
            "dir": s.dir.as_str(),
            "pos": s.pos.to_string(),
        })).collect::<Vec<_>>(),
    })
}

fn proof_json(p: &Proof) -> Value {
    match p {
        Proof::Coincides(r) => json!({ "kind": "coincides", "rule": r }),
        Proof::Script(f) => json!({ "kind": "script", "file": f }),
        Proof::Search(s) => json!({ "kind": "search", "script": script_json(s) }),
    }
}

pub fn json(r: &Report) -> Value {
    let items: Vec<Value> = r
        .items
        .iter()
        .map(|i| {
            let checks: Vec<Value> = i
                .checks
                .iter()
                .map(|c| match &c.check {
                    Check::Holds => json!({ "model": c.model, "result": "holds" }),
                    Check::Fails(w) => {
                        json!({ "model": c.model, "result": "fails", "witness": witness_json(w) })
                    }
                    Check::Skipped(why) => {
                        json!({ "model": c.model, "result": "skipped", "reason": why })
                    }
                })
                .collect();
            let mut v = json!({
                "name": i.name,
                "status": standing_label(&i.standing),
                "checks": checks,
                "notes": i.notes,
            });
            if let Standing::Proved(p) = &i.standing {
                v["proof"] = proof_json(p);
            }
            v
        })
        .collect();
    json!({ "suite": r.suite, "items": items })
}

pub fn matrix_json(m: &Matrix) -> Value {
    let rows: Vec<Vec<String>> = (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c).to_string()).collect())
        .collect();
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ribbon_core::suite::Item;

    fn sample() -> Report {
        Report {
            suite: "demo".into(),
            items: vec![
                Item {
                    name: "a".into(),
                    standing: Standing::Proved(Proof::Coincides("b".into())),
                    checks: vec![ModelCheck {
                        model: "z2".into(),
                        check: Check::Holds,
                    }],
                    notes: vec![],
                },
                Item {
                    name: "longer".into(),
                    standing: Standing::Fails,
                    checks: vec![],
                    notes: vec!["n".into()],
                },
            ],
        }
    }

    #[test]
    fn text_form() {
        assert_eq!(
            text(&sample()),
            "suite demo\n\
             a       PROVED       coincides with b  [z2=holds]\n\
             longer  FAILS        (n)\n\
             total 2: proved 1, oracle-only 0, holds 0, fails 1, unresolved 0\n"
        );
    }

    #[test]
    fn forms_agree_item_for_item() {
        let r = sample();
        let j = json(&r);
        let names: Vec<&str> = j["items"]
            .as_array()
            .unwrap()
            .iter()
            .map(|i| i["name"].as_str().unwrap())
            .collect();
        assert_eq!(names, ["a", "longer"]);
        for (i, v) in r.items.iter().zip(j["items"].as_array().unwrap()) {
            assert_eq!(v["status"], standing_label(&i.standing));
        }
    }
}
