//! The `ribbon` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ribbon_core::suite::{self, Report, Standing};
use ribbon_core::{
    check_proof, gamma, parse, print, search_equal, Diagram, SearchBudget, SearchOutcome, Term,
    Theory, TheoryError, TheoryName, Verdict,
};
use serde_json::json;

use crate::load::{self, LoadError};
use crate::{render, report};

pub const GRAMMAR: &str = "\
term := prod ( \".\" prod )* ;  prod := atom ( \"*\" atom )* ;
atom := \"id\" \"[\" NAT \"]\" | IDENT | IDENT \"[\" NAT \"]\" | \"(\" term \")\"";

fn theory_arg(s: &str) -> Result<TheoryName, String> {
    TheoryName::parse(s)
        .ok_or_else(|| format!("unknown theory `{s}` (expected hr, hbb, hbb-alt or algbar)"))
}

#[derive(Parser, Debug)]
#[command(
    name = "ribbon",
    version,
    about = "Rewriting and model checking for ribbon Hopf algebra diagrams"
)]
pub struct Cli {
    /// Theory: hr, hbb, hbb-alt or algbar.
    #[arg(long, global = true, default_value = "hr", value_parser = theory_arg)]
    theory: TheoryName,
    /// Extra rule file appended to the theory; repeatable.
    #[arg(long = "rules", global = true, value_name = "FILE")]
    rules: Vec<PathBuf>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone, Copy, Default)]
struct BudgetArgs {
    /// Total rewrite steps across both search directions.
    #[arg(long)]
    max_steps: Option<usize>,
    /// States kept per search level.
    #[arg(long)]
    max_frontier: Option<usize>,
    /// Largest diagram, in boxes, the search visits.
    #[arg(long)]
    max_size: Option<usize>,
}

impl BudgetArgs {
    fn or(self, d: SearchBudget) -> SearchBudget {
        SearchBudget {
            max_steps: self.max_steps.unwrap_or(d.max_steps),
            max_frontier: self.max_frontier.unwrap_or(d.max_frontier),
            max_size: self.max_size.unwrap_or(d.max_size),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteName {
    Axioms,
    Independence,
    Gamma,
    AltAxioms,
    Adjoint,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Svg,
    Text,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Load a rule file on top of the theory and report its rules.
    Check { file: PathBuf },
    /// Print the canonical form of a term.
    Normalize { term: String },
    /// Search for a rewrite proof that two terms are equal.
    Eq {
        a: String,
        b: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Replay a proof script.
    Prove { file: PathBuf },
    /// Evaluate a term in a model.
    Eval {
        term: String,
        #[arg(long, default_value = "trivial")]
        model: String,
    },
    /// Run a batch of checks.
    Suite {
        name: SuiteName,
        /// Model name or group file; repeatable.
        #[arg(long)]
        model: Vec<String>,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Translate an ALGBAR term into HBB.
    #[command(alias = "gamma-translate")]
    Translate { term: String },
    /// Draw the canonical diagram of a term.
    Render {
        term: String,
        #[arg(long, value_enum, default_value = "svg")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Exit status and message of a command that did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Malformed input: exit 2.
    Usage(String),
    /// Well-formed input that was rejected or not established: exit 1.
    Semantic(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Semantic(_) => 1,
        }
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        if e.is_syntax() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Semantic(e.to_string())
        }
    }
}

fn usage_term(src: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Usage(format!(
        "cannot read term `{src}`: {e}\ngrammar:\n{GRAMMAR}"
    ))
}

fn read_term(src: &str, th: &Theory) -> Result<(Term, Diagram), Failure> {
    let t = parse(src).map_err(|e| usage_term(src, e))?;
    let d = th.diagram(&t).map_err(|e| usage_term(src, e))?;
    Ok((t, d))
}

/// Γ-image of an ALGBAR term, as a term over HBB.
fn translated(src: &str, alg: &Theory, hbb: &Theory) -> Result<Term, Failure> {
    let t = parse(src).map_err(|e| usage_term(src, e))?;
    let flat = alg.expand(&t).map_err(|e| usage_term(src, e))?;
    gamma::translate(&flat, hbb).map_err(|e| usage_term(src, e))
}

struct Ctx<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn theory(&self, name: TheoryName) -> Result<Theory, Failure> {
        Ok(load::theory(name, &self.cli.rules)?)
    }

    fn emit(&mut self, s: &str) -> Result<(), Failure> {
        self.out
            .write_all(s.as_bytes())
            .map_err(|e| Failure::Semantic(format!("write failed: {e}")))
    }

    fn emit_json(&mut self, v: &serde_json::Value) -> Result<(), Failure> {
        let s = serde_json::to_string_pretty(v).expect("json values serialize");
        self.emit(&s)?;
        self.emit("\n")
    }
}

/// Parses arguments and runs one command. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let mut ctx = Ctx { cli: &cli, out };
    match dispatch(&mut ctx) {
        Ok(()) => 0,
        Err(f) => {
            let (Failure::Usage(m) | Failure::Semantic(m)) = &f;
            let _ = writeln!(err, "error: {m}");
            f.code()
        }
    }
}

fn dispatch(ctx: &mut Ctx<'_>) -> Result<(), Failure> {
    let cli = ctx.cli;
    match &cli.cmd {
        Cmd::Check { file } => check(ctx, file),
        Cmd::Normalize { term } => {
            let th = ctx.theory(cli.theory)?;
            let (_, d) = read_term(term, &th)?;
            let text = print(&d.to_term());
            if cli.json {
                ctx.emit_json(
                    &json!({ "term": text, "dom": d.dom(), "cod": d.cod(), "boxes": d.size() }),
                )
            } else {
                ctx.emit(&format!("{text}\n"))
            }
        }
        Cmd::Eq { a, b, budget } => eq(ctx, a, b, budget.or(SearchBudget::steps(8))),
        Cmd::Prove { file } => prove(ctx, file),
        Cmd::Eval { term, model } => eval(ctx, term, model),
        Cmd::Suite {
            name,
            model,
            budget,
        } => run_suite(ctx, *name, model, *budget),
        Cmd::Translate { term } => {
            let alg = ctx.theory(TheoryName::AlgBar)?;
            let hbb = ctx.theory(TheoryName::Hbb)?;
            let t = translated(term, &alg, &hbb)?;
            if cli.json {
                ctx.emit_json(&json!({ "term": print(&t) }))
            } else {
                ctx.emit(&format!("{}\n", print(&t)))
            }
        }
        Cmd::Render {
            term,
            format,
            output,
        } => {
            let th = ctx.theory(cli.theory)?;
            let (_, d) = read_term(term, &th)?;
            let text = match format {
                Format::Svg => render::svg(&d),
                Format::Text => render::text(&d),
            };
            match output {
                Some(path) => std::fs::write(path, text)
                    .map_err(|e| Failure::Semantic(format!("{}: {e}", path.display()))),
                None => ctx.emit(&text),
            }
        }
    }
}

fn check(ctx: &mut Ctx<'_>, file: &Path) -> Result<(), Failure> {
    let mut files = ctx.cli.rules.clone();
    files.push(file.to_path_buf());
    let th = load::theory(ctx.cli.theory, &files)?;
    let origin = file.display().to_string();
    let mine: Vec<_> = th.rules().iter().filter(|r| r.origin == origin).collect();
    if ctx.cli.json {
        let rules: Vec<_> = mine
            .iter()
            .map(|r| json!({ "name": r.name, "status": suite::status_name(r.status), "usable": r.usable() }))
            .collect();
        return ctx
            .emit_json(&json!({ "file": origin, "theory": th.name.as_str(), "rules": rules }));
    }
    let mut text = format!("{origin}: {} rules type-check in {}\n", mine.len(), th.name);
    for r in &mine {
        let (d, c) = r.arity();
        let usable = if r.usable() { "" } else { ", no oracle record" };
        text.push_str(&format!(
            "  {} ({d} -> {c}) {}{usable}\n",
            r.name,
            suite::status_name(r.status)
        ));
    }
    ctx.emit(&text)
}

fn eq(ctx: &mut Ctx<'_>, a: &str, b: &str, budget: SearchBudget) -> Result<(), Failure> {
    let cli = ctx.cli;
    let (th, ta, tb) = if cli.theory == TheoryName::AlgBar {
        let alg = ctx.theory(TheoryName::AlgBar)?;
        let hbb = ctx.theory(TheoryName::Hbb)?;
        let ta = translated(a, &alg, &hbb)?;
        let tb = translated(b, &alg, &hbb)?;
        (hbb, ta, tb)
    } else {
        let th = ctx.theory(cli.theory)?;
        let (ta, _) = read_term(a, &th)?;
        let (tb, _) = read_term(b, &th)?;
        (th, ta, tb)
    };
    let outcome = search_equal(&ta, &tb, &th, budget).map_err(|e| Failure::Usage(e.to_string()))?;
    match outcome {
        SearchOutcome::Found(p) => {
            if cli.json {
                ctx.emit_json(&json!({ "found": true, "script": report::script_json(&p) }))
            } else {
                ctx.emit(&p.to_string())
            }
        }
        SearchOutcome::NotFoundWithinBudget { explored } => {
            if cli.json {
                ctx.emit_json(&json!({ "found": false, "explored": explored }))?;
            } else {
                ctx.emit(&format!(
                    "NOT FOUND within budget ({explored} states explored)\n"
                ))?;
            }
            Err(Failure::Semantic("no proof within budget".into()))
        }
    }
}

fn prove(ctx: &mut Ctx<'_>, file: &Path) -> Result<(), Failure> {
    let script = load::script(file)?;
    let th = ctx.theory(script.theory)?;
    let verdict = check_proof(&script, &th)
        .map_err(|e: TheoryError| Failure::Usage(format!("{}: {e}", file.display())))?;
    let json = ctx.cli.json;
    match verdict {
        Verdict::Accepted => {
            if json {
                ctx.emit_json(&json!({ "accepted": true, "steps": script.steps.len() }))
            } else {
                ctx.emit(&format!("ACCEPTED ({} steps)\n", script.steps.len()))
            }
        }
        Verdict::Rejected {
            step,
            reason,
            state,
        } => {
            if json {
                ctx.emit_json(&json!({
                    "accepted": false,
                    "step": step,
                    "reason": reason,
                    "state": print(&state.to_term()),
                }))?;
            } else {
                let at = step.map(|s| format!(" at step {s}")).unwrap_or_default();
                ctx.emit(&format!(
                    "REJECTED{at}: {reason}\nstate: {}\n",
                    print(&state.to_term())
                ))?;
            }
            Err(Failure::Semantic("proof rejected".into()))
        }
    }
}

fn eval(ctx: &mut Ctx<'_>, term: &str, model: &str) -> Result<(), Failure> {
    let cli = ctx.cli;
    let m = load::model(model)?;
    let d = if cli.theory == TheoryName::AlgBar {
        let alg = ctx.theory(TheoryName::AlgBar)?;
        let hbb = ctx.theory(TheoryName::Hbb)?;
        let t = translated(term, &alg, &hbb)?;
        hbb.diagram(&t).map_err(|e| usage_term(term, e))?
    } else {
        read_term(term, &ctx.theory(cli.theory)?)?.1
    };
    let mat = m
        .evaluate(&d)
        .map_err(|e| Failure::Semantic(e.to_string()))?;
    if cli.json {
        let mut v = report::matrix_json(&mat);
        v["model"] = json!(m.name());
        ctx.emit_json(&v)
    } else {
        ctx.emit(&format!(
            "{} {}x{}\n{mat}",
            m.name(),
            mat.rows(),
            mat.cols()
        ))
    }
}

fn models(names: &[String], default: &[&str]) -> Result<Vec<ribbon_core::HopfModel>, Failure> {
    let chosen: Vec<String> = if names.is_empty() {
        default.iter().map(|s| s.to_string()).collect()
    } else {
        names.to_vec()
    };
    chosen.iter().map(|n| Ok(load::model(n)?)).collect()
}

/// Default search budget of the gamma suite.
pub const GAMMA_BUDGET: SearchBudget = SearchBudget {
    max_steps: 10,
    max_frontier: 60,
    max_size: 16,
};

/// Default re-search budget of the alt-axioms suite.
pub const ALT_BUDGET: SearchBudget = SearchBudget {
    max_steps: 12,
    max_frontier: 60,
    max_size: 16,
};

fn run_suite(
    ctx: &mut Ctx<'_>,
    name: SuiteName,
    model: &[String],
    budget: BudgetArgs,
) -> Result<(), Failure> {
    let cli = ctx.cli;
    let semantic = |e: TheoryError| Failure::Semantic(e.to_string());
    let r: Report = match name {
        SuiteName::Axioms => {
            let th = ctx.theory(cli.theory)?;
            suite::axioms_suite(&th, &models(model, &["trivial", "z2", "z3", "s3"])?)
        }
        SuiteName::Independence => {
            let th = ctx.theory(TheoryName::Hr)?;
            let m = models(model, &["fun-s3"])?;
            let mut r = suite::independence_suite(&th, &m[0]);
            for extra in &m[1..] {
                r.items.extend(suite::independence_suite(&th, extra).items);
            }
            r
        }
        SuiteName::Gamma => suite::gamma_suite(budget.or(GAMMA_BUDGET)).map_err(semantic)?,
        SuiteName::AltAxioms => suite::alt_axioms_suite(budget.or(ALT_BUDGET)).map_err(semantic)?,
        SuiteName::Adjoint => {
            suite::adjoint_suite(&models(model, &["s3"])?[0]).map_err(semantic)?
        }
    };
    if cli.json {
        ctx.emit_json(&report::json(&r))?;
    } else {
        ctx.emit(&report::text(&r))?;
    }
    let bad = |s: &Standing| matches!(s, Standing::Fails | Standing::Unresolved);
    let ok = match name {
        // a failing rule is the point here
        SuiteName::Independence => r.items.iter().any(|i| i.standing == Standing::Fails),
        _ => !r.items.iter().any(|i| bad(&i.standing)),
    };
    if ok {
        Ok(())
    } else {
        Err(Failure::Semantic(format!("suite {} has failures", r.suite)))
    }
}
