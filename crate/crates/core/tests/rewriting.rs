mod common;

use common::{random_term, term_arity, Rng};
use proptest::prelude::*;
use ribbon_core::corpus::{self, Target};
use ribbon_core::{
    apply_rule, check_proof, find_matches, load_theory, parse, search_equal, Dir, HopfModel,
    ProofScript, SearchBudget, SearchOutcome, Status, Term, Theory, TheoryName, Verdict,
};

const MODELS: [&str; 3] = ["z2", "z3", "s3"];

fn same_in(model: &str, a: &Term, b: &Term) -> bool {
    let m = HopfModel::builtin(model).unwrap();
    m.evaluate_term(a).unwrap() == m.evaluate_term(b).unwrap()
}

fn hr() -> Theory {
    load_theory(TheoryName::Hr).unwrap()
}

/// A rule side placed in a random context, with the rule and direction.
fn planted(th: &Theory, rng: &mut Rng) -> (usize, Dir, Term) {
    let rules: Vec<usize> = (0..th.rules().len())
        .filter(|&i| th.rules()[i].status == Status::Axiom)
        .collect();
    let r = rules[rng.below(rules.len())];
    let dir = if rng.chance(50) { Dir::Fwd } else { Dir::Bwd };
    let (from, _) = th.rules()[r].sides(dir);
    let gens: Vec<_> = TheoryName::Hr.generators().into_iter().collect();
    let dom = rng.below(3);
    let mut before = random_term(rng, dom, 0, &gens, 3);
    let k = from.dom();
    let c = term_arity(&before).1;
    if c < k {
        before = Term::tensor(before, Term::id(k - c));
    }
    let c = c.max(k);
    let left = rng.below(c - k + 1);
    let mid = Term::tensor_all([Term::id(left), from.to_term(), Term::id(c - k - left)]);
    let before = Term::comp(mid, before);
    let after = random_term(rng, term_arity(&before).1, 0, &gens, 3);
    (r, dir, Term::comp(after, before))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Every rewrite of a planted rule side keeps the value in every group
    /// algebra.
    #[test]
    fn rewriting_preserves_value(seed in any::<u64>()) {
        let th = hr();
        let mut rng = Rng::new(seed);
        let (r, dir, host_t) = planted(&th, &mut rng);
        let rule = &th.rules()[r];
        let host = th.diagram(&host_t).unwrap();
        let model = MODELS[rng.below(MODELS.len())];
        for m in find_matches(&host, rule.sides(dir).0) {
            let out = apply_rule(&host, rule, dir, m.pos).unwrap();
            prop_assert!(same_in(model, &host_t, &out.to_term()), "{} {:?} at {}", rule.name, dir, m.pos);
        }
    }
}

/// Planted sides are found unless the canonical form re-nests boxes around
/// a floating unit or counit.
#[test]
fn planted_sides_are_usually_found() {
    let th = hr();
    let mut missed = Vec::new();
    for seed in 0..400u64 {
        let mut rng = Rng::new(seed);
        let (r, dir, host_t) = planted(&th, &mut rng);
        let host = th.diagram(&host_t).unwrap();
        if find_matches(&host, th.rules()[r].sides(dir).0).is_empty() {
            missed.push(seed);
        }
    }
    eprintln!("missed {} of 400: {:?}", missed.len(), missed);
    assert!(missed.len() <= 4, "missed {} of 400", missed.len());
}

#[test]
fn corpus_scripts_check_and_are_sound() {
    for e in corpus::ENTRIES {
        let script = e.script();
        let th = load_theory(script.theory).unwrap();
        assert_eq!(
            check_proof(&script, &th).unwrap(),
            Verdict::Accepted,
            "{}",
            e.file
        );
        let hbb = matches!(e.target, Target::Image(_));
        let m = if hbb { "s3" } else { "z3" };
        assert!(same_in(m, &script.start, &script.goal), "{}", e.file);
        assert!(same_in("fun-s3", &script.start, &script.goal), "{}", e.file);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Damaged corpus scripts are either rejected or still sound.
    #[test]
    fn checker_accepts_only_sound_scripts(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let e = &corpus::ENTRIES[rng.below(corpus::ENTRIES.len())];
        let mut script: ProofScript = e.script();
        let th = load_theory(script.theory).unwrap();
        if !script.steps.is_empty() {
            let k = rng.below(script.steps.len());
            match rng.below(4) {
                0 => { script.steps.remove(k); }
                1 => script.steps[k].dir = script.steps[k].dir.flip(),
                2 => script.steps[k].pos.offset += 1,
                _ => {
                    let names: Vec<_> = th.rules().iter().map(|r| r.name.clone()).collect();
                    script.steps[k].rule = names[rng.below(names.len())].clone();
                }
            }
        }
        if check_proof(&script, &th).unwrap().accepted() {
            prop_assert!(same_in("s3", &script.start, &script.goal));
            prop_assert!(same_in("fun-s3", &script.start, &script.goal));
        }
    }
}

#[test]
fn unit_cancels_against_twists() {
    let th = hr();
    let a = parse("mul . (rib_inv * rib) . (unit * unit)").unwrap();
    let b = parse("unit").unwrap();
    let SearchOutcome::Found(p) = search_equal(&a, &b, &th, SearchBudget::default()).unwrap()
    else {
        panic!("no script");
    };
    assert!(p.steps.len() <= 6);
    assert_eq!(check_proof(&p, &th).unwrap(), Verdict::Accepted);
}

#[test]
fn braided_comultiplication_is_not_derivable() {
    let th = hr();
    let a = parse("cop").unwrap();
    let b = parse("br . cop").unwrap();
    let out = search_equal(&a, &b, &th, SearchBudget::steps(8)).unwrap();
    assert!(matches!(out, SearchOutcome::NotFoundWithinBudget { .. }));
    let fun = HopfModel::builtin("fun-s3").unwrap();
    let (da, db) = (th.diagram(&a).unwrap(), th.diagram(&b).unwrap());
    assert!(!fun.check(&da, &db).unwrap().holds());
}
