mod common;

use common::{interchanges, random_slices, random_term, structural_step, term_arity, Rng};
use proptest::prelude::*;
use ribbon_core::{canonicalize, parse, print, Diagram, Gen};

const GENS: [Gen; 13] = [
    Gen::Cop,
    Gen::Cou,
    Gen::Mul,
    Gen::Unit,
    Gen::Ant,
    Gen::AntInv,
    Gen::Br,
    Gen::BrInv,
    Gen::Intg,
    Gen::Cointg,
    Gen::Rib,
    Gen::Cpr,
    Gen::Pr,
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn structural_laws_give_identical_diagrams(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let dom = rng.below(4);
        let depth = rng.below(5);
        let t = random_term(&mut rng, dom, depth, &GENS, 6);
        let d = canonicalize(&t).unwrap();
        let mut u = t.clone();
        for _ in 0..rng.below(40) {
            u = structural_step(&mut rng, &u);
        }
        prop_assert_eq!(term_arity(&u), term_arity(&t));
        prop_assert_eq!(canonicalize(&u).unwrap(), d.clone(), "{} vs {}", print(&t), print(&u));
    }

    #[test]
    fn interchange_walks_are_invisible(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let dom = rng.below(3);
        let len = 2 + rng.below(11);
        let mut s = random_slices(&mut rng, dom, len, &GENS, 6);
        let d = Diagram::from_slices(dom, &s).unwrap();
        for _ in 0..60 {
            let next = interchanges(&s);
            if next.is_empty() {
                break;
            }
            s = next[rng.below(next.len())].clone();
        }
        prop_assert_eq!(Diagram::from_slices(dom, &s).unwrap(), d);
    }

    #[test]
    fn canonical_form_is_idempotent(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let dom = rng.below(4);
        let depth = rng.below(5);
        let t = random_term(&mut rng, dom, depth, &GENS, 6);
        let d = canonicalize(&t).unwrap();
        prop_assert_eq!((d.dom(), d.cod()), term_arity(&t));
        prop_assert_eq!(canonicalize(&d.to_term()).unwrap(), d.clone());
        prop_assert_eq!(Diagram::from_slices(d.dom(), &d.slices()).unwrap(), d);
    }

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let mut rng = Rng::new(seed);
        let dom = rng.below(4);
        let depth = rng.below(4);
        let t = random_term(&mut rng, dom, depth, &GENS, 6);
        let back = parse(&print(&t)).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(canonicalize(&back).unwrap(), canonicalize(&t).unwrap());
    }
}
