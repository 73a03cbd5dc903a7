//! The translation functor from the ribbon-element presentation into the
//! selfdual quotient.

use crate::gen::{Gen, TheoryName};
use crate::term::{typecheck, Signature, Term, TypeError};
use crate::theory::Theory;

/// Image of a single generator: `w₊ ↦ v⁻¹∘η`, `w₋ ↦ v∘η`, the pairing to
/// the `pr` macro of `target`, everything else fixed.
pub fn image(g: Gen, target: &Theory) -> Term {
    match g {
        Gen::Wp => Term::comp(Term::gen(Gen::RibInv), Term::gen(Gen::Unit)),
        Gen::Wm => Term::comp(Term::gen(Gen::Rib), Term::gen(Gen::Unit)),
        Gen::Pr => target
            .expand(&Term::gen(Gen::Pr))
            .expect("target theory defines the pairing"),
        other => Term::gen(other),
    }
}

/// Substitutes generator images throughout a macro-free term.
pub fn translate(t: &Term, target: &Theory) -> Result<Term, TypeError> {
    typecheck(t, &Signature::new(TheoryName::AlgBar.generators()))?;
    Ok(t.map_leaves(&mut |leaf| match leaf {
        Term::Gen(g) => Some(image(*g, target)),
        _ => None,
    }))
}
