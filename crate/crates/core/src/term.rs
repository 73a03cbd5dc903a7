//! Morphism terms, typing, and derived braidings.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Add;

use thiserror::Error;

use crate::gen::Gen;

/// The object `H^n`; `Obj(0)` is the monoidal unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Obj(pub usize);

impl Add for Obj {
    type Output = Obj;
    fn add(self, rhs: Obj) -> Obj {
        Obj(self.0 + rhs.0)
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A morphism term. `Comp(after, before)` is `after ∘ before`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Id(usize),
    Gen(Gen),
    /// A macro reference such as `mu` or `alpha[2]`.
    Named {
        name: String,
        index: Option<usize>,
    },
    Comp(Box<Term>, Box<Term>),
    Tensor(Box<Term>, Box<Term>),
}

impl Term {
    pub fn id(n: usize) -> Term {
        Term::Id(n)
    }

    pub fn gen(g: Gen) -> Term {
        Term::Gen(g)
    }

    pub fn named(name: &str) -> Term {
        Term::Named {
            name: name.into(),
            index: None,
        }
    }

    pub fn indexed(name: &str, index: usize) -> Term {
        Term::Named {
            name: name.into(),
            index: Some(index),
        }
    }

    pub fn comp(after: Term, before: Term) -> Term {
        Term::Comp(Box::new(after), Box::new(before))
    }

    pub fn tensor(left: Term, right: Term) -> Term {
        Term::Tensor(Box::new(left), Box::new(right))
    }

    /// Composes a sequence listed from last-applied to first-applied,
    /// the way it is written: `compose([f, g, h]) = f . g . h`.
    pub fn compose<I: IntoIterator<Item = Term>>(parts: I) -> Term {
        let mut parts: Vec<Term> = parts.into_iter().collect();
        let mut acc = parts.pop().expect("compose of an empty list");
        while let Some(t) = parts.pop() {
            acc = Term::comp(t, acc);
        }
        acc
    }

    /// Tensor product of the parts, dropping `id[0]` factors and merging
    /// adjacent identities.
    pub fn tensor_all<I: IntoIterator<Item = Term>>(parts: I) -> Term {
        let mut merged: Vec<Term> = Vec::new();
        for p in parts {
            match (merged.last_mut(), &p) {
                (_, Term::Id(0)) => {}
                (Some(Term::Id(a)), Term::Id(b)) => *a += *b,
                _ => merged.push(p),
            }
        }
        let mut acc = match merged.pop() {
            Some(t) => t,
            None => return Term::Id(0),
        };
        while let Some(t) = merged.pop() {
            acc = Term::tensor(t, acc);
        }
        acc
    }

    /// Generators occurring in the term.
    pub fn generators(&self) -> BTreeSet<Gen> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let Term::Gen(g) = t {
                out.insert(*g);
            }
        });
        out
    }

    pub fn has_named(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| {
            if matches!(t, Term::Named { .. }) {
                found = true;
            }
        });
        found
    }

    fn visit<F: FnMut(&Term)>(&self, f: &mut F) {
        f(self);
        match self {
            Term::Comp(a, b) | Term::Tensor(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Bottom-up substitution of leaves.
    pub fn map_leaves<F>(&self, f: &mut F) -> Term
    where
        F: FnMut(&Term) -> Option<Term>,
    {
        match self {
            Term::Comp(a, b) => Term::comp(a.map_leaves(f), b.map_leaves(f)),
            Term::Tensor(a, b) => Term::tensor(a.map_leaves(f), b.map_leaves(f)),
            leaf => f(leaf).unwrap_or_else(|| leaf.clone()),
        }
    }

    /// Number of generator occurrences.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |t| {
            if matches!(t, Term::Gen(_)) {
                n += 1;
            }
        });
        n
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::print(self))
    }
}

/// Where in a term a node sits: `0` steps into the first operand
/// (`after` / `left`), `1` into the second.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TermPath(pub Vec<u8>);

impl fmt::Display for TermPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for s in &self.0 {
            f.write_str(if *s == 0 { ".0" } else { ".1" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("composition mismatch at {path}: expected {expected} wires, found {found}")]
    CompositionMismatch {
        expected: usize,
        found: usize,
        path: TermPath,
    },
}

/// What a term may refer to: generators and macro names with their arities.
pub trait Scope {
    fn has_generator(&self, g: Gen) -> bool;
    /// Arity of a macro reference, if the name is defined.
    fn macro_arity(&self, name: &str, index: Option<usize>) -> Option<(usize, usize)>;
}

/// A bare generator signature with no macros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub gens: BTreeSet<Gen>,
}

impl Signature {
    pub fn new<I: IntoIterator<Item = Gen>>(gens: I) -> Self {
        Signature {
            gens: gens.into_iter().collect(),
        }
    }

    pub fn all() -> Self {
        Signature::new(Gen::ALL)
    }
}

impl Scope for Signature {
    fn has_generator(&self, g: Gen) -> bool {
        self.gens.contains(&g)
    }

    fn macro_arity(&self, _: &str, _: Option<usize>) -> Option<(usize, usize)> {
        None
    }
}

fn leaf_name(name: &str, index: Option<usize>) -> String {
    match index {
        Some(i) => alloc::format!("{name}[{i}]"),
        None => name.into(),
    }
}

/// Computes `(dom, cod)` of a term, or the first typing error found.
pub fn typecheck<S: Scope + ?Sized>(t: &Term, scope: &S) -> Result<(Obj, Obj), TypeError> {
    let mut path = Vec::new();
    check(t, scope, &mut path).map(|(d, c)| (Obj(d), Obj(c)))
}

fn check<S: Scope + ?Sized>(
    t: &Term,
    scope: &S,
    path: &mut Vec<u8>,
) -> Result<(usize, usize), TypeError> {
    match t {
        Term::Id(n) => Ok((*n, *n)),
        Term::Gen(g) => {
            if scope.has_generator(*g) {
                Ok(g.arity())
            } else {
                scope
                    .macro_arity(g.name(), None)
                    .ok_or_else(|| TypeError::UnknownGenerator(g.name().into()))
            }
        }
        Term::Named { name, index } => scope
            .macro_arity(name, *index)
            .ok_or_else(|| TypeError::UnknownGenerator(leaf_name(name, *index))),
        Term::Comp(after, before) => {
            path.push(0);
            let (fd, fc) = check(after, scope, path)?;
            path.pop();
            path.push(1);
            let (gd, gc) = check(before, scope, path)?;
            path.pop();
            if gc != fd {
                return Err(TypeError::CompositionMismatch {
                    expected: fd,
                    found: gc,
                    path: TermPath(path.clone()),
                });
            }
            Ok((gd, fc))
        }
        Term::Tensor(l, r) => {
            path.push(0);
            let (ld, lc) = check(l, scope, path)?;
            path.pop();
            path.push(1);
            let (rd, rc) = check(r, scope, path)?;
            path.pop();
            Ok((ld + rd, lc + rc))
        }
    }
}

/// Block braiding moving the first `m` strands past the last `n`, built
/// from elementary crossings.
pub fn braiding_family(m: usize, n: usize) -> Term {
    block_braiding(m, n, Gen::Br)
}

/// Same crossing pattern as [`braiding_family`] with every crossing
/// replaced by the inverse braiding.
pub fn inverse_braiding_family(m: usize, n: usize) -> Term {
    block_braiding(m, n, Gen::BrInv)
}

fn block_braiding(m: usize, n: usize, cross: Gen) -> Term {
    if m == 0 || n == 0 {
        return Term::Id(m + n);
    }
    if m == 1 {
        // strand 0 crosses strands 1..=n, leftmost crossing applied first
        let layers: Vec<Term> = (0..n)
            .rev()
            .map(|k| Term::tensor_all([Term::Id(k), Term::Gen(cross), Term::Id(n - 1 - k)]))
            .collect();
        return Term::compose(layers);
    }
    Term::comp(
        Term::tensor_all([block_braiding(m - 1, n, cross), Term::Id(1)]),
        Term::tensor_all([Term::Id(m - 1), block_braiding(1, n, cross)]),
    )
}
