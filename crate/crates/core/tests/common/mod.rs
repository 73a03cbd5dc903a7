#![allow(dead_code)]

use ribbon_core::{Gen, Slice, Term};

/// Small deterministic generator so a proptest seed fully fixes a case.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed ^ 0x9e37_79b9_7f4a_7c15)
    }

    pub fn next(&mut self) -> u64 {
        // splitmix64
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    pub fn chance(&mut self, percent: u64) -> bool {
        self.next() % 100 < percent
    }
}

fn arity(t: &Term) -> (usize, usize) {
    match t {
        Term::Id(n) => (*n, *n),
        Term::Gen(g) => g.arity(),
        Term::Named { .. } => panic!("macro in generated term"),
        Term::Comp(a, b) => (arity(b).0, arity(a).1),
        Term::Tensor(a, b) => {
            let (ad, ac) = arity(a);
            let (bd, bc) = arity(b);
            (ad + bd, ac + bc)
        }
    }
}

pub fn term_arity(t: &Term) -> (usize, usize) {
    arity(t)
}

/// One layer of generators drawn from `gens` consuming exactly `n` wires.
fn layer(rng: &mut Rng, n: usize, gens: &[Gen], max_width: usize) -> Term {
    let mut parts = Vec::new();
    let mut left = n;
    let mut width = 0;
    loop {
        if width < max_width && rng.chance(12) {
            let sources: Vec<Gen> = gens.iter().copied().filter(|g| g.dom() == 0).collect();
            if !sources.is_empty() {
                let g = sources[rng.below(sources.len())];
                width += g.cod();
                parts.push(Term::Gen(g));
                continue;
            }
        }
        if left == 0 {
            break;
        }
        let fits: Vec<Gen> = gens
            .iter()
            .copied()
            .filter(|g| g.dom() >= 1 && g.dom() <= left)
            .filter(|g| width + g.cod() + (left - g.dom()) <= max_width)
            .collect();
        if fits.is_empty() || rng.chance(35) {
            parts.push(Term::Id(1));
            width += 1;
            left -= 1;
        } else {
            let g = fits[rng.below(fits.len())];
            parts.push(Term::Gen(g));
            width += g.cod();
            left -= g.dom();
        }
    }
    Term::tensor_all(parts)
}

/// A random well-typed term over `gens` with domain `dom`.
pub fn random_term(
    rng: &mut Rng,
    dom: usize,
    depth: usize,
    gens: &[Gen],
    max_width: usize,
) -> Term {
    let mut t = layer(rng, dom, gens, max_width);
    for _ in 0..depth {
        let next = layer(rng, arity(&t).1, gens, max_width);
        t = Term::comp(next, t);
    }
    t
}

/// Applies one random strict-monoidal law somewhere in the term.
pub fn structural_step(rng: &mut Rng, t: &Term) -> Term {
    let n = count_nodes(t);
    let target = rng.below(n);
    let mut idx = 0;
    rewrite_at(rng, t, target, &mut idx)
}

fn count_nodes(t: &Term) -> usize {
    match t {
        Term::Comp(a, b) | Term::Tensor(a, b) => 1 + count_nodes(a) + count_nodes(b),
        _ => 1,
    }
}

fn rewrite_at(rng: &mut Rng, t: &Term, target: usize, idx: &mut usize) -> Term {
    let here = *idx;
    *idx += 1;
    if here == target {
        return local(rng, t);
    }
    match t {
        Term::Comp(a, b) => {
            let a2 = rewrite_at(rng, a, target, idx);
            let b2 = rewrite_at(rng, b, target, idx);
            Term::comp(a2, b2)
        }
        Term::Tensor(a, b) => {
            let a2 = rewrite_at(rng, a, target, idx);
            let b2 = rewrite_at(rng, b, target, idx);
            Term::tensor(a2, b2)
        }
        leaf => leaf.clone(),
    }
}

fn local(rng: &mut Rng, t: &Term) -> Term {
    let (d, c) = arity(t);
    match rng.below(8) {
        0 => Term::comp(Term::Id(c), t.clone()),
        1 => Term::comp(t.clone(), Term::Id(d)),
        2 => {
            if rng.chance(50) {
                Term::tensor(t.clone(), Term::Id(0))
            } else {
                Term::tensor(Term::Id(0), t.clone())
            }
        }
        3 => match t {
            // identity removal
            Term::Comp(a, b) if matches!(**a, Term::Id(_)) => (**b).clone(),
            Term::Comp(a, b) if matches!(**b, Term::Id(_)) => (**a).clone(),
            Term::Tensor(a, b) if **a == Term::Id(0) => (**b).clone(),
            Term::Tensor(a, b) if **b == Term::Id(0) => (**a).clone(),
            Term::Tensor(a, b) => match (&**a, &**b) {
                (Term::Id(x), Term::Id(y)) => Term::Id(x + y),
                _ => t.clone(),
            },
            Term::Id(n) if *n >= 2 => {
                let k = rng.below(*n + 1);
                Term::tensor(Term::Id(k), Term::Id(n - k))
            }
            _ => t.clone(),
        },
        4 => match t {
            // reassociation
            Term::Comp(a, b) => match &**a {
                Term::Comp(x, y) => {
                    Term::comp((**x).clone(), Term::comp((**y).clone(), (**b).clone()))
                }
                _ => match &**b {
                    Term::Comp(x, y) => {
                        Term::comp(Term::comp((**a).clone(), (**x).clone()), (**y).clone())
                    }
                    _ => t.clone(),
                },
            },
            Term::Tensor(a, b) => match &**a {
                Term::Tensor(x, y) => {
                    Term::tensor((**x).clone(), Term::tensor((**y).clone(), (**b).clone()))
                }
                _ => match &**b {
                    Term::Tensor(x, y) => {
                        Term::tensor(Term::tensor((**a).clone(), (**x).clone()), (**y).clone())
                    }
                    _ => t.clone(),
                },
            },
            _ => t.clone(),
        },
        5 | 6 => match t {
            // interchange: split a product into two stacked halves
            Term::Tensor(f, g) => {
                let (fd, fc) = arity(f);
                let (gd, gc) = arity(g);
                if rng.chance(50) {
                    Term::comp(
                        Term::tensor((**f).clone(), Term::Id(gc)),
                        Term::tensor(Term::Id(fd), (**g).clone()),
                    )
                } else {
                    Term::comp(
                        Term::tensor(Term::Id(fc), (**g).clone()),
                        Term::tensor((**f).clone(), Term::Id(gd)),
                    )
                }
            }
            Term::Comp(a, b) => match (&**a, &**b) {
                (Term::Tensor(x, y), Term::Tensor(z, w))
                    if arity(z).1 == arity(x).0 && arity(w).1 == arity(y).0 =>
                {
                    Term::tensor(
                        Term::comp((**x).clone(), (**z).clone()),
                        Term::comp((**y).clone(), (**w).clone()),
                    )
                }
                _ => t.clone(),
            },
            _ => t.clone(),
        },
        _ => t.clone(),
    }
}

/// Random valid slice sequence of `len` boxes starting from `dom` wires.
pub fn random_slices(
    rng: &mut Rng,
    dom: usize,
    len: usize,
    gens: &[Gen],
    max_width: usize,
) -> Vec<Slice> {
    let mut out = Vec::with_capacity(len);
    let mut w = dom;
    while out.len() < len {
        let g = gens[rng.below(gens.len())];
        let (p, q) = g.arity();
        if p > w || w - p + q > max_width {
            continue;
        }
        let off = rng.below(w - p + 1);
        out.push(Slice::new(off, g));
        w = w - p + q;
    }
    out
}

/// Every sequence reached from `s` by exchanging one adjacent pair of
/// independent slices.
pub fn interchanges(s: &[Slice]) -> Vec<Vec<Slice>> {
    let mut out = Vec::new();
    for i in 0..s.len().saturating_sub(1) {
        let (a, b) = (s[i], s[i + 1]);
        let (pa, qa) = a.gen.arity();
        let (pb, qb) = b.gen.arity();
        if b.offset + pb <= a.offset {
            let mut t = s.to_vec();
            t[i] = Slice::new(b.offset, b.gen);
            t[i + 1] = Slice::new(a.offset - pb + qb, a.gen);
            out.push(t);
        }
        if b.offset >= a.offset + qa {
            let mut t = s.to_vec();
            t[i] = Slice::new(b.offset - qa + pa, b.gen);
            t[i + 1] = a;
            out.push(t);
        }
    }
    out
}
