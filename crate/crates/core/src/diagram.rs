//! Canonical layered string diagrams.
//!
//! A diagram is a stack of layers read bottom to top. Each layer is a row of
//! cells, each cell either a single pass-through wire or a generator box.
//! Outputs of layer `k` feed the inputs of layer `k + 1` left to right.
//!
//! Two diagrams are equal when they draw the same wiring with the same port
//! order. The canonical form reads the wiring back as a sequence of boxes by
//! a sweep that depends only on that wiring, then stacks the boxes, each in
//! the lowest layer it can reach. A closed piece with no wire to the
//! boundary is drawn on its own and placed at the lowest, leftmost spot of
//! the region it sits in.

use alloc::vec::Vec;
use core::fmt;

use crate::gen::Gen;
use crate::layout::{canonical, Layout};
use crate::term::{typecheck, Signature, Term, TypeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Wire,
    Box(Gen),
}

impl Cell {
    pub fn ins(self) -> usize {
        match self {
            Cell::Wire => 1,
            Cell::Box(g) => g.dom(),
        }
    }

    pub fn outs(self) -> usize {
        match self {
            Cell::Wire => 1,
            Cell::Box(g) => g.cod(),
        }
    }
}

/// One box applied at a wire offset: `id[offset] * gen * id[rest]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slice {
    pub offset: usize,
    pub gen: Gen,
}

impl Slice {
    pub fn new(offset: usize, gen: Gen) -> Self {
        Slice { offset, gen }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagram {
    dom: usize,
    cod: usize,
    layers: Vec<Vec<Cell>>,
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Diagram({} -> {}: {})",
            self.dom,
            self.cod,
            self.to_term()
        )
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_term())
    }
}

/// A slice does not fit the wires available at its point in the sequence.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("slice {index} at offset {offset} needs {needs} wires but only {width} are available")]
pub struct SliceError {
    pub index: usize,
    pub offset: usize,
    pub needs: usize,
    pub width: usize,
}

impl Diagram {
    pub fn identity(n: usize) -> Diagram {
        Diagram {
            dom: n,
            cod: n,
            layers: Vec::new(),
        }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn layers(&self) -> &[Vec<Cell>] {
        &self.layers
    }

    /// Number of boxes.
    pub fn size(&self) -> usize {
        self.layers
            .iter()
            .flatten()
            .filter(|c| matches!(c, Cell::Box(_)))
            .count()
    }

    pub fn is_identity(&self) -> bool {
        self.layers.is_empty()
    }

    /// Largest number of wires crossing any horizontal cut.
    pub fn max_width(&self) -> usize {
        let mut w = self.dom;
        for layer in &self.layers {
            w = w.max(layer.iter().map(|c| c.outs()).sum());
        }
        w
    }

    /// Canonical diagram of a sequence of slices starting from `dom` wires.
    pub fn from_slices(dom: usize, slices: &[Slice]) -> Result<Diagram, SliceError> {
        let mut width = dom;
        for (index, s) in slices.iter().enumerate() {
            let needs = s.offset + s.gen.dom();
            if needs > width {
                return Err(SliceError {
                    index,
                    offset: s.offset,
                    needs,
                    width,
                });
            }
            width = width - s.gen.dom() + s.gen.cod();
        }
        let layout = canonical(&Layout::stacked(dom, slices));
        Ok(Diagram {
            dom,
            cod: width,
            layers: layout.cells(),
        })
    }

    /// Reads the boxes bottom to top, left to right, as slices.
    pub fn slices(&self) -> Vec<Slice> {
        let mut out = Vec::new();
        for layer in &self.layers {
            let mut done = 0;
            for c in layer {
                if let Cell::Box(g) = c {
                    out.push(Slice::new(done, *g));
                }
                done += c.outs();
            }
        }
        out
    }

    /// `(layer, cell)` coordinates of every box, in slice order.
    pub fn box_coords(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (l, layer) in self.layers.iter().enumerate() {
            for (i, c) in layer.iter().enumerate() {
                if matches!(c, Cell::Box(_)) {
                    out.push((l, i));
                }
            }
        }
        out
    }

    /// Back to a term: one tensor product per layer, composed bottom to top.
    pub fn to_term(&self) -> Term {
        if self.layers.is_empty() {
            return Term::Id(self.dom);
        }
        Term::compose(self.layers.iter().rev().map(|layer| {
            Term::tensor_all(layer.iter().map(|c| match c {
                Cell::Wire => Term::Id(1),
                Cell::Box(g) => Term::Gen(*g),
            }))
        }))
    }

    /// `self ∘ before`.
    pub fn compose(&self, before: &Diagram) -> Option<Diagram> {
        if before.cod != self.dom {
            return None;
        }
        let mut s = before.slices();
        s.extend(self.slices());
        Diagram::from_slices(before.dom, &s).ok()
    }

    /// `self ◇ right`.
    pub fn tensor(&self, right: &Diagram) -> Diagram {
        let mut s = self.slices();
        s.extend(
            right
                .slices()
                .into_iter()
                .map(|x| Slice::new(x.offset + self.cod, x.gen)),
        );
        Diagram::from_slices(self.dom + right.dom, &s).expect("tensor of well-formed diagrams")
    }
}

/// Arity of an already well-typed macro-free term.
fn arity(t: &Term) -> (usize, usize) {
    match t {
        Term::Id(n) => (*n, *n),
        Term::Gen(g) => g.arity(),
        Term::Named { .. } => unreachable!("macro-free term expected"),
        Term::Comp(a, b) => (arity(b).0, arity(a).1),
        Term::Tensor(a, b) => {
            let (ad, ac) = arity(a);
            let (bd, bc) = arity(b);
            (ad + bd, ac + bc)
        }
    }
}

fn flatten(t: &Term, base: usize, out: &mut Vec<Slice>) {
    match t {
        Term::Id(_) => {}
        Term::Gen(g) => out.push(Slice::new(base, *g)),
        Term::Named { .. } => unreachable!("macro-free term expected"),
        Term::Comp(after, before) => {
            flatten(before, base, out);
            flatten(after, base, out);
        }
        Term::Tensor(l, r) => {
            flatten(l, base, out);
            flatten(r, base + arity(l).1, out);
        }
    }
}

/// Slices of a macro-free, well-typed term in the order the term lists them.
pub fn term_slices(t: &Term) -> Result<(usize, Vec<Slice>), TypeError> {
    let (dom, _) = typecheck(t, &Signature::all())?;
    let mut out = Vec::new();
    flatten(t, 0, &mut out);
    Ok((dom.0, out))
}

/// Canonical diagram of a macro-free term. Macro references are reported
/// as unknown generators; expand them through a theory first.
pub fn canonicalize(t: &Term) -> Result<Diagram, TypeError> {
    let (dom, slices) = term_slices(t)?;
    Ok(Diagram::from_slices(dom, &slices).expect("typed terms flatten to valid slices"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    fn canon(s: &str) -> Diagram {
        canonicalize(&parse(s).unwrap()).unwrap()
    }

    #[test]
    fn interchange_is_absorbed() {
        assert_eq!(canon("(mul * id[1]) . (id[2] * ant)"), canon("mul * ant"));
        assert_eq!(canon("(id[1] * ant) . (mul * id[1])"), canon("mul * ant"));
    }

    #[test]
    fn monoidal_unit_is_absorbed() {
        for s in ["cop . mul", "br * unit", "cpr"] {
            let t = parse(s).unwrap();
            let padded = Term::tensor(t.clone(), Term::Id(0));
            assert_eq!(canonicalize(&padded).unwrap(), canonicalize(&t).unwrap());
        }
    }

    #[test]
    fn identity_has_no_boxes() {
        let d = canon("id[3]");
        assert_eq!((d.dom(), d.cod(), d.size()), (3, 3, 0));
        assert!(d.layers().is_empty());
        assert_eq!(canon("id[2] . id[2]"), canon("id[1] * id[1]"));
    }

    #[test]
    fn boxes_sink_to_earliest_layer() {
        let d = canon("(ant * id[1]) . (id[1] * ant) . (ant * id[1])");
        assert_eq!(d.layers().len(), 2);
        assert_eq!(
            d.layers()[0],
            alloc::vec![Cell::Box(Gen::Ant), Cell::Box(Gen::Ant)]
        );
    }

    #[test]
    fn unit_inside_copairing_legs_stays_above() {
        let d = canon("(id[1] * unit * id[1]) . cop");
        assert_eq!(d.layers().len(), 2);
        let e = canon("cop * unit");
        assert_eq!(e.layers().len(), 1);
    }

    #[test]
    fn counit_and_unit_float() {
        assert_eq!(canon("cou * unit"), canon("unit * cou"));
        assert_eq!(canon("unit . cou"), canon("cou * unit"));
        assert_ne!(canon("unit * intg"), canon("intg * unit"));
    }

    #[test]
    fn counit_between_inputs_blocks_multiplication() {
        let d = canon("mul . (id[1] * cou * id[1])");
        assert_eq!(d.layers().len(), 2);
    }

    #[test]
    fn slices_round_trip() {
        for s in [
            "mul . (mul * ant) . (id[1] * br) . (cop * id[1])",
            "(cou * id[1]) . cop",
            "((id[1] * unit * id[1]) . cop) * (cou . unit)",
            "(mul * mul) . (id[1] * cpr * id[1])",
        ] {
            let d = canon(s);
            assert_eq!(
                Diagram::from_slices(d.dom(), &d.slices()).unwrap(),
                d,
                "{s}"
            );
            assert_eq!(canonicalize(&d.to_term()).unwrap(), d, "{s}");
        }
    }

    #[test]
    fn out_of_range_slice_is_rejected() {
        let e = Diagram::from_slices(1, &[Slice::new(0, Gen::Mul)]).unwrap_err();
        assert_eq!(e.needs, 2);
    }
}
