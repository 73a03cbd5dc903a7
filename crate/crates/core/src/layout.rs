//! Working layouts and the settling procedure behind canonical diagrams.
//!
//! A layout is a stack of rows of cells, like a [`Diagram`](crate::Diagram),
//! where every box also carries an id so it can be followed while cells move.
//! Settling repeatedly applies isotopy moves until none applies:
//!
//! * a box with inputs drops one layer when the cells feeding it are plain
//!   wires, taking along any input-free box that feeds it directly;
//! * an input-free box rises until one of its outputs hits a box;
//! * inside a row, an input-free box sits left of an adjacent output-free box.
//!
//! Input-free boxes whose outputs all run straight to the codomain are taken
//! out first and put back in the top row afterwards, and connected pieces
//! touching neither boundary are canonicalized on their own and reinserted at
//! the lowest, leftmost point of the region that holds them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::diagram::{Cell, Slice};
use crate::gen::Gen;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct WCell {
    pub cell: Cell,
    /// Box identity; meaningless for wires.
    pub id: u32,
}

const WIRE: WCell = WCell {
    cell: Cell::Wire,
    id: u32::MAX,
};

impl WCell {
    fn ins(self) -> usize {
        self.cell.ins()
    }

    fn outs(self) -> usize {
        self.cell.outs()
    }

    fn is_box(self) -> bool {
        matches!(self.cell, Cell::Box(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Layout {
    pub dom: usize,
    pub layers: Vec<Vec<WCell>>,
}

fn inpos(layer: &[WCell]) -> Vec<usize> {
    let mut v = Vec::with_capacity(layer.len() + 1);
    let mut s = 0;
    v.push(0);
    for c in layer {
        s += c.ins();
        v.push(s);
    }
    v
}

fn outpos(layer: &[WCell]) -> Vec<usize> {
    let mut v = Vec::with_capacity(layer.len() + 1);
    let mut s = 0;
    v.push(0);
    for c in layer {
        s += c.outs();
        v.push(s);
    }
    v
}

fn wires(n: usize) -> Vec<WCell> {
    vec![WIRE; n]
}

impl Layout {
    /// One slice per row; the caller has already checked that slices fit.
    pub fn stacked(dom: usize, slices: &[Slice]) -> Layout {
        let mut width = dom;
        let mut layers = Vec::with_capacity(slices.len());
        for (n, s) in slices.iter().enumerate() {
            let (p, q) = s.gen.arity();
            let mut row = wires(s.offset);
            row.push(WCell {
                cell: Cell::Box(s.gen),
                id: n as u32,
            });
            row.extend(wires(width - s.offset - p));
            layers.push(row);
            width = width - p + q;
        }
        Layout { dom, layers }
    }

    /// Number of wires crossing cut `c` (cut 0 is the domain).
    pub fn width_at(&self, c: usize) -> usize {
        if c == 0 {
            self.dom
        } else {
            self.layers[c - 1].iter().map(|x| x.outs()).sum()
        }
    }

    pub fn cod(&self) -> usize {
        self.width_at(self.layers.len())
    }

    pub fn cells(&self) -> Vec<Vec<Cell>> {
        self.layers
            .iter()
            .map(|l| l.iter().map(|c| c.cell).collect())
            .collect()
    }

    /// Keeps only the boxes in `keep` and the wires they own. Row indices
    /// are preserved, so some rows may end up with no boxes.
    fn restrict(&self, keep: &BTreeSet<u32>) -> Layout {
        let owners = self.wire_owners();
        let dom_kept = |o: &Owner| match o {
            Owner::Dom(_) => keep.contains(&FRAME),
            Owner::Out(id, _) => keep.contains(id),
        };
        let dom = owners[0].iter().filter(|o| dom_kept(o)).count();
        let mut layers = Vec::with_capacity(self.layers.len());
        for (k, layer) in self.layers.iter().enumerate() {
            let ip = inpos(layer);
            let mut row = Vec::new();
            for (i, c) in layer.iter().enumerate() {
                match c.cell {
                    Cell::Wire => {
                        if dom_kept(&owners[k][ip[i]]) {
                            row.push(*c);
                        }
                    }
                    Cell::Box(_) => {
                        if keep.contains(&c.id) {
                            row.push(*c);
                        }
                    }
                }
            }
            layers.push(row);
        }
        Layout { dom, layers }
    }

    /// Which port produced each wire at each cut.
    fn wire_owners(&self) -> Vec<Vec<Owner>> {
        let mut cuts = Vec::with_capacity(self.layers.len() + 1);
        cuts.push((0..self.dom).map(Owner::Dom).collect::<Vec<_>>());
        for layer in &self.layers {
            let below = cuts.last().expect("nonempty");
            let mut above = Vec::new();
            let mut at = 0;
            for c in layer {
                match c.cell {
                    Cell::Wire => {
                        above.push(below[at]);
                        at += 1;
                    }
                    Cell::Box(g) => {
                        at += g.dom();
                        for port in 0..g.cod() {
                            above.push(Owner::Out(c.id, port));
                        }
                    }
                }
            }
            cuts.push(above);
        }
        cuts
    }
}

/// Pseudo id standing for the boundary in component computations.
const FRAME: u32 = u32::MAX - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Owner {
    Dom(usize),
    Out(u32, usize),
}

// ---------------------------------------------------------------- wiring

struct Node {
    gen: Gen,
    ins: Vec<Owner>,
}

/// The wiring of a layout, free of any geometry.
struct Graph {
    nodes: BTreeMap<u32, Node>,
    cod: Vec<Owner>,
}

impl Graph {
    fn of(l: &Layout) -> Graph {
        let owners = l.wire_owners();
        let mut nodes = BTreeMap::new();
        for (k, layer) in l.layers.iter().enumerate() {
            let ip = inpos(layer);
            for (i, c) in layer.iter().enumerate() {
                if let Cell::Box(g) = c.cell {
                    let ins = owners[k][ip[i]..ip[i] + g.dom()].to_vec();
                    nodes.insert(c.id, Node { gen: g, ins });
                }
            }
        }
        Graph {
            nodes,
            cod: owners[l.layers.len()].clone(),
        }
    }
}

// ----------------------------------------------------------------- walks

/// Where a wire ends.
#[derive(Clone, Copy)]
enum Head {
    In(u32, usize),
    Cod(usize),
}

/// The boundary walk of every face, read off the rotation at each box.
/// Each side of each wire, and each side of the frame, appears exactly once
/// in exactly one walk.
struct Walks {
    cycles: Vec<Vec<Side>>,
}

impl Walks {
    /// With `start`, the boundary is empty and the frame is attached at the
    /// bottom corner of that input-free box.
    fn of(g: &Graph, dom: usize, start: Option<u32>) -> Walks {
        let mut head = BTreeMap::new();
        for (&id, n) in &g.nodes {
            for (k, w) in n.ins.iter().enumerate() {
                head.insert(*w, Head::In(id, k));
            }
        }
        for (j, w) in g.cod.iter().enumerate() {
            head.insert(*w, Head::Cod(j));
        }
        let node = |id: u32| &g.nodes[&id];
        // walk with the face on the left: up along left sides, down along right sides
        let next = |s: Side| -> Side {
            match s {
                Side::Wire(e, false) => match head[&e] {
                    Head::In(v, k) if k > 0 => Side::Wire(node(v).ins[k - 1], true),
                    Head::In(v, _) if node(v).gen.cod() > 0 => Side::Wire(Owner::Out(v, 0), false),
                    Head::In(v, _) => {
                        Side::Wire(*node(v).ins.last().expect("box has a wire"), true)
                    }
                    Head::Cod(j) if j > 0 => Side::Wire(g.cod[j - 1], true),
                    Head::Cod(_) => Side::FrameLeft,
                },
                Side::Wire(Owner::Out(u, k), true) => {
                    let n = node(u);
                    if k + 1 < n.gen.cod() {
                        Side::Wire(Owner::Out(u, k + 1), false)
                    } else if let Some(&w) = n.ins.last() {
                        Side::Wire(w, true)
                    } else if start == Some(u) {
                        Side::FrameRight
                    } else {
                        Side::Wire(Owner::Out(u, 0), false)
                    }
                }
                Side::Wire(Owner::Dom(k), true) if k + 1 < dom => {
                    Side::Wire(Owner::Dom(k + 1), false)
                }
                Side::Wire(Owner::Dom(_), true) => Side::FrameRight,
                Side::FrameLeft => match start {
                    Some(u) => Side::Wire(Owner::Out(u, 0), false),
                    None if dom > 0 => Side::Wire(Owner::Dom(0), false),
                    None => Side::FrameRight,
                },
                Side::FrameRight => match g.cod.last() {
                    Some(&w) => Side::Wire(w, true),
                    None => Side::FrameLeft,
                },
            }
        };
        let mut wires: Vec<Owner> = (0..dom).map(Owner::Dom).collect();
        for (&id, n) in &g.nodes {
            wires.extend((0..n.gen.cod()).map(|k| Owner::Out(id, k)));
        }
        let mut all = vec![Side::FrameLeft, Side::FrameRight];
        for w in wires {
            all.push(Side::Wire(w, false));
            all.push(Side::Wire(w, true));
        }
        let mut seen = BTreeSet::new();
        let mut cycles = Vec::new();
        for s in all {
            if seen.contains(&s) {
                continue;
            }
            let mut t = s;
            let mut cycle = Vec::new();
            loop {
                seen.insert(t);
                cycle.push(t);
                t = next(t);
                if t == s {
                    break;
                }
            }
            cycles.push(cycle);
        }
        Walks { cycles }
    }
}

// --------------------------------------------------------------- anchors

/// A turn of a face walk. Walks go up along left sides and down along right
/// sides, so a valley is a right side followed by a left side.
#[derive(Clone, Copy)]
enum Turn {
    /// `source` is set at the bottom corner of an input-free box, the one
    /// large valley a box can have.
    Valley {
        source: Option<u32>,
        key: (Side, Side),
    },
    /// `large` at the top of an output-free box.
    Peak { large: bool },
}

fn goes_up(s: Side) -> bool {
    matches!(s, Side::FrameRight | Side::Wire(_, false))
}

/// Gives every input-free box a small valley to hang from, so that the
/// wiring plus one edge per anchor still draws upward.
///
/// In each face, a large valley followed by a small peak and a small valley
/// hangs from that valley; the two turns it used leave the walk, and the
/// valley stays for later boxes, which hang to the right of earlier ones.
/// The mirror pattern retires large peaks. Two patterns never share a turn,
/// so the result does not depend on the order they are found in, nor on
/// where a walk starts.
fn anchors(g: &Graph, walks: &Walks) -> BTreeMap<(Side, Side), Vec<u32>> {
    let mut out: BTreeMap<(Side, Side), Vec<u32>> = BTreeMap::new();
    for cycle in &walks.cycles {
        let n = cycle.len();
        let mut turns: Vec<Turn> = Vec::new();
        for i in 0..n {
            let (t, u) = (cycle[i], cycle[(i + 1) % n]);
            match (goes_up(t), goes_up(u)) {
                (false, true) => {
                    let source = match (t, u) {
                        (
                            Side::Wire(Owner::Out(x, _), true),
                            Side::Wire(Owner::Out(y, 0), false),
                        ) if x == y && g.nodes[&x].ins.is_empty() => Some(x),
                        _ => None,
                    };
                    turns.push(Turn::Valley {
                        source,
                        key: (t, u),
                    });
                }
                (true, false) => {
                    let large = match (t, u) {
                        (Side::Wire(a, false), Side::Wire(b, true)) => g.nodes.values().any(|v| {
                            v.gen.cod() == 0
                                && v.ins.first() == Some(&a)
                                && v.ins.last() == Some(&b)
                        }),
                        _ => false,
                    };
                    turns.push(Turn::Peak { large });
                }
                _ => {}
            }
        }
        loop {
            let m = turns.len();
            let hit =
                (0..m).find_map(
                    |i| match (turns[i], turns[(i + 1) % m], turns[(i + 2) % m]) {
                        (
                            Turn::Valley {
                                source: Some(x), ..
                            },
                            Turn::Peak { large: false },
                            Turn::Valley { source: None, key },
                        ) => Some((i, Some((x, key)))),
                        (
                            Turn::Peak { large: true },
                            Turn::Valley { source: None, .. },
                            Turn::Peak { large: false },
                        ) => Some((i, None)),
                        _ => None,
                    },
                );
            let Some((i, anchor)) = hit else { break };
            if let Some((x, key)) = anchor {
                out.entry(key).or_default().push(x);
            }
            let j = (i + 1) % m;
            turns.remove(i.max(j));
            turns.remove(i.min(j));
        }
    }
    out
}

// ----------------------------------------------------------------- sweep

/// Orders the boxes of a connected wiring into slices without looking at
/// any layout. The boundary moves up one box at a time, always taking the
/// leftmost box whose inputs sit side by side on it. An input-free box goes
/// in as soon as the valley it hangs from opens.
struct Sweep<'a> {
    g: &'a Graph,
    anchors: BTreeMap<(Side, Side), Vec<u32>>,
    placed: BTreeSet<u32>,
    boundary: Vec<Owner>,
    out: Vec<Tagged>,
}

impl<'a> Sweep<'a> {
    /// With `start`, the boundary is empty and `start` opens the sweep.
    /// Returns `None` when the wiring does not draw upward that way.
    fn run(g: &'a Graph, dom: usize, start: Option<u32>) -> Option<Vec<Tagged>> {
        let walks = Walks::of(g, dom, start);
        let mut s = Sweep {
            g,
            anchors: anchors(g, &walks),
            placed: BTreeSet::new(),
            boundary: (0..dom).map(Owner::Dom).collect(),
            out: Vec::new(),
        };
        let mut floor = vec![Side::FrameLeft];
        match start {
            Some(id) => {
                let q = g.nodes[&id].gen.cod();
                floor.push(Side::Wire(Owner::Out(id, 0), false));
                floor.push(Side::Wire(Owner::Out(id, q - 1), true));
                s.emit(id, 0);
            }
            None => {
                for k in 0..dom {
                    floor.push(Side::Wire(Owner::Dom(k), false));
                    floor.push(Side::Wire(Owner::Dom(k), true));
                }
            }
        }
        floor.push(Side::FrameRight);
        for pair in floor.chunks(2) {
            s.open((pair[0], pair[1]));
        }
        while let Some((at, id)) = s.next_ready() {
            s.emit(id, at);
        }
        (s.placed.len() == g.nodes.len() && s.boundary == g.cod).then_some(s.out)
    }

    fn pos(&self, w: Owner) -> Option<usize> {
        self.boundary.iter().position(|&b| b == w)
    }

    fn emit(&mut self, id: u32, at: usize) {
        let n = &self.g.nodes[&id];
        let (p, q) = n.gen.arity();
        self.boundary
            .splice(at..at + p, (0..q).map(|o| Owner::Out(id, o)));
        self.placed.insert(id);
        self.out.push((Slice::new(at, n.gen), id));
        for k in 1..q {
            self.open((
                Side::Wire(Owner::Out(id, k - 1), true),
                Side::Wire(Owner::Out(id, k), false),
            ));
        }
    }

    /// Puts in the boxes hanging from a valley that just reached the
    /// boundary, left to right.
    fn open(&mut self, key: (Side, Side)) {
        let Some(hung) = self.anchors.get(&key).cloned() else {
            return;
        };
        for x in hung {
            let at = match key.1 {
                Side::Wire(w, _) => self.pos(w).expect("valley on the boundary"),
                _ => self.boundary.len(),
            };
            self.emit(x, at);
        }
    }

    /// Position of the first input when all inputs are adjacent, in order.
    fn ready(&self, id: u32) -> Option<usize> {
        let ins = &self.g.nodes[&id].ins;
        let first = self.pos(*ins.first()?)?;
        for (k, w) in ins.iter().enumerate() {
            if self.boundary.get(first + k) != Some(w) {
                return None;
            }
        }
        Some(first)
    }

    fn next_ready(&self) -> Option<(usize, u32)> {
        self.g
            .nodes
            .keys()
            .filter(|x| !self.placed.contains(x))
            .filter_map(|&x| self.ready(x).map(|at| (at, x)))
            .min()
    }
}

// ---------------------------------------------------------------- layering

/// Stacks slices greedily, each box in the lowest row it can reach.
/// A slice and the id of the box it draws.
type Tagged = (Slice, u32);

fn build(dom: usize, seq: &[Tagged]) -> Layout {
    let mut l = Layout {
        dom,
        layers: Vec::new(),
    };
    for &(s, id) in seq {
        drop_in(&mut l, s, id);
    }
    l
}

fn drop_in(l: &mut Layout, s: Slice, id: u32) {
    let cell = WCell {
        cell: Cell::Box(s.gen),
        id,
    };
    let (p, q) = s.gen.arity();
    let mut x = s.offset;
    // rows the box passes, with the index of the cells it displaces
    let mut path: Vec<(usize, usize)> = Vec::new();
    for r in (0..l.layers.len()).rev() {
        let layer = &l.layers[r];
        let op = outpos(layer);
        let ip = inpos(layer);
        let at = if p == 0 {
            (0..=layer.len()).find(|&t| op[t] == x)
        } else {
            (0..layer.len())
                .find(|&i| op[i] == x && layer[i].outs() > 0)
                .filter(|&i| {
                    i + p <= layer.len() && layer[i..i + p].iter().all(|c| c.cell == Cell::Wire)
                })
        };
        match at {
            Some(i) => {
                path.push((r, i));
                x = ip[i];
            }
            None => break,
        }
    }
    match path.split_last() {
        None => {
            let w = l.cod();
            let mut row = wires(s.offset);
            row.push(cell);
            row.extend(wires(w - s.offset - p));
            l.layers.push(row);
        }
        Some((&(r, i), above)) => {
            l.layers[r].splice(i..i + p, [cell]);
            for &(rr, ii) in above {
                l.layers[rr].splice(ii..ii + p, wires(q));
            }
        }
    }
}

// ------------------------------------------------------------ components

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Connected components as sets of box ids; the boundary is [`FRAME`].
fn components(l: &Layout) -> Vec<BTreeSet<u32>> {
    let ids: Vec<u32> = l
        .layers
        .iter()
        .flatten()
        .filter(|c| c.is_box())
        .map(|c| c.id)
        .chain([FRAME])
        .collect();
    let index: BTreeMap<u32, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut uf = UnionFind::new(ids.len());
    let owners = l.wire_owners();
    let node = |o: &Owner| match o {
        Owner::Dom(_) => index[&FRAME],
        Owner::Out(id, _) => index[id],
    };
    for (k, layer) in l.layers.iter().enumerate() {
        let ip = inpos(layer);
        for (i, c) in layer.iter().enumerate() {
            if c.is_box() {
                for o in &owners[k][ip[i]..ip[i] + c.ins()] {
                    uf.union(index[&c.id], node(o));
                }
            }
        }
    }
    for o in &owners[l.layers.len()] {
        uf.union(index[&FRAME], node(o));
    }
    let mut groups: BTreeMap<usize, BTreeSet<u32>> = BTreeMap::new();
    for (i, &id) in ids.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().insert(id);
    }
    groups.into_values().collect()
}

// ----------------------------------------------------------------- faces

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Side {
    FrameLeft,
    FrameRight,
    /// The side of a wire, `false` for left.
    Wire(Owner, bool),
}

struct Faces {
    /// First node index of each cut.
    base: Vec<usize>,
    uf: UnionFind,
}

impl Faces {
    fn new(l: &Layout) -> Faces {
        let n = l.layers.len();
        let mut base = Vec::with_capacity(n + 2);
        let mut total = 0;
        for c in 0..=n {
            base.push(total);
            total += l.width_at(c) + 1;
        }
        base.push(total);
        let mut uf = UnionFind::new(total);
        for (k, layer) in l.layers.iter().enumerate() {
            let ip = inpos(layer);
            let op = outpos(layer);
            for t in 0..=layer.len() {
                uf.union(base[k] + ip[t], base[k + 1] + op[t]);
            }
        }
        Faces { base, uf }
    }

    fn face(&mut self, cut: usize, gap: usize) -> usize {
        let n = self.base[cut] + gap;
        self.uf.find(n)
    }
}

fn gap_sides(owners: &[Vec<Owner>], cut: usize, gap: usize) -> [Side; 2] {
    let w = &owners[cut];
    let left = if gap == 0 {
        Side::FrameLeft
    } else {
        Side::Wire(w[gap - 1], true)
    };
    let right = if gap == w.len() {
        Side::FrameRight
    } else {
        Side::Wire(w[gap], false)
    };
    [left, right]
}

/// The face on each side of every wire.
struct FaceMap(BTreeMap<Side, usize>);

impl FaceMap {
    fn of(l: &Layout) -> FaceMap {
        let mut faces = Faces::new(l);
        let owners = l.wire_owners();
        let mut map = BTreeMap::new();
        for c in 0..=l.layers.len() {
            for g in 0..=owners[c].len() {
                let f = faces.face(c, g);
                for s in gap_sides(&owners, c, g) {
                    map.insert(s, f);
                }
            }
        }
        FaceMap(map)
    }

    fn get(&self, s: Side) -> usize {
        self.0[&s]
    }
}

/// All sides bounding the face that contains gap `(cut, gap)`.
fn face_sides(l: &Layout, cut: usize, gap: usize) -> BTreeSet<Side> {
    let mut faces = Faces::new(l);
    let owners = l.wire_owners();
    let target = faces.face(cut, gap);
    let mut out = BTreeSet::new();
    for (c, cut) in owners.iter().enumerate().take(l.layers.len() + 1) {
        for g in 0..=cut.len() {
            if faces.face(c, g) == target {
                out.extend(gap_sides(&owners, c, g));
            }
        }
    }
    out
}

/// Lowest, leftmost gap of the face bounded by `side`.
fn face_floor(l: &Layout, side: Side) -> (usize, usize) {
    let mut faces = Faces::new(l);
    let owners = l.wire_owners();
    let mut target = None;
    'outer: for (c, cut) in owners.iter().enumerate().take(l.layers.len() + 1) {
        for g in 0..=cut.len() {
            if gap_sides(&owners, c, g).contains(&side) {
                target = Some(faces.face(c, g));
                break 'outer;
            }
        }
    }
    let target = target.expect("side belongs to the layout");
    for (c, cut) in owners.iter().enumerate().take(l.layers.len() + 1) {
        for g in 0..=cut.len() {
            if faces.face(c, g) == target {
                return (c, g);
            }
        }
    }
    unreachable!("face has a gap")
}

/// The gap of `l` where box `id` sits once every box outside `keep` is
/// removed, as `(cut, gap)` in `l.restrict(keep)`.
fn position_in(l: &Layout, keep: &BTreeSet<u32>, id: u32) -> (usize, usize) {
    let owners = l.wire_owners();
    for (k, layer) in l.layers.iter().enumerate() {
        if let Some(i) = layer.iter().position(|c| c.is_box() && c.id == id) {
            let ip = inpos(layer);
            let mut gap = 0;
            for (j, c) in layer[..i].iter().enumerate() {
                let kept = match c.cell {
                    Cell::Wire => match owners[k][ip[j]] {
                        Owner::Dom(_) => keep.contains(&FRAME),
                        Owner::Out(o, _) => keep.contains(&o),
                    },
                    Cell::Box(_) => keep.contains(&c.id),
                };
                if kept {
                    gap += c.ins();
                }
            }
            return (k, gap);
        }
    }
    unreachable!("box {id} is in the layout")
}

// -------------------------------------------------------------- assembly

/// Some box of `comp`, lowest row first.
fn first_box(l: &Layout, comp: &BTreeSet<u32>) -> u32 {
    *l.layers
        .iter()
        .flatten()
        .find(|c| c.is_box() && comp.contains(&c.id))
        .map(|c| &c.id)
        .expect("component has a box")
}

/// Reads `base` back as slices with each closed block spliced in at its
/// `(cut, gap)`. Blocks must be sorted.
fn splice(base: &Layout, blocks: &[((usize, usize), Vec<Tagged>)]) -> Vec<Tagged> {
    let mut out = Vec::new();
    let mut next = 0;
    for k in 0..=base.layers.len() {
        while next < blocks.len() && blocks[next].0 .0 == k {
            let ((_, gap), seq) = &blocks[next];
            out.extend(
                seq.iter()
                    .map(|&(s, id)| (Slice::new(s.offset + gap, s.gen), id)),
            );
            next += 1;
        }
        if let Some(layer) = base.layers.get(k) {
            let mut done = 0;
            for c in layer {
                if let Cell::Box(g) = c.cell {
                    out.push((Slice::new(done, g), c.id));
                }
                done += c.outs();
            }
        }
    }
    out
}

/// Canonical layout of `l`.
pub(crate) fn canonical(l: &Layout) -> Layout {
    build(l.dom, &canonical_seq(l))
}

fn canonical_seq(l: &Layout) -> Vec<Tagged> {
    let comps = components(l);
    let frame = comps
        .iter()
        .find(|c| c.contains(&FRAME))
        .cloned()
        .expect("frame component");
    let floating: Vec<BTreeSet<u32>> = comps.into_iter().filter(|c| !c.contains(&FRAME)).collect();

    // nesting: inside[i] holds j when component i lies in a bounded face of j
    let mut inside: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); floating.len()];
    for (j, fj) in floating.iter().enumerate() {
        let only = l.restrict(fj);
        let mut faces = Faces::new(&only);
        let outer = faces.face(0, 0);
        for (i, fi) in floating.iter().enumerate() {
            if i == j {
                continue;
            }
            let (c, g) = position_in(l, fj, first_box(l, fi));
            if faces.face(c, g) != outer {
                inside[i].insert(j);
            }
        }
    }

    // the core is the frame component, or the single outermost floating
    // component when the boundary is empty
    let top: Vec<usize> = (0..floating.len())
        .filter(|&i| inside[i].is_empty())
        .collect();
    let bare = frame.len() == 1 && l.dom == 0 && l.cod() == 0;
    let (core, children, closed): (BTreeSet<u32>, Vec<usize>, bool) = if bare && top.len() == 1 {
        let root = top[0];
        let mut core = floating[root].clone();
        core.insert(FRAME);
        let kids = (0..floating.len())
            .filter(|&i| inside[i].len() == 1 && inside[i].contains(&root))
            .collect();
        (core, kids, true)
    } else {
        (frame, top, false)
    };

    let original_core = l.restrict(&core);
    let graph = Graph::of(&original_core);
    let face_map = FaceMap::of(&original_core);

    let mut kids = Vec::with_capacity(children.len());
    for &i in &children {
        let mut group = floating[i].clone();
        for (j, set) in inside.iter().enumerate() {
            if set.contains(&i) {
                group.extend(floating[j].iter().copied());
            }
        }
        let seq = canonical_seq(&l.restrict(&group));
        let code = build(0, &seq).cells();
        let (c, g) = position_in(l, &core, first_box(l, &floating[i]));
        let sides = face_sides(&original_core, c, g);
        let side = *sides.iter().next().expect("a face has sides");
        kids.push((side, code, seq));
    }

    let starts: Vec<Option<u32>> = if closed {
        graph
            .nodes
            .iter()
            .filter(|(&id, n)| {
                n.ins.is_empty()
                    && face_map.get(Side::Wire(Owner::Out(id, 0), false))
                        == face_map.get(Side::FrameLeft)
            })
            .map(|(&id, _)| Some(id))
            .collect()
    } else {
        vec![None]
    };
    let mut best: Option<(Vec<Vec<Cell>>, Vec<Tagged>)> = None;
    for start in starts {
        let Some(core_seq) = Sweep::run(&graph, original_core.dom, start) else {
            assert!(closed, "wiring has no planar sweep");
            continue;
        };
        let seq = if kids.is_empty() {
            core_seq
        } else {
            let base = build(original_core.dom, &core_seq);
            let mut blocks: Vec<_> = kids
                .iter()
                .map(|(side, code, seq): &(_, Vec<Vec<Cell>>, Vec<Tagged>)| {
                    (face_floor(&base, *side), code, seq)
                })
                .collect();
            blocks.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
            let blocks: Vec<_> = blocks
                .into_iter()
                .map(|(at, _, s)| (at, s.clone()))
                .collect();
            splice(&base, &blocks)
        };
        if !closed {
            return seq;
        }
        let code = build(l.dom, &seq).cells();
        if best.as_ref().is_none_or(|(c, _)| code < *c) {
            best = Some((code, seq));
        }
    }
    match best {
        Some((_, seq)) => seq,
        None => Vec::new(),
    }
}
