//! Matching up to interchange, rule application, proof scripts and
//! bounded equality search.
//!
//! A match is a set of host boxes that can be brought together into one
//! contiguous run of slices acting on adjacent wires, such that the run
//! draws the rule side. Positions name the match by its first box in the
//! canonical host as `LAYER:CELL`. A side with no boxes matches at every
//! cut instead, and its position is `LAYER:WIRE`, the cut below layer
//! `LAYER` and the leftmost wire it covers.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::diagram::{Diagram, Slice};
use crate::gen::{Gen, TheoryName};
use crate::model::{HopfModel, RuleCheck};
use crate::parse::{parse, print, ParseError};
use crate::term::{typecheck, Term};
use crate::theory::{build_alpha, Dir, Evidence, Rule, Status, Theory, TheoryError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub layer: usize,
    pub offset: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.layer, self.offset)
    }
}

impl Position {
    pub fn parse(s: &str) -> Option<Position> {
        let (l, o) = s.split_once(':')?;
        Some(Position {
            layer: l.parse().ok()?,
            offset: o.parse().ok()?,
        })
    }
}

/// An occurrence of a rule side, with the host rearranged around it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Match {
    pub pos: Position,
    prefix: Vec<Slice>,
    wire: usize,
    suffix: Vec<Slice>,
}

impl Match {
    /// Host with the matched run replaced by `by`, which must have the
    /// arity of the matched side.
    pub fn replace(&self, dom: usize, by: &Diagram) -> Diagram {
        let mut s = self.prefix.clone();
        s.extend(
            by.slices()
                .into_iter()
                .map(|x| Slice::new(x.offset + self.wire, x.gen)),
        );
        s.extend(self.suffix.iter().copied());
        Diagram::from_slices(dom, &s).expect("replacement keeps the boundary")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Src {
    Dom(usize),
    Out(usize, usize),
}

/// Box-level wiring of a slice sequence.
struct Wiring {
    gens: Vec<Gen>,
    ins: Vec<Vec<Src>>,
    /// Consumer of each output port; `None` when it reaches the codomain.
    outs: Vec<Vec<Option<(usize, usize)>>>,
}

impl Wiring {
    fn of(dom: usize, slices: &[Slice]) -> Wiring {
        let mut boundary: Vec<Src> = (0..dom).map(Src::Dom).collect();
        let mut w = Wiring {
            gens: Vec::new(),
            ins: Vec::new(),
            outs: Vec::new(),
        };
        for (i, s) in slices.iter().enumerate() {
            let (k, q) = s.gen.arity();
            let taken: Vec<Src> = boundary
                .splice(s.offset..s.offset + k, (0..q).map(|p| Src::Out(i, p)))
                .collect();
            for (port, src) in taken.iter().enumerate() {
                if let Src::Out(n, p) = *src {
                    w.outs[n][p] = Some((i, port));
                }
            }
            w.gens.push(s.gen);
            w.ins.push(taken);
            w.outs.push(alloc::vec![None; q]);
        }
        w
    }

    fn len(&self) -> usize {
        self.gens.len()
    }

    /// Connected pieces touching neither boundary.
    fn closed_pieces(&self) -> Vec<BTreeSet<usize>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen.contains(&start) {
                continue;
            }
            let mut piece = BTreeSet::new();
            let mut stack = alloc::vec![start];
            let mut closed = true;
            while let Some(n) = stack.pop() {
                if !piece.insert(n) {
                    continue;
                }
                for src in &self.ins[n] {
                    match src {
                        Src::Out(m, _) => stack.push(*m),
                        Src::Dom(_) => closed = false,
                    }
                }
                for dst in &self.outs[n] {
                    match dst {
                        Some((m, _)) => stack.push(*m),
                        None => closed = false,
                    }
                }
            }
            seen.extend(piece.iter().copied());
            if closed {
                out.push(piece);
            }
        }
        out
    }

    /// Strict ancestors (`up = false`) or descendants (`up = true`) of a set.
    fn closure(&self, from: &BTreeSet<usize>, up: bool) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<usize> = from.iter().copied().collect();
        while let Some(n) = stack.pop() {
            let next: Vec<usize> = if up {
                self.outs[n].iter().flatten().map(|(m, _)| *m).collect()
            } else {
                self.ins[n]
                    .iter()
                    .filter_map(|s| match s {
                        Src::Out(m, _) => Some(*m),
                        Src::Dom(_) => None,
                    })
                    .collect()
            };
            for m in next {
                if seen.insert(m) {
                    stack.push(m);
                }
            }
        }
        seen
    }
}

/// Connected pieces of the pattern, each listed from its first box.
fn pattern_components(p: &Wiring) -> Vec<Vec<usize>> {
    let mut comp: Vec<Option<usize>> = alloc::vec![None; p.len()];
    let mut out = Vec::new();
    for start in 0..p.len() {
        if comp[start].is_some() {
            continue;
        }
        let id = out.len();
        let mut members = alloc::vec![start];
        comp[start] = Some(id);
        let mut i = 0;
        while i < members.len() {
            let n = members[i];
            i += 1;
            let mut nbrs: Vec<usize> = p.outs[n].iter().flatten().map(|(m, _)| *m).collect();
            nbrs.extend(p.ins[n].iter().filter_map(|s| match s {
                Src::Out(m, _) => Some(*m),
                Src::Dom(_) => None,
            }));
            for m in nbrs {
                if comp[m].is_none() {
                    comp[m] = Some(id);
                    members.push(m);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

/// Every way to place one pattern component with its first box on a host
/// box, following internal wires.
fn embed(p: &Wiring, h: &Wiring, members: &[usize]) -> Vec<BTreeMap<usize, usize>> {
    let mut found = Vec::new();
    let first = members[0];
    for anchor in 0..h.len() {
        if h.gens[anchor] != p.gens[first] {
            continue;
        }
        let mut map = BTreeMap::new();
        let mut used = BTreeSet::new();
        map.insert(first, anchor);
        used.insert(anchor);
        let mut queue = alloc::vec![first];
        let mut ok = true;
        'grow: while let Some(a) = queue.pop() {
            let ha = map[&a];
            let mut pairs: Vec<(usize, usize)> = Vec::new();
            for (q, src) in p.ins[a].iter().enumerate() {
                if let Src::Out(b, port) = *src {
                    match h.ins[ha][q] {
                        Src::Out(hb, hport) if hport == port => pairs.push((b, hb)),
                        _ => {
                            ok = false;
                            break 'grow;
                        }
                    }
                }
            }
            for (port, dst) in p.outs[a].iter().enumerate() {
                if let Some((b, q)) = *dst {
                    match h.outs[ha][port] {
                        Some((hb, hq)) if hq == q => pairs.push((b, hb)),
                        _ => {
                            ok = false;
                            break 'grow;
                        }
                    }
                }
            }
            for (b, hb) in pairs {
                if h.gens[hb] != p.gens[b] {
                    ok = false;
                    break 'grow;
                }
                match map.get(&b) {
                    Some(&x) if x == hb => {}
                    Some(_) => {
                        ok = false;
                        break 'grow;
                    }
                    None => {
                        if !used.insert(hb) {
                            ok = false;
                            break 'grow;
                        }
                        map.insert(b, hb);
                        queue.push(b);
                    }
                }
            }
        }
        if ok {
            found.push(map);
        }
    }
    found
}

/// `a` then `b` become `b` then `a`, if they touch disjoint wires.
fn swap(a: Slice, b: Slice) -> Option<(Slice, Slice)> {
    let (ad, ac) = a.gen.arity();
    let bd = b.gen.dom();
    let bc = b.gen.cod();
    if b.offset + bd <= a.offset {
        Some((b, Slice::new(a.offset + bc - bd, a.gen)))
    } else if b.offset >= a.offset + ac {
        Some((Slice::new(b.offset + ad - ac, b.gen), a))
    } else {
        None
    }
}

/// Reorders the host so that `inside` forms one run. Returns the run's
/// start and the reordered sequence.
fn gather(
    h: &Wiring,
    slices: &[Slice],
    inside: &BTreeSet<usize>,
) -> Option<(usize, Vec<(usize, Slice)>)> {
    let below: BTreeSet<usize> = h
        .closure(inside, false)
        .difference(inside)
        .copied()
        .collect();
    let above: BTreeSet<usize> = h
        .closure(inside, true)
        .difference(inside)
        .copied()
        .collect();
    if below.iter().any(|n| above.contains(n)) {
        return None;
    }
    let mut before = below;
    'retry: loop {
        let group = |n: usize| -> usize {
            if before.contains(&n) {
                0
            } else if inside.contains(&n) {
                1
            } else {
                2
            }
        };
        let mut cur: Vec<(usize, Slice)> = slices.iter().copied().enumerate().collect();
        // insertion sort by (group, original index) using only legal swaps
        for i in 1..cur.len() {
            let mut j = i;
            while j > 0 && (group(cur[j - 1].0), cur[j - 1].0) > (group(cur[j].0), cur[j].0) {
                let (x, y) = (cur[j - 1], cur[j]);
                match swap(x.1, y.1) {
                    Some((ny, nx)) => {
                        cur[j - 1] = (y.0, ny);
                        cur[j] = (x.0, nx);
                        j -= 1;
                    }
                    None => {
                        // a box stuck below the run has to come first
                        if group(x.0) == 2 && !above.contains(&x.0) {
                            let mut add = BTreeSet::new();
                            add.insert(x.0);
                            let extra = h.closure(&add, false);
                            if extra.iter().any(|n| inside.contains(n)) {
                                return None;
                            }
                            before.insert(x.0);
                            before.extend(extra);
                            continue 'retry;
                        }
                        return None;
                    }
                }
            }
        }
        let start = cur.iter().position(|(n, _)| inside.contains(n))?;
        return Some((start, cur));
    }
}

fn width_after(dom: usize, slices: &[Slice]) -> usize {
    slices
        .iter()
        .fold(dom, |w, s| w - s.gen.dom() + s.gen.cod())
}

/// All occurrences of `pattern` in `host`, one per position, in position
/// order.
pub fn find_matches(host: &Diagram, pattern: &Diagram) -> Vec<Match> {
    let slices = host.slices();
    if pattern.size() == 0 {
        return cut_matches(host, &slices, pattern.dom());
    }
    let h = Wiring::of(host.dom(), &slices);
    let pslices = pattern.slices();
    let p = Wiring::of(pattern.dom(), &pslices);
    let coords = host.box_coords();
    let comps = pattern_components(&p);
    let options: Vec<Vec<BTreeMap<usize, usize>>> =
        comps.iter().map(|c| embed(&p, &h, c)).collect();
    if options.iter().any(|o| o.is_empty()) {
        return Vec::new();
    }
    let mut by_pos: BTreeMap<Position, Match> = BTreeMap::new();
    let mut choice = alloc::vec![0usize; options.len()];
    loop {
        let mut inside = BTreeSet::new();
        let mut disjoint = true;
        for (k, &c) in choice.iter().enumerate() {
            for &hn in options[k][c].values() {
                disjoint &= inside.insert(hn);
            }
        }
        if disjoint {
            let first = *inside.iter().next().expect("nonempty pattern");
            let (l, c) = coords[first];
            let pos = Position {
                layer: l,
                offset: c,
            };
            if let alloc::collections::btree_map::Entry::Vacant(e) = by_pos.entry(pos) {
                if let Some(m) = verify(host, &h, &slices, &inside, pattern, pos) {
                    e.insert(m);
                }
            }
        }
        // next combination
        let mut k = 0;
        loop {
            if k == choice.len() {
                return by_pos.into_values().collect();
            }
            choice[k] += 1;
            if choice[k] < options[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn verify(
    host: &Diagram,
    h: &Wiring,
    slices: &[Slice],
    inside: &BTreeSet<usize>,
    pattern: &Diagram,
    pos: Position,
) -> Option<Match> {
    if let Some(m) = verify_in(host, h, slices, inside, pattern, pos) {
        return Some(m);
    }
    // closed pieces the canonical form floats may have to move first
    for piece in h.closed_pieces() {
        if piece.is_subset(inside) || piece.is_disjoint(inside) {
            continue;
        }
        for (moved, index) in relocations(host, h, slices, &piece) {
            let hw = Wiring::of(host.dom(), &moved);
            let mapped: BTreeSet<usize> = inside.iter().map(|n| index[*n]).collect();
            if let Some(m) = verify_in(host, &hw, &moved, &mapped, pattern, pos) {
                return Some(m);
            }
        }
    }
    None
}

/// Copies of `slices` with the closed `piece` re-inserted as one block at
/// every place that leaves the canonical form unchanged, each with the new
/// index of every old slice.
fn relocations(
    host: &Diagram,
    h: &Wiring,
    slices: &[Slice],
    piece: &BTreeSet<usize>,
) -> Vec<(Vec<Slice>, Vec<usize>)> {
    // the piece on its own wires
    let mut owned: Vec<bool> = alloc::vec![false; host.dom()];
    let mut block = Vec::new();
    for (i, s) in slices.iter().enumerate() {
        let (k, q) = s.gen.arity();
        let mine = piece.contains(&i);
        if mine {
            let local = owned[..s.offset].iter().filter(|o| **o).count();
            block.push(Slice::new(local, s.gen));
        }
        owned.splice(s.offset..s.offset + k, core::iter::repeat_n(mine, q));
    }
    let rest: Vec<usize> = (0..slices.len()).filter(|n| !piece.contains(n)).collect();
    let mut out = Vec::new();
    let mut width = host.dom();
    for t in 0..=rest.len() {
        for w in 0..=width {
            let mut moved = Vec::with_capacity(slices.len());
            let mut index = alloc::vec![0; slices.len()];
            for (j, &n) in rest[..t].iter().enumerate() {
                index[n] = j;
                moved.push(slices[n]);
            }
            for (j, &n) in piece.iter().enumerate() {
                index[n] = t + j;
                moved.push(Slice::new(block[j].offset + w, block[j].gen));
            }
            for &n in &rest[t..] {
                index[n] = moved.len();
                moved.push(slices[n]);
            }
            if moved != slices && Diagram::from_slices(host.dom(), &moved).as_ref() == Ok(host) {
                out.push((moved, index));
            }
        }
        if let Some(&n) = rest.get(t) {
            width = width - h.gens[n].dom() + h.gens[n].cod();
        }
    }
    out
}

fn verify_in(
    host: &Diagram,
    h: &Wiring,
    slices: &[Slice],
    inside: &BTreeSet<usize>,
    pattern: &Diagram,
    pos: Position,
) -> Option<Match> {
    let (start, order) = gather(h, slices, inside)?;
    let run: Vec<Slice> = order[start..start + inside.len()]
        .iter()
        .map(|x| x.1)
        .collect();
    let prefix: Vec<Slice> = order[..start].iter().map(|x| x.1).collect();
    let suffix: Vec<Slice> = order[start + inside.len()..].iter().map(|x| x.1).collect();
    let width = width_after(host.dom(), &prefix);
    let k = pattern.dom();
    let lowest = run.iter().map(|s| s.offset).min().unwrap_or(0);
    for wire in 0..=lowest.min(width.saturating_sub(k)) {
        if wire + k > width {
            break;
        }
        let shifted: Vec<Slice> = run
            .iter()
            .map(|s| Slice::new(s.offset - wire, s.gen))
            .collect();
        if let Ok(d) = Diagram::from_slices(k, &shifted) {
            if d == *pattern {
                return Some(Match {
                    pos,
                    prefix,
                    wire,
                    suffix,
                });
            }
        }
    }
    None
}

fn cut_matches(host: &Diagram, slices: &[Slice], k: usize) -> Vec<Match> {
    let mut out = Vec::new();
    let mut done = 0;
    let mut width = host.dom();
    for layer in 0..=host.layers().len() {
        for wire in 0..=width.saturating_sub(k) {
            if wire + k > width {
                break;
            }
            out.push(Match {
                pos: Position {
                    layer,
                    offset: wire,
                },
                prefix: slices[..done].to_vec(),
                wire,
                suffix: slices[done..].to_vec(),
            });
        }
        if let Some(cells) = host.layers().get(layer) {
            done += cells
                .iter()
                .filter(|c| matches!(c, crate::Cell::Box(_)))
                .count();
            width = cells.iter().map(|c| c.outs()).sum();
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("no match of {rule} ({dir}) at {pos}")]
    StalePosition {
        rule: String,
        dir: Dir,
        pos: Position,
    },
}

/// Rewrites the occurrence at `pos` of the side `dir` reads from.
pub fn apply_rule(
    host: &Diagram,
    rule: &Rule,
    dir: Dir,
    pos: Position,
) -> Result<Diagram, RewriteError> {
    let (from, to) = rule.sides(dir);
    find_matches(host, from)
        .into_iter()
        .find(|m| m.pos == pos)
        .map(|m| m.replace(host.dom(), to))
        .ok_or_else(|| RewriteError::StalePosition {
            rule: rule.name.clone(),
            dir,
            pos,
        })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: String,
    pub dir: Dir,
    pub pos: Position,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.rule, self.dir, self.pos)
    }
}

/// A replayable sequence of rule applications from `start` to `goal`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofScript {
    pub theory: TheoryName,
    pub start: Term,
    pub goal: Term,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Term { line: usize, source: ParseError },
}

impl ProofScript {
    /// Reads the `theory:`, `start:`, `goal:` headers and one
    /// `RULE DIR LAYER:OFFSET` step per line.
    pub fn parse(text: &str) -> Result<ProofScript, ScriptError> {
        let mut theory = None;
        let mut start = None;
        let mut goal = None;
        let mut steps = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let syntax = |message: String| ScriptError::Syntax { line, message };
            if let Some((key, value)) = content.split_once(':') {
                let key = key.trim();
                if matches!(key, "theory" | "start" | "goal") {
                    let value = value.trim();
                    let term = || parse(value).map_err(|source| ScriptError::Term { line, source });
                    match key {
                        "theory" => {
                            theory = Some(TheoryName::parse(value).ok_or_else(|| {
                                syntax(alloc::format!("unknown theory `{value}`"))
                            })?)
                        }
                        "start" => start = Some(term()?),
                        _ => goal = Some(term()?),
                    }
                    continue;
                }
            }
            let words: Vec<&str> = content.split_whitespace().collect();
            let [rule, dir, pos] = words[..] else {
                return Err(syntax("expected `RULE DIR LAYER:OFFSET`".into()));
            };
            let dir = Dir::parse(dir).ok_or_else(|| {
                syntax(alloc::format!(
                    "direction must be fwd or bwd, found `{dir}`"
                ))
            })?;
            let pos = Position::parse(pos).ok_or_else(|| {
                syntax(alloc::format!(
                    "position must be LAYER:OFFSET, found `{pos}`"
                ))
            })?;
            steps.push(Step {
                rule: rule.into(),
                dir,
                pos,
            });
        }
        let missing = |what: &str| ScriptError::Syntax {
            line: 0,
            message: alloc::format!("missing `{what}:` header"),
        };
        Ok(ProofScript {
            theory: theory.ok_or_else(|| missing("theory"))?,
            start: start.ok_or_else(|| missing("start"))?,
            goal: goal.ok_or_else(|| missing("goal"))?,
            steps,
        })
    }
}

impl fmt::Display for ProofScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theory: {}", self.theory)?;
        writeln!(f, "start: {}", print(&self.start))?;
        writeln!(f, "goal: {}", print(&self.goal))?;
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    /// `step` is 1-based; `None` means every step applied but the result
    /// is not the goal.
    Rejected {
        step: Option<usize>,
        reason: String,
        state: Diagram,
    },
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

/// Replays a script. Errors are reserved for ill-formed endpoints.
pub fn check_proof(p: &ProofScript, th: &Theory) -> Result<Verdict, TheoryError> {
    let start = th.diagram(&p.start)?;
    let goal = th.diagram(&p.goal)?;
    let mut state = start;
    for (i, step) in p.steps.iter().enumerate() {
        let reject = |reason: String, state: Diagram| {
            Ok(Verdict::Rejected {
                step: Some(i + 1),
                reason,
                state,
            })
        };
        let Some(rule) = th.rule(&step.rule) else {
            return reject(alloc::format!("unknown rule {}", step.rule), state);
        };
        if !rule.usable() {
            return reject(
                alloc::format!("rule {} has no supporting evidence", rule.name),
                state,
            );
        }
        match apply_rule(&state, rule, step.dir, step.pos) {
            Ok(next) => state = next,
            Err(e) => return reject(e.to_string(), state),
        }
    }
    if state == goal {
        Ok(Verdict::Accepted)
    } else {
        Ok(Verdict::Rejected {
            step: None,
            reason: alloc::format!("final diagram {state} is not the goal {goal}"),
            state,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_steps: usize,
    pub max_frontier: usize,
    pub max_size: usize,
}

impl SearchBudget {
    pub fn steps(max_steps: usize) -> SearchBudget {
        SearchBudget {
            max_steps,
            ..SearchBudget::default()
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_steps: 6,
            max_frontier: 400,
            max_size: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(ProofScript),
    NotFoundWithinBudget { explored: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("arity mismatch: {a:?} vs {b:?}")]
    ArityMismatch {
        a: (usize, usize),
        b: (usize, usize),
    },
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

type Parents = BTreeMap<Diagram, Option<(Diagram, Step)>>;

struct Side {
    parents: Parents,
    frontier: Vec<Diagram>,
}

impl Side {
    fn new(d: Diagram) -> Side {
        let mut parents = BTreeMap::new();
        parents.insert(d.clone(), None);
        Side {
            parents,
            frontier: alloc::vec![d],
        }
    }

    fn path(&self, to: &Diagram) -> Vec<(Diagram, Step, Diagram)> {
        let mut out = Vec::new();
        let mut cur = to.clone();
        while let Some(Some((prev, step))) = self.parents.get(&cur) {
            out.push((prev.clone(), step.clone(), cur.clone()));
            cur = prev.clone();
        }
        out.reverse();
        out
    }
}

/// One rewrite of `d`, in rule, direction and position order.
fn successors<'a>(
    d: &'a Diagram,
    rules: &'a [&'a Rule],
    max_size: usize,
) -> impl Iterator<Item = (Step, Diagram)> + 'a {
    rules.iter().flat_map(move |rule| {
        [Dir::Fwd, Dir::Bwd].into_iter().flat_map(move |dir| {
            let (from, to) = rule.sides(dir);
            let grow = to.size() as isize - from.size() as isize;
            let fits = d.size() as isize + grow <= max_size as isize;
            let found = if fits {
                find_matches(d, from)
            } else {
                Vec::new()
            };
            found.into_iter().map(move |m| {
                (
                    Step {
                        rule: rule.name.clone(),
                        dir,
                        pos: m.pos,
                    },
                    m.replace(d.dom(), to),
                )
            })
        })
    })
}

/// Bidirectional beam search for a chain of at most `max_steps` rewrites
/// joining `a` and `b`. Each level keeps the `max_frontier` states whose
/// generator counts are closest to the opposite endpoint.
pub fn search_equal(
    a: &Term,
    b: &Term,
    th: &Theory,
    budget: SearchBudget,
) -> Result<SearchOutcome, SearchError> {
    let (ad, ac) = typecheck(a, th).map_err(|source| TheoryError::Type {
        rule: print(a),
        source,
    })?;
    let (bd, bc) = typecheck(b, th).map_err(|source| TheoryError::Type {
        rule: print(b),
        source,
    })?;
    if (ad, ac) != (bd, bc) {
        return Err(SearchError::ArityMismatch {
            a: (ad.0, ac.0),
            b: (bd.0, bc.0),
        });
    }
    let da = th.diagram(a)?;
    let db = th.diagram(b)?;
    let script = |steps| ProofScript {
        theory: th.name,
        start: a.clone(),
        goal: b.clone(),
        steps,
    };
    if da == db {
        return Ok(SearchOutcome::Found(script(Vec::new())));
    }
    let rules: Vec<&Rule> = th.rules().iter().filter(|r| r.usable()).collect();
    let targets = [census(&db), census(&da)];
    let mut sides = [Side::new(da), Side::new(db)];
    let mut depth = [0usize; 2];
    while depth[0] + depth[1] < budget.max_steps {
        let which = match (sides[0].frontier.is_empty(), sides[1].frontier.is_empty()) {
            (true, true) => break,
            (true, false) => 1,
            (false, true) => 0,
            _ if depth[0] <= depth[1] => 0,
            _ => 1,
        };
        depth[which] += 1;
        let frontier = core::mem::take(&mut sides[which].frontier);
        let mut fresh: Vec<(usize, usize, String, Dir, Position, usize, Diagram)> = Vec::new();
        for (order, d) in frontier.iter().enumerate() {
            for (step, next) in successors(d, &rules, budget.max_size) {
                if sides[which].parents.contains_key(&next) {
                    continue;
                }
                let meet = sides[1 - which].parents.contains_key(&next);
                sides[which]
                    .parents
                    .insert(next.clone(), Some((d.clone(), step.clone())));
                if meet {
                    if let Some(steps) = join(&sides, &next, &rules) {
                        let p = script(steps);
                        if check_proof(&p, th).map(|v| v.accepted()).unwrap_or(false) {
                            return Ok(SearchOutcome::Found(p));
                        }
                    }
                }
                let gap = distance(&census(&next), &targets[which]);
                fresh.push((gap, next.size(), step.rule, step.dir, step.pos, order, next));
            }
        }
        fresh.sort_by(|x, y| (x.0, x.1, &x.2, x.3, x.4, x.5).cmp(&(y.0, y.1, &y.2, y.3, y.4, y.5)));
        fresh.truncate(budget.max_frontier);
        sides[which].frontier = fresh.into_iter().map(|f| f.6).collect();
    }
    let explored = sides[0].parents.len() + sides[1].parents.len();
    Ok(SearchOutcome::NotFoundWithinBudget { explored })
}

fn census(d: &Diagram) -> [usize; 16] {
    let mut c = [0; 16];
    for s in d.slices() {
        c[Gen::ALL.iter().position(|g| *g == s.gen).expect("listed")] += 1;
    }
    c
}

fn distance(a: &[usize; 16], b: &[usize; 16]) -> usize {
    a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).sum()
}

/// Steps from `a` through `meet` to `b`, reversing the steps found from
/// `b`'s side.
fn join(sides: &[Side; 2], meet: &Diagram, rules: &[&Rule]) -> Option<Vec<Step>> {
    let mut steps: Vec<Step> = sides[0].path(meet).into_iter().map(|(_, s, _)| s).collect();
    for (prev, step, cur) in sides[1].path(meet).into_iter().rev() {
        // `step` rewrote prev into cur; undo it as a step from cur
        let rule = rules.iter().find(|r| r.name == step.rule)?;
        let dir = step.dir.flip();
        let (from, to) = rule.sides(dir);
        let back = find_matches(&cur, from)
            .into_iter()
            .find(|m| m.replace(cur.dom(), to) == prev)?;
        steps.push(Step {
            rule: step.rule.clone(),
            dir,
            pos: back.pos,
        });
    }
    Some(steps)
}

/// The intertwining instance `F∘α_n = α_m∘(id◇F)` for `F : n → m`.
pub fn q14_tactic(f: &Term, th: &Theory) -> Result<Rule, TheoryError> {
    let (n, m) = typecheck(f, th).map_err(|source| TheoryError::Type {
        rule: "q14".into(),
        source,
    })?;
    let lhs = Term::comp(f.clone(), build_alpha(n.0));
    let rhs = Term::comp(build_alpha(m.0), Term::tensor_all([Term::id(1), f.clone()]));
    let mut rule = th.make_rule(
        &alloc::format!("q14[{}]", print(f)),
        alloc::vec!["derived".into()],
        lhs,
        rhs,
        "q14",
    )?;
    rule.evidence.push(Evidence::Theorem(
        "adjoint morphisms intertwine every morphism".into(),
    ));
    Ok(rule)
}

/// What backs a rule offered for registration.
pub enum Support<'a> {
    Script(&'a ProofScript),
    Oracle(&'a [HopfModel]),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RegisterError {
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error("script endpoints are not the rule sides")]
    WrongEndpoints,
    #[error("script rejected: {0}")]
    Rejected(String),
    #[error("model {model} does not satisfy theory {theory}")]
    Incompatible { model: String, theory: TheoryName },
    #[error("rule fails in model {0}")]
    Fails(String),
    #[error("no models given")]
    NoModels,
}

/// Adds a lemma to the theory once its evidence checks out. A script makes
/// it `Derived`; oracle agreement alone makes it `Reconstructed`.
pub fn register_derived(
    th: &Theory,
    name: &str,
    lhs: Term,
    rhs: Term,
    support: Support<'_>,
) -> Result<Theory, RegisterError> {
    let mut rule = th.make_rule(name, Vec::new(), lhs, rhs, "registered")?;
    let evidence = match support {
        Support::Script(p) => {
            if th.diagram(&p.start)? != rule.lhs || th.diagram(&p.goal)? != rule.rhs {
                return Err(RegisterError::WrongEndpoints);
            }
            match check_proof(p, th)? {
                Verdict::Accepted => {}
                Verdict::Rejected { step, reason, .. } => {
                    return Err(RegisterError::Rejected(match step {
                        Some(i) => alloc::format!("step {i}: {reason}"),
                        None => reason,
                    }))
                }
            }
            rule.status = Status::Derived;
            Evidence::Script(name.into())
        }
        Support::Oracle(models) => {
            let first = models.first().ok_or(RegisterError::NoModels)?;
            for m in models {
                if !m.models(th.name) {
                    return Err(RegisterError::Incompatible {
                        model: m.name().into(),
                        theory: th.name,
                    });
                }
                match m.check(&rule.lhs, &rule.rhs) {
                    Ok(RuleCheck::Holds) => {}
                    _ => return Err(RegisterError::Fails(m.name().into())),
                }
            }
            rule.status = Status::Reconstructed;
            Evidence::Oracle(first.name().into())
        }
    };
    Ok(th.with_rule(rule, evidence)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::canonicalize;
    use crate::theory::load_theory;

    fn d(s: &str) -> Diagram {
        canonicalize(&parse(s).unwrap()).unwrap()
    }

    fn hr() -> Theory {
        load_theory(TheoryName::Hr).unwrap()
    }

    #[test]
    fn counit_law_matches_once() {
        let th = hr();
        let ms = find_matches(&d("(cou * id[1]) . cop"), &th.rule("a2").unwrap().lhs);
        assert_eq!(ms.len(), 1);
        assert!(find_matches(&d("id[2]"), &d("cop")).is_empty());
    }

    #[test]
    fn unit_law_inside_a_larger_host() {
        let ms = find_matches(&d("cop . mul . (unit * unit)"), &d("mul . (unit * id[1])"));
        assert_eq!(ms.len(), 1);
    }

    #[test]
    fn applications() {
        let th = hr();
        let cases = [
            ("(cou * id[1]) . cop", "a2", "id[1]"),
            ("ant . ant_inv", "s2", "id[1]"),
            ("cointg . intg", "i3", "id[0]"),
        ];
        for (host, rule, want) in cases {
            let host = d(host);
            let rule = th.rule(rule).unwrap();
            let m = &find_matches(&host, &rule.lhs)[0];
            assert_eq!(apply_rule(&host, rule, Dir::Fwd, m.pos).unwrap(), d(want));
        }
    }

    #[test]
    fn stale_position_is_reported() {
        let th = hr();
        let rule = th.rule("a2").unwrap();
        let err = apply_rule(
            &d("ant"),
            rule,
            Dir::Fwd,
            Position {
                layer: 0,
                offset: 0,
            },
        )
        .unwrap_err();
        assert!(matches!(err, RewriteError::StalePosition { .. }));
    }

    #[test]
    fn match_across_interchange() {
        // the multiplication sits in a later layer than the antipode it
        // shares no wire with
        let host = d("(mul * id[1]) . (id[2] * ant) . (cop * id[1])");
        let ms = find_matches(&host, &d("mul . cop"));
        assert_eq!(ms.len(), 1);
        let out = ms[0].replace(host.dom(), &d("id[1]"));
        assert_eq!(out, d("id[1] * ant"));
    }

    #[test]
    fn non_convex_region_is_refused() {
        // cop feeds mul both directly and through the antipode
        let host = d("mul . (id[1] * ant) . cop");
        assert!(find_matches(&host, &d("mul . cop")).is_empty());
    }

    #[test]
    fn identity_side_matches_at_every_cut() {
        let host = d("ant");
        // cuts below and above the antipode, one wire each
        assert_eq!(find_matches(&host, &d("id[1]")).len(), 2);
        assert_eq!(find_matches(&host, &d("id[0]")).len(), 4);
    }

    #[test]
    fn script_round_trip_and_check() {
        let th = hr();
        let text = "theory: hr\nstart: cou . rib . unit\ngoal: id[0]\nr4 fwd 1:0\na8 fwd 0:0\n";
        let p = ProofScript::parse(text).unwrap();
        assert_eq!(ProofScript::parse(&p.to_string()).unwrap(), p);
        assert_eq!(check_proof(&p, &th).unwrap(), Verdict::Accepted);
        let mut swapped = p.clone();
        swapped.steps.swap(0, 1);
        assert!(matches!(
            check_proof(&swapped, &th).unwrap(),
            Verdict::Rejected { step: Some(1), .. }
        ));
        let empty = ProofScript::parse("theory: hr\nstart: id[1]\ngoal: id[1]\n").unwrap();
        assert!(check_proof(&empty, &th).unwrap().accepted());
    }

    #[test]
    fn malformed_scripts() {
        assert!(ProofScript::parse("theory: hr\nstart: cop\n").is_err());
        assert!(
            ProofScript::parse("theory: hr\nstart: cop\ngoal: cop\na1 sideways 0:0\n").is_err()
        );
        assert!(ProofScript::parse("theory: nope\nstart: cop\ngoal: cop\n").is_err());
    }

    #[test]
    fn q14_instances_type() {
        let th = hr();
        let r = q14_tactic(&parse("mul").unwrap(), &th).unwrap();
        assert_eq!(r.arity(), (3, 1));
        let r = q14_tactic(&parse("id[1]").unwrap(), &th).unwrap();
        assert_eq!(r.lhs, r.rhs);
        let r = q14_tactic(&parse("cpr").unwrap(), &th).unwrap();
        assert_eq!(
            (r.lhs.clone(), r.rhs.clone()),
            (
                th.rule("q").unwrap().rhs.clone(),
                th.rule("q").unwrap().lhs.clone()
            )
        );
    }
}
