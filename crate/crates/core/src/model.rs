//! Exact finite-dimensional models and the evaluation oracle.
//!
//! A model fixes a basis of `H` and gives every generator as a rational
//! matrix. Wire `i` of `H^n` is tensor factor `i`, most significant first,
//! so basis vector `(b_0, …, b_{n-1})` has index `b_0·d^{n-1} + … + b_{n-1}`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::diagram::{canonicalize, Cell, Diagram};
use crate::gen::{Gen, TheoryName};
use crate::term::{Term, TypeError};

pub type Q = Ratio<i64>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} {:?}", self.rows, self.cols, self.data)
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Q::one());
        }
        m
    }

    /// Row-major entries.
    pub fn from_rows(rows: usize, cols: usize, data: Vec<Q>) -> Matrix {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] += v;
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, a * b);
                    }
                }
            }
        }
        out
    }

    /// Kronecker product, `self` on the left tensor factor.
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        out.set(i * rhs.rows + k, j * rhs.cols + l, a * rhs.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Nonzero entries of column `c` as `(row, value)`.
    fn column(&self, c: usize) -> Vec<(usize, Q)> {
        (0..self.rows)
            .filter_map(|r| {
                let v = self.get(r, c);
                (!v.is_zero()).then_some((r, v))
            })
            .collect()
    }

    /// The entry where `self` and `other` differ the most, first in
    /// row-major order among equals.
    pub fn largest_difference(&self, other: &Matrix) -> Option<Witness> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut best: Option<Witness> = None;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let (a, b) = (self.get(r, c), other.get(r, c));
                let diff = (a - b).abs();
                if diff.is_zero() {
                    continue;
                }
                if best.as_ref().is_none_or(|w| diff > (w.lhs - w.rhs).abs()) {
                    best = Some(Witness {
                        row: r,
                        col: c,
                        lhs: a,
                        rhs: b,
                    });
                }
            }
        }
        best
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            f.write_str("[")?;
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}

/// An entry where two evaluated sides disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub row: usize,
    pub col: usize,
    pub lhs: Q,
    pub rhs: Q,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "entry ({}, {}): {} vs {}",
            self.row, self.col, self.lhs, self.rhs
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group file: {0}")]
    Syntax(String),
    #[error("table entry {0} out of range")]
    OutOfRange(usize),
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
}

/// A finite group by its multiplication table; `table[g][h] = g·h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl GroupTable {
    pub fn new(table: Vec<Vec<usize>>) -> Result<GroupTable, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Syntax("empty table".into()));
        }
        for row in &table {
            if row.len() != n {
                return Err(GroupError::Syntax("table is not square".into()));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(GroupError::OutOfRange(bad));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or(GroupError::NoIdentity)?;
        let mut inverse = Vec::with_capacity(n);
        for (g, row) in table.iter().enumerate() {
            let h = (0..n)
                .find(|&h| row[h] == identity && table[h][g] == identity)
                .ok_or(GroupError::NoInverse(g))?;
            inverse.push(h);
        }
        Ok(GroupTable {
            table,
            identity,
            inverse,
        })
    }

    /// Reads `n` followed by `n` rows of `n` indices.
    pub fn parse(text: &str) -> Result<GroupTable, GroupError> {
        let mut nums = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| GroupError::Syntax(alloc::format!("not a number: `{s}`")))
            });
        let n = nums
            .next()
            .ok_or_else(|| GroupError::Syntax("missing order".into()))??;
        let mut table = Vec::with_capacity(n);
        for _ in 0..n {
            let mut row = Vec::with_capacity(n);
            for _ in 0..n {
                row.push(
                    nums.next()
                        .ok_or_else(|| GroupError::Syntax("table too short".into()))??,
                );
            }
            table.push(row);
        }
        if nums.next().is_some() {
            return Err(GroupError::Syntax(
                "trailing entries after the table".into(),
            ));
        }
        GroupTable::new(table)
    }

    pub fn trivial() -> GroupTable {
        GroupTable::cyclic(1)
    }

    pub fn cyclic(n: usize) -> GroupTable {
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        GroupTable::new(table).expect("cyclic group")
    }

    /// Permutations of three points in lexicographic order of their images,
    /// composed as functions: `(g·h)(i) = g(h(i))`.
    pub fn s3() -> GroupTable {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).expect("permutation");
        let table = perms
            .iter()
            .map(|g| {
                perms
                    .iter()
                    .map(|h| index([g[h[0]], g[h[1]], g[h[2]]]))
                    .collect()
            })
            .collect();
        GroupTable::new(table).expect("symmetric group")
    }

    pub fn builtin(name: &str) -> Option<GroupTable> {
        match name {
            "trivial" => Some(GroupTable::trivial()),
            "z2" => Some(GroupTable::cyclic(2)),
            "z3" => Some(GroupTable::cyclic(3)),
            "s3" => Some(GroupTable::s3()),
            _ => None,
        }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }
}

/// Structure maps of a finite-dimensional Hopf algebra with ribbon data,
/// in a symmetric category where the braiding is the flip.
#[derive(Clone, Debug)]
pub struct HopfModel {
    name: String,
    dim: usize,
    maps: BTreeMap<Gen, Matrix>,
    theories: BTreeSet<TheoryName>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("generator `{0}` is not interpreted by model {1}")]
    NotInterpreted(Gen, String),
    #[error(transparent)]
    Type(#[from] TypeError),
}

/// Outcome of comparing the two sides of a rule in a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleCheck {
    Holds,
    Fails(Witness),
}

impl RuleCheck {
    pub fn holds(&self) -> bool {
        matches!(self, RuleCheck::Holds)
    }
}

fn flip(d: usize) -> Matrix {
    let mut m = Matrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            m.set(b * d + a, a * d + b, Q::one());
        }
    }
    m
}

fn permutation(d: usize, f: impl Fn(usize) -> usize) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    for g in 0..d {
        m.set(f(g), g, Q::one());
    }
    m
}

impl HopfModel {
    /// The group algebra `k[G]` with trivial ribbon data.
    pub fn group_algebra(name: &str, g: &GroupTable) -> HopfModel {
        let d = g.order();
        let e = g.identity();
        let one = Q::one();
        let mut maps = BTreeMap::new();
        let mut mul = Matrix::zeros(d, d * d);
        let mut cop = Matrix::zeros(d * d, d);
        for a in 0..d {
            for b in 0..d {
                mul.set(g.mul(a, b), a * d + b, one);
            }
            cop.set(a * d + a, a, one);
        }
        let mut unit = Matrix::zeros(d, 1);
        unit.set(e, 0, one);
        let cou = Matrix::from_rows(1, d, vec![one; d]);
        let ant = permutation(d, |a| g.inverse(a));
        let intg = Matrix::from_rows(d, 1, vec![one; d]);
        let mut cointg = Matrix::zeros(1, d);
        cointg.set(0, e, one);
        let cpr = unit.kron(&unit);
        maps.insert(Gen::Mul, mul);
        maps.insert(Gen::Cop, cop);
        maps.insert(Gen::Unit, unit);
        maps.insert(Gen::Cou, cou);
        maps.insert(Gen::AntInv, ant.clone());
        maps.insert(Gen::Ant, ant);
        maps.insert(Gen::Intg, intg);
        maps.insert(Gen::Cointg, cointg);
        maps.insert(Gen::Cpr, cpr);
        HopfModel::finish(name, d, maps, d == 1)
    }

    /// The function algebra `k^G` with trivial ribbon data; cocommutative
    /// exactly when `G` is abelian.
    pub fn function_algebra(name: &str, g: &GroupTable) -> HopfModel {
        let d = g.order();
        let e = g.identity();
        let one = Q::one();
        let mut maps = BTreeMap::new();
        let mut mul = Matrix::zeros(d, d * d);
        let mut cop = Matrix::zeros(d * d, d);
        for a in 0..d {
            mul.set(a, a * d + a, one);
            for h in 0..d {
                cop.add_to(h * d + g.mul(g.inverse(h), a), a, one);
            }
        }
        let unit = Matrix::from_rows(d, 1, vec![one; d]);
        let mut cou = Matrix::zeros(1, d);
        cou.set(0, e, one);
        let ant = permutation(d, |a| g.inverse(a));
        let mut intg = Matrix::zeros(d, 1);
        intg.set(e, 0, one);
        let cointg = Matrix::from_rows(1, d, vec![one; d]);
        let cpr = unit.kron(&unit);
        maps.insert(Gen::Mul, mul);
        maps.insert(Gen::Cop, cop);
        maps.insert(Gen::Unit, unit);
        maps.insert(Gen::Cou, cou);
        maps.insert(Gen::AntInv, ant.clone());
        maps.insert(Gen::Ant, ant);
        maps.insert(Gen::Intg, intg);
        maps.insert(Gen::Cointg, cointg);
        maps.insert(Gen::Cpr, cpr);
        let mut m = HopfModel::finish(name, d, maps, d == 1);
        if !g.is_abelian() {
            m.theories.clear();
        }
        m
    }

    fn finish(name: &str, d: usize, mut maps: BTreeMap<Gen, Matrix>, selfdual: bool) -> HopfModel {
        maps.insert(Gen::Rib, Matrix::identity(d));
        maps.insert(Gen::RibInv, Matrix::identity(d));
        maps.insert(Gen::Br, flip(d));
        maps.insert(Gen::BrInv, flip(d));
        let mut theories = BTreeSet::new();
        theories.insert(TheoryName::Hr);
        if selfdual {
            theories.insert(TheoryName::Hbb);
            theories.insert(TheoryName::HbbAlt);
        }
        HopfModel {
            name: name.into(),
            dim: d,
            maps,
            theories,
        }
    }

    /// `trivial`, `z2`, `z3`, `s3` give group algebras; a `fun-` prefix
    /// gives the function algebra of the same group.
    pub fn builtin(name: &str) -> Option<HopfModel> {
        match name.strip_prefix("fun-") {
            Some(group) => {
                GroupTable::builtin(group).map(|g| HopfModel::function_algebra(name, &g))
            }
            None => GroupTable::builtin(name).map(|g| HopfModel::group_algebra(name, &g)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn map(&self, g: Gen) -> Option<&Matrix> {
        self.maps.get(&g)
    }

    /// Theories whose every axiom the model satisfies.
    pub fn theories(&self) -> &BTreeSet<TheoryName> {
        &self.theories
    }

    pub fn models(&self, t: TheoryName) -> bool {
        self.theories.contains(&t)
    }

    /// The linear map of a canonical diagram, of shape `d^cod × d^dom`.
    pub fn evaluate(&self, dgm: &Diagram) -> Result<Matrix, EvalError> {
        let d = self.dim;
        let mut layers: Vec<Vec<CellMap>> = Vec::new();
        for layer in dgm.layers() {
            let mut cells = Vec::new();
            for c in layer {
                match c {
                    Cell::Wire => cells.push((1, 1, None)),
                    Cell::Box(g) => {
                        let m = self
                            .maps
                            .get(g)
                            .ok_or_else(|| EvalError::NotInterpreted(*g, self.name.clone()))?;
                        let cols = (0..m.cols()).map(|c| m.column(c)).collect();
                        cells.push((g.dom(), g.cod(), Some(cols)));
                    }
                }
            }
            layers.push(cells);
        }
        let cols = d.pow(dgm.dom() as u32);
        let rows = d.pow(dgm.cod() as u32);
        let mut out = Matrix::zeros(rows, cols);
        for col in 0..cols {
            let mut state: BTreeMap<usize, Q> = BTreeMap::new();
            state.insert(col, Q::one());
            let mut width = dgm.dom();
            for cells in &layers {
                let mut next: BTreeMap<usize, Q> = BTreeMap::new();
                let out_width: usize = cells.iter().map(|c| c.1).sum();
                for (&idx, &coef) in &state {
                    let digits = digits(idx, d, width);
                    let mut partial: Vec<(usize, Q)> = vec![(0, coef)];
                    let mut at = 0;
                    for (ins, outs, cols) in cells {
                        let input = digits[at..at + ins].iter().fold(0, |acc, &x| acc * d + x);
                        at += ins;
                        let scale = d.pow(*outs as u32);
                        partial = match cols {
                            None => partial
                                .into_iter()
                                .map(|(p, c)| (p * d + input, c))
                                .collect(),
                            Some(cols) => {
                                let mut grown =
                                    Vec::with_capacity(partial.len() * cols[input].len());
                                for (p, c) in &partial {
                                    for (r, v) in &cols[input] {
                                        grown.push((p * scale + r, *c * *v));
                                    }
                                }
                                grown
                            }
                        };
                        if partial.is_empty() {
                            break;
                        }
                    }
                    for (p, c) in partial {
                        let slot = next.entry(p).or_insert_with(Q::zero);
                        *slot += c;
                    }
                }
                next.retain(|_, v| !v.is_zero());
                state = next;
                width = out_width;
            }
            for (r, v) in state {
                out.set(r, col, v);
            }
        }
        Ok(out)
    }

    /// Evaluates a macro-free term.
    pub fn evaluate_term(&self, t: &Term) -> Result<Matrix, EvalError> {
        self.evaluate(&canonicalize(t)?)
    }

    /// Exact comparison of the two sides.
    pub fn check(&self, lhs: &Diagram, rhs: &Diagram) -> Result<RuleCheck, EvalError> {
        let a = self.evaluate(lhs)?;
        let b = self.evaluate(rhs)?;
        Ok(match a.largest_difference(&b) {
            None => RuleCheck::Holds,
            Some(w) => RuleCheck::Fails(w),
        })
    }
}

/// Input width, output width and sparse columns (`None` for a plain wire)
/// of one cell.
type CellMap = (usize, usize, Option<Vec<Vec<(usize, Q)>>>);

fn digits(mut idx: usize, d: usize, width: usize) -> Vec<usize> {
    let mut out = vec![0; width];
    for slot in out.iter_mut().rev() {
        *slot = idx % d;
        idx /= d;
    }
    out
}

impl fmt::Display for HopfModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Model names the command line accepts besides group files.
pub fn builtin_model_names() -> Vec<String> {
    [
        "trivial",
        "z2",
        "z3",
        "s3",
        "fun-trivial",
        "fun-z2",
        "fun-z3",
        "fun-s3",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}
