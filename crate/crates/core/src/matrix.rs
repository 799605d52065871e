//! Occurrence-indexed matrices, the interpretation of proofs over partial
//! isometries, and the measure over formal languages.
//!
//! Entries are stored sparsely; an absent entry is zero. Entry `(i, j)` is
//! row `i`, column `j`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::algebra::{AlgElem, EigenweightId, Lang, Literal, PathWord, Poly, ReductionMode, RingHom, Semiring};
use crate::mall::{check_proof, CheckError, CheckedProof, NodePath, OccId, Proof, RuleKind, Sequent, Side};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("the & introduced at {0} has no eigenweight")]
    UnassignedEigenweight(NodePath),
    #[error("occurrence {0} is not in the matrix index")]
    IndexMissing(OccId),
    #[error("index mismatch: {0}")]
    IndexMismatch(String),
}

/// Rows and columns of a square matrix: cut pairs first, then conclusions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Index {
    pub cuts: Vec<[OccId; 2]>,
    pub concl: Vec<OccId>,
}

impl Index {
    pub fn new(cuts: Vec<[OccId; 2]>, concl: Vec<OccId>) -> Self {
        Index { cuts, concl }
    }

    pub fn delta(&self) -> Vec<OccId> {
        self.cuts.iter().flatten().copied().collect()
    }

    pub fn all(&self) -> Vec<OccId> {
        self.delta().into_iter().chain(self.concl.iter().copied()).collect()
    }

    pub fn len(&self) -> usize {
        2 * self.cuts.len() + self.concl.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, o: OccId) -> bool {
        self.concl.contains(&o) || self.cuts.iter().any(|c| c.contains(&o))
    }
}

/// A rectangular block with explicit row and column occurrences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid<T> {
    pub rows: Vec<OccId>,
    pub cols: Vec<OccId>,
    entries: BTreeMap<(OccId, OccId), T>,
}

impl<T: Semiring> Grid<T> {
    pub fn zero(rows: Vec<OccId>, cols: Vec<OccId>) -> Self {
        Grid { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(idx: Vec<OccId>) -> Self {
        let mut g = Grid::zero(idx.clone(), idx.clone());
        for o in idx {
            g.set(o, o, T::one());
        }
        g
    }

    pub fn get(&self, r: OccId, c: OccId) -> T {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, r: OccId, c: OccId, v: T) {
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_at(&mut self, r: OccId, c: OccId, v: &T) {
        let cur = self.get(r, c);
        self.set(r, c, cur.add(v));
    }

    pub fn entries(&self) -> impl Iterator<Item = (OccId, OccId, &T)> {
        self.entries.iter().map(|((r, c), v)| (*r, *c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Grid<T>) -> Grid<T> {
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            out.add_at(r, c, v);
        }
        out
    }

    pub fn mul(&self, other: &Grid<T>) -> Grid<T> {
        let mut by_row: BTreeMap<OccId, Vec<(OccId, &T)>> = BTreeMap::new();
        for (r, c, v) in other.entries() {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = Grid::zero(self.rows.clone(), other.cols.clone());
        for (r, k, x) in self.entries() {
            if let Some(row) = by_row.get(&k) {
                for (c, y) in row {
                    out.add_at(r, *c, &x.mul(y));
                }
            }
        }
        out
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Grid<T> {
        let mut out = Grid::zero(self.rows.clone(), self.cols.clone());
        for (r, c, v) in self.entries() {
            out.set(r, c, f(v));
        }
        out
    }

    pub fn map_into<U: Semiring>(&self, f: impl Fn(&T) -> U) -> Grid<U> {
        let mut out = Grid::zero(self.rows.clone(), self.cols.clone());
        for (r, c, v) in self.entries() {
            out.set(r, c, f(v));
        }
        out
    }

    pub fn block(&self, rows: &[OccId], cols: &[OccId]) -> Grid<T> {
        let (rs, cs): (BTreeSet<_>, BTreeSet<_>) = (rows.iter().collect(), cols.iter().collect());
        let mut out = Grid::zero(rows.to_vec(), cols.to_vec());
        for (r, c, v) in self.entries() {
            if rs.contains(&r) && cs.contains(&c) {
                out.set(r, c, v.clone());
            }
        }
        out
    }

    /// Places the entries on a square index.
    pub fn into_matrix(self, index: Index) -> Matrix<T> {
        Matrix { index, grid: Grid { rows: vec![], cols: vec![], entries: self.entries } }.normalized()
    }
}

/// A square matrix indexed by `2m + n` occurrences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<T> {
    pub index: Index,
    grid: Grid<T>,
}

pub type FMatrix = Matrix<AlgElem>;
pub type LMatrix = Matrix<Lang>;

impl<T: Semiring> Matrix<T> {
    pub fn zero(index: Index) -> Self {
        Matrix { index, grid: Grid::zero(vec![], vec![]) }.normalized()
    }

    fn normalized(mut self) -> Self {
        let all = self.index.all();
        self.grid.rows = all.clone();
        self.grid.cols = all;
        self
    }

    pub fn from_entries(index: Index, entries: impl IntoIterator<Item = (OccId, OccId, T)>) -> Self {
        let mut m = Matrix::zero(index);
        for (r, c, v) in entries {
            m.grid.add_at(r, c, &v);
        }
        m
    }

    pub fn get(&self, r: OccId, c: OccId) -> T {
        self.grid.get(r, c)
    }

    pub fn set(&mut self, r: OccId, c: OccId, v: T) {
        self.grid.set(r, c, v);
    }

    pub fn entries(&self) -> impl Iterator<Item = (OccId, OccId, &T)> {
        self.grid.entries()
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn block(&self, rows: &[OccId], cols: &[OccId]) -> Grid<T> {
        self.grid.block(rows, cols)
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Matrix<T> {
        Matrix { index: self.index.clone(), grid: self.grid.map(f) }
    }

    pub fn map_into<U: Semiring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { index: self.index.clone(), grid: self.grid.map_into(f) }
    }

    pub fn with_index(mut self, index: Index) -> Self {
        self.index = index;
        self.normalized()
    }

    /// Renames occurrences through `rename`, onto `index`.
    pub fn relabel(&self, rename: impl Fn(OccId) -> OccId, index: Index) -> Matrix<T> {
        let mut out = Matrix::zero(index);
        for (r, c, v) in self.entries() {
            out.grid.add_at(rename(r), rename(c), v);
        }
        out
    }
}

impl FMatrix {
    pub fn reduce(&self, mode: &ReductionMode) -> FMatrix {
        self.map(|x| mode.reduce_elem(x))
    }

    pub fn apply_hom(&self, d: &RingHom) -> FMatrix {
        self.map(|x| d.apply_elem(x))
    }

    /// Entrywise equality modulo `mode`, on the same index.
    pub fn equal_mod(&self, other: &FMatrix, mode: &ReductionMode) -> bool {
        self.index == other.index && self.first_difference(other, mode).is_none()
    }

    /// The first entry on which the two matrices differ modulo `mode`.
    pub fn first_difference(&self, other: &FMatrix, mode: &ReductionMode) -> Option<(OccId, OccId)> {
        let keys: BTreeSet<(OccId, OccId)> =
            self.entries().map(|(r, c, _)| (r, c)).chain(other.entries().map(|(r, c, _)| (r, c))).collect();
        keys.into_iter().find(|(r, c)| !mode.equal(&self.get(*r, *c), &other.get(*r, *c)))
    }

    pub fn literals(&self) -> BTreeSet<Literal> {
        self.entries().flat_map(|(_, _, v)| v.literals()).collect()
    }
}

/// Block-diagonal assembly: cut lists and conclusions are concatenated.
pub fn dg<T: Semiring>(ms: &[&Matrix<T>]) -> Matrix<T> {
    let mut index = Index::default();
    let mut grid = Grid::zero(vec![], vec![]);
    for m in ms {
        index.cuts.extend(m.index.cuts.iter().copied());
        index.concl.extend(m.index.concl.iter().copied());
        for (r, c, v) in m.entries() {
            grid.add_at(r, c, v);
        }
    }
    Matrix { index, grid }.normalized()
}

/// One row/column being merged into a new occurrence: its left factor (row)
/// and right factor (column).
pub struct Part<T> {
    pub occ: OccId,
    pub left: T,
    pub right: T,
}

/// Replaces the rows and columns of `parts` by a single occurrence `target`:
/// row `target` is `Σ left_i · row(occ_i)`, column `target` is
/// `Σ col(occ_i) · right_i`. The result is placed on `index`.
pub fn contract<T: Semiring>(
    m: &Matrix<T>,
    parts: &[Part<T>],
    target: OccId,
    index: Index,
) -> Result<Matrix<T>, MatrixError> {
    for p in parts {
        if !m.index.contains(p.occ) {
            return Err(MatrixError::IndexMissing(p.occ));
        }
    }
    let find = |o: OccId| parts.iter().find(|p| p.occ == o);
    let mut out = Matrix::zero(index);
    for (r, c, v) in m.entries() {
        let (r2, v) = match find(r) {
            Some(p) => (target, p.left.mul(v)),
            None => (r, v.clone()),
        };
        let (c2, v) = match find(c) {
            Some(p) => (target, v.mul(&p.right)),
            None => (c, v),
        };
        out.grid.add_at(r2, c2, &v);
    }
    Ok(out)
}

fn path_elem(w: PathWord) -> AlgElem {
    AlgElem::path(w)
}

/// Merges `a1`, `a2` of `m` into `target` with `p`, `q` and their adjoints.
pub fn contract_pq(m: &FMatrix, a1: OccId, a2: OccId, target: OccId, index: Index) -> Result<FMatrix, MatrixError> {
    let parts = [
        Part { occ: a1, left: path_elem(PathWord::p()), right: path_elem(PathWord::p_star()) },
        Part { occ: a2, left: path_elem(PathWord::q()), right: path_elem(PathWord::q_star()) },
    ];
    contract(m, &parts, target, index)
}

/// Settings distinguishing the two superpositions.
struct SuperposeSpec<T> {
    left_scalar: T,
    right_scalar: T,
    /// Whether the scalars also multiply the rows and columns of the `&`.
    scale_principal: bool,
    left_in: T,
    left_out: T,
    right_in: T,
    right_out: T,
}

fn superpose_generic<T: Semiring>(
    f: &Matrix<T>,
    g: &Matrix<T>,
    index: Index,
    a1: OccId,
    a2: OccId,
    target: OccId,
    s: &SuperposeSpec<T>,
) -> Result<Matrix<T>, MatrixError> {
    if !f.index.contains(a1) {
        return Err(MatrixError::IndexMissing(a1));
    }
    if !g.index.contains(a2) {
        return Err(MatrixError::IndexMissing(a2));
    }
    for o in f.index.all().into_iter().chain(g.index.all()) {
        if o != a1 && o != a2 && !index.contains(o) {
            return Err(MatrixError::IndexMismatch(format!("{o} is not in the superposed index")));
        }
    }
    let mut out = Matrix::zero(index);
    let mut place = |m: &Matrix<T>, principal: OccId, scalar: &T, l: &T, r: &T| {
        for (row, col, v) in m.entries() {
            let on_row = row == principal;
            let on_col = col == principal;
            let mut v = v.clone();
            if on_row {
                v = l.mul(&v);
            }
            if on_col {
                v = v.mul(r);
            }
            if s.scale_principal || !(on_row || on_col) {
                v = scalar.mul(&v);
            }
            let row = if on_row { target } else { row };
            let col = if on_col { target } else { col };
            out.grid.add_at(row, col, &v);
        }
    };
    place(f, a1, &s.left_scalar, &s.left_in, &s.left_out);
    place(g, a2, &s.right_scalar, &s.right_in, &s.right_out);
    Ok(out)
}

/// `S`: superposition of `f` (indexed by Γ, A1) and `g` (by Γ, A2) into a
/// matrix indexed by Γ, A1 & A2, weighted by `a` and `ā`.
#[allow(non_snake_case)]
pub fn superpose_S(
    f: &FMatrix,
    g: &FMatrix,
    index: Index,
    a1: OccId,
    a2: OccId,
    target: OccId,
    weight: EigenweightId,
) -> Result<FMatrix, MatrixError> {
    let spec = SuperposeSpec {
        left_scalar: AlgElem::scalar(Poly::literal(weight.pos())),
        right_scalar: AlgElem::scalar(Poly::literal(weight.neg())),
        scale_principal: true,
        left_in: path_elem(PathWord::p()),
        left_out: path_elem(PathWord::p_star()),
        right_in: path_elem(PathWord::q()),
        right_out: path_elem(PathWord::q_star()),
    };
    superpose_generic(f, g, index, a1, a2, target, &spec)
}

/// `s`: the language superposition; only the (Γ, Γ) block is marked by the
/// literals, the row and column of the `&` are plain unions.
pub fn superpose_s(
    h: &LMatrix,
    l: &LMatrix,
    index: Index,
    a1: OccId,
    a2: OccId,
    target: OccId,
    weight: EigenweightId,
) -> Result<LMatrix, MatrixError> {
    let spec = SuperposeSpec {
        left_scalar: Lang::letter(weight.pos()),
        right_scalar: Lang::letter(weight.neg()),
        scale_principal: false,
        left_in: Lang::epsilon(),
        left_out: Lang::epsilon(),
        right_in: Lang::epsilon(),
        right_out: Lang::epsilon(),
    };
    superpose_generic(h, l, index, a1, a2, target, &spec)
}

/// The entry type of an interpretation and how each rule acts on it.
trait Flavor: Semiring {
    fn part(occ: OccId, side: Side) -> Part<Self>;
    fn superpose(
        f: &Matrix<Self>,
        g: &Matrix<Self>,
        index: Index,
        a1: OccId,
        a2: OccId,
        target: OccId,
        weight: EigenweightId,
    ) -> Result<Matrix<Self>, MatrixError>;
}

impl Flavor for AlgElem {
    fn part(occ: OccId, side: Side) -> Part<Self> {
        let (l, r) = match side {
            Side::Left => (PathWord::p(), PathWord::p_star()),
            Side::Right => (PathWord::q(), PathWord::q_star()),
        };
        Part { occ, left: path_elem(l), right: path_elem(r) }
    }

    fn superpose(
        f: &Matrix<Self>,
        g: &Matrix<Self>,
        index: Index,
        a1: OccId,
        a2: OccId,
        target: OccId,
        weight: EigenweightId,
    ) -> Result<Matrix<Self>, MatrixError> {
        superpose_S(f, g, index, a1, a2, target, weight)
    }
}

impl Flavor for Lang {
    fn part(occ: OccId, _side: Side) -> Part<Self> {
        Part { occ, left: Lang::epsilon(), right: Lang::epsilon() }
    }

    fn superpose(
        f: &Matrix<Self>,
        g: &Matrix<Self>,
        index: Index,
        a1: OccId,
        a2: OccId,
        target: OccId,
        weight: EigenweightId,
    ) -> Result<Matrix<Self>, MatrixError> {
        superpose_s(f, g, index, a1, a2, target, weight)
    }
}

fn build<T: Flavor>(c: &CheckedProof, n: usize) -> Result<Matrix<T>, MatrixError> {
    let node = &c.nodes[n];
    let s = &c.sequent;
    let index = Index::new(node.cuts.clone(), node.conclusion.clone());
    let prem: Vec<Matrix<T>> = node.premises.iter().map(|k| build(c, *k)).collect::<Result<_, _>>()?;
    match node.kind {
        RuleKind::Ax => {
            let [x, y] = [node.conclusion[0], node.conclusion[1]];
            Ok(Matrix::from_entries(index, [(x, y, T::one()), (y, x, T::one())]))
        }
        RuleKind::Cut => Ok(dg(&[&prem[0], &prem[1]]).with_index(index)),
        RuleKind::Tensor | RuleKind::Par => {
            let m = if prem.len() == 2 { dg(&[&prem[0], &prem[1]]) } else { prem[0].clone() };
            let t = node.principal;
            let parts = [T::part(s.child(t, Side::Left), Side::Left), T::part(s.child(t, Side::Right), Side::Right)];
            contract(&m, &parts, t, index)
        }
        RuleKind::Plus1 | RuleKind::Plus2 => {
            let side = if node.kind == RuleKind::Plus1 { Side::Left } else { Side::Right };
            let t = node.principal;
            contract(&prem[0], &[T::part(s.child(t, side), side)], t, index)
        }
        RuleKind::With => {
            let t = node.principal;
            let w = s.weight(t).ok_or_else(|| MatrixError::UnassignedEigenweight(node.path.clone()))?;
            T::superpose(&prem[0], &prem[1], index, s.child(t, Side::Left), s.child(t, Side::Right), t, w)
        }
    }
}

/// The interpretation `⟦π⟧` of a checked proof.
pub fn interpret_checked(c: &CheckedProof) -> Result<FMatrix, MatrixError> {
    build::<AlgElem>(c, 0)
}

/// The measure `m_π` of a checked proof.
pub fn measure_checked(c: &CheckedProof) -> Result<LMatrix, MatrixError> {
    build::<Lang>(c, 0)
}

pub fn interpret(p: &Proof) -> Result<(CheckedProof, FMatrix), MatrixError> {
    let c = check_proof(p)?;
    let m = interpret_checked(&c)?;
    Ok((c, m))
}

pub fn measure(p: &Proof) -> Result<(CheckedProof, LMatrix), MatrixError> {
    let c = check_proof(p)?;
    let m = measure_checked(&c)?;
    Ok((c, m))
}

/// Occurrence labels for dumps: the formula with eigenweights, made unique
/// by an `#id` suffix when the same rendering appears twice.
pub fn labels(s: &Sequent, occs: &[OccId]) -> BTreeMap<OccId, String> {
    let mut count: BTreeMap<String, usize> = BTreeMap::new();
    for o in occs {
        *count.entry(s.render(*o)).or_default() += 1;
    }
    occs.iter()
        .map(|o| {
            let r = s.render(*o);
            let l = if count[&r] > 1 { format!("{r} {o}") } else { r };
            (*o, l)
        })
        .collect()
}

/// Aligned text rendering: one line per non-zero entry, `row | col | value`.
pub fn render_entries<T: Semiring + fmt::Display>(m: &Matrix<T>, s: &Sequent) -> String {
    let all = m.index.all();
    let lab = labels(s, &all);
    let rows: Vec<(String, String, String)> =
        m.entries().map(|(r, c, v)| (lab[&r].clone(), lab[&c].clone(), v.to_string())).collect();
    let w0 = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0);
    let w1 = rows.iter().map(|r| r.1.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (r, c, v) in rows {
        out.push_str(&format!("{r:<w0$} | {c:<w1$} | {v}\n"));
    }
    out
}

#[derive(Serialize)]
struct JsonIndex {
    occ: OccId,
    formula: String,
    part: &'static str,
}

#[derive(Serialize)]
struct JsonEntry {
    row: OccId,
    col: OccId,
    value: String,
}

#[derive(Serialize)]
struct JsonMatrix {
    index: Vec<JsonIndex>,
    entries: Vec<JsonEntry>,
}

/// JSON dump: index metadata and non-zero entries in canonical text.
pub fn to_json<T: Semiring + fmt::Display>(m: &Matrix<T>, s: &Sequent) -> serde_json::Value {
    let delta: BTreeSet<OccId> = m.index.delta().into_iter().collect();
    let index = m
        .index
        .all()
        .into_iter()
        .map(|o| JsonIndex { occ: o, formula: s.render(o), part: if delta.contains(&o) { "delta" } else { "gamma" } })
        .collect();
    let entries = m.entries().map(|(row, col, v)| JsonEntry { row, col, value: v.to_string() }).collect();
    serde_json::to_value(JsonMatrix { index, entries }).expect("serializable")
}
