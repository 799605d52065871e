//! Cut elimination with the ring homomorphism of every step, and the checks
//! that the quasi-execution formula is invariant along reduction.
//!
//! Reduction runs on a labelled copy of the derivation: every formula
//! occurrence in a premise's conclusion carries a label that survives the
//! rewrite, so conclusions of successive proofs can be matched even when
//! their positions move or formulas repeat.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::algebra::{EigenweightId, Literal, Monomial, Poly, ReductionMode, RingHom};
use crate::equations::{check_solution, proof_system, EqSystem, MonEq, Solution, SolveError};
use crate::exec::{qexec, sigma, ExecError, ExecOptions, PartialSymmetry};
use crate::mall::{
    check_proof, ensure_eigenweights, print_proof, Atom, CheckError, CheckedProof, Formula, OccId, Proof, Side,
};
use crate::matrix::{interpret_checked, superpose_S, FMatrix, Index, MatrixError};

pub const DEFAULT_STEP_BOUND: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Exec(#[from] ExecError),
    #[error("no normal form within {0} steps")]
    StepBoundExceeded(usize),
    #[error("step {step} produced an ill-formed proof: {error}")]
    IllFormedStep { step: usize, error: CheckError },
    #[error("with rule without an eigenweight")]
    MissingWeight,
}

type Label = u32;
type CutRef = [Label; 2];

/// A derivation whose formula occurrences are named by labels instead of
/// positions. Conclusion order follows the same conventions as [`Proof`].
#[derive(Clone, Debug, PartialEq, Eq)]
enum Node {
    Ax {
        atom: Atom,
        out: [Label; 2],
    },
    Cut {
        left: Box<Node>,
        right: Box<Node>,
        at: [Label; 2],
    },
    Tensor {
        left: Box<Node>,
        right: Box<Node>,
        at: [Label; 2],
        out: Label,
    },
    Par {
        premise: Box<Node>,
        at: [Label; 2],
        out: Label,
    },
    Plus {
        premise: Box<Node>,
        side: Side,
        other: Formula,
        at: Label,
        out: Label,
    },
    With {
        left: Box<Node>,
        right: Box<Node>,
        at: [Label; 2],
        out: Label,
        /// Matching context occurrences as (left label, right label).
        context: Vec<[Label; 2]>,
        /// Superposed cuts as (left cut, right cut).
        superpose: Vec<[CutRef; 2]>,
        weight: Option<EigenweightId>,
    },
}

fn pos(list: &[(Label, Formula)], l: Label) -> usize {
    list.iter().position(|(k, _)| *k == l).unwrap_or_else(|| panic!("label {l} not in conclusion"))
}

fn formula_at(list: &[(Label, Formula)], l: Label) -> Formula {
    list[pos(list, l)].1.clone()
}

fn without(list: Vec<(Label, Formula)>, l: Label) -> Vec<(Label, Formula)> {
    list.into_iter().filter(|(k, _)| *k != l).collect()
}

fn replace(list: Vec<(Label, Formula)>, l: Label, new: (Label, Formula)) -> Vec<(Label, Formula)> {
    list.into_iter().map(|(k, f)| if k == l { new.clone() } else { (k, f) }).collect()
}

struct Fresh(Label);

impl Fresh {
    fn next(&mut self) -> Label {
        self.0 += 1;
        self.0
    }
}

impl Node {
    fn concl(&self) -> Vec<(Label, Formula)> {
        match self {
            Node::Ax { atom, out } => {
                let x = Formula::Atom(atom.clone());
                vec![(out[0], x.clone()), (out[1], x.negate())]
            }
            Node::Cut { left, right, at } => {
                let mut c = without(left.concl(), at[0]);
                c.extend(without(right.concl(), at[1]));
                c
            }
            Node::Tensor { left, right, at, out } => {
                let (lc, rc) = (left.concl(), right.concl());
                let f = Formula::tensor(formula_at(&lc, at[0]), formula_at(&rc, at[1]));
                let mut c = replace(lc, at[0], (*out, f));
                c.extend(without(rc, at[1]));
                c
            }
            Node::Par { premise, at, out } => {
                let pc = premise.concl();
                let f = Formula::par(formula_at(&pc, at[0]), formula_at(&pc, at[1]));
                without(replace(pc, at[0], (*out, f)), at[1])
            }
            Node::Plus { premise, side, other, at, out } => {
                let pc = premise.concl();
                let arg = formula_at(&pc, *at);
                let f = match side {
                    Side::Left => Formula::plus(arg, other.clone()),
                    Side::Right => Formula::plus(other.clone(), arg),
                };
                replace(pc, *at, (*out, f))
            }
            Node::With { left, right, at, out, .. } => {
                let lc = left.concl();
                let f = Formula::with(formula_at(&lc, at[0]), formula_at(&right.concl(), at[1]));
                replace(lc, at[0], (*out, f))
            }
        }
    }

    fn labels(&self) -> Vec<Label> {
        self.concl().into_iter().map(|(l, _)| l).collect()
    }

    fn has(&self, l: Label) -> bool {
        self.concl().iter().any(|(k, _)| *k == l)
    }

    fn cuts(&self) -> Vec<CutRef> {
        match self {
            Node::Ax { .. } => vec![],
            Node::Cut { left, right, at } => {
                let mut c = left.cuts();
                c.extend(right.cuts());
                c.push(*at);
                c
            }
            Node::Tensor { left, right, .. } => {
                let mut c = left.cuts();
                c.extend(right.cuts());
                c
            }
            Node::Par { premise, .. } | Node::Plus { premise, .. } => premise.cuts(),
            Node::With { left, right, superpose, .. } => {
                let ls: BTreeSet<CutRef> = superpose.iter().map(|[l, _]| *l).collect();
                let rs: BTreeSet<CutRef> = superpose.iter().map(|[_, r]| *r).collect();
                let mut c: Vec<CutRef> = left.cuts().into_iter().filter(|x| !ls.contains(x)).collect();
                c.extend(right.cuts().into_iter().filter(|x| !rs.contains(x)));
                c.extend(superpose.iter().map(|[l, _]| *l));
                c
            }
        }
    }

    fn premises(&self) -> Vec<&Node> {
        match self {
            Node::Ax { .. } => vec![],
            Node::Cut { left, right, .. } | Node::Tensor { left, right, .. } | Node::With { left, right, .. } => {
                vec![left, right]
            }
            Node::Par { premise, .. } | Node::Plus { premise, .. } => vec![premise],
        }
    }

    fn premises_mut(&mut self) -> Vec<&mut Node> {
        match self {
            Node::Ax { .. } => vec![],
            Node::Cut { left, right, .. } | Node::Tensor { left, right, .. } | Node::With { left, right, .. } => {
                vec![left, right]
            }
            Node::Par { premise, .. } | Node::Plus { premise, .. } => vec![premise],
        }
    }

    fn is_cut_free(&self) -> bool {
        !matches!(self, Node::Cut { .. }) && self.premises().iter().all(|p| p.is_cut_free())
    }

    fn at_path(&self, path: &[usize]) -> &Node {
        match path.split_first() {
            None => self,
            Some((k, rest)) => self.premises()[*k].at_path(rest),
        }
    }

    fn at_path_mut(&mut self, path: &[usize]) -> &mut Node {
        match path.split_first() {
            None => self,
            Some((k, rest)) => self.premises_mut().swap_remove(*k).at_path_mut(rest),
        }
    }

    /// The label introduced by the last rule, if any.
    fn principal(&self) -> Vec<Label> {
        match self {
            Node::Ax { out, .. } => out.to_vec(),
            Node::Cut { .. } => vec![],
            Node::Tensor { out, .. } | Node::Par { out, .. } | Node::Plus { out, .. } | Node::With { out, .. } => {
                vec![*out]
            }
        }
    }

    fn weights(&self, out: &mut BTreeSet<EigenweightId>) {
        if let Node::With { weight: Some(w), .. } = self {
            out.insert(*w);
        }
        for p in self.premises() {
            p.weights(out);
        }
    }

    fn max_weight(&self) -> u32 {
        let mut ws = BTreeSet::new();
        self.weights(&mut ws);
        ws.iter().map(|w| w.0).max().unwrap_or(0)
    }

    /// Eigenweights of the `&` occurrences inside the conclusion occurrence `l`.
    fn weights_in(&self, l: Label) -> BTreeSet<EigenweightId> {
        match self {
            Node::Ax { .. } => BTreeSet::new(),
            Node::Cut { left, right, .. } => {
                if left.has(l) {
                    left.weights_in(l)
                } else {
                    right.weights_in(l)
                }
            }
            Node::Tensor { left, right, at, out } => {
                if l == *out {
                    let mut s = left.weights_in(at[0]);
                    s.extend(right.weights_in(at[1]));
                    s
                } else if left.has(l) {
                    left.weights_in(l)
                } else {
                    right.weights_in(l)
                }
            }
            Node::Par { premise, at, out } => {
                if l == *out {
                    let mut s = premise.weights_in(at[0]);
                    s.extend(premise.weights_in(at[1]));
                    s
                } else {
                    premise.weights_in(l)
                }
            }
            Node::Plus { premise, at, out, .. } => premise.weights_in(if l == *out { *at } else { l }),
            Node::With { left, right, at, out, context, weight, .. } => {
                if l == *out {
                    let mut s = left.weights_in(at[0]);
                    s.extend(right.weights_in(at[1]));
                    s.extend(*weight);
                    s
                } else {
                    let mut s = left.weights_in(l);
                    if let Some([_, r]) = context.iter().find(|[x, _]| *x == l) {
                        s.extend(right.weights_in(*r));
                    }
                    s
                }
            }
        }
    }

    /// Eigenweights inside the two formulas of the cut `c`.
    fn cut_weights(&self, c: CutRef) -> BTreeSet<EigenweightId> {
        if let Node::Cut { left, right, at } = self {
            if *at == c {
                let mut s = left.weights_in(at[0]);
                s.extend(right.weights_in(at[1]));
                return s;
            }
        }
        self.premises().iter().map(|p| p.cut_weights(c)).fold(BTreeSet::new(), |mut a, b| {
            a.extend(b);
            a
        })
    }

    fn map_labels(&mut self, f: &impl Fn(Label) -> Label) {
        match self {
            Node::Ax { out, .. } => *out = out.map(f),
            Node::Cut { at, .. } => *at = at.map(f),
            Node::Tensor { at, out, .. } | Node::Par { at, out, .. } => {
                *at = at.map(f);
                *out = f(*out);
            }
            Node::Plus { at, out, .. } => {
                *at = f(*at);
                *out = f(*out);
            }
            Node::With { at, out, context, superpose, .. } => {
                *at = at.map(f);
                *out = f(*out);
                for c in context.iter_mut() {
                    *c = c.map(f);
                }
                for s in superpose.iter_mut() {
                    *s = s.map(|c| c.map(f));
                }
            }
        }
        for p in self.premises_mut() {
            p.map_labels(f);
        }
    }

    fn map_weights(&mut self, f: &impl Fn(EigenweightId) -> EigenweightId) {
        if let Node::With { weight: Some(w), .. } = self {
            *w = f(*w);
        }
        for p in self.premises_mut() {
            p.map_weights(f);
        }
    }

    /// A copy with every label replaced by a fresh one; returns the renaming.
    fn fresh_copy(&self, fresh: &mut Fresh) -> (Node, BTreeMap<Label, Label>) {
        let mut all = BTreeSet::new();
        self.collect_labels(&mut all);
        let map: BTreeMap<Label, Label> = all.into_iter().map(|l| (l, fresh.next())).collect();
        let mut copy = self.clone();
        copy.map_labels(&|l| map[&l]);
        (copy, map)
    }

    fn collect_labels(&self, out: &mut BTreeSet<Label>) {
        match self {
            Node::Ax { out: o, .. } => out.extend(o.iter().copied()),
            Node::Cut { at, .. } => out.extend(at.iter().copied()),
            Node::Tensor { at, out: o, .. } | Node::Par { at, out: o, .. } | Node::With { at, out: o, .. } => {
                out.extend(at.iter().copied());
                out.insert(*o);
            }
            Node::Plus { at, out: o, .. } => {
                out.insert(*at);
                out.insert(*o);
            }
        }
        for p in self.premises() {
            p.collect_labels(out);
        }
    }

    fn from_proof(p: &Proof, fresh: &mut Fresh) -> (Node, Vec<Label>, Vec<CutRef>) {
        match p {
            Proof::Ax { atom } => {
                let out = [fresh.next(), fresh.next()];
                (Node::Ax { atom: atom.clone(), out }, out.to_vec(), vec![])
            }
            Proof::Cut { left, right, at, .. } => {
                let (l, lc, lcuts) = Node::from_proof(left, fresh);
                let (r, rc, rcuts) = Node::from_proof(right, fresh);
                let at = [lc[at[0]], rc[at[1]]];
                let mut concl: Vec<Label> = lc.into_iter().filter(|x| *x != at[0]).collect();
                concl.extend(rc.into_iter().filter(|x| *x != at[1]));
                let mut cuts = lcuts;
                cuts.extend(rcuts);
                cuts.push(at);
                (Node::Cut { left: Box::new(l), right: Box::new(r), at }, concl, cuts)
            }
            Proof::Tensor { left, right, at, .. } => {
                let (l, lc, lcuts) = Node::from_proof(left, fresh);
                let (r, rc, rcuts) = Node::from_proof(right, fresh);
                let at = [lc[at[0]], rc[at[1]]];
                let out = fresh.next();
                let mut concl: Vec<Label> = lc.into_iter().map(|x| if x == at[0] { out } else { x }).collect();
                concl.extend(rc.into_iter().filter(|x| *x != at[1]));
                let mut cuts = lcuts;
                cuts.extend(rcuts);
                (Node::Tensor { left: Box::new(l), right: Box::new(r), at, out }, concl, cuts)
            }
            Proof::Par { premise, at, .. } => {
                let (q, qc, cuts) = Node::from_proof(premise, fresh);
                let at = [qc[at[0]], qc[at[1]]];
                let out = fresh.next();
                let concl = qc.into_iter().filter(|x| *x != at[1]).map(|x| if x == at[0] { out } else { x }).collect();
                (Node::Par { premise: Box::new(q), at, out }, concl, cuts)
            }
            Proof::Plus { premise, side, a, b, at } => {
                let (q, qc, cuts) = Node::from_proof(premise, fresh);
                let at = qc[*at];
                let out = fresh.next();
                let other = if *side == Side::Left { b.clone() } else { a.clone() };
                let concl = qc.into_iter().map(|x| if x == at { out } else { x }).collect();
                (Node::Plus { premise: Box::new(q), side: *side, other, at, out }, concl, cuts)
            }
            Proof::With { left, right, at, context, superpose, weight, .. } => {
                let (l, lc, lcuts) = Node::from_proof(left, fresh);
                let (r, rc, rcuts) = Node::from_proof(right, fresh);
                let at_l = [lc[at[0]], rc[at[1]]];
                let out = fresh.next();
                let ctx: Vec<[Label; 2]> =
                    (0..lc.len()).filter(|k| *k != at[0]).zip(context).map(|(k, j)| [lc[k], rc[*j]]).collect();
                let sup: Vec<[CutRef; 2]> = superpose.iter().map(|[x, y]| [lcuts[*x], rcuts[*y]]).collect();
                let concl = lc.iter().map(|x| if *x == at_l[0] { out } else { *x }).collect();
                let node = Node::With {
                    left: Box::new(l),
                    right: Box::new(r),
                    at: at_l,
                    out,
                    context: ctx,
                    superpose: sup,
                    weight: *weight,
                };
                let cuts = node.cuts();
                (node, concl, cuts)
            }
        }
    }

    fn to_proof(&self) -> Proof {
        match self {
            Node::Ax { atom, .. } => Proof::Ax { atom: atom.clone() },
            Node::Cut { left, right, at } => {
                let (lc, rc) = (left.concl(), right.concl());
                Proof::Cut {
                    left: Box::new(left.to_proof()),
                    right: Box::new(right.to_proof()),
                    formula: formula_at(&lc, at[0]),
                    at: [pos(&lc, at[0]), pos(&rc, at[1])],
                }
            }
            Node::Tensor { left, right, at, .. } => {
                let (lc, rc) = (left.concl(), right.concl());
                Proof::Tensor {
                    left: Box::new(left.to_proof()),
                    right: Box::new(right.to_proof()),
                    a: formula_at(&lc, at[0]),
                    b: formula_at(&rc, at[1]),
                    at: [pos(&lc, at[0]), pos(&rc, at[1])],
                }
            }
            Node::Par { premise, at, .. } => {
                let pc = premise.concl();
                Proof::Par {
                    premise: Box::new(premise.to_proof()),
                    a: formula_at(&pc, at[0]),
                    b: formula_at(&pc, at[1]),
                    at: [pos(&pc, at[0]), pos(&pc, at[1])],
                }
            }
            Node::Plus { premise, side, other, at, .. } => {
                let pc = premise.concl();
                let arg = formula_at(&pc, *at);
                let (a, b) = match side {
                    Side::Left => (arg, other.clone()),
                    Side::Right => (other.clone(), arg),
                };
                Proof::Plus { premise: Box::new(premise.to_proof()), side: *side, a, b, at: pos(&pc, *at) }
            }
            Node::With { left, right, at, context, superpose, weight, .. } => {
                let (lc, rc) = (left.concl(), right.concl());
                let partner: BTreeMap<Label, Label> = context.iter().map(|[x, y]| (*x, *y)).collect();
                let ctx = lc.iter().filter(|(l, _)| *l != at[0]).map(|(l, _)| pos(&rc, partner[l])).collect();
                let (lcuts, rcuts) = (left.cuts(), right.cuts());
                let find = |cs: &[CutRef], c: CutRef| cs.iter().position(|x| *x == c).expect("superposed cut present");
                Proof::With {
                    left: Box::new(left.to_proof()),
                    right: Box::new(right.to_proof()),
                    a: formula_at(&lc, at[0]),
                    b: formula_at(&rc, at[1]),
                    at: [pos(&lc, at[0]), pos(&rc, at[1])],
                    context: ctx,
                    superpose: superpose.iter().map(|[x, y]| [find(&lcuts, *x), find(&rcuts, *y)]).collect(),
                    weight: *weight,
                }
            }
        }
    }
}

/// The kinds of reduction step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum StepKind {
    /// A cut against an axiom.
    AxCut,
    /// `⊗` against `⅋`: the cut splits in two.
    KeyTensorPar,
    /// `&` against `⊕`: the unused branch is discarded.
    KeyWithPlus,
    /// Commuting a cut above a `&`, with the two copies of the cut superposed.
    CommuteWithSuperposed,
    /// Commuting a cut above a `&`, with two separate copies of the cut.
    CommuteWithDuplicating,
    /// Commuting a cut above `⊗`, `⅋` or `⊕`.
    CommuteOther,
    /// Separating a superposed cut into one cut per premise of its `&`.
    Unsuperpose,
}

impl StepKind {
    pub fn name(self) -> &'static str {
        match self {
            StepKind::AxCut => "ax-cut",
            StepKind::KeyTensorPar => "key-tensor-par",
            StepKind::KeyWithPlus => "key-with-plus",
            StepKind::CommuteWithSuperposed => "commute-with-superposed",
            StepKind::CommuteWithDuplicating => "commute-with-duplicating",
            StepKind::CommuteOther => "commute-other",
            StepKind::Unsuperpose => "unsuperpose",
        }
    }
}

/// How a cut is pushed above a `&` that does not introduce the cut formula.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum CommuteMode {
    /// Both copies of the cut are superposed by the `&`; the hom is the identity.
    Superposed,
    /// The copies are separate cuts with renamed eigenweights; the hom is the
    /// co-contraction `X ↦ a·X¹ + ā·X²`.
    #[default]
    Duplicating,
}

/// Which cut is reduced first. Only cuts whose premises are cut-free are
/// candidates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum RedexOrder {
    #[default]
    Leftmost,
    Rightmost,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Strategy {
    pub redex: RedexOrder,
    pub commute: CommuteMode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub kind: StepKind,
    /// Premise indices from the root to the reduced cut (or the `&` being
    /// unsuperposed).
    pub path: Vec<usize>,
    /// The cut formula, as it occurs in the left premise of the cut.
    pub cut: String,
    #[serde(serialize_with = "ser_hom")]
    pub hom: RingHom,
}

fn ser_hom<S: serde::Serializer>(d: &RingHom, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(None)?;
    for (l, p) in d.entries() {
        m.serialize_entry(&l.to_string(), &p.to_string())?;
    }
    m.end()
}

/// One proof of a trace with the labels of its conclusions, which identify
/// conclusion occurrences across the trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceProof {
    pub proof: Proof,
    pub keys: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub initial: TraceProof,
    pub steps: Vec<(TraceProof, ReductionStep)>,
    /// `d_n ∘ … ∘ d_1`.
    pub composite: RingHom,
}

impl ReductionTrace {
    pub fn normal_form(&self) -> &Proof {
        self.steps.last().map(|(p, _)| &p.proof).unwrap_or(&self.initial.proof)
    }

    /// All proofs of the trace, the initial one first.
    pub fn proofs(&self) -> Vec<&TraceProof> {
        std::iter::once(&self.initial).chain(self.steps.iter().map(|(p, _)| p)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "initial": print_proof(&self.initial.proof),
            "steps": self.steps.iter().map(|(p, s)| serde_json::json!({
                "kind": s.kind.name(),
                "path": s.path,
                "cut": s.cut,
                "hom": serde_json::to_value(s).unwrap()["hom"].clone(),
                "proof": print_proof(&p.proof),
            })).collect::<Vec<_>>(),
            "composite": self.composite.entries().map(|(l, p)| (l.to_string(), p.to_string())).collect::<BTreeMap<_, _>>(),
            "normal_form": print_proof(self.normal_form()),
        })
    }
}

/// Rewriting state: the labelled proof and fresh-name supply.
struct State {
    root: Node,
    fresh: Fresh,
}

impl State {
    fn new(p: &Proof) -> Self {
        let mut fresh = Fresh(0);
        let (root, _, _) = Node::from_proof(p, &mut fresh);
        State { root, fresh }
    }

    fn snapshot(&self) -> TraceProof {
        TraceProof { proof: self.root.to_proof(), keys: self.root.labels() }
    }
}

/// Leftmost (or rightmost) cut whose premises are cut-free.
fn find_redex(n: &Node, order: RedexOrder, path: &mut Vec<usize>) -> bool {
    let prems = n.premises();
    let idx: Vec<usize> = match order {
        RedexOrder::Leftmost => (0..prems.len()).collect(),
        RedexOrder::Rightmost => (0..prems.len()).rev().collect(),
    };
    for k in idx {
        path.push(k);
        if find_redex(prems[k], order, path) {
            return true;
        }
        path.pop();
    }
    matches!(n, Node::Cut { .. }) && prems.iter().all(|p| p.is_cut_free())
}

/// The outermost `&` on the way to the cut at `path` that superposes it:
/// its path and the index of the superposed pair.
fn outer_superposition(root: &Node, path: &[usize]) -> Option<(usize, usize)> {
    let Node::Cut { at, .. } = root.at_path(path) else { return None };
    let mut rep = *at;
    let mut found = None;
    for depth in (0..path.len()).rev() {
        if let Node::With { superpose, .. } = root.at_path(&path[..depth]) {
            let side = path[depth];
            if let Some(k) = superpose.iter().position(|pair| pair[side] == rep) {
                found = Some((depth, k));
                rep = superpose[k][0];
            }
        }
    }
    found
}

fn co_contraction(pairs: &[(EigenweightId, EigenweightId)], w: EigenweightId) -> RingHom {
    let (a, abar) = (Poly::literal(w.pos()), Poly::literal(w.neg()));
    let mut d = RingHom::identity();
    for (old, new) in pairs {
        for (lo, ln) in old.literals().into_iter().zip(new.literals()) {
            d.set(lo, a.mul(&Poly::literal(lo)).add(&abar.mul(&Poly::literal(ln))));
        }
    }
    d
}

/// Renames the given weights to fresh ones inside `n`.
fn rename_weights(n: &mut Node, ws: &BTreeSet<EigenweightId>, base: u32) -> Vec<(EigenweightId, EigenweightId)> {
    let pairs: Vec<(EigenweightId, EigenweightId)> =
        ws.iter().enumerate().map(|(k, w)| (*w, EigenweightId(base + k as u32 + 1))).collect();
    let map: BTreeMap<EigenweightId, EigenweightId> = pairs.iter().copied().collect();
    n.map_weights(&|w| map.get(&w).copied().unwrap_or(w));
    pairs
}

fn cut_formula(n: &Node) -> String {
    match n {
        Node::Cut { left, at, .. } => formula_at(&left.concl(), at[0]).to_string(),
        _ => String::new(),
    }
}

fn find_cut_formula(n: &Node, c: CutRef) -> Option<String> {
    if let Node::Cut { left, at, .. } = n {
        if *at == c {
            return Some(formula_at(&left.concl(), at[0]).to_string());
        }
    }
    n.premises().into_iter().find_map(|p| find_cut_formula(p, c))
}

/// Performs one step; `None` when the proof is cut-free.
fn step(st: &mut State, strategy: Strategy) -> Result<Option<ReductionStep>, RewriteError> {
    let mut path = Vec::new();
    if !find_redex(&st.root, strategy.redex, &mut path) {
        return Ok(None);
    }
    let taken = st.root.max_weight();
    if let Some((depth, k)) = outer_superposition(&st.root, &path) {
        let wpath = path[..depth].to_vec();
        let w = st.root.at_path_mut(&wpath);
        let Node::With { right, superpose, weight, .. } = w else { unreachable!() };
        let weight = (*weight).ok_or(RewriteError::MissingWeight)?;
        let [lid, rid] = superpose.remove(k);
        let ws = right.cut_weights(rid);
        let pairs = rename_weights(right, &ws, taken);
        let cut = find_cut_formula(st.root.at_path(&wpath), lid).unwrap_or_default();
        return Ok(Some(ReductionStep {
            kind: StepKind::Unsuperpose,
            path: wpath,
            cut,
            hom: co_contraction(&pairs, weight),
        }));
    }
    let cut = cut_formula(st.root.at_path(&path));
    let node = st.root.at_path(&path).clone();
    let Node::Cut { left, right, at } = node else { unreachable!() };
    let (kind, hom, replacement) = reduce_cut(*left, *right, at, strategy, taken, &mut st.fresh)?;
    *st.root.at_path_mut(&path) = replacement;
    Ok(Some(ReductionStep { kind, path, cut, hom }))
}

/// Rebuilds a cut with the premises in their original orientation.
fn cut_node(s: Node, t: Node, s_label: Label, t_label: Label, s_is_left: bool) -> Node {
    if s_is_left {
        Node::Cut { left: Box::new(s), right: Box::new(t), at: [s_label, t_label] }
    } else {
        Node::Cut { left: Box::new(t), right: Box::new(s), at: [t_label, s_label] }
    }
}

fn reduce_cut(
    left: Node,
    right: Node,
    at: [Label; 2],
    strategy: Strategy,
    taken: u32,
    fresh: &mut Fresh,
) -> Result<(StepKind, RingHom, Node), RewriteError> {
    // Axiom: the other premise takes the axiom's remaining occurrence.
    for (ax, other, l, o) in [(&left, &right, at[0], at[1]), (&right, &left, at[1], at[0])] {
        if let Node::Ax { out, .. } = ax {
            let keep = if out[0] == l { out[1] } else { out[0] };
            let mut q = other.clone();
            q.map_labels(&|x| if x == o { keep } else { x });
            return Ok((StepKind::AxCut, RingHom::identity(), q));
        }
    }
    let l_principal = left.principal().contains(&at[0]);
    let r_principal = right.principal().contains(&at[1]);
    if !l_principal {
        return commute(left, right, at[0], at[1], true, strategy, taken, fresh);
    }
    if !r_principal {
        return commute(right, left, at[1], at[0], false, strategy, taken, fresh);
    }
    match (left, right) {
        (t @ Node::Tensor { .. }, p @ Node::Par { .. }) | (p @ Node::Par { .. }, t @ Node::Tensor { .. }) => {
            let (Node::Tensor { left: t1, right: t2, at: ta, .. }, Node::Par { premise, at: pa, .. }) = (t, p) else {
                unreachable!()
            };
            let inner = Node::Cut { left: t2, right: premise, at: [ta[1], pa[1]] };
            Ok((
                StepKind::KeyTensorPar,
                RingHom::identity(),
                Node::Cut { left: t1, right: Box::new(inner), at: [ta[0], pa[0]] },
            ))
        }
        (w @ Node::With { .. }, p @ Node::Plus { .. }) => key_with_plus(w, p, true),
        (p @ Node::Plus { .. }, w @ Node::With { .. }) => key_with_plus(w, p, false),
        (l, r) => unreachable!("principal cut between {:?} and {:?}", l.principal(), r.principal()),
    }
}

fn key_with_plus(w: Node, p: Node, with_left: bool) -> Result<(StepKind, RingHom, Node), RewriteError> {
    let Node::With { left, right, at, context, weight, .. } = w else { unreachable!() };
    let Node::Plus { premise, side, at: pat, .. } = p else { unreachable!() };
    let weight = weight.ok_or(RewriteError::MissingWeight)?;
    let (live, dead, live_at, dead_at, one, zero) = match side {
        Side::Left => (*left, *right, at[0], at[1], weight.pos(), weight.neg()),
        Side::Right => (*right, *left, at[1], at[0], weight.neg(), weight.pos()),
    };
    let mut d = RingHom::identity().with(one, Poly::one()).with(zero, Poly::zero());
    for v in dead.weights_in(dead_at) {
        for l in v.literals() {
            d.set(l, Poly::zero());
        }
    }
    let mut live = live;
    if side == Side::Right {
        // The right premise's context takes the names used below the `&`.
        let back: BTreeMap<Label, Label> = context.iter().map(|[x, y]| (*y, *x)).collect();
        live.map_labels(&|x| back.get(&x).copied().unwrap_or(x));
    }
    let node = if with_left {
        Node::Cut { left: Box::new(live), right: premise, at: [live_at, pat] }
    } else {
        Node::Cut { left: premise, right: Box::new(live), at: [pat, live_at] }
    };
    Ok((StepKind::KeyWithPlus, d, node))
}

/// Pushes the cut between `s` (whose last rule does not touch `s_label`) and
/// `t` above the last rule of `s`.
#[allow(clippy::too_many_arguments)]
fn commute(
    s: Node,
    t: Node,
    s_label: Label,
    t_label: Label,
    s_is_left: bool,
    strategy: Strategy,
    taken: u32,
    fresh: &mut Fresh,
) -> Result<(StepKind, RingHom, Node), RewriteError> {
    let id = RingHom::identity();
    let node = match s {
        Node::Tensor { left, right, at, out } => {
            if left.has(s_label) {
                let c = cut_node(*left, t, s_label, t_label, s_is_left);
                Node::Tensor { left: Box::new(c), right, at, out }
            } else {
                let c = cut_node(*right, t, s_label, t_label, s_is_left);
                Node::Tensor { left, right: Box::new(c), at, out }
            }
        }
        Node::Par { premise, at, out } => {
            Node::Par { premise: Box::new(cut_node(*premise, t, s_label, t_label, s_is_left)), at, out }
        }
        Node::Plus { premise, side, other, at, out } => {
            Node::Plus { premise: Box::new(cut_node(*premise, t, s_label, t_label, s_is_left)), side, other, at, out }
        }
        Node::With { left, right, at, out, mut context, mut superpose, weight } => {
            let w = weight.ok_or(RewriteError::MissingWeight)?;
            let s_right = context.iter().find(|[x, _]| *x == s_label).expect("cut formula is in the with context")[1];
            context.retain(|[x, _]| *x != s_label);
            let (mut t2, names) = t.fresh_copy(fresh);
            let t2_label = names[&t_label];
            for l in t.labels() {
                if l != t_label {
                    context.push([l, names[&l]]);
                }
            }
            let mut right = *right;
            let (kind, hom) = match strategy.commute {
                CommuteMode::Superposed => (StepKind::CommuteWithSuperposed, id.clone()),
                CommuteMode::Duplicating => {
                    let mut pairs = rename_weights(&mut t2, &t.weights_in(t_label), taken);
                    let base = taken + pairs.len() as u32;
                    let ws = right.weights_in(s_right);
                    pairs.extend(rename_weights(&mut right, &ws, base));
                    (StepKind::CommuteWithDuplicating, co_contraction(&pairs, w))
                }
            };
            let c1 = cut_node(*left, t, s_label, t_label, s_is_left);
            let c2 = cut_node(right, t2, s_right, t2_label, s_is_left);
            let (Node::Cut { at: r1, .. }, Node::Cut { at: r2, .. }) = (&c1, &c2) else { unreachable!() };
            if kind == StepKind::CommuteWithSuperposed {
                superpose.push([*r1, *r2]);
            }
            let node = Node::With { left: Box::new(c1), right: Box::new(c2), at, out, context, superpose, weight };
            return Ok((kind, hom, node));
        }
        Node::Ax { .. } | Node::Cut { .. } => unreachable!("commuting into an axiom or a cut"),
    };
    Ok((StepKind::CommuteOther, id, node))
}

/// One reduction step on a plain proof. Returns `None` for cut-free proofs.
pub fn reduce_step(p: &Proof, strategy: Strategy) -> Result<Option<(Proof, ReductionStep)>, RewriteError> {
    let p = ensure_eigenweights(p)?;
    check_proof(&p)?;
    let mut st = State::new(&p);
    match step(&mut st, strategy)? {
        None => Ok(None),
        Some(s) => {
            let q = st.root.to_proof();
            check_proof(&q).map_err(|error| RewriteError::IllFormedStep { step: 0, error })?;
            Ok(Some((q, s)))
        }
    }
}

/// Reduces to cut-free form, recording every step and composing the homs.
pub fn normalize(p: &Proof, strategy: Strategy, step_bound: usize) -> Result<ReductionTrace, RewriteError> {
    let p = ensure_eigenweights(p)?;
    check_proof(&p)?;
    let mut st = State::new(&p);
    let initial = st.snapshot();
    let mut steps = Vec::new();
    let mut composite = RingHom::identity();
    while let Some(s) = step(&mut st, strategy)? {
        if steps.len() >= step_bound {
            return Err(RewriteError::StepBoundExceeded(step_bound));
        }
        let snap = st.snapshot();
        check_proof(&snap.proof).map_err(|error| RewriteError::IllFormedStep { step: steps.len(), error })?;
        composite = s.hom.compose(&composite);
        steps.push((snap, s));
    }
    Ok(ReductionTrace { initial, steps, composite })
}

/// `M ↪⁰ N`: `M` restricted to the occurrences of `N` equals `N`, and every
/// other entry of `M` vanishes. Occurrences are matched by identity, so the
/// order of either index is irrelevant.
pub fn embeds_mod_zero(m: &FMatrix, n: &FMatrix, mode: &ReductionMode) -> bool {
    let nocc: BTreeSet<OccId> = n.index.all().into_iter().collect();
    if !nocc.iter().all(|o| m.index.contains(*o)) {
        return false;
    }
    for (r, c, v) in m.entries() {
        let inside = nocc.contains(&r) && nocc.contains(&c);
        if !inside && !mode.is_zero(v) {
            return false;
        }
    }
    for &r in &nocc {
        for &c in &nocc {
            if !mode.equal(&m.get(r, c), &n.get(r, c)) {
                return false;
            }
        }
    }
    true
}

/// A proof of a trace with its interpretation and quasi-execution.
struct Stage {
    checked: CheckedProof,
    keys: Vec<u32>,
    u: FMatrix,
    qex: FMatrix,
}

fn stage(tp: &TraceProof, mode: &ReductionMode, bound: usize) -> Result<Stage, RewriteError> {
    let checked = check_proof(&tp.proof)?;
    let u = interpret_checked(&checked)?;
    let qex = qexec(&sigma(&u.index), &u, mode, ExecOptions::bound(bound))?.matrix;
    Ok(Stage { checked, keys: tp.keys.clone(), u, qex })
}

/// Moves a conclusion-indexed matrix of `from` onto the occurrences of `to`.
fn transport(m: &FMatrix, from: &Stage, to: &Stage) -> FMatrix {
    let by_key: BTreeMap<u32, OccId> =
        to.keys.iter().copied().zip(to.checked.sequent.conclusion.iter().copied()).collect();
    let map: BTreeMap<OccId, OccId> =
        from.checked.sequent.conclusion.iter().zip(&from.keys).map(|(o, k)| (*o, by_key[k])).collect();
    m.relabel(|o| map[&o], Index::new(vec![], to.checked.sequent.conclusion.clone()))
}

fn render_difference(a: &FMatrix, b: &FMatrix, mode: &ReductionMode, s: &CheckedProof) -> Option<Mismatch> {
    a.first_difference(b, mode).map(|(r, c)| Mismatch {
        row: s.sequent.render(r),
        col: s.sequent.render(c),
        got: mode.reduce_elem(&a.get(r, c)).to_string(),
        want: mode.reduce_elem(&b.get(r, c)).to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub row: String,
    pub col: String,
    pub got: String,
    pub want: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepCheck {
    pub index: usize,
    pub kind: StepKind,
    pub mismatch: Option<Mismatch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub steps: Vec<StepCheck>,
    /// `Ex(composite, σ, ⟦π⟧)` against the normal form's interpretation.
    pub end_to_end: Option<Mismatch>,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.end_to_end.is_none() && self.steps.iter().all(|s| s.mismatch.is_none())
    }
}

/// Checks `d(qEx(σ_Δ, ⟦π⟧)) = qEx(σ_Δ', ⟦π'⟧)` in `ℂ₊ₓ` for every step, and
/// that the composite hom executes the initial proof to the normal form.
pub fn verify_invariance_external(trace: &ReductionTrace, bound: usize) -> Result<InvarianceReport, RewriteError> {
    let mode = ReductionMode::cplustimes();
    let stages: Vec<Stage> = trace.proofs().into_iter().map(|tp| stage(tp, &mode, bound)).collect::<Result<_, _>>()?;
    let mut steps = Vec::new();
    for (k, (_, s)) in trace.steps.iter().enumerate() {
        let (pre, post) = (&stages[k], &stages[k + 1]);
        let moved = transport(&pre.qex.apply_hom(&s.hom).reduce(&mode), pre, post);
        let mismatch = if embeds_mod_zero(&moved, &post.qex, &mode) {
            None
        } else {
            render_difference(&moved, &post.qex, &mode, &post.checked)
        };
        steps.push(StepCheck { index: k, kind: s.kind, mismatch });
    }
    let first = &stages[0];
    let last = stages.last().unwrap();
    let ex = first.qex.apply_hom(&trace.composite).reduce(&mode);
    let normal = interpret_checked(&last.checked)?;
    let end_to_end = render_difference(&transport(&ex, first, last), &normal, &mode, &last.checked);
    Ok(InvarianceReport { steps, end_to_end })
}

/// Weights of `&` rules with a cut somewhere above them.
fn weights_over_cuts(p: &Proof, out: &mut BTreeSet<EigenweightId>) {
    if let Proof::With { weight: Some(w), .. } = p {
        if !p.is_cut_free() {
            out.insert(*w);
        }
    }
    for q in p.premises() {
        weights_over_cuts(q, out);
    }
}

/// How a weight's two literals are sent by a candidate solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum WeightChoice {
    Keep,
    Ones,
    Zeros,
}

fn choices(ws: &[EigenweightId], opts: &[WeightChoice], cap: usize) -> Vec<Vec<(EigenweightId, WeightChoice)>> {
    let ws = &ws[..ws.len().min(cap)];
    let mut out = vec![vec![]];
    for &w in ws {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<(EigenweightId, WeightChoice)>| {
                opts.iter().map(move |&o| {
                    let mut v = prefix.clone();
                    v.push((w, o));
                    v
                })
            })
            .collect();
    }
    // Fewest changes first.
    out.sort_by_key(|v| v.iter().filter(|(_, o)| *o != WeightChoice::Keep).count());
    out
}

fn apply_choices(base: &RingHom, cs: &[(EigenweightId, WeightChoice)]) -> RingHom {
    let mut d = base.clone();
    for &(w, o) in cs {
        let image = match o {
            WeightChoice::Keep => continue,
            WeightChoice::Ones => Poly::one(),
            WeightChoice::Zeros => Poly::zero(),
        };
        for l in w.literals() {
            d.set(l, image.clone());
        }
    }
    d
}

/// Rewrites `a·m + ā·m` to `m` until no such pair is left.
fn merge_complements(p: &Poly) -> Poly {
    let find = |p: &Poly| -> Option<[Monomial; 3]> {
        for m in p.monomials() {
            for (l, k) in m.powers().filter(|(l, _)| l.is_pos()) {
                let swap = |x: Literal| if x == l { l.complement() } else { x };
                let partner = Monomial::from_powers(m.powers().map(|(x, j)| (swap(x), j)));
                if partner.exponent(l.complement()) == k && p.monomials().any(|n| *n == partner) {
                    let rest = Monomial::from_powers(m.powers().filter(|(x, _)| *x != l));
                    return Some([m.clone(), partner, rest]);
                }
            }
        }
        None
    };
    let mut p = p.clone();
    while let Some(ms) = find(&p) {
        for m in ms {
            p.toggle(m);
        }
    }
    p
}

/// `d_cut(qEx(σ_Δ, U))` in `ℂ₊ₓ`. When `d_cut` sends both literals of some
/// weight to 1 it does not respect `ā = 1 + a`, so the quasi-execution is
/// then taken modulo `a² = a` and `aā = 0` alone, keeping `ā` as a literal,
/// and only `a·m + ā·m = m` is used before applying `d_cut`.
fn cut_image(u: &FMatrix, d_cut: &RingHom, ones: &BTreeSet<EigenweightId>, bound: usize) -> Result<FMatrix, ExecError> {
    let cpx = ReductionMode::cplustimes();
    if ones.is_empty() {
        return Ok(qexec(&sigma(&u.index), u, &cpx, ExecOptions::bound(bound))?.matrix.apply_hom(d_cut).reduce(&cpx));
    }
    let mut mode = ReductionMode::idempotent_only();
    for w in u.literals().into_iter().map(|l| l.weight).collect::<BTreeSet<_>>() {
        mode = mode.with_annihilated(w.pos(), w.neg()).expect("distinct literals");
    }
    let q = qexec(&sigma(&u.index), u, &mode, ExecOptions::bound(bound))?.matrix;
    Ok(q.map(|x| x.map_coefficients(merge_complements)).apply_hom(d_cut).reduce(&cpx))
}

/// Searches for a solution of `sys` whose cut part executes `U` like
/// `d_delta` does.
///
/// Candidates start from `d_delta` on the cut literals and the identity on the
/// conclusion literals. A cut weight may instead send both literals to 1; a
/// conclusion weight may send both to 1 or both to 0. Candidates with fewer
/// changes are tried first.
pub fn complete_solution(
    c: &CheckedProof,
    sys: &EqSystem,
    u: &FMatrix,
    d_delta: &RingHom,
    bound: usize,
) -> Result<Solution, SolveError> {
    let delta = c.sequent.cut_literals();
    let gamma = c.sequent.conclusion_literals();
    let base = d_delta.restrict(&delta);
    let target = cut_image(u, &base, &BTreeSet::new(), bound).map_err(RewriteError::from)?;
    let weights = |ls: &BTreeSet<Literal>| -> Vec<EigenweightId> {
        ls.iter().map(|l| l.weight).collect::<BTreeSet<_>>().into_iter().collect()
    };
    let mut over = BTreeSet::new();
    weights_over_cuts(&c.proof, &mut over);
    let mut gamma_weights = weights(&gamma);
    gamma_weights.sort_by_key(|w| !over.contains(w));
    let used = sys.literals();
    let free: BTreeSet<Literal> = delta.iter().chain(&gamma).filter(|l| !used.contains(l)).copied().collect();
    let gamma_choices = choices(&gamma_weights, &[WeightChoice::Keep, WeightChoice::Ones, WeightChoice::Zeros], 8);
    let mut last: Option<MonEq> = None;
    for dc in choices(&weights(&delta), &[WeightChoice::Keep, WeightChoice::Ones], 10) {
        let d_cut = apply_choices(&base, &dc);
        let ones: BTreeSet<EigenweightId> =
            dc.iter().filter(|(_, o)| *o == WeightChoice::Ones).map(|(w, _)| *w).collect();
        if !ones.is_empty() {
            match cut_image(u, &d_cut, &ones, bound) {
                Ok(m) if m.equal_mod(&target, &ReductionMode::cplustimes()) => {}
                _ => continue,
            }
        }
        for gc in &gamma_choices {
            let d = apply_choices(&d_cut, gc);
            match check_solution(sys, &d) {
                Ok(()) => return Ok(Solution { hom: d, free }),
                Err(e) => last = Some(e),
            }
        }
    }
    Err(SolveError::Unsolved(last.map(|e| e.to_string()).unwrap_or_default()))
}

/// A solution of `eq(σ_Δ, ⟦π⟧)` whose cut part executes `π` to its normal
/// form. The search of [`complete_solution`] starts from the composite hom of
/// a normalization of `π`.
pub fn solve(p: &Proof) -> Result<Solution, SolveError> {
    let p = ensure_eigenweights(p).map_err(RewriteError::from)?;
    let trace = normalize(&p, Strategy::default(), DEFAULT_STEP_BOUND)?;
    let mode = ReductionMode::cplustimes();
    let st = stage(&trace.initial, &mode, crate::exec::DEFAULT_BOUND)?;
    let sys = proof_system(&st.checked)?;
    complete_solution(&st.checked, &sys, &st.u, &trace.composite, crate::exec::DEFAULT_BOUND)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutonomousStep {
    pub index: usize,
    pub kind: StepKind,
    /// The first equation a constructed solution fails, if any.
    pub unsolved: Option<String>,
    pub mismatch: Option<Mismatch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutonomousReport {
    pub steps: Vec<AutonomousStep>,
    /// The solution of the initial proof against the normal form.
    pub end_to_end: Option<Mismatch>,
}

impl AutonomousReport {
    pub fn passed(&self) -> bool {
        self.end_to_end.is_none() && self.steps.iter().all(|s| s.unsolved.is_none() && s.mismatch.is_none())
    }
}

/// For every step `π → π'`, builds solutions `d` of `eq(σ_Δ, ⟦π⟧)` and `d'` of
/// `eq(σ_Δ', ⟦π'⟧)` from the remaining steps of the trace, checks both, and
/// compares `d_Δ(qEx(σ_Δ, ⟦π⟧))` with `d'_Δ'(qEx(σ_Δ', ⟦π'⟧))` in `ℂ₊ₓ`.
pub fn verify_invariance_autonomous(trace: &ReductionTrace, bound: usize) -> Result<AutonomousReport, RewriteError> {
    let mode = ReductionMode::cplustimes();
    let stages: Vec<Stage> = trace.proofs().into_iter().map(|tp| stage(tp, &mode, bound)).collect::<Result<_, _>>()?;
    // Suffix composites: rest[k] sends the cut literals of proof k to the end.
    let mut rest = vec![RingHom::identity(); stages.len()];
    for k in (0..trace.steps.len()).rev() {
        rest[k] = rest[k + 1].compose(&trace.steps[k].1.hom);
    }
    let mut sols = Vec::new();
    for (k, st) in stages.iter().enumerate() {
        let sys = proof_system(&st.checked)?;
        let delta = st.checked.sequent.cut_literals();
        let (unsolved, d_delta) = match complete_solution(&st.checked, &sys, &st.u, &rest[k], bound) {
            Ok(sol) => (None, sol.delta_part(&delta)),
            Err(e) => (Some(e.to_string()), rest[k].restrict(&delta)),
        };
        let ones: BTreeSet<EigenweightId> = delta
            .iter()
            .map(|l| l.weight)
            .filter(|w| w.literals().iter().all(|l| d_delta.image(*l) == Poly::one()))
            .collect();
        let image = cut_image(&st.u, &d_delta, &ones, bound)?;
        sols.push((unsolved, image));
    }
    let mut steps = Vec::new();
    for (k, (_, s)) in trace.steps.iter().enumerate() {
        let moved = transport(&sols[k].1, &stages[k], &stages[k + 1]);
        let mismatch = render_difference(&moved, &sols[k + 1].1, &mode, &stages[k + 1].checked);
        let unsolved = sols[k].0.clone().or_else(|| sols[k + 1].0.clone());
        steps.push(AutonomousStep { index: k, kind: s.kind, unsolved, mismatch });
    }
    let last = stages.last().unwrap();
    let normal = interpret_checked(&last.checked)?;
    let end_to_end = render_difference(&transport(&sols[0].1, &stages[0], last), &normal, &mode, &last.checked);
    Ok(AutonomousReport { steps, end_to_end })
}

/// Both sides of the superposition identity for `qEx` under co-contraction.
///
/// `f` is indexed by `Δ, Γ, A1` and `g` by `Δ, Γ, A2`, sharing the cut pairs
/// `Δ` and the occurrences `Γ`; `a` is the eigenweight of the superposition
/// into `A1 & A2` placed at `target`. `copy` renames the occurrences of `Δ`
/// for the second copy and `fresh` the eigenweights of `delta_weights` (the
/// weights inside `Δ`). The left side is `d(qEx(σ_Δ, S[f, g]))` with
/// `d = a·J¹ + ā·J²`; the right side executes the superposition of `f` and the
/// renamed `g` over the doubled cut list. Both are compared in `ℂ₊` with `aā = 0`.
#[allow(clippy::too_many_arguments)]
pub fn superposition_instance(
    f: &FMatrix,
    g: &FMatrix,
    a1: OccId,
    a2: OccId,
    target: OccId,
    a: EigenweightId,
    copy: &BTreeMap<OccId, OccId>,
    fresh: &BTreeMap<EigenweightId, EigenweightId>,
    bound: usize,
) -> Result<bool, RewriteError> {
    let delta_pairs = f.index.cuts.clone();
    let gamma: Vec<OccId> = f.index.concl.iter().copied().filter(|o| *o != a1).chain([target]).collect();
    let mode = ReductionMode::cplus().with_idempotent(a.pos());
    // Left: one shared cut list.
    let s = superpose_S(f, g, Index::new(delta_pairs.clone(), gamma.clone()), a1, a2, target, a)?;
    let pairs: Vec<(EigenweightId, EigenweightId)> = fresh.iter().map(|(x, y)| (*x, *y)).collect();
    let d = co_contraction(&pairs, a);
    let lhs = qexec(&PartialSymmetry::new(delta_pairs.clone()), &s, &mode, ExecOptions::bound(bound))?
        .matrix
        .apply_hom(&d)
        .reduce(&mode);
    // Right: the second copy gets its own cut pairs and weights.
    let rename_w = RingHom::from_map(
        fresh.iter().flat_map(|(x, y)| x.literals().into_iter().zip(y.literals()).map(|(l, m)| (l, Poly::literal(m)))),
    );
    let mv = |o: OccId| copy.get(&o).copied().unwrap_or(o);
    let g_cuts: Vec<[OccId; 2]> = g.index.cuts.iter().map(|c| c.map(mv)).collect();
    let g2 = g.relabel(mv, Index::new(g_cuts.clone(), g.index.concl.clone())).apply_hom(&rename_w);
    let cuts: Vec<[OccId; 2]> = delta_pairs.iter().copied().chain(g_cuts).collect();
    let s2 = superpose_S(f, &g2, Index::new(cuts.clone(), gamma), a1, a2, target, a)?;
    let rhs = qexec(&PartialSymmetry::new(cuts), &s2, &mode, ExecOptions::bound(bound))?.matrix.reduce(&mode);
    Ok(lhs.equal_mod(&rhs, &mode))
}
