//! Rule checking, occurrence identity and eigenweight bookkeeping.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::formula::{Connective, Formula};
use super::proof::{Proof, RuleKind, Side};
use crate::algebra::{EigenweightId, Literal};

/// Identity of a formula occurrence: a node of the root sequent's formula
/// forest, numbered by a preorder walk (cut pairs first, then the conclusion).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OccId(pub u32);

impl fmt::Display for OccId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Premise indices from the root down to a rule instance.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodePath(pub Vec<usize>);

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for i in &self.0 {
            write!(f, ".{i}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("rule mismatch at {node}: {reason}")]
    RuleMismatch { node: NodePath, reason: String },
    #[error("dangling occurrence at {node}: no `{formula}` at position {position}")]
    DanglingOccurrence { node: NodePath, formula: Formula, position: usize },
    #[error("duality violation at {node}: `{formula}` is not cut against its dual")]
    DualityViolation { node: NodePath, formula: Formula },
    #[error("eigenweight clash at {node}: {reason}")]
    WeightClash { node: NodePath, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OccNode {
    pub formula: Formula,
    pub parent: Option<OccId>,
    pub children: Option<[OccId; 2]>,
    pub weight: Option<EigenweightId>,
}

/// `⊢ [Δ], Γ` over an arena of occurrences.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sequent {
    pub cuts: Vec<[OccId; 2]>,
    pub conclusion: Vec<OccId>,
    pub nodes: Vec<OccNode>,
}

impl Sequent {
    /// Builds the occurrence forest of a sequent, without eigenweights.
    pub fn from_shape(cuts: &[(Formula, Formula)], concl: &[Formula]) -> Sequent {
        let mut s = Sequent { cuts: Vec::new(), conclusion: Vec::new(), nodes: Vec::new() };
        for (l, r) in cuts {
            let a = s.push_tree(l, None);
            let b = s.push_tree(r, None);
            s.cuts.push([a, b]);
        }
        for f in concl {
            let a = s.push_tree(f, None);
            s.conclusion.push(a);
        }
        s
    }

    fn push_tree(&mut self, f: &Formula, parent: Option<OccId>) -> OccId {
        let id = OccId(self.nodes.len() as u32);
        self.nodes.push(OccNode { formula: f.clone(), parent, children: None, weight: None });
        if let Some((_, l, r)) = f.split() {
            let a = self.push_tree(l, Some(id));
            let b = self.push_tree(r, Some(id));
            self.nodes[id.0 as usize].children = Some([a, b]);
        }
        id
    }

    pub fn node(&self, o: OccId) -> &OccNode {
        &self.nodes[o.0 as usize]
    }

    pub fn formula(&self, o: OccId) -> &Formula {
        &self.node(o).formula
    }

    pub fn child(&self, o: OccId, side: Side) -> OccId {
        let c = self.node(o).children.expect("child of an atom occurrence");
        match side {
            Side::Left => c[0],
            Side::Right => c[1],
        }
    }

    pub fn parent(&self, o: OccId) -> Option<OccId> {
        self.node(o).parent
    }

    pub fn weight(&self, o: OccId) -> Option<EigenweightId> {
        self.node(o).weight
    }

    pub fn occurrences(&self) -> impl Iterator<Item = OccId> {
        (0..self.nodes.len() as u32).map(OccId)
    }

    /// Top-level occurrences: all cut formulas then the conclusion.
    pub fn roots(&self) -> Vec<OccId> {
        self.cuts.iter().flatten().copied().chain(self.conclusion.iter().copied()).collect()
    }

    pub fn root_of(&self, mut o: OccId) -> OccId {
        while let Some(p) = self.parent(o) {
            o = p;
        }
        o
    }

    /// The occurrences of the subtree rooted at `o`, in preorder.
    pub fn subtree(&self, o: OccId) -> Vec<OccId> {
        let mut out = vec![o];
        if let Some([l, r]) = self.node(o).children {
            out.extend(self.subtree(l));
            out.extend(self.subtree(r));
        }
        out
    }

    pub fn is_leaf(&self, o: OccId) -> bool {
        self.node(o).children.is_none()
    }

    pub fn with_occurrences(&self) -> Vec<OccId> {
        self.occurrences().filter(|o| self.formula(*o).connective() == Some(Connective::With)).collect()
    }

    /// `L(o)`: both literals of every `&` in the subtree at `o`.
    pub fn literals_of(&self, o: OccId) -> BTreeSet<Literal> {
        self.subtree(o).into_iter().filter_map(|x| self.weight(x)).flat_map(|w| w.literals()).collect()
    }

    pub fn cut_literals(&self) -> BTreeSet<Literal> {
        self.cuts.iter().flatten().flat_map(|o| self.literals_of(*o)).collect()
    }

    pub fn conclusion_literals(&self) -> BTreeSet<Literal> {
        self.conclusion.iter().flat_map(|o| self.literals_of(*o)).collect()
    }

    pub fn literals(&self) -> BTreeSet<Literal> {
        self.roots().into_iter().flat_map(|o| self.literals_of(o)).collect()
    }

    pub fn weights_assigned(&self) -> bool {
        self.with_occurrences().iter().all(|o| self.weight(*o).is_some())
    }

    /// Renders the formula at `o` with eigenweights, e.g. `~X &a1 ~X`.
    pub fn render(&self, o: OccId) -> String {
        self.render_inner(o, true)
    }

    fn render_inner(&self, o: OccId, top: bool) -> String {
        let n = self.node(o);
        match (n.formula.split(), n.children) {
            (Some((c, _, _)), Some([l, r])) => {
                let sym = match (c, n.weight) {
                    (Connective::With, Some(w)) => format!("&{w}"),
                    _ => c.symbol().to_string(),
                };
                let body = format!("{} {} {}", self.render_inner(l, false), sym, self.render_inner(r, false));
                if top {
                    body
                } else {
                    format!("({body})")
                }
            }
            _ => n.formula.to_string(),
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⊢ [")?;
        for (i, [a, b]) in self.cuts.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{} ⋆ {}", self.render_inner(*a, false), self.render_inner(*b, false))?;
        }
        f.write_str("]")?;
        for o in &self.conclusion {
            write!(f, ", {}", self.render(*o))?;
        }
        Ok(())
    }
}

/// Where a premise occurrence lands in the conclusion of its rule.
#[derive(Clone, Copy, Debug)]
enum Dest {
    Concl(usize),
    Sub(usize, Side),
    Cut(usize, Side),
}

#[derive(Clone, Debug, Default)]
struct PremiseMap {
    concl: Vec<Dest>,
    cuts: Vec<usize>,
}

/// One rule instance of a checked proof, with its sequent expressed in root
/// occurrences.
#[derive(Clone, Debug, Serialize)]
pub struct DerivNode {
    pub kind: RuleKind,
    pub path: NodePath,
    pub premises: Vec<usize>,
    pub cuts: Vec<[OccId; 2]>,
    pub conclusion: Vec<OccId>,
    /// The occurrence introduced by the rule (the atom pair's first formula
    /// for `ax`, the new cut's left formula for `cut`).
    pub principal: OccId,
    pub weight: Option<EigenweightId>,
}

/// A proof together with its conclusion sequent and the occurrence view of
/// every rule instance.
#[derive(Clone, Debug)]
pub struct CheckedProof {
    pub proof: Proof,
    pub sequent: Sequent,
    /// Rule instances in preorder; index 0 is the root.
    pub nodes: Vec<DerivNode>,
}

struct Flat {
    kind: RuleKind,
    path: NodePath,
    premises: Vec<usize>,
    cuts: Vec<(Formula, Formula)>,
    concl: Vec<Formula>,
    maps: Vec<PremiseMap>,
    principal: Dest,
    weight: Option<EigenweightId>,
}

fn mismatch(path: &NodePath, reason: impl Into<String>) -> CheckError {
    CheckError::RuleMismatch { node: path.clone(), reason: reason.into() }
}

fn locate(path: &NodePath, concl: &[Formula], at: usize, f: &Formula) -> Result<(), CheckError> {
    match concl.get(at) {
        None => Err(CheckError::DanglingOccurrence { node: path.clone(), formula: f.clone(), position: at }),
        Some(g) if g != f => Err(mismatch(path, format!("expected `{f}` at position {at}, found `{g}`"))),
        Some(_) => Ok(()),
    }
}

fn flatten(p: &Proof, path: NodePath, out: &mut Vec<Flat>) -> Result<usize, CheckError> {
    let idx = out.len();
    out.push(Flat {
        kind: p.kind(),
        path: path.clone(),
        premises: Vec::new(),
        cuts: Vec::new(),
        concl: Vec::new(),
        maps: Vec::new(),
        principal: Dest::Concl(0),
        weight: None,
    });
    let mut premises = Vec::new();
    for (i, q) in p.premises().into_iter().enumerate() {
        let mut sub = path.0.clone();
        sub.push(i);
        premises.push(flatten(q, NodePath(sub), out)?);
    }
    let prem = |k: usize| &out[premises[k]];
    let (cuts, concl, maps, principal, weight) = match p {
        Proof::Ax { atom } => {
            let x = Formula::Atom(atom.clone());
            (Vec::new(), vec![x.clone(), x.negate()], Vec::new(), Dest::Concl(0), None)
        }
        Proof::Cut { formula, at: [i, j], .. } => {
            let (l, r) = (prem(0), prem(1));
            locate(&path, &l.concl, *i, formula)?;
            let dual = formula.negate();
            match r.concl.get(*j) {
                None => {
                    return Err(CheckError::DanglingOccurrence { node: path, formula: dual, position: *j });
                }
                Some(g) if *g != dual => {
                    return Err(CheckError::DualityViolation { node: path, formula: formula.clone() });
                }
                Some(_) => {}
            }
            let mut cuts = l.cuts.clone();
            cuts.extend(r.cuts.iter().cloned());
            let new_cut = cuts.len();
            cuts.push((formula.clone(), dual));
            let mut concl = Vec::new();
            let mut ml = PremiseMap { cuts: (0..l.cuts.len()).collect(), concl: Vec::new() };
            let mut mr = PremiseMap { cuts: (l.cuts.len()..l.cuts.len() + r.cuts.len()).collect(), concl: Vec::new() };
            for (k, f) in l.concl.iter().enumerate() {
                ml.concl.push(if k == *i {
                    Dest::Cut(new_cut, Side::Left)
                } else {
                    concl.push(f.clone());
                    Dest::Concl(concl.len() - 1)
                });
            }
            for (k, f) in r.concl.iter().enumerate() {
                mr.concl.push(if k == *j {
                    Dest::Cut(new_cut, Side::Right)
                } else {
                    concl.push(f.clone());
                    Dest::Concl(concl.len() - 1)
                });
            }
            (cuts, concl, vec![ml, mr], Dest::Cut(new_cut, Side::Left), None)
        }
        Proof::Tensor { a, b, at: [i, j], .. } => {
            let (l, r) = (prem(0), prem(1));
            locate(&path, &l.concl, *i, a)?;
            locate(&path, &r.concl, *j, b)?;
            let mut cuts = l.cuts.clone();
            cuts.extend(r.cuts.iter().cloned());
            let ml = PremiseMap {
                cuts: (0..l.cuts.len()).collect(),
                concl: (0..l.concl.len())
                    .map(|k| if k == *i { Dest::Sub(*i, Side::Left) } else { Dest::Concl(k) })
                    .collect(),
            };
            let mut concl = l.concl.clone();
            concl[*i] = Formula::tensor(a.clone(), b.clone());
            let mut mr = PremiseMap { cuts: (l.cuts.len()..l.cuts.len() + r.cuts.len()).collect(), concl: Vec::new() };
            for (k, f) in r.concl.iter().enumerate() {
                mr.concl.push(if k == *j {
                    Dest::Sub(*i, Side::Right)
                } else {
                    concl.push(f.clone());
                    Dest::Concl(concl.len() - 1)
                });
            }
            (cuts, concl, vec![ml, mr], Dest::Concl(*i), None)
        }
        Proof::Par { a, b, at: [i, j], .. } => {
            let q = prem(0);
            if i == j {
                return Err(mismatch(&path, "par arguments must be distinct occurrences"));
            }
            locate(&path, &q.concl, *i, a)?;
            locate(&path, &q.concl, *j, b)?;
            let mut concl = Vec::new();
            let mut pos_of = vec![0; q.concl.len()];
            for (k, f) in q.concl.iter().enumerate() {
                if k == *j {
                    continue;
                }
                pos_of[k] = concl.len();
                concl.push(if k == *i { Formula::par(a.clone(), b.clone()) } else { f.clone() });
            }
            let t = pos_of[*i];
            let m = PremiseMap {
                cuts: (0..q.cuts.len()).collect(),
                concl: (0..q.concl.len())
                    .map(|k| {
                        if k == *i {
                            Dest::Sub(t, Side::Left)
                        } else if k == *j {
                            Dest::Sub(t, Side::Right)
                        } else {
                            Dest::Concl(pos_of[k])
                        }
                    })
                    .collect(),
            };
            (q.cuts.clone(), concl, vec![m], Dest::Concl(t), None)
        }
        Proof::Plus { side, a, b, at, .. } => {
            let q = prem(0);
            let arg = match side {
                Side::Left => a,
                Side::Right => b,
            };
            locate(&path, &q.concl, *at, arg)?;
            let mut concl = q.concl.clone();
            concl[*at] = Formula::plus(a.clone(), b.clone());
            let m = PremiseMap {
                cuts: (0..q.cuts.len()).collect(),
                concl: (0..q.concl.len())
                    .map(|k| if k == *at { Dest::Sub(*at, *side) } else { Dest::Concl(k) })
                    .collect(),
            };
            (q.cuts.clone(), concl, vec![m], Dest::Concl(*at), None)
        }
        Proof::With { a, b, at: [i, j], context, superpose, weight, .. } => {
            let (l, r) = (prem(0), prem(1));
            locate(&path, &l.concl, *i, a)?;
            locate(&path, &r.concl, *j, b)?;
            if l.concl.len() != r.concl.len() {
                return Err(mismatch(&path, "with premises have contexts of different lengths"));
            }
            if context.len() + 1 != l.concl.len() {
                return Err(mismatch(&path, "context matching has the wrong length"));
            }
            let mut mr_concl = vec![Dest::Concl(0); r.concl.len()];
            let mut used = vec![false; r.concl.len()];
            used[*j] = true;
            mr_concl[*j] = Dest::Sub(*i, Side::Right);
            let left_ctx = (0..l.concl.len()).filter(|k| k != i);
            for (k, rk) in left_ctx.zip(context.iter()) {
                if *rk >= r.concl.len() || used[*rk] {
                    return Err(mismatch(&path, "context matching is not a bijection"));
                }
                if l.concl[k] != r.concl[*rk] {
                    return Err(mismatch(
                        &path,
                        format!("superposed context differs: `{}` vs `{}`", l.concl[k], r.concl[*rk]),
                    ));
                }
                used[*rk] = true;
                mr_concl[*rk] = Dest::Concl(k);
            }
            let mut left_sup = vec![None; l.cuts.len()];
            let mut right_sup = vec![None; r.cuts.len()];
            for (s, [x, y]) in superpose.iter().enumerate() {
                if *x >= l.cuts.len() || *y >= r.cuts.len() {
                    return Err(mismatch(&path, format!("superposed cut index {x}:{y} out of range")));
                }
                if left_sup[*x].is_some() || right_sup[*y].is_some() {
                    return Err(mismatch(&path, format!("cut {x}:{y} superposed twice")));
                }
                if l.cuts[*x] != r.cuts[*y] {
                    return Err(mismatch(&path, format!("superposed cuts {x}:{y} differ")));
                }
                left_sup[*x] = Some(s);
                right_sup[*y] = Some(s);
            }
            let mut cuts = Vec::new();
            let mut ml_cuts = vec![0; l.cuts.len()];
            let mut mr_cuts = vec![0; r.cuts.len()];
            for (k, c) in l.cuts.iter().enumerate() {
                if left_sup[k].is_none() {
                    ml_cuts[k] = cuts.len();
                    cuts.push(c.clone());
                }
            }
            for (k, c) in r.cuts.iter().enumerate() {
                if right_sup[k].is_none() {
                    mr_cuts[k] = cuts.len();
                    cuts.push(c.clone());
                }
            }
            let base = cuts.len();
            for [x, _] in superpose {
                cuts.push(l.cuts[*x].clone());
            }
            for (k, s) in left_sup.iter().enumerate() {
                if let Some(s) = s {
                    ml_cuts[k] = base + s;
                }
            }
            for (k, s) in right_sup.iter().enumerate() {
                if let Some(s) = s {
                    mr_cuts[k] = base + s;
                }
            }
            let mut concl = l.concl.clone();
            concl[*i] = Formula::with(a.clone(), b.clone());
            let ml = PremiseMap {
                cuts: ml_cuts,
                concl: (0..l.concl.len())
                    .map(|k| if k == *i { Dest::Sub(*i, Side::Left) } else { Dest::Concl(k) })
                    .collect(),
            };
            let mr = PremiseMap { cuts: mr_cuts, concl: mr_concl };
            (cuts, concl, vec![ml, mr], Dest::Concl(*i), *weight)
        }
    };
    let node = &mut out[idx];
    node.premises = premises;
    node.cuts = cuts;
    node.concl = concl;
    node.maps = maps;
    node.principal = principal;
    node.weight = weight;
    Ok(idx)
}

/// Checks every rule instance and returns the conclusion with occurrence
/// identities. Eigenweight annotations, when present, must be consistent:
/// one weight per `&` occurrence of the conclusion and distinct weights for
/// distinct occurrences.
pub fn check_proof(p: &Proof) -> Result<CheckedProof, CheckError> {
    let mut flat = Vec::new();
    flatten(p, NodePath::default(), &mut flat)?;
    let mut sequent = Sequent::from_shape(&flat[0].cuts, &flat[0].concl);
    let mut occ_cuts: Vec<Vec<[OccId; 2]>> = vec![Vec::new(); flat.len()];
    let mut occ_concl: Vec<Vec<OccId>> = vec![Vec::new(); flat.len()];
    occ_cuts[0] = sequent.cuts.clone();
    occ_concl[0] = sequent.conclusion.clone();
    let resolve = |s: &Sequent, cuts: &[[OccId; 2]], concl: &[OccId], d: Dest| match d {
        Dest::Concl(k) => concl[k],
        Dest::Sub(k, side) => s.child(concl[k], side),
        Dest::Cut(k, Side::Left) => cuts[k][0],
        Dest::Cut(k, Side::Right) => cuts[k][1],
    };
    // Preorder: parents are visited before their premises.
    for n in 0..flat.len() {
        for (k, &child) in flat[n].premises.iter().enumerate() {
            let m = &flat[n].maps[k];
            occ_concl[child] = m.concl.iter().map(|d| resolve(&sequent, &occ_cuts[n], &occ_concl[n], *d)).collect();
            occ_cuts[child] = m.cuts.iter().map(|c| occ_cuts[n][*c]).collect();
        }
    }
    let mut nodes = Vec::with_capacity(flat.len());
    let mut by_weight: BTreeMap<EigenweightId, OccId> = BTreeMap::new();
    for (n, f) in flat.iter().enumerate() {
        let principal = resolve(&sequent, &occ_cuts[n], &occ_concl[n], f.principal);
        if let Some(w) = f.weight {
            match sequent.weight(principal) {
                Some(v) if v != w => {
                    return Err(CheckError::WeightClash {
                        node: f.path.clone(),
                        reason: format!("occurrence {principal} carries both {v} and {w}"),
                    });
                }
                _ => {}
            }
            if let Some(o) = by_weight.get(&w) {
                if *o != principal {
                    return Err(CheckError::WeightClash {
                        node: f.path.clone(),
                        reason: format!("{w} is used by two distinct & occurrences"),
                    });
                }
            }
            by_weight.insert(w, principal);
            sequent.nodes[principal.0 as usize].weight = Some(w);
        }
        nodes.push(DerivNode {
            kind: f.kind,
            path: f.path.clone(),
            premises: f.premises.clone(),
            cuts: occ_cuts[n].clone(),
            conclusion: occ_concl[n].clone(),
            principal,
            weight: f.weight,
        });
    }
    Ok(CheckedProof { proof: p.clone(), sequent, nodes })
}

/// Gives every `&` occurrence introduced by a rule a fresh eigenweight,
/// numbered `a1, a2, …` in occurrence order. A `&` inside a formula added by
/// `plus` is never introduced and carries no weight; no matrix entry can
/// mention it. Rule instances whose `&` occurrences are
/// superposed receive the same weight.
pub fn assign_eigenweights(p: &Proof) -> Result<Proof, CheckError> {
    let checked = check_proof(&p.erase_weights())?;
    let introduced: BTreeSet<OccId> =
        checked.nodes.iter().filter(|n| n.kind == RuleKind::With).map(|n| n.principal).collect();
    let ids: BTreeMap<OccId, EigenweightId> =
        introduced.into_iter().enumerate().map(|(k, o)| (o, EigenweightId(k as u32 + 1))).collect();
    let weights: Vec<Option<EigenweightId>> =
        checked.nodes.iter().map(|n| (n.kind == RuleKind::With).then(|| ids[&n.principal])).collect();
    let mut out = checked.proof.clone();
    let mut counter = 0;
    set_weights_preorder(&mut out, &weights, &mut counter);
    Ok(out)
}

/// Assigns eigenweights only when the proof carries none.
pub fn ensure_eigenweights(p: &Proof) -> Result<Proof, CheckError> {
    if p.count_with() > 0 && p.weights().is_empty() {
        assign_eigenweights(p)
    } else {
        Ok(p.clone())
    }
}

fn set_weights_preorder(p: &mut Proof, weights: &[Option<EigenweightId>], counter: &mut usize) {
    if let Proof::With { weight, .. } = p {
        *weight = weights[*counter];
    }
    *counter += 1;
    for q in p.premises_mut() {
        set_weights_preorder(q, weights, counter);
    }
}

impl CheckedProof {
    pub fn root(&self) -> &DerivNode {
        &self.nodes[0]
    }

    pub fn premises(&self, n: usize) -> Vec<usize> {
        self.nodes[n].premises.clone()
    }

    /// The checked view of the subproof rooted at node `n`, with its own
    /// occurrence numbering.
    pub fn subproof(&self, n: usize) -> Result<CheckedProof, CheckError> {
        let sub = self.proof.at_path(&self.nodes[n].path.0).expect("node path").clone();
        check_proof(&sub)
    }
}

/// `L(A)` of a formula given the weights of its `&` nodes in preorder.
pub fn literals_of_formula(f: &Formula, weights: &mut impl Iterator<Item = EigenweightId>) -> BTreeSet<Literal> {
    let mut out = BTreeSet::new();
    if let Some((c, l, r)) = f.split() {
        if c == Connective::With {
            if let Some(w) = weights.next() {
                out.extend(w.literals());
            }
        }
        out.extend(literals_of_formula(l, weights));
        out.extend(literals_of_formula(r, weights));
    }
    out
}

/// Cut pairs and conclusion formulas of a proof, in the documented order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    pub cuts: Vec<(Formula, Formula)>,
    pub conclusion: Vec<Formula>,
}

/// Validates every rule instance and returns the conclusion shape only.
pub fn shape(p: &Proof) -> Result<Shape, CheckError> {
    let mut flat = Vec::new();
    flatten(p, NodePath::default(), &mut flat)?;
    let root = flat.swap_remove(0);
    Ok(Shape { cuts: root.cuts, conclusion: root.concl })
}
