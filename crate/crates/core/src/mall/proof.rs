use serde::{Deserialize, Serialize};

use super::formula::{Atom, Formula};
use crate::algebra::EigenweightId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A derivation tree.
///
/// Principal formulas are located by position in the premises' conclusion
/// lists (`at`); the formulas are kept alongside for printing and validation.
/// Conclusion lists are ordered as follows:
/// - `ax X`: `X, ~X`.
/// - `cut`: the left context, then the right context; the new pair is appended
///   to the cut list.
/// - `tensor`: the left context with `A * B` in place of `A`, then the right
///   context.
/// - `par`, `plus`: `A` is replaced in place (and `B` removed for `par`).
/// - `with`: the left premise's list with `A & B` in place of `A`; cuts are
///   left-private, right-private, then the superposed ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Proof {
    Ax {
        atom: Atom,
    },
    Cut {
        left: Box<Proof>,
        right: Box<Proof>,
        /// The cut formula as it occurs in the left premise.
        formula: Formula,
        at: [usize; 2],
    },
    Tensor {
        left: Box<Proof>,
        right: Box<Proof>,
        a: Formula,
        b: Formula,
        at: [usize; 2],
    },
    Par {
        premise: Box<Proof>,
        a: Formula,
        b: Formula,
        at: [usize; 2],
    },
    Plus {
        premise: Box<Proof>,
        side: Side,
        a: Formula,
        b: Formula,
        at: usize,
    },
    With {
        left: Box<Proof>,
        right: Box<Proof>,
        a: Formula,
        b: Formula,
        at: [usize; 2],
        /// For each context position of the left premise (principal skipped),
        /// the matching position in the right premise.
        context: Vec<usize>,
        /// Superposed cut pairs as (left index, right index).
        superpose: Vec<[usize; 2]>,
        weight: Option<EigenweightId>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleKind {
    Ax,
    Cut,
    Tensor,
    Par,
    Plus1,
    Plus2,
    With,
}

impl Proof {
    pub fn kind(&self) -> RuleKind {
        match self {
            Proof::Ax { .. } => RuleKind::Ax,
            Proof::Cut { .. } => RuleKind::Cut,
            Proof::Tensor { .. } => RuleKind::Tensor,
            Proof::Par { .. } => RuleKind::Par,
            Proof::Plus { side: Side::Left, .. } => RuleKind::Plus1,
            Proof::Plus { side: Side::Right, .. } => RuleKind::Plus2,
            Proof::With { .. } => RuleKind::With,
        }
    }

    pub fn ax(name: &str) -> Proof {
        Proof::Ax { atom: Atom::new(name) }
    }

    pub fn premises(&self) -> Vec<&Proof> {
        match self {
            Proof::Ax { .. } => vec![],
            Proof::Cut { left, right, .. } | Proof::Tensor { left, right, .. } | Proof::With { left, right, .. } => {
                vec![left, right]
            }
            Proof::Par { premise, .. } | Proof::Plus { premise, .. } => vec![premise],
        }
    }

    pub fn premises_mut(&mut self) -> Vec<&mut Proof> {
        match self {
            Proof::Ax { .. } => vec![],
            Proof::Cut { left, right, .. } | Proof::Tensor { left, right, .. } | Proof::With { left, right, .. } => {
                vec![left, right]
            }
            Proof::Par { premise, .. } | Proof::Plus { premise, .. } => vec![premise],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premises().iter().map(|p| p.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.premises().iter().map(|p| p.depth()).max().unwrap_or(0)
    }

    pub fn count(&self, kind: RuleKind) -> usize {
        usize::from(self.kind() == kind) + self.premises().iter().map(|p| p.count(kind)).sum::<usize>()
    }

    pub fn count_with(&self) -> usize {
        self.count(RuleKind::With)
    }

    pub fn count_cuts(&self) -> usize {
        self.count(RuleKind::Cut)
    }

    pub fn is_cut_free(&self) -> bool {
        self.count_cuts() == 0
    }

    /// Removes every eigenweight annotation.
    pub fn erase_weights(&self) -> Proof {
        self.map_weights(&|_| None)
    }

    pub fn map_weights(&self, f: &dyn Fn(Option<EigenweightId>) -> Option<EigenweightId>) -> Proof {
        let mut p = self.clone();
        p.map_weights_in_place(f);
        p
    }

    pub fn map_weights_in_place(&mut self, f: &dyn Fn(Option<EigenweightId>) -> Option<EigenweightId>) {
        if let Proof::With { weight, .. } = self {
            *weight = f(*weight);
        }
        for q in self.premises_mut() {
            q.map_weights_in_place(f);
        }
    }

    pub fn weights(&self) -> Vec<EigenweightId> {
        let mut out = Vec::new();
        self.collect_weights(&mut out);
        out
    }

    fn collect_weights(&self, out: &mut Vec<EigenweightId>) {
        if let Proof::With { weight: Some(w), .. } = self {
            out.push(*w);
        }
        for q in self.premises() {
            q.collect_weights(out);
        }
    }

    /// The subproof at a path of premise indices.
    pub fn at_path(&self, path: &[usize]) -> Option<&Proof> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.premises().get(*i)?.at_path(rest),
        }
    }
}
