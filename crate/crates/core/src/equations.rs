//! The equational system read off the quasi-execution formula: monomial
//! equations `w(α_i) = w(β_j)` between adjacent factors of every cut path,
//! solution checking, and a solver.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::algebra::{AlgElem, Literal, Monomial, Poly, ReductionMode, RingHom};
use crate::exec::{sigma, PartialSymmetry};
use crate::mall::{CheckedProof, OccId, Proof};
use crate::matrix::{interpret_checked, FMatrix, MatrixError};

/// An unordered equation between two monomials, stored with the smaller side
/// first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonEq {
    pub lhs: Monomial,
    pub rhs: Monomial,
}

impl MonEq {
    pub fn new(x: Monomial, y: Monomial) -> Self {
        if x <= y {
            MonEq { lhs: x, rhs: y }
        } else {
            MonEq { lhs: y, rhs: x }
        }
    }

    pub fn literals(&self) -> BTreeSet<Literal> {
        self.lhs.literals().chain(self.rhs.literals()).collect()
    }

    /// Both sides after substitution and reduction.
    pub fn apply(&self, d: &RingHom, mode: &ReductionMode) -> (Poly, Poly) {
        (mode.reduce_poly(&d.apply_monomial(&self.lhs)), mode.reduce_poly(&d.apply_monomial(&self.rhs)))
    }
}

impl fmt::Display for MonEq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl Serialize for MonEq {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Which product decides whether a pair of components yields an equation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FactorOrder {
    /// `path(α_i)·path(β_j) ≠ 0`: the order in which the factors are multiplied
    /// along a cut path.
    #[default]
    Composition,
    /// `path(β_j)·path(α_i) ≠ 0`.
    Reversed,
}

/// `E[α, β]` in composition order.
pub fn e_set(alpha: &AlgElem, beta: &AlgElem) -> BTreeSet<MonEq> {
    e_set_with(alpha, beta, FactorOrder::Composition)
}

pub fn e_set_with(alpha: &AlgElem, beta: &AlgElem, order: FactorOrder) -> BTreeSet<MonEq> {
    let (xs, ys) = (alpha.components(), beta.components());
    let mut out = BTreeSet::new();
    for (mx, px) in &xs {
        for (my, py) in &ys {
            let prod = match order {
                FactorOrder::Composition => px.mul(py),
                FactorOrder::Reversed => py.mul(px),
            };
            if !prod.is_zero() {
                out.insert(MonEq::new(mx.clone(), my.clone()));
            }
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EqSystem {
    pub equations: BTreeSet<MonEq>,
    pub delta_literals: BTreeSet<Literal>,
    pub gamma_literals: BTreeSet<Literal>,
}

impl EqSystem {
    pub fn literals(&self) -> BTreeSet<Literal> {
        self.equations.iter().flat_map(|e| e.literals()).collect()
    }

    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    /// One `lhs = rhs` line per equation, sorted.
    pub fn render(&self) -> String {
        self.equations.iter().map(|e| format!("{e}\n")).collect()
    }
}

/// `eq(σ, U)` in composition order. Cuts of `U` outside `σ` count as
/// conclusions.
pub fn eq_system(s: &PartialSymmetry, u: &FMatrix) -> EqSystem {
    eq_system_with(s, u, FactorOrder::Composition)
}

/// The union of `E` over the four adjacent-factor shapes of a cut path:
/// `(γ,σδ)(δ,γ')`, `(γ,σδ)(δ,σδ')`, `(δ,σδ')(δ',σδ'')` and `(δ,σδ')(δ',γ)`.
/// Every such pair sits in some path because paths may repeat occurrences.
pub fn eq_system_with(s: &PartialSymmetry, u: &FMatrix, order: FactorOrder) -> EqSystem {
    let delta = s.delta();
    let in_delta: BTreeSet<OccId> = delta.iter().copied().collect();
    let gamma: Vec<OccId> = u.index.all().into_iter().filter(|o| !in_delta.contains(o)).collect();
    let mut equations = BTreeSet::new();
    if gamma.is_empty() {
        return EqSystem::default();
    }
    let partner = |d: OccId| -> OccId {
        s.pairs
            .iter()
            .find_map(|[x, y]| {
                if *x == d {
                    Some(*y)
                } else if *y == d {
                    Some(*x)
                } else {
                    None
                }
            })
            .unwrap()
    };
    // (row, col) positions feeding into a cut occurrence δ: U(ν, σδ) for ν in Γ ∪ Δ.
    let mut add = |x: AlgElem, y: AlgElem| {
        if !x.is_zero() && !y.is_zero() {
            equations.extend(e_set_with(&x, &y, order));
        }
    };
    for &d in &delta {
        let sd = partner(d);
        let lefts: Vec<AlgElem> = gamma.iter().chain(&delta).map(|&r| u.get(r, sd)).collect();
        let rights: Vec<AlgElem> =
            gamma.iter().map(|&c| u.get(d, c)).chain(delta.iter().map(|&d2| u.get(d, partner(d2)))).collect();
        for x in &lefts {
            for y in &rights {
                add(x.clone(), y.clone());
            }
        }
    }
    EqSystem { equations, ..EqSystem::default() }
}

/// `eq(σ_Δ, ⟦π⟧)` with the literal partition taken from the sequent.
pub fn proof_system(c: &CheckedProof) -> Result<EqSystem, MatrixError> {
    let u = interpret_checked(c)?;
    let mut sys = eq_system(&sigma(&u.index), &u);
    sys.delta_literals = c.sequent.cut_literals();
    sys.gamma_literals = c.sequent.conclusion_literals();
    Ok(sys)
}

/// Applies `d` to both sides of every equation and compares in `ℂ₊ₓ`.
/// Returns the first equation that stays unequal.
pub fn check_solution(sys: &EqSystem, d: &RingHom) -> Result<(), MonEq> {
    let mode = ReductionMode::cplustimes();
    for e in &sys.equations {
        let (l, r) = e.apply(d, &mode);
        if l != r {
            return Err(e.clone());
        }
    }
    Ok(())
}

/// `eq(σ1 ⊗ σ2, U) = eq(σ1, U) ∪ eq(σ2, U)`.
pub fn partition_check(s1: &PartialSymmetry, s2: &PartialSymmetry, u: &FMatrix) -> bool {
    let whole = eq_system(&s1.tensor(s2), u).equations;
    let mut parts = eq_system(s1, u).equations;
    parts.extend(eq_system(s2, u).equations);
    whole == parts
}

/// A solution of a proof's system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub hom: RingHom,
    /// Literals of `ℒ(Δ, Γ)` that no constraint fixed; they map to 0 in `hom`.
    pub free: BTreeSet<Literal>,
}

impl Solution {
    /// The part of the hom acting on cut literals.
    pub fn delta_part(&self, delta: &BTreeSet<Literal>) -> RingHom {
        self.hom.restrict(delta)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Rewrite(#[from] crate::rewrite::RewriteError),
    #[error("no solution found; last failing equation {0}")]
    Unsolved(String),
}

pub use crate::rewrite::solve;

/// Convenience: the system of an unchecked proof.
pub fn system_of(p: &Proof) -> Result<EqSystem, SolveError> {
    let c = crate::mall::check_proof(p).map_err(crate::rewrite::RewriteError::from)?;
    Ok(proof_system(&c)?)
}
