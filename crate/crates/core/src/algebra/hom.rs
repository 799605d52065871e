//! Substitution homomorphisms `Z2[L] → Z2[L']`.
//!
//! A hom is determined by the images of the literals in its domain; literals
//! outside the domain are left fixed. Nothing ties `d(ā)` to `d(a)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::elem::AlgElem;
use super::literal::Literal;
use super::poly::{Monomial, Poly};
use super::AlgebraError;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RingHom {
    subst: BTreeMap<Literal, Poly>,
}

impl RingHom {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn from_map(subst: impl IntoIterator<Item = (Literal, Poly)>) -> Self {
        RingHom { subst: subst.into_iter().collect() }
    }

    pub fn set(&mut self, l: Literal, image: Poly) {
        self.subst.insert(l, image);
    }

    pub fn with(mut self, l: Literal, image: impl Into<Poly>) -> Self {
        self.set(l, image.into());
        self
    }

    pub fn image(&self, l: Literal) -> Poly {
        self.subst.get(&l).cloned().unwrap_or_else(|| Poly::literal(l))
    }

    pub fn domain(&self) -> BTreeSet<Literal> {
        self.subst.keys().copied().collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (Literal, &Poly)> {
        self.subst.iter().map(|(l, p)| (*l, p))
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Poly {
        let mut out = Poly::one();
        for (l, k) in m.powers() {
            match self.subst.get(&l) {
                Some(img) => out = out.mul(&img.pow(k)),
                None => out = out.mul_monomial(&Monomial::power(l, k)),
            }
        }
        out
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for m in p.monomials() {
            out = out.add(&self.apply_monomial(m));
        }
        out
    }

    /// `d ⊗ Id`: applies the hom to every coefficient and regroups.
    pub fn apply_elem(&self, x: &AlgElem) -> AlgElem {
        x.map_coefficients(|c| self.apply(c))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &RingHom) -> RingHom {
        let mut subst: BTreeMap<Literal, Poly> = first.subst.iter().map(|(l, p)| (*l, self.apply(p))).collect();
        for (l, p) in &self.subst {
            subst.entry(*l).or_insert_with(|| p.clone());
        }
        RingHom { subst }
    }

    /// `d1 ⊎ d2`, defined when the two agree on their shared domain.
    pub fn union(&self, other: &RingHom) -> Result<RingHom, AlgebraError> {
        let mut subst = self.subst.clone();
        for (l, p) in &other.subst {
            match subst.get(l) {
                Some(q) if q != p => return Err(AlgebraError::DomainOverlapConflict(*l)),
                _ => {
                    subst.insert(*l, p.clone());
                }
            }
        }
        Ok(RingHom { subst })
    }

    /// `d^Γ`: `d` extended by the identity on the given literals.
    pub fn extend_identity(&self, lits: impl IntoIterator<Item = Literal>) -> RingHom {
        let mut subst = self.subst.clone();
        for l in lits {
            subst.entry(l).or_insert_with(|| Poly::literal(l));
        }
        RingHom { subst }
    }

    /// Restriction of the domain to the given literals.
    pub fn restrict(&self, lits: &BTreeSet<Literal>) -> RingHom {
        RingHom { subst: self.subst.iter().filter(|(l, _)| lits.contains(l)).map(|(l, p)| (*l, p.clone())).collect() }
    }

    /// `Res(d)`: postcomposition with the inclusion `R[Y] → R[Y][X]`. As a
    /// substitution it is unchanged; only the codomain grows.
    pub fn res(&self) -> RingHom {
        self.clone()
    }

    /// `Ind(d2)` relative to `d1`: postcomposition of `self` with
    /// `d1[Y/Y]`, i.e. the images of `self` have the literals of `d1`'s domain
    /// substituted away. The domain stays that of `self`.
    pub fn ind(&self, d1: &RingHom) -> RingHom {
        RingHom { subst: self.subst.iter().map(|(l, p)| (*l, d1.apply(p))).collect() }
    }
}

impl fmt::Display for RingHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (l, p)) in self.subst.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l} ↦ {p}")?;
        }
        f.write_str("}")
    }
}
