//! The scalar extension `Z2[L] ⊗ A`: finite GF(2)-combinations of basis terms
//! `monomial ⊗ path`.

use std::collections::BTreeMap;
use std::fmt;

use super::literal::Literal;
use super::path::PathWord;
use super::poly::{Monomial, Poly};

/// Stored grouped by path: each nonzero path word carries its (nonzero)
/// coefficient polynomial. This is the same data as a set of basis pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AlgElem {
    terms: BTreeMap<PathWord, Poly>,
}

impl AlgElem {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::path(PathWord::one())
    }

    pub fn path(w: PathWord) -> Self {
        Self::term(Poly::one(), w)
    }

    pub fn scalar(c: Poly) -> Self {
        Self::term(c, PathWord::one())
    }

    pub fn term(c: Poly, w: PathWord) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() && !w.is_zero() {
            terms.insert(w, c);
        }
        AlgElem { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, PathWord)>) -> Self {
        let mut x = AlgElem::zero();
        for (m, w) in it {
            x.add_assign(&AlgElem::term(Poly::monomial(m), w));
        }
        x
    }

    /// Structural zero: no basis term survives. Quotient-aware zero tests live
    /// on [`super::ReductionMode`].
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms_by_path(&self) -> impl Iterator<Item = (&PathWord, &Poly)> {
        self.terms.iter()
    }

    /// The monomial components: all basis pairs with coefficient 1.
    pub fn components(&self) -> Vec<(Monomial, PathWord)> {
        self.terms.iter().flat_map(|(w, c)| c.monomials().map(move |m| (m.clone(), w.clone()))).collect()
    }

    pub fn literals(&self) -> std::collections::BTreeSet<Literal> {
        self.terms.values().flat_map(|c| c.literals()).collect()
    }

    pub fn add_assign(&mut self, other: &AlgElem) {
        for (w, c) in &other.terms {
            let sum = match self.terms.get(w) {
                Some(old) => old.add(c),
                None => c.clone(),
            };
            if sum.is_zero() {
                self.terms.remove(w);
            } else {
                self.terms.insert(w.clone(), sum);
            }
        }
    }

    pub fn add(&self, other: &AlgElem) -> AlgElem {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn mul(&self, other: &AlgElem) -> AlgElem {
        let mut out = AlgElem::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let w = w1.mul(w2);
                if !w.is_zero() {
                    out.add_assign(&AlgElem::term(c1.mul(c2), w));
                }
            }
        }
        out
    }

    /// Scalars are fixed by the involution; only paths are starred.
    pub fn star(&self) -> AlgElem {
        let mut out = AlgElem::zero();
        for (w, c) in &self.terms {
            out.add_assign(&AlgElem::term(c.clone(), w.star()));
        }
        out
    }

    pub fn scalar_mul(&self, v: &Poly) -> AlgElem {
        self.map_coefficients(|c| c.mul(v))
    }

    pub fn map_coefficients(&self, f: impl Fn(&Poly) -> Poly) -> AlgElem {
        let terms = self.terms.iter().map(|(w, c)| (w.clone(), f(c))).filter(|(_, c)| !c.is_zero()).collect();
        AlgElem { terms }
    }

    pub fn pow(&self, k: u32) -> AlgElem {
        let mut out = AlgElem::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}

impl From<PathWord> for AlgElem {
    fn from(w: PathWord) -> Self {
        AlgElem::path(w)
    }
}

impl fmt::Display for AlgElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            for m in c.monomials() {
                if !first {
                    f.write_str(" + ")?;
                }
                first = false;
                match (m.is_one(), w.is_one()) {
                    (true, _) => write!(f, "{w}")?,
                    (false, true) => write!(f, "{m}")?,
                    (false, false) => write!(f, "{m}·{w}")?,
                }
            }
        }
        Ok(())
    }
}
