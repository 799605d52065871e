//! Polynomials over GF(2) in literal indeterminates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::literal::Literal;

/// A product of literal powers. The empty monomial is `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    exps: BTreeMap<Literal, u32>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn literal(l: Literal) -> Self {
        Self::power(l, 1)
    }

    pub fn power(l: Literal, k: u32) -> Self {
        let mut exps = BTreeMap::new();
        if k > 0 {
            exps.insert(l, k);
        }
        Monomial { exps }
    }

    pub fn from_powers(it: impl IntoIterator<Item = (Literal, u32)>) -> Self {
        let mut m = Monomial::one();
        for (l, k) in it {
            m = m.mul(&Monomial::power(l, k));
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, l: Literal) -> u32 {
        self.exps.get(&l).copied().unwrap_or(0)
    }

    pub fn powers(&self) -> impl Iterator<Item = (Literal, u32)> + '_ {
        self.exps.iter().map(|(l, k)| (*l, *k))
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.exps.keys().copied()
    }

    pub fn degree(&self) -> u32 {
        self.exps.values().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps.clone();
        for (l, k) in &other.exps {
            *exps.entry(*l).or_insert(0) += k;
        }
        Monomial { exps }
    }

    pub(crate) fn map_exps(&self, f: impl Fn(Literal, u32) -> u32) -> Monomial {
        let exps = self.exps.iter().map(|(l, k)| (*l, f(*l, *k))).filter(|(_, k)| *k > 0).collect();
        Monomial { exps }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return f.write_str("1");
        }
        for (i, (l, k)) in self.exps.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            if *k == 1 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{l}^{k}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in `Z2[L]`: a set of monomials, each with coefficient 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly {
    monos: BTreeSet<Monomial>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one())
    }

    pub fn monomial(m: Monomial) -> Self {
        Poly { monos: BTreeSet::from([m]) }
    }

    pub fn literal(l: Literal) -> Self {
        Self::monomial(Monomial::literal(l))
    }

    /// Sum of the given monomials; repeated monomials cancel in pairs.
    pub fn from_monomials(it: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Poly::zero();
        for m in it {
            p.toggle(m);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.monos.len() == 1 && self.monos.iter().next().is_some_and(Monomial::is_one)
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.monos.iter()
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn literals(&self) -> BTreeSet<Literal> {
        self.monos.iter().flat_map(|m| m.literals()).collect()
    }

    /// Adds a single monomial (characteristic 2: adding twice removes it).
    pub fn toggle(&mut self, m: Monomial) {
        if !self.monos.remove(&m) {
            self.monos.insert(m);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        Poly { monos: self.monos.symmetric_difference(&other.monos).cloned().collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for a in &self.monos {
            for b in &other.monos {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        // Multiplying by a monomial is injective on monomials, so no cancellation.
        Poly { monos: self.monos.iter().map(|a| a.mul(m)).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}

impl From<Monomial> for Poly {
    fn from(m: Monomial) -> Self {
        Poly::monomial(m)
    }
}

impl From<Literal> for Poly {
    fn from(l: Literal) -> Self {
        Poly::literal(l)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monos.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.monos.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}
