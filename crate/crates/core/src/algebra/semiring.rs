use super::elem::AlgElem;
use super::lang::Lang;

/// The operations matrices need from their entries.
pub trait Semiring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Structural zero, used for sparsity.
    fn is_zero(&self) -> bool;
}

impl Semiring for AlgElem {
    fn zero() -> Self {
        AlgElem::zero()
    }
    fn one() -> Self {
        AlgElem::one()
    }
    fn add(&self, other: &Self) -> Self {
        AlgElem::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        AlgElem::mul(self, other)
    }
    fn is_zero(&self) -> bool {
        AlgElem::is_zero(self)
    }
}

impl Semiring for Lang {
    fn zero() -> Self {
        Lang::empty()
    }
    fn one() -> Self {
        Lang::epsilon()
    }
    fn add(&self, other: &Self) -> Self {
        self.union(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.concat(other)
    }
    fn is_zero(&self) -> bool {
        Lang::is_empty(self)
    }
}

/// `x : m`, an algebra element paired with its measure; operations act
/// componentwise.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Paired {
    pub elem: AlgElem,
    pub lang: Lang,
}

impl Semiring for Paired {
    fn zero() -> Self {
        Paired { elem: AlgElem::zero(), lang: Lang::empty() }
    }
    fn one() -> Self {
        Paired { elem: AlgElem::one(), lang: Lang::epsilon() }
    }
    fn add(&self, other: &Self) -> Self {
        Paired { elem: self.elem.add(&other.elem), lang: self.lang.union(&other.lang) }
    }
    fn mul(&self, other: &Self) -> Self {
        Paired { elem: self.elem.mul(&other.elem), lang: self.lang.concat(&other.lang) }
    }
    fn is_zero(&self) -> bool {
        self.elem.is_zero() && self.lang.is_empty()
    }
}

impl std::fmt::Display for Paired {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} : {}", self.elem, self.lang)
    }
}
