//! Quotients of `Z2[L]` by the structured ideals used throughout: complement
//! elimination `ā = 1 + a`, idempotency `x² = x`, and monomial annihilation `xy = 0`.

use std::collections::BTreeSet;
use std::fmt;

use super::elem::AlgElem;
use super::lang::Lang;
use super::literal::Literal;
use super::poly::{Monomial, Poly};
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Idempotent {
    All,
    Only(BTreeSet<Literal>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMode {
    eliminate_complement: bool,
    idempotent: Idempotent,
    annihilate: BTreeSet<(Literal, Literal)>,
}

impl Default for ReductionMode {
    fn default() -> Self {
        Self::raw()
    }
}

impl ReductionMode {
    /// No quotient at all.
    pub fn raw() -> Self {
        ReductionMode {
            eliminate_complement: false,
            idempotent: Idempotent::Only(BTreeSet::new()),
            annihilate: BTreeSet::new(),
        }
    }

    /// `ā := 1 + a` for every weight.
    pub fn cplus() -> Self {
        ReductionMode { eliminate_complement: true, ..Self::raw() }
    }

    /// `cplus` plus idempotency of every weight, i.e. `aā = 0` everywhere.
    pub fn cplustimes() -> Self {
        ReductionMode { eliminate_complement: true, idempotent: Idempotent::All, ..Self::raw() }
    }

    /// Idempotency of every literal and nothing else; add `aā = 0` per weight
    /// with [`ReductionMode::with_annihilated`].
    pub fn idempotent_only() -> Self {
        ReductionMode { idempotent: Idempotent::All, ..Self::raw() }
    }

    /// `cplus` plus idempotency exactly on the weights whose two literals both
    /// occur in `‖m‖`.
    pub fn from_lang(m: &Lang) -> Self {
        let idem = m.norm().into_iter().filter(|l| l.is_pos()).collect();
        ReductionMode { eliminate_complement: true, idempotent: Idempotent::Only(idem), ..Self::raw() }
    }

    pub fn eliminates_complement(&self) -> bool {
        self.eliminate_complement
    }

    pub fn idempotent(&self) -> &Idempotent {
        &self.idempotent
    }

    pub fn annihilated(&self) -> &BTreeSet<(Literal, Literal)> {
        &self.annihilate
    }

    pub fn with_idempotent(mut self, l: Literal) -> Self {
        let l = if self.eliminate_complement && !l.is_pos() { l.complement() } else { l };
        if let Idempotent::Only(set) = &mut self.idempotent {
            set.insert(l);
        }
        self
    }

    /// Adds the relation `x·y = 0`.
    ///
    /// Under complement elimination `a·ā = 0` is recorded as idempotency of `a`;
    /// other pairs mentioning a negative literal would need a non-monomial ideal
    /// and are rejected.
    pub fn with_annihilated(mut self, x: Literal, y: Literal) -> Result<Self, AlgebraError> {
        if x == y {
            return Err(AlgebraError::UnsupportedAnnihilation(x, y));
        }
        if self.eliminate_complement {
            if x.complement() == y {
                return Ok(self.with_idempotent(x));
            }
            if !x.is_pos() || !y.is_pos() {
                return Err(AlgebraError::UnsupportedAnnihilation(x, y));
            }
        }
        self.annihilate.insert((x.min(y), x.max(y)));
        Ok(self)
    }

    fn is_idempotent(&self, l: Literal) -> bool {
        match &self.idempotent {
            Idempotent::All => true,
            Idempotent::Only(set) => set.contains(&l),
        }
    }

    fn finish_monomial(&self, m: &Monomial) -> Option<Monomial> {
        let m = m.map_exps(|l, k| if self.is_idempotent(l) { k.min(1) } else { k });
        let dead = self.annihilate.iter().any(|(x, y)| m.exponent(*x) > 0 && m.exponent(*y) > 0);
        (!dead).then_some(m)
    }

    /// `(1 + a)^k` with the idempotency of `a` taken into account.
    fn complement_power(&self, neg: Literal, k: u32) -> Poly {
        let a = neg.complement();
        let k = if self.is_idempotent(a) { 1 } else { k };
        // Lucas: C(k, i) is odd iff the bits of i are a subset of those of k.
        Poly::from_monomials((0..=k).filter(|i| i & k == *i).map(|i| Monomial::power(a, i)))
    }

    pub fn reduce_poly(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for m in p.monomials() {
            if self.eliminate_complement {
                let mut expanded = Poly::monomial(m.map_exps(|l, k| if l.is_pos() { k } else { 0 }));
                for (l, k) in m.powers().filter(|(l, _)| !l.is_pos()) {
                    expanded = self.reduce_expanded(&expanded.mul(&self.complement_power(l, k)));
                }
                out = out.add(&self.reduce_expanded(&expanded));
            } else if let Some(r) = self.finish_monomial(m) {
                out.toggle(r);
            }
        }
        out
    }

    fn reduce_expanded(&self, p: &Poly) -> Poly {
        Poly::from_monomials(p.monomials().filter_map(|m| self.finish_monomial(m)))
    }

    pub fn reduce_elem(&self, x: &AlgElem) -> AlgElem {
        x.map_coefficients(|c| self.reduce_poly(c))
    }

    pub fn is_zero(&self, x: &AlgElem) -> bool {
        x.terms_by_path().all(|(_, c)| self.reduce_poly(c).is_zero())
    }

    /// Equality in the quotient.
    pub fn equal(&self, x: &AlgElem, y: &AlgElem) -> bool {
        self.is_zero(&x.add(y))
    }

    pub fn equal_poly(&self, x: &Poly, y: &Poly) -> bool {
        self.reduce_poly(&x.add(y)).is_zero()
    }
}

impl fmt::Display for ReductionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.eliminate_complement {
            parts.push("cplus".to_string());
        }
        match &self.idempotent {
            Idempotent::All => parts.push("idempotent(*)".into()),
            Idempotent::Only(s) if !s.is_empty() => {
                let ls: Vec<_> = s.iter().map(|l| l.to_string()).collect();
                parts.push(format!("idempotent({})", ls.join(",")));
            }
            Idempotent::Only(_) => {}
        }
        if !self.annihilate.is_empty() {
            let ps: Vec<_> = self.annihilate.iter().map(|(x, y)| format!("{x}{y}")).collect();
            parts.push(format!("annihilate({})", ps.join(",")));
        }
        if parts.is_empty() {
            f.write_str("raw")
        } else {
            f.write_str(&parts.join("+"))
        }
    }
}
