//! Helpers shared by the integration tests: independent oracles and fixtures.

#![allow(dead_code)]

pub mod instances;
pub mod path_oracle;

use mall_goi::algebra::{EigenweightId, Literal};

pub fn a(i: u32) -> Literal {
    EigenweightId(i).pos()
}

pub fn abar(i: u32) -> Literal {
    EigenweightId(i).neg()
}

use mall_goi::mall::{ensure_eigenweights, parse_proof, Proof};

/// Parses `fixtures/<name>.mall` and assigns eigenweights if it has none.
pub fn fixture(name: &str) -> Proof {
    let path = format!("{}/../../fixtures/{name}.mall", env!("CARGO_MANIFEST_DIR"));
    let src = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    let p = parse_proof(&src).unwrap_or_else(|e| panic!("{path}: {e}"));
    ensure_eigenweights(&p).unwrap()
}

use mall_goi::algebra::{AlgElem, Monomial, PathWord, Poly};
use mall_goi::mall::{OccId, Sequent};

/// `Σ monomial·path` from literal lists.
pub fn elem(terms: &[(&[Literal], PathWord)]) -> AlgElem {
    let mut x = AlgElem::zero();
    for (lits, w) in terms {
        let m = Monomial::from_powers(lits.iter().map(|l| (*l, 1)));
        x = x.add(&AlgElem::term(Poly::monomial(m), w.clone()));
    }
    x
}

/// The conclusion occurrences whose formula prints as `f`.
pub fn concl(s: &Sequent, f: &str) -> Vec<OccId> {
    s.conclusion.iter().copied().filter(|o| s.formula(*o).to_string() == f).collect()
}
