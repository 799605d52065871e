//! Scalars, partial isometries and their combinations.

mod elem;
mod hom;
mod lang;
mod literal;
mod mode;
mod path;
mod poly;
mod semiring;

pub use elem::AlgElem;
pub use hom::RingHom;
pub use lang::{Lang, Word};
pub use literal::{EigenweightId, Literal, Polarity};
pub use mode::{Idempotent, ReductionMode};
pub use path::{Gen, PathWord};
pub use poly::{Monomial, Poly};
pub use semiring::{Paired, Semiring};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("homomorphisms disagree on {0}")]
    DomainOverlapConflict(Literal),
    #[error("annihilating {0}·{1} is not a supported ideal in this mode")]
    UnsupportedAnnihilation(Literal, Literal),
}

/// `w`: forgets the path of a basis term (both `p` and `q` collapse to 1).
pub fn collapse_w(term: &(Monomial, PathWord)) -> Monomial {
    term.0.clone()
}
