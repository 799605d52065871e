//! Geometry of Interaction for multiplicative-additive linear logic.
//!
//! Proofs written in a small DSL are checked, translated to
//! Hughes–Van Glabbeek linking sets, interpreted as matrices over partial
//! isometries with boolean-polynomial scalars, and executed. The crate also
//! carries a cut-elimination engine and the checks relating reduction to
//! execution.

pub mod algebra;
pub mod equations;
pub mod exec;
pub mod gen;
pub mod mall;
pub mod matrix;
pub mod nets;
pub mod rewrite;

pub use algebra::{AlgElem, EigenweightId, Lang, Literal, Monomial, PathWord, Poly, ReductionMode, RingHom};
