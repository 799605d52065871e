//! MALL formulas, derivations, occurrence identity and the proof syntax.

pub mod check;
pub mod formula;
pub mod parse;
pub mod proof;

pub use check::{
    assign_eigenweights, check_proof, ensure_eigenweights, shape, CheckError, CheckedProof, DerivNode, NodePath, OccId,
    OccNode, Sequent, Shape,
};
pub use formula::{Atom, Connective, Formula};
pub use parse::{parse_formula, parse_proof, print_proof, ParseError};
pub use proof::{Proof, RuleKind, Side};
