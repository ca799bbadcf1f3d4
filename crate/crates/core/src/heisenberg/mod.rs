//! The finite Heisenberg group of a pairing and its Stone-von Neumann
//! representation in two monomial models.

mod group;
mod monomial;
mod rep;

pub use group::{build_group, Element, GroupAxioms, HeisenbergGroup};
pub use monomial::MonomialMatrix;
pub use rep::{
    brute_force_decompose, linear_character, svn_rep, svn_rep_twisted, verify_homomorphism, verify_irreducible,
    Component, Decomposition, HomomorphismCertificate, IrreducibilityCertificate, Model, Rep, CHARACTER_SUM_CEILING,
};

use thiserror::Error;

/// Groups up to this order are checked on every pair or triple.
pub const EXHAUSTIVE_CEILING: u64 = 729;

/// Number of random samples used above the exhaustive ceiling.
pub const SAMPLED_CHECKS: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HeisenbergError {
    #[error("kernel labels do not match the pairing table")]
    LabelMismatch,
    #[error("representations belong to different groups")]
    GroupMismatch,
    #[error("work {work} exceeds the ceiling {ceiling}")]
    CeilingExceeded { work: u64, ceiling: u64 },
}
