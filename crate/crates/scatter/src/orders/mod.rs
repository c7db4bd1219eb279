//! Word and tree comparators, the delimiter order, scatteredness, sampling
//! and the automatic-automorphism verifier.

pub mod automorphism;
pub mod cmp;
pub mod delta;
pub mod sample;
pub mod scattered;
pub mod tracks;

pub use automorphism::{diagonal, verify_regular_automorphism, AutomorphismVerdict, Failure};
pub use cmp::{cmp_words, lex, lex2, llex, pref, OrderKind, Verdict};
pub use delta::{delta_cmp, delta_decode, delta_encode, DeltaPoint};
pub use sample::{sort_strict, sorted_sample, sorted_tree_sample};
pub use scattered::{dense_witness, is_scattered_lex, DenseWitness};

use crate::automata::AutomataError;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("the pair order needs arity-2 convolutions")]
    Arity,
    #[error("unknown order kind {0:?}")]
    UnknownKind(String),
    #[error("distinct elements compare equal: {0}")]
    ComparatorTie(String),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error(transparent)]
    Automata(#[from] AutomataError),
}
