//! The order-theoretic constructions: polynomial sums of `ω*`/`ω` blocks,
//! their binarization and automorphisms, the pushdown variant, run trees of
//! weighted automata and the Minsky-machine tree language.

pub mod binarize;
pub mod k;
pub mod kprime;
pub mod lm;
pub mod poly;
pub mod runtree;
pub mod sweep;
pub mod witness;

pub use k::{build_k, predicted_cmp, KBundle, KCoord, Payload};
pub use binarize::{binarize, Binarization, BinaryBundle};
pub use witness::{automorphism_witness, Witness};
pub use kprime::{cmp_prime, KPrime};
pub use runtree::{build_l_a, predicted_cmp_la, LaBundle, LaCoord};
pub use lm::{build_l_m, cmp_lm, predicted_cmp_lm, LmBundle, LmCoord, LmView, Side};
pub use sweep::{first_disagreement, SweepReport};
pub use poly::{encode_args, poly_run_nfa, Polynomial};

use crate::automata::AutomataError;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("polynomials have different arities {0} and {1}")]
    Arity(usize, usize),
    #[error("not a member: {0}")]
    Malformed(String),
    #[error("binary block {0} does not encode a letter")]
    MalformedBlock(usize),
    #[error("not a run tree: {0}")]
    NotARunTree(String),
    #[error("no witness: {0}")]
    WitnessUnavailable(String),
    #[error(transparent)]
    Automata(#[from] AutomataError),
}
