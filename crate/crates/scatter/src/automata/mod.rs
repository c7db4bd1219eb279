//! Word automata over ordered alphabets, convolutions, run counting.

pub mod alphabet;
pub mod conv;
pub mod io;
pub mod nfa;
pub mod regex;

pub use alphabet::{Alphabet, AlphabetSpec, Sym, Word, PAD};
pub use conv::{convolve, convolve2, deconvolve};
pub use io::NfaJson;
pub use nfa::{product, BoolOp, Dfa, Nfa, State, Transition};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum AutomataError {
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("the padding symbol cannot be an alphabet member")]
    PaddingInAlphabet,
    #[error("duplicate symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("unknown state {0}")]
    UnknownState(usize),
    #[error("not a convolution alphabet")]
    NotConvolution,
    #[error("expected arity {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("track {track} resumes after padding at position {position}")]
    PaddingResumed { track: usize, position: usize },
    #[error("malformed input: {0}")]
    Format(String),
}
