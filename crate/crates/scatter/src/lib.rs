//! Automata over ordered alphabets and the linear orders they present.

pub mod automata;
pub mod orders;
pub mod tree;
pub mod par;
pub mod regular;
pub mod minsky;
pub mod weighted;
pub mod constructions;
