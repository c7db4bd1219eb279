//! Regular words: terms, equation systems read off a regular language, and
//! the rigidity test through iterated condensation.

mod condense;
mod equations;
mod rigid;
mod term;

pub use condense::{canonical_primitive, condense_term, primitive_nonrigid, zeta_shift, ClassTable, ClassType};
pub use equations::{EquationSystem, LabelMode, Rhs};
pub use rigid::{is_rigid_regular_lex, is_rigid_term, rigidity, RigidityLevel, RigidityReport};
pub use term::{term_props, Label, Term, TermProps};

#[derive(Debug, thiserror::Error)]
pub enum RegularError {
    #[error("term syntax: {0}")]
    Parse(String),
    #[error("the language contains the empty word")]
    EpsilonInLanguage,
    #[error("the language is empty")]
    EmptyLanguage,
    #[error("malformed equation system")]
    MalformedSystem,
    #[error("condensation did not terminate within {0} levels")]
    DepthExceeded(usize),
}
