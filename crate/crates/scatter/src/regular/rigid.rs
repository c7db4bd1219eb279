use serde::{Deserialize, Serialize};

use crate::automata::Nfa;

use super::condense::{condense_term, primitive_nonrigid, ClassType};
use super::equations::{EquationSystem, LabelMode};
use super::term::Term;
use super::RegularError;

/// Levels beyond this are treated as a bug in the condensation.
const MAX_DEPTH: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityLevel {
    pub term: Term,
    pub classes: Vec<ClassType>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub rigid: bool,
    pub depth: usize,
    /// The first class found to be non-rigid, if any.
    pub witness: Option<ClassType>,
    pub levels: Vec<RigidityLevel>,
}

/// Decide whether the word denoted by `t` has only the trivial automorphism.
///
/// A word is rigid iff every class of its condensation is rigid and the
/// condensed word is rigid. Class labels are isomorphism types, so
/// automorphisms of the condensation lift back.
pub fn rigidity(t: &Term) -> Result<RigidityReport, RegularError> {
    let mut cur = t.clone();
    let mut levels = Vec::new();
    for depth in 1..=MAX_DEPTH {
        let (next, table) = condense_term(&cur);
        let bad = table.classes.iter().find(|c| primitive_nonrigid(c)).cloned();
        levels.push(RigidityLevel {
            term: cur,
            classes: table.classes,
        });
        if bad.is_some() {
            return Ok(RigidityReport { rigid: false, depth, witness: bad, levels });
        }
        if matches!(next, Term::Const(_)) {
            return Ok(RigidityReport { rigid: true, depth, witness: None, levels });
        }
        cur = next;
    }
    Err(RegularError::DepthExceeded(MAX_DEPTH))
}

pub fn is_rigid_term(t: &Term) -> Result<bool, RegularError> {
    Ok(rigidity(t)?.rigid)
}

/// Rigidity of `(L; ≤lex)` for a regular language without the empty word.
pub fn is_rigid_regular_lex(a: &Nfa) -> Result<RigidityReport, RegularError> {
    let sys = EquationSystem::from_language(a, LabelMode::Constant)?;
    rigidity(&sys.solve()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{regex, Alphabet};

    fn lang(src: &str) -> bool {
        let ab = Alphabet::chars("ab");
        is_rigid_regular_lex(&regex::parse(&ab, src).unwrap()).unwrap().rigid
    }

    fn term(src: &str) -> bool {
        let mut names = Vec::new();
        is_rigid_term(&Term::parse(src, &mut names).unwrap()).unwrap()
    }

    #[test]
    fn languages() {
        assert!(lang("ab*"));
        assert!(lang("a|b|ab"));
        assert!(!lang("a*b|ba*"));
        assert!(!lang("(a|b)*b"));
        assert!(lang("a*b"));
    }

    #[test]
    fn terms() {
        assert!(term("(a w)"));
        assert!(!term("((a w*) . (a w))"));
        assert!(term("((a w*) . (b w))"));
        assert!(!term("[a]"));
        // ζ copies of a rigid pair are shifted
        assert!(!term("(((a . b) w*) . ((a . b) w))"));
        // alternating ω and ω* blocks condense to an ω-word of classes
        assert!(term("(((a w) . (b w*)) w)"));
    }
}
