//! Finite binary trees, bottom-up tree automata and the tree order.

pub mod automaton;
pub mod node;

use std::sync::Arc;

use crate::automata::{Alphabet, Sym};

pub use automaton::{tree_from_json, tree_to_json, TState, TreeAutomaton, TreeTransition};
pub use node::{
    add_root, cmp_nodes, cmp_trees, convolve_trees, deconvolve_tree, delimiter_coords,
    delimiter_tree, Node, Path, Tree,
};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("{0:?} is in the domain but its parent is not")]
    PrefixViolation(String),
    #[error("{0:?} is in the domain but its left sibling is not")]
    LeftSiblingViolation(String),
    #[error("adding a root over an empty left tree and a nonempty right tree")]
    ClosureViolation,
    #[error("path {0:?} is not a 0/1 string")]
    BadPath(String),
    #[error("not a convolution alphabet")]
    NotConvolution,
    #[error("number of trees differs from the convolution arity")]
    ArityMismatch,
    #[error("unknown state {0}")]
    UnknownState(usize),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("malformed input: {0}")]
    Format(String),
}

/// States of [`delimiter_automaton`].
pub mod delim {
    pub const IOTA: usize = 0;
    pub const LEAF: usize = 1;
    pub const CHAIN: usize = 2;
    pub const Z0: usize = 3;
    pub const ZI: usize = 4;
    pub const D: usize = 5;
    pub const COUNT: usize = 6;
}

/// Accepts exactly the trees `t_{i,j}` labelled with `marker`.
pub fn delimiter_automaton(alphabet: Arc<Alphabet>, marker: Sym) -> TreeAutomaton {
    use delim::*;
    let mut a = TreeAutomaton::new(alphabet, COUNT, IOTA);
    add_delimiter_transitions(&mut a, marker, 0);
    a.set_final(D, true);
    a
}

/// Install the delimiter states at `offset..offset+5` (the initial state is shared).
pub fn add_delimiter_transitions(a: &mut TreeAutomaton, marker: Sym, offset: usize) {
    use delim::*;
    let iota0 = a.initial();
    let s = |q: usize| if q == IOTA { iota0 } else { q + offset };
    let (iota, leaf, chain, z0, zi, d) = (s(IOTA), s(LEAF), s(CHAIN), s(Z0), s(ZI), s(D));
    a.add_transition(leaf, marker, iota, iota);
    a.add_transition(chain, marker, iota, iota);
    a.add_transition(chain, marker, chain, iota);
    a.add_transition(z0, marker, leaf, iota);
    a.add_transition(zi, marker, leaf, d);
    a.add_transition(d, marker, z0, chain);
    a.add_transition(d, marker, zi, iota);
}
