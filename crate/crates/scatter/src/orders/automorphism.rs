use serde::{Deserialize, Serialize};

use crate::automata::{Nfa, Word};

use super::tracks::{find, TrackAut};
use super::{OrderError, OrderKind};

/// Which defining property of an automorphism fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Failure {
    OutsideUniverse,
    Totality,
    Surjectivity,
    Functionality,
    Injectivity,
    OrderPreservation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum AutomorphismVerdict {
    NontrivialAutomorphism { moved: Vec<Word> },
    Trivial,
    NotAutomorphism { reason: Failure, witness: Vec<Word> },
}

/// Decide whether the automatic relation `rel` (pairs over the universe's
/// alphabet) is an automorphism of `(L(universe); kind)` other than the identity.
///
/// Every property is settled by an emptiness check on a product of track
/// automata, so the answer covers the whole (possibly infinite) structure.
pub fn verify_regular_automorphism(
    universe: &Nfa,
    kind: OrderKind,
    rel: &Nfa,
) -> Result<AutomorphismVerdict, OrderError> {
    if kind == OrderKind::Trees {
        return Err(OrderError::Unsupported("tree order in the word verifier"));
    }
    let sigma = universe.alphabet().clone();
    if rel.alphabet().arity() != Some(2) || rel.alphabet().base() != Some(&sigma) {
        return Err(OrderError::Arity);
    }
    if kind == OrderKind::Lex2 && sigma.arity() != Some(2) {
        return Err(OrderError::Arity);
    }
    let fail = |reason, witness| Ok(AutomorphismVerdict::NotAutomorphism { reason, witness });
    let r = |a: usize, b: usize| TrackAut::relation(rel, &[a, b]);

    for t in 0..2 {
        let comps = [r(0, 1), TrackAut::member(universe, t, true)];
        if let Some(w) = find(&comps, 2, &sigma) {
            return fail(Failure::OutsideUniverse, w);
        }
    }
    if let Some(w) = universe.inclusion_witness(&rel.project(0)?) {
        return fail(Failure::Totality, vec![w]);
    }
    if let Some(w) = universe.inclusion_witness(&rel.project(1)?) {
        return fail(Failure::Surjectivity, vec![w]);
    }
    let neq = |a, b| TrackAut::equal(&sigma, a, b).negate_dfa();
    if let Some(w) = find(&[r(0, 1), r(0, 2), neq(1, 2)], 3, &sigma) {
        return fail(Failure::Functionality, w);
    }
    if let Some(w) = find(&[r(0, 2), r(1, 2), neq(0, 1)], 3, &sigma) {
        return fail(Failure::Injectivity, w);
    }
    let less = |a, b| TrackAut::less(&sigma, kind, a, b);
    // with a bijection, x < x' and y' < y is the only way to break a linear order
    let broken = if kind == OrderKind::Pref {
        find(&[r(0, 1), r(2, 3), less(0, 2), less(1, 3).negate_dfa()], 4, &sigma)
            .or_else(|| find(&[r(0, 1), r(2, 3), less(0, 2).negate_dfa(), less(1, 3)], 4, &sigma))
    } else {
        find(&[r(0, 1), r(2, 3), less(0, 2), less(3, 1)], 4, &sigma)
    };
    if let Some(w) = broken {
        return fail(Failure::OrderPreservation, w);
    }
    Ok(match find(&[r(0, 1), neq(0, 1)], 2, &sigma) {
        Some(moved) => AutomorphismVerdict::NontrivialAutomorphism { moved },
        None => AutomorphismVerdict::Trivial,
    })
}

/// Identity relation on `L(universe)` as a convolution automaton.
pub fn diagonal(universe: &Nfa) -> Nfa {
    let sigma = universe.alphabet().clone();
    let conv = crate::automata::Alphabet::conv(&sigma, 2);
    universe.map_symbols(conv.clone(), |s| conv.encode(&[Some(s), Some(s)]))
}
