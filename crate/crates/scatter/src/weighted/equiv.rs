use std::collections::HashSet;

use crate::automata::{Sym, Word};
use crate::par;

use super::{Value, WeightedAutomaton};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    /// No difference on nonempty words up to the bound.
    Equal,
    /// The llex-least nonempty word with different values.
    Counterexample(Word),
}

type Config = (Vec<Value>, Vec<Value>);

/// Subtract the least finite entry from both vectors. Equality of final
/// values is invariant under a common shift, so shifted configurations can
/// be merged.
fn normalize((mut a, mut b): Config) -> Config {
    let lo = a.iter().chain(b.iter()).filter_map(|&x| x).min().unwrap_or(0);
    for x in a.iter_mut().chain(b.iter_mut()).flatten() {
        *x -= lo;
    }
    (a, b)
}

/// Compare `‖a‖` and `‖b‖` on all nonempty words of length at most `max_len`.
///
/// Breadth-first over pairs of max-plus vectors; each level keeps the
/// llex-first word that reaches a configuration, so the first difference
/// found is the llex-least one.
pub fn bounded_equiv(a: &WeightedAutomaton, b: &WeightedAutomaton, max_len: usize) -> Equivalence {
    assert_eq!(a.alphabet().len(), b.alphabet().len(), "alphabets differ");
    let syms: Vec<Sym> = a.alphabet().symbols().collect();
    let mut seen: HashSet<Config> = HashSet::new();
    let mut level: Vec<(Word, Config)> = vec![(Vec::new(), (a.start_vector(), b.start_vector()))];
    for _ in 0..max_len {
        let children: Vec<Vec<(Word, Config)>> = par::map(&level, |(w, (va, vb))| {
            syms.iter()
                .map(|&s| {
                    let mut w2 = w.clone();
                    w2.push(s);
                    (w2, (a.step_vector(va, s), b.step_vector(vb, s)))
                })
                .collect()
        });
        let mut next = Vec::new();
        for (w, (va, vb)) in children.into_iter().flatten() {
            if a.final_value(&va) != b.final_value(&vb) {
                return Equivalence::Counterexample(w);
            }
            let c = normalize((va, vb));
            if seen.insert(c.clone()) {
                next.push((w, c));
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    Equivalence::Equal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Alphabet;

    fn counter(letter: Sym) -> WeightedAutomaton {
        let s = Alphabet::chars("ab");
        let mut a = WeightedAutomaton::new(s, 1);
        a.set_final(0, true);
        a.add_transition(0, 0, 0, (letter == 0) as u8);
        a.add_transition(0, 1, 0, (letter == 1) as u8);
        a
    }

    #[test]
    fn self_equal() {
        let a = counter(0);
        assert_eq!(bounded_equiv(&a, &a, 8), Equivalence::Equal);
    }

    #[test]
    fn least_counterexample() {
        // #a versus #b first differ on "a"
        assert_eq!(bounded_equiv(&counter(0), &counter(1), 5), Equivalence::Counterexample(vec![0]));
        // max(#a, #b) versus #a first differs on "b"
        let both = WeightedAutomaton::max_union(&[&counter(0), &counter(1)]);
        assert_eq!(bounded_equiv(&both, &counter(0), 5), Equivalence::Counterexample(vec![1]));
    }

    #[test]
    fn brute_force_agrees() {
        let both = WeightedAutomaton::max_union(&[&counter(0), &counter(1)]);
        let a = counter(0);
        // enumerate words in llex order as an independent oracle
        let mut first = None;
        'outer: for n in 1..=4 {
            for k in 0..(1u32 << n) {
                let w: Word = (0..n).rev().map(|i| (k >> i) & 1).collect();
                if both.behavior(&w).unwrap() != a.behavior(&w).unwrap() {
                    first = Some(w);
                    break 'outer;
                }
            }
        }
        assert_eq!(bounded_equiv(&both, &a, 4), Equivalence::Counterexample(first.unwrap()));
    }
}
