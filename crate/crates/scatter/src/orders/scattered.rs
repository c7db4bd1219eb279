use std::collections::{HashSet, VecDeque};

use crate::automata::{Nfa, Word};

/// Two cycles at a useful state that branch apart: `x c1 y1` and `x c2 y2`
/// with `c1 != c2`. Their presence means `(L; lex)` embeds the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseWitness {
    pub prefix: Word,
    pub cycle_a: Word,
    pub cycle_b: Word,
    pub suffix: Word,
}

/// Decide whether `(L(a); ≤lex)` is scattered.
pub fn is_scattered_lex(a: &Nfa) -> bool {
    dense_witness(a).is_none()
}

/// A branching cycle pair, if one exists.
///
/// For each useful state `q` this runs the synchronous self-product from
/// `(q, q)` and looks for a pair that can leave on different letters into
/// states that both return to `q`. If no state has one, all cycles at every
/// state are powers of one word, the language is bounded and its lex order
/// is scattered.
pub fn dense_witness(a: &Nfa) -> Option<DenseWitness> {
    let t = a.trim();
    if t.is_empty() {
        return None;
    }
    let n = t.num_states();
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (p, _, q) in t.transitions() {
        rev[q].push(p);
    }
    for q in 0..n {
        // back[r]: r can reach q
        let mut back = vec![false; n];
        let mut stack = vec![q];
        back[q] = true;
        while let Some(r) = stack.pop() {
            for &p in &rev[r] {
                if !back[p] {
                    back[p] = true;
                    stack.push(p);
                }
            }
        }
        let mut prev = std::collections::HashMap::new();
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([(q, q)]);
        seen.insert((q, q));
        while let Some((p1, p2)) = queue.pop_front() {
            for &(c1, r1) in t.out(p1) {
                if !back[r1] {
                    continue;
                }
                for &(c2, r2) in t.out(p2) {
                    if c2 != c1 && back[r2] {
                        let mut x = Vec::new();
                        let mut cur = (p1, p2);
                        while let Some(&(pp, s)) = prev.get(&cur) {
                            x.push(s);
                            cur = pp;
                        }
                        x.reverse();
                        let mut cycle_a = x.clone();
                        cycle_a.push(c1);
                        cycle_a.extend(path(&t, r1, q));
                        let mut cycle_b = x;
                        cycle_b.push(c2);
                        cycle_b.extend(path(&t, r2, q));
                        return Some(DenseWitness {
                            prefix: path(&t, t.initial(), q),
                            cycle_a,
                            cycle_b,
                            suffix: path_to_final(&t, q),
                        });
                    }
                }
                for r2 in t.successors(p2, c1) {
                    if back[r2] && seen.insert((r1, r2)) {
                        prev.insert((r1, r2), ((p1, p2), c1));
                        queue.push_back((r1, r2));
                    }
                }
            }
        }
    }
    None
}

fn bfs(t: &Nfa, from: usize, goal: impl Fn(usize) -> bool) -> Word {
    let mut prev: Vec<Option<(usize, u32)>> = vec![None; t.num_states()];
    let mut seen = vec![false; t.num_states()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(p) = queue.pop_front() {
        if goal(p) {
            let mut w = Vec::new();
            let mut cur = p;
            while let Some((pp, s)) = prev[cur] {
                w.push(s);
                cur = pp;
            }
            w.reverse();
            return w;
        }
        for &(s, r) in t.out(p) {
            if !seen[r] {
                seen[r] = true;
                prev[r] = Some((p, s));
                queue.push_back(r);
            }
        }
    }
    panic!("state unreachable in a trimmed automaton")
}

fn path(t: &Nfa, from: usize, to: usize) -> Word {
    bfs(t, from, |p| p == to)
}

fn path_to_final(t: &Nfa, from: usize) -> Word {
    bfs(t, from, |p| t.is_final(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{regex, Alphabet};

    #[test]
    fn corpus() {
        let ab = Alphabet::chars("ab");
        let bin = Alphabet::chars("01");
        assert!(!is_scattered_lex(&regex::parse(&ab, "(a|b)*").unwrap()));
        assert!(is_scattered_lex(&regex::parse(&bin, "10+1+0").unwrap()));
        assert!(!is_scattered_lex(&regex::parse(&ab, "(aa|bb)*ab").unwrap()));
        assert!(is_scattered_lex(&regex::parse(&ab, "a|b|ab|bba").unwrap()));
        assert!(is_scattered_lex(&regex::parse(&ab, "(ab)*(ab)*b").unwrap()));
    }

    #[test]
    fn witness_words_are_cycles() {
        let ab = Alphabet::chars("ab");
        let a = regex::parse(&ab, "(aa|bb)*ab").unwrap();
        let w = dense_witness(&a).unwrap();
        assert_ne!(w.cycle_a, w.cycle_b);
        let mut word = w.prefix.clone();
        word.extend(&w.cycle_a);
        word.extend(&w.cycle_b);
        word.extend(&w.suffix);
        assert!(a.accepts(&word));
    }
}
