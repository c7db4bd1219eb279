use std::cmp::Ordering;

use crate::automata::{Nfa, Word};
use crate::tree::{cmp_trees, Tree, TreeAutomaton};

use super::OrderError;

/// Sort `items` by `cmp` and insist that distinct items never compare equal.
pub fn sort_strict<T: Clone + PartialEq + std::fmt::Debug>(
    mut items: Vec<T>,
    cmp: impl Fn(&T, &T) -> Ordering,
) -> Result<Vec<T>, OrderError> {
    items.sort_by(&cmp);
    items.dedup();
    for w in items.windows(2) {
        if cmp(&w[0], &w[1]) != Ordering::Less {
            return Err(OrderError::ComparatorTie(format!("{:?} vs {:?}", w[0], w[1])));
        }
    }
    Ok(items)
}

/// Members of `L(a)` of length at most `max_len`, sorted by `cmp`.
pub fn sorted_sample(
    a: &Nfa,
    max_len: usize,
    cmp: impl Fn(&Word, &Word) -> Ordering,
) -> Result<Vec<Word>, OrderError> {
    sort_strict(a.words_up_to(max_len), cmp)
}

/// Accepted trees with at most `max_nodes` nodes, sorted by the tree order.
pub fn sorted_tree_sample(a: &TreeAutomaton, max_nodes: usize) -> Result<Vec<Tree>, OrderError> {
    sort_strict(a.trees_up_to(max_nodes), cmp_trees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{regex, Alphabet};
    use crate::orders::{delta_cmp, DeltaPoint};
    use crate::tree::{delimiter_automaton, delimiter_coords};

    #[test]
    fn lex_sample() {
        let ab = Alphabet::chars("ab");
        let a = regex::parse(&ab, "a*b").unwrap();
        let s = sorted_sample(&a, 3, |u, v| u.cmp(v)).unwrap();
        assert_eq!(s, vec![ab.word("aab"), ab.word("ab"), ab.word("b")]);
        let e = Nfa::empty(ab.clone());
        assert!(sorted_sample(&e, 5, |u, v| u.cmp(v)).unwrap().is_empty());
    }

    #[test]
    fn tie_is_reported() {
        let r = sort_strict(vec![1, 2, 3], |a: &i32, b: &i32| (a / 2).cmp(&(b / 2)));
        assert!(matches!(r, Err(OrderError::ComparatorTie(_))));
    }

    #[test]
    fn delimiter_trees_sorted_like_delta() {
        let d = delimiter_automaton(Alphabet::chars("$"), 0);
        // i, j <= 2 fit in 4 + 2 + 6 nodes
        let s = sorted_tree_sample(&d, 12).unwrap();
        let pts: Vec<DeltaPoint> = s
            .iter()
            .map(|t| delimiter_coords(t).unwrap())
            .filter(|&(i, j)| i <= 2 && j <= 2)
            .map(|(i, j)| DeltaPoint::new(j, i))
            .collect();
        assert_eq!(pts.len(), 9);
        for w in pts.windows(2) {
            assert_eq!(delta_cmp(w[0], w[1]), Ordering::Less);
        }
    }
}
