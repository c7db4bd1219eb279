//! Pairwise agreement sweeps between an actual order and a predicted one.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::automata::{Alphabet, Sym, Word};
use crate::orders::Verdict;
use crate::par;
use crate::tree::Tree;

/// Outcome of one sweep. `witness` holds the first disagreeing pair in
/// row-major order, rendered by the caller.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub check: String,
    pub bound: String,
    pub members: usize,
    pub pairs: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Mismatch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mismatch {
    Pair { left: String, right: String, actual: Verdict, predicted: Verdict },
    /// A generated member the automaton under test rejects.
    Rejected { member: String },
}

/// The first `(i, j)` with `actual(i, j) != predicted(i, j)`.
pub fn first_disagreement<T, A, P>(items: &[T], actual: A, predicted: P) -> Option<(usize, usize, Ordering, Ordering)>
where
    T: Sync,
    A: Fn(&T, &T) -> Ordering + Sync + Send,
    P: Fn(&T, &T) -> Ordering + Sync + Send,
{
    par::find_first(items.len(), |i| {
        items.iter().enumerate().find_map(|(j, t)| {
            let (a, p) = (actual(&items[i], t), predicted(&items[i], t));
            (a != p).then_some((j, a, p))
        })
    })
    .map(|(i, (j, a, p))| (i, j, a, p))
}

/// Sweep all ordered pairs of `items` and package the result.
pub fn sweep<T, A, P, R>(check: &str, bound: String, items: &[T], actual: A, predicted: P, render: R) -> SweepReport
where
    T: Sync,
    A: Fn(&T, &T) -> Ordering + Sync + Send,
    P: Fn(&T, &T) -> Ordering + Sync + Send,
    R: Fn(&T) -> String,
{
    let hit = first_disagreement(items, actual, predicted);
    SweepReport {
        check: check.to_string(),
        bound,
        members: items.len(),
        pairs: items.len() * items.len(),
        pass: hit.is_none(),
        witness: hit.map(|(i, j, a, p)| Mismatch::Pair {
            left: render(&items[i]),
            right: render(&items[j]),
            actual: a.into(),
            predicted: p.into(),
        }),
    }
}

/// Check that `accepts` holds on every item.
pub fn membership<T, F, R>(check: &str, bound: String, items: &[T], accepts: F, render: R) -> SweepReport
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
    R: Fn(&T) -> String,
{
    let hit = par::find_first(items.len(), |i| (!accepts(&items[i])).then_some(()));
    SweepReport {
        check: check.to_string(),
        bound,
        members: items.len(),
        pairs: 0,
        pass: hit.is_none(),
        witness: hit.map(|(i, ())| Mismatch::Rejected { member: render(&items[i]) }),
    }
}

/// Rewrite symbols by name into another alphabet; `None` if a name is missing.
pub fn translate(from: &Alphabet, to: &Alphabet, w: &[Sym]) -> Option<Word> {
    w.iter().map(|&s| to.lookup(&from.name(s))).collect()
}

pub fn translate_tree(from: &Alphabet, to: &Alphabet, t: &Tree) -> Option<Tree> {
    let entries: Option<Vec<(String, Sym)>> = t
        .entries()
        .into_iter()
        .map(|(p, s)| to.lookup(&from.name(s)).map(|s| (p, s)))
        .collect();
    Tree::from_entries(entries?).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_row_major_first() {
        let xs = [0, 1, 2, 3];
        let hit = first_disagreement(&xs, |a, b| a.cmp(b), |a, b| if *a + *b == 5 { b.cmp(a) } else { a.cmp(b) });
        assert_eq!(hit, Some((2, 3, Ordering::Less, Ordering::Greater)));
        let r = sweep("id", "n=4".into(), &xs, |a, b| a.cmp(b), |a, b| a.cmp(b), |x| x.to_string());
        assert!(r.pass && r.witness.is_none() && r.pairs == 16);
    }
}
