//! Run trees of a weighted automaton and the tree language `L_A` whose
//! `≤trees` order is `Σ_{w ∈ (Σ⁺; ≤llex)} ω^{‖A‖(w)+1} + δ`.
//!
//! A run tree has root `$`, the word on `0, 00, …, 0^k`, a `$` leaf at
//! `0^{k+1}`, the node `1` with children `10` (a leaf) and the chain
//! `11, 110, …` of `n + 1` nodes, and optional `$` chains `0^i1 0^*` of
//! length `m_i` hanging off letters read by weight-1 transitions.

use std::cmp::Ordering;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::automata::{Alphabet, Sym, Word};
use crate::tree::{add_delimiter_transitions, add_root, delim, delimiter_coords, delimiter_tree, Node, Tree, TreeAutomaton};
use crate::weighted::WeightedAutomaton;

use super::ConstructionError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LaCoord {
    /// A run tree: its word, `n(t)`, and the side chain lengths `m_1..m_k`.
    Run { word: Word, n: usize, sides: Vec<usize> },
    /// `w$ + t_{i,j}`.
    Delim { word: Word, i: usize, j: usize },
}

impl LaCoord {
    pub fn word(&self) -> &Word {
        match self {
            LaCoord::Run { word, .. } | LaCoord::Delim { word, .. } => word,
        }
    }
}

/// The order read off the decomposition: words by length-lex, run trees
/// before the delimiter block, run trees lex on `(n, m_1, …, m_k)`.
pub fn predicted_cmp_la(s: &LaCoord, t: &LaCoord) -> Ordering {
    let w = s.word().len().cmp(&t.word().len()).then_with(|| s.word().cmp(t.word()));
    if w != Ordering::Equal {
        return w;
    }
    match (s, t) {
        (LaCoord::Run { n, sides, .. }, LaCoord::Run { n: n2, sides: s2, .. }) => n.cmp(n2).then_with(|| sides.cmp(s2)),
        (LaCoord::Run { .. }, LaCoord::Delim { .. }) => Ordering::Less,
        (LaCoord::Delim { .. }, LaCoord::Run { .. }) => Ordering::Greater,
        (LaCoord::Delim { i, j, .. }, LaCoord::Delim { i: k, j: l, .. }) => k.cmp(i).then(j.cmp(l)),
    }
}

/// A name for the extra label not already used by `sigma`.
pub fn fresh_marker(sigma: &Alphabet) -> String {
    ["$", "⋄", "◇"]
        .into_iter()
        .map(String::from)
        .chain((0..).map(|i| format!("$${i}")))
        .find(|n| sigma.lookup(n).is_none())
        .unwrap()
}

/// `Σ` followed by a fresh marker.
pub fn tree_alphabet(sigma: &Alphabet) -> (Arc<Alphabet>, Sym) {
    let mut names = sigma.names();
    names.push(fresh_marker(sigma));
    let marker = (names.len() - 1) as Sym;
    (Arc::new(Alphabet::new(&names).expect("fresh marker")), marker)
}

/// A left chain of `len` nodes labelled `label`.
fn chain(len: usize, label: Sym) -> Option<Box<Node>> {
    Tree::word(&vec![label; len]).root
}

/// Length of a left chain of `label` nodes without right children.
fn chain_len(n: Option<&Node>, label: Sym) -> Option<usize> {
    let mut len = 0;
    let mut cur = n;
    while let Some(x) = cur {
        if x.label != label || x.right().is_some() {
            return None;
        }
        len += 1;
        cur = x.left();
    }
    Some(len)
}

fn all_labelled(n: &Node, label: Sym) -> bool {
    n.label == label && n.kids.iter().flatten().all(|k| all_labelled(k, label))
}

#[derive(Clone, Debug)]
pub struct LaBundle {
    pub wa: WeightedAutomaton,
    pub alphabet: Arc<Alphabet>,
    pub marker: Sym,
    pub automaton: TreeAutomaton,
}

/// States of the `L_A` automaton past the delimiter block.
const ONE: usize = delim::COUNT;
const WORD: usize = delim::COUNT + 1;
const ACC: usize = delim::COUNT + 2;
const MAIN: usize = delim::COUNT + 3;

impl LaBundle {
    pub fn encode(&self, c: &LaCoord) -> Tree {
        let mk = self.marker;
        match c {
            LaCoord::Run { word, n, sides } => {
                let mut main: Option<Box<Node>> = Some(Box::new(Node::leaf(mk)));
                for (i, &a) in word.iter().enumerate().rev() {
                    let side = sides.get(i).copied().unwrap_or(0);
                    main = Some(Box::new(Node { label: a, kids: [main, chain(side, mk)] }));
                }
                let one = Node { label: mk, kids: [Some(Box::new(Node::leaf(mk))), chain(n + 1, mk)] };
                Tree::from_node(Node { label: mk, kids: [main, Some(Box::new(one))] })
            }
            LaCoord::Delim { word, i, j } => {
                let mut w = word.clone();
                w.push(mk);
                add_root(&Tree::word(&w), &delimiter_tree(*i, *j, mk), mk).expect("nonempty left tree")
            }
        }
    }

    /// Parse the shape of a member. Run-tree shapes are not checked
    /// against the automaton here; see [`Self::is_run_tree`].
    pub fn decode(&self, t: &Tree) -> Result<LaCoord, ConstructionError> {
        let mk = self.marker;
        let bad = |why: &str| ConstructionError::NotARunTree(why.to_string());
        let root = t.root().ok_or_else(|| bad("empty"))?;
        if root.label != mk {
            return Err(bad("root label"));
        }
        let mut word = Vec::new();
        let mut rights = Vec::new();
        let mut cur = root.left().ok_or_else(|| bad("no main branch"))?;
        while cur.label != mk {
            word.push(cur.label);
            rights.push(cur.right());
            cur = cur.left().ok_or_else(|| bad("main branch ends in a letter"))?;
        }
        if word.is_empty() || cur.left().is_some() || cur.right().is_some() {
            return Err(bad("main branch end"));
        }
        let one = root.right().ok_or_else(|| bad("no node 1"))?;
        let ten = one.left().ok_or_else(|| bad("no node 10"))?;
        if ten.left().is_some() {
            if rights.iter().any(Option::is_some) || !all_labelled(one, mk) {
                return Err(bad("delimiter member with side branches"));
            }
            let (i, j) = delimiter_coords(&Tree::from_node(one.clone())).ok_or_else(|| bad("not a delimiter"))?;
            return Ok(LaCoord::Delim { word, i, j });
        }
        if one.label != mk || ten.label != mk || ten.right().is_some() {
            return Err(bad("node 1"));
        }
        let n = chain_len(one.right(), mk).filter(|&l| l > 0).ok_or_else(|| bad("chain at 11"))? - 1;
        let sides = rights
            .iter()
            .map(|r| chain_len(*r, mk).ok_or_else(|| bad("side branch")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LaCoord::Run { word, n, sides })
    }

    /// Whether a compatible state sequence exists, with side branches only
    /// at weight-1 transitions. Subset simulation along the main branch.
    pub fn run_exists(&self, word: &[Sym], sides: &[usize]) -> bool {
        let wa = &self.wa;
        let mut cur = vec![false; wa.num_states()];
        cur[wa.initial()] = true;
        for (i, &a) in word.iter().enumerate() {
            let need_one = sides.get(i).is_some_and(|&m| m > 0);
            let mut next = vec![false; wa.num_states()];
            for p in (0..cur.len()).filter(|&p| cur[p]) {
                for &(s, q, w) in wa.out(p) {
                    if s == a && (!need_one || w == 1) {
                        next[q] = true;
                    }
                }
            }
            cur = next;
        }
        (0..cur.len()).any(|q| cur[q] && wa.is_final(q))
    }

    pub fn is_run_tree(&self, t: &Tree) -> bool {
        match self.decode(t) {
            Ok(LaCoord::Run { word, sides, .. }) => self.run_exists(&word, &sides),
            _ => false,
        }
    }

    pub fn is_member(&self, t: &Tree) -> bool {
        match self.decode(t) {
            Ok(LaCoord::Run { word, sides, .. }) => self.run_exists(&word, &sides),
            Ok(LaCoord::Delim { .. }) => true,
            Err(_) => false,
        }
    }

    pub fn word_of(&self, t: &Tree) -> Result<Word, ConstructionError> {
        match self.decode(t)? {
            LaCoord::Run { word, sides, .. } if self.run_exists(&word, &sides) => Ok(word),
            _ => Err(ConstructionError::NotARunTree("no compatible run".into())),
        }
    }

    pub fn n_of(&self, t: &Tree) -> Result<usize, ConstructionError> {
        match self.decode(t)? {
            LaCoord::Run { word, n, sides } if self.run_exists(&word, &sides) => Ok(n),
            _ => Err(ConstructionError::NotARunTree("no compatible run".into())),
        }
    }

    /// Members with words of length at most `max_word`, run trees with
    /// `n` and every `m_i` at most `max_branch`, delimiters with `i, j ≤ max_branch`.
    pub fn members(&self, max_word: usize, max_branch: usize) -> Vec<LaCoord> {
        let syms: Vec<Sym> = self.wa.alphabet().symbols().collect();
        let mut out = Vec::new();
        for len in 1..=max_word {
            for idx in 0..syms.len().pow(len as u32) {
                let word: Word = (0..len).rev().map(|d| syms[idx / syms.len().pow(d as u32) % syms.len()]).collect();
                for sides in itertools::Itertools::multi_cartesian_product((0..len).map(|_| 0..=max_branch)) {
                    if self.run_exists(&word, &sides) {
                        for n in 0..=max_branch {
                            out.push(LaCoord::Run { word: word.clone(), n, sides: sides.clone() });
                        }
                    }
                }
                for i in 0..=max_branch {
                    for j in 0..=max_branch {
                        out.push(LaCoord::Delim { word: word.clone(), i, j });
                    }
                }
            }
        }
        out
    }
}

pub fn build_l_a(wa: &WeightedAutomaton) -> LaBundle {
    let (alphabet, mk) = tree_alphabet(wa.alphabet());
    let n = wa.num_states();
    let mut a = TreeAutomaton::new(alphabet.clone(), MAIN + n, delim::IOTA);
    add_delimiter_transitions(&mut a, mk, 0);
    let (iota, leaf, ch) = (delim::IOTA, delim::LEAF, delim::CHAIN);
    a.add_transition(ONE, mk, leaf, ch);
    for p in 0..n {
        for &(s, q, w) in wa.out(p) {
            let rights: &[usize] = if w == 1 { &[iota, ch] } else { &[iota] };
            for &r in rights {
                a.add_transition(MAIN + p, s, MAIN + q, r);
                if wa.is_final(q) {
                    a.add_transition(MAIN + p, s, leaf, r);
                }
            }
        }
    }
    for s in wa.alphabet().symbols() {
        a.add_transition(WORD, s, leaf, iota);
        a.add_transition(WORD, s, WORD, iota);
    }
    a.add_transition(ACC, mk, MAIN + wa.initial(), ONE);
    a.add_transition(ACC, mk, WORD, delim::D);
    a.set_final(ACC, true);
    LaBundle { wa: wa.clone(), alphabet, marker: mk, automaton: a }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::cmp_trees;

    /// Two states; `a` loops with weight 1 on state 1, `b` moves 0 → 1.
    fn sample_wa() -> WeightedAutomaton {
        let al = Alphabet::chars("ab");
        let mut wa = WeightedAutomaton::new(al, 2);
        wa.add_transition(0, 0, 0, 1);
        wa.add_transition(0, 1, 0, 0);
        wa.add_transition(0, 1, 1, 0);
        wa.add_transition(1, 0, 1, 1);
        wa.set_final(0, true);
        wa.set_final(1, true);
        wa
    }

    #[test]
    fn figure_shape() {
        let la = build_l_a(&sample_wa());
        let (a, b) = (0, 1);
        let c = LaCoord::Run { word: vec![a, b, a, a, b], n: 2, sides: vec![0, 0, 3, 0, 3] };
        let t = la.encode(&c);
        assert_eq!(la.decode(&t).unwrap(), c);
        assert_eq!(t.get("1100"), Some(la.marker));
        assert!(t.get("11000").is_none());
        // b has weight 0, so the side branch at 0^5 1 is not allowed
        assert!(!la.is_run_tree(&t));
        assert!(la.word_of(&t).is_err());
        let ok = LaCoord::Run { word: vec![a, b, a, a, b], n: 2, sides: vec![0, 0, 3, 3, 0] };
        let t = la.encode(&ok);
        assert!(la.is_run_tree(&t));
        assert_eq!(la.word_of(&t).unwrap(), vec![a, b, a, a, b]);
        assert_eq!(la.n_of(&t).unwrap(), 2);
        assert!(la.automaton.accepts(&t));
        let mut entries = t.entries();
        entries.push(("100".into(), la.marker));
        assert!(!la.is_run_tree(&Tree::from_entries(entries).unwrap()));
    }

    #[test]
    fn automaton_matches_predicate() {
        let la = build_l_a(&sample_wa());
        for t in la.automaton.trees_up_to(11) {
            assert!(la.is_member(&t), "{}", t.render(&la.alphabet));
        }
        for c in la.members(3, 2) {
            let t = la.encode(&c);
            assert!(la.automaton.accepts(&t), "{c:?}");
            assert_eq!(la.decode(&t).unwrap(), c);
        }
    }

    #[test]
    fn order_matches_prediction() {
        let la = build_l_a(&sample_wa());
        let ms = la.members(2, 2);
        let ts: Vec<Tree> = ms.iter().map(|c| la.encode(c)).collect();
        for (x, s) in ms.iter().zip(&ts) {
            for (y, t) in ms.iter().zip(&ts) {
                assert_eq!(cmp_trees(s, t), predicted_cmp_la(x, y), "{x:?} {y:?}");
            }
        }
    }
}
