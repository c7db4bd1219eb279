use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::automata::{Alphabet, AlphabetSpec, Sym};

use super::node::{Node, Tree};
use super::TreeError;

pub type TState = usize;

/// A transition `(q, a, q0, q1)`: a node labelled `a` whose children are in
/// `q0` and `q1` (the initial state standing in for absent children) gets `q`.
pub type TreeTransition = (TState, Sym, TState, TState);

/// A bottom-up tree automaton.
#[derive(Clone, Debug)]
pub struct TreeAutomaton {
    alphabet: Arc<Alphabet>,
    n: usize,
    initial: TState,
    finals: Vec<bool>,
    transitions: Vec<TreeTransition>,
    index: HashMap<(Sym, TState, TState), Vec<TState>>,
}

impl TreeAutomaton {
    pub fn new(alphabet: Arc<Alphabet>, n: usize, initial: TState) -> Self {
        TreeAutomaton {
            alphabet,
            n: n.max(initial + 1),
            initial,
            finals: vec![false; n.max(initial + 1)],
            transitions: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn from_parts(
        alphabet: Arc<Alphabet>,
        n: usize,
        initial: TState,
        finals: &[TState],
        transitions: &[TreeTransition],
    ) -> Result<Self, TreeError> {
        if initial >= n {
            return Err(TreeError::UnknownState(initial));
        }
        let mut a = TreeAutomaton::new(alphabet, n, initial);
        for &f in finals {
            if f >= n {
                return Err(TreeError::UnknownState(f));
            }
            a.finals[f] = true;
        }
        for &(q, s, l, r) in transitions {
            for x in [q, l, r] {
                if x >= n {
                    return Err(TreeError::UnknownState(x));
                }
            }
            if s as usize >= a.alphabet.len() {
                return Err(TreeError::UnknownSymbol(s.to_string()));
            }
            a.add_transition(q, s, l, r);
        }
        Ok(a)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn initial(&self) -> TState {
        self.initial
    }

    pub fn is_final(&self, q: TState) -> bool {
        self.finals[q]
    }

    pub fn set_final(&mut self, q: TState, f: bool) {
        self.finals[q] = f;
    }

    pub fn add_state(&mut self) -> TState {
        self.n += 1;
        self.finals.push(false);
        self.n - 1
    }

    pub fn add_transition(&mut self, q: TState, s: Sym, l: TState, r: TState) {
        let entry = self.index.entry((s, l, r)).or_default();
        if !entry.contains(&q) {
            entry.push(q);
            self.transitions.push((q, s, l, r));
        }
    }

    pub fn transitions(&self) -> &[TreeTransition] {
        &self.transitions
    }

    /// States reachable at the root of `t`.
    pub fn run_states(&self, t: &Tree) -> Vec<TState> {
        match t.root() {
            None => vec![self.initial],
            Some(n) => self.node_states(n),
        }
    }

    fn node_states(&self, n: &Node) -> Vec<TState> {
        let kid = |k: Option<&Node>| match k {
            None => vec![self.initial],
            Some(k) => self.node_states(k),
        };
        let l = kid(n.left());
        if l.is_empty() {
            return l;
        }
        let r = kid(n.right());
        let mut out = Vec::new();
        for &a in &l {
            for &b in &r {
                if let Some(qs) = self.index.get(&(n.label, a, b)) {
                    out.extend_from_slice(qs);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// The empty tree is accepted exactly when the initial state is final.
    pub fn accepts(&self, t: &Tree) -> bool {
        self.run_states(t).iter().any(|&q| self.finals[q])
    }

    /// Make the initial state mean "absent child" only, by moving any
    /// transition into it onto a fresh copy.
    fn normalized(&self) -> TreeAutomaton {
        let iota = self.initial;
        if !self.transitions.iter().any(|&(q, ..)| q == iota) {
            return self.clone();
        }
        let mut a = TreeAutomaton::new(self.alphabet.clone(), self.n + 1, iota);
        let hat = self.n;
        a.finals[..self.n].copy_from_slice(&self.finals);
        a.finals[hat] = self.finals[iota];
        let alts = |x: TState| if x == iota { vec![iota, hat] } else { vec![x] };
        for &(q, s, l, r) in &self.transitions {
            let q = if q == iota { hat } else { q };
            for l2 in alts(l) {
                for r2 in alts(r) {
                    a.add_transition(q, s, l2, r2);
                }
            }
        }
        a
    }

    pub fn union(&self, other: &TreeAutomaton) -> TreeAutomaton {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        let a = self.normalized();
        let b = other.normalized();
        // shared initial state 0, then a's non-initial states, then b's
        let mut out = TreeAutomaton::new(a.alphabet.clone(), 1, 0);
        let mut map_a = vec![0; a.n];
        for q in 0..a.n {
            if q != a.initial {
                map_a[q] = out.add_state();
                out.finals[map_a[q]] = a.finals[q];
            }
        }
        let mut map_b = vec![0; b.n];
        for q in 0..b.n {
            if q != b.initial {
                map_b[q] = out.add_state();
                out.finals[map_b[q]] = b.finals[q];
            }
        }
        out.finals[0] = a.finals[a.initial] || b.finals[b.initial];
        for &(q, s, l, r) in &a.transitions {
            out.add_transition(map_a[q], s, map_a[l], map_a[r]);
        }
        for &(q, s, l, r) in &b.transitions {
            out.add_transition(map_b[q], s, map_b[l], map_b[r]);
        }
        out
    }

    pub fn intersection(&self, other: &TreeAutomaton) -> TreeAutomaton {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        let nb = other.n;
        let id = |p: TState, q: TState| p * nb + q;
        let mut out = TreeAutomaton::new(
            self.alphabet.clone(),
            self.n * nb,
            id(self.initial, other.initial),
        );
        for p in 0..self.n {
            for q in 0..nb {
                out.finals[id(p, q)] = self.finals[p] && other.finals[q];
            }
        }
        let mut by_sym: HashMap<Sym, Vec<&TreeTransition>> = HashMap::new();
        for t in &other.transitions {
            by_sym.entry(t.1).or_default().push(t);
        }
        for &(p, s, l, r) in &self.transitions {
            for &&(q, _, l2, r2) in by_sym.get(&s).map(Vec::as_slice).unwrap_or(&[]) {
                out.add_transition(id(p, q), s, id(l, l2), id(r, r2));
            }
        }
        out
    }

    /// All accepted trees with at most `max_nodes` nodes, sorted and deduplicated.
    pub fn trees_up_to(&self, max_nodes: usize) -> Vec<Tree> {
        // by_size[k][q]: trees of exactly k nodes that can evaluate to q
        let mut by_size: Vec<Vec<HashSet<Tree>>> = vec![vec![HashSet::new(); self.n]];
        by_size[0][self.initial].insert(Tree::empty());
        for k in 1..=max_nodes {
            let mut level = vec![HashSet::new(); self.n];
            for &(q, s, l, r) in &self.transitions {
                for kl in 0..k {
                    let kr = k - 1 - kl;
                    if kl == 0 && kr > 0 {
                        continue;
                    }
                    let ls: Vec<&Tree> = by_size[kl][l].iter().collect();
                    let rs: Vec<&Tree> = by_size[kr][r].iter().collect();
                    for a in &ls {
                        for b in &rs {
                            level[q].insert(Tree::from_node(Node {
                                label: s,
                                kids: [a.root.clone(), b.root.clone()],
                            }));
                        }
                    }
                }
            }
            by_size.push(level);
        }
        let mut out: Vec<Tree> = Vec::new();
        for level in &by_size {
            for (q, set) in level.iter().enumerate() {
                if self.finals[q] {
                    out.extend(set.iter().cloned());
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TreeAutomatonJson::of(self)).expect("serializable")
    }

    pub fn from_json(src: &str) -> Result<Self, TreeError> {
        let j: TreeAutomatonJson =
            serde_json::from_str(src).map_err(|e| TreeError::Format(e.to_string()))?;
        j.build()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeAutomatonJson {
    pub alphabet: AlphabetSpec,
    pub states: Vec<usize>,
    pub initial: usize,
    pub finals: Vec<usize>,
    pub transitions: Vec<(usize, String, usize, usize)>,
}

impl TreeAutomatonJson {
    pub fn of(a: &TreeAutomaton) -> Self {
        let mut transitions: Vec<(usize, String, usize, usize)> = a
            .transitions
            .iter()
            .map(|&(q, s, l, r)| (q, a.alphabet.name(s), l, r))
            .collect();
        transitions.sort();
        TreeAutomatonJson {
            alphabet: AlphabetSpec::of(&a.alphabet),
            states: (0..a.n).collect(),
            initial: a.initial,
            finals: (0..a.n).filter(|&q| a.finals[q]).collect(),
            transitions,
        }
    }

    pub fn build(&self) -> Result<TreeAutomaton, TreeError> {
        let alphabet = self
            .alphabet
            .build()
            .map_err(|e| TreeError::Format(e.to_string()))?;
        let n = self.states.iter().max().map_or(1, |m| m + 1);
        let mut trans = Vec::new();
        for (q, name, l, r) in &self.transitions {
            let s = alphabet
                .lookup(name)
                .ok_or_else(|| TreeError::UnknownSymbol(name.clone()))?;
            trans.push((*q, s, *l, *r));
        }
        TreeAutomaton::from_parts(alphabet, n, self.initial, &self.finals, &trans)
    }
}

/// Tree JSON: a sorted list of `(path, symbol name)` pairs.
pub fn tree_to_json(t: &Tree, alphabet: &Alphabet) -> String {
    let entries: Vec<(String, String)> = t
        .entries()
        .into_iter()
        .map(|(p, s)| (p, alphabet.name(s)))
        .collect();
    serde_json::to_string(&entries).expect("serializable")
}

pub fn tree_from_json(src: &str, alphabet: &Alphabet) -> Result<Tree, TreeError> {
    let entries: Vec<(String, String)> =
        serde_json::from_str(src).map_err(|e| TreeError::Format(e.to_string()))?;
    let mut out = Vec::with_capacity(entries.len());
    for (p, name) in entries {
        let s = alphabet
            .lookup(&name)
            .ok_or_else(|| TreeError::UnknownSymbol(name.clone()))?;
        out.push((p, s));
    }
    Tree::from_entries(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_trees(alphabet: Arc<Alphabet>) -> TreeAutomaton {
        // one state that is both the absent-child default and final
        let mut a = TreeAutomaton::new(alphabet.clone(), 1, 0);
        a.set_final(0, true);
        for s in alphabet.symbols() {
            a.add_transition(0, s, 0, 0);
        }
        a
    }

    #[test]
    fn accepts_everything_including_empty() {
        let al = Alphabet::chars("$");
        let a = all_trees(al);
        assert!(a.accepts(&Tree::empty()));
        assert!(a.accepts(&super::super::delimiter_tree(0, 0, 0)));
    }

    #[test]
    fn union_keeps_absent_child_meaning() {
        let al = Alphabet::chars("ab");
        let everything = all_trees(al.clone());
        // single nodes labelled b only
        let mut only_b = TreeAutomaton::new(al.clone(), 2, 0);
        only_b.add_transition(1, 1, 0, 0);
        only_b.set_final(1, true);
        let u = only_b.union(&everything);
        let sample = everything.trees_up_to(3);
        assert!(sample.len() > 10);
        for t in &sample {
            assert!(u.accepts(t));
        }
        let i = only_b.intersection(&everything);
        let acc: Vec<Tree> = sample.into_iter().filter(|t| i.accepts(t)).collect();
        assert_eq!(acc, vec![Tree::word(&[1])]);
    }

    #[test]
    fn json_roundtrip() {
        let al = Alphabet::chars("$");
        let d = super::super::delimiter_automaton(al.clone(), 0);
        let back = TreeAutomaton::from_json(&d.to_json()).unwrap();
        let t = super::super::delimiter_tree(2, 1, 0);
        assert!(back.accepts(&t));
        let tj = tree_to_json(&t, &al);
        assert_eq!(tree_from_json(&tj, &al).unwrap(), t);
    }
}
