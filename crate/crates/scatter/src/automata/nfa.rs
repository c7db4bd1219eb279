use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigUint;

use super::alphabet::{Alphabet, Sym, Word};
use super::AutomataError;

pub type State = usize;

/// A transition `(src, sym, dst)`.
pub type Transition = (State, Sym, State);

/// An ε-free nondeterministic word automaton with a single initial state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Arc<Alphabet>,
    initial: State,
    finals: Vec<bool>,
    out: Vec<Vec<(Sym, State)>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersection,
    Difference,
}

impl Nfa {
    /// An automaton with `n` states (at least one), initial state 0, nothing final.
    pub fn new(alphabet: Arc<Alphabet>, n: usize) -> Self {
        let n = n.max(1);
        Nfa {
            alphabet,
            initial: 0,
            finals: vec![false; n],
            out: vec![Vec::new(); n],
        }
    }

    pub fn from_parts(
        alphabet: Arc<Alphabet>,
        n: usize,
        initial: State,
        finals: &[State],
        transitions: &[Transition],
    ) -> Result<Self, AutomataError> {
        if initial >= n {
            return Err(AutomataError::UnknownState(initial));
        }
        let mut a = Nfa::new(alphabet, n);
        a.initial = initial;
        for &f in finals {
            if f >= n {
                return Err(AutomataError::UnknownState(f));
            }
            a.finals[f] = true;
        }
        for &(p, s, q) in transitions {
            if p >= n || q >= n {
                return Err(AutomataError::UnknownState(p.max(q)));
            }
            if s as usize >= a.alphabet.len() {
                return Err(AutomataError::UnknownSymbol(s.to_string()));
            }
            a.add_transition(p, s, q);
        }
        Ok(a)
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.out.len()
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn set_initial(&mut self, q: State) {
        self.initial = q;
    }

    pub fn is_final(&self, q: State) -> bool {
        self.finals[q]
    }

    pub fn set_final(&mut self, q: State, f: bool) {
        self.finals[q] = f;
    }

    pub fn finals(&self) -> impl Iterator<Item = State> + '_ {
        (0..self.num_states()).filter(|&q| self.finals[q])
    }

    pub fn add_state(&mut self) -> State {
        self.out.push(Vec::new());
        self.finals.push(false);
        self.out.len() - 1
    }

    pub fn add_transition(&mut self, p: State, s: Sym, q: State) {
        let row = &mut self.out[p];
        if let Err(pos) = row.binary_search(&(s, q)) {
            row.insert(pos, (s, q));
        }
    }

    /// Outgoing transitions of `q`, sorted by symbol then target.
    pub fn out(&self, q: State) -> &[(Sym, State)] {
        &self.out[q]
    }

    pub fn successors(&self, q: State, s: Sym) -> impl Iterator<Item = State> + '_ {
        let row = &self.out[q];
        let start = row.partition_point(|&(t, _)| t < s);
        row[start..]
            .iter()
            .take_while(move |&&(t, _)| t == s)
            .map(|&(_, r)| r)
    }

    /// All transitions sorted by `(src, sym, dst)`; positions are transition ids.
    pub fn transitions(&self) -> Vec<Transition> {
        let mut v = Vec::new();
        for (p, row) in self.out.iter().enumerate() {
            for &(s, q) in row {
                v.push((p, s, q));
            }
        }
        v
    }

    pub fn num_transitions(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    // ----- basic languages -----

    pub fn empty(alphabet: Arc<Alphabet>) -> Self {
        Nfa::new(alphabet, 1)
    }

    pub fn epsilon(alphabet: Arc<Alphabet>) -> Self {
        let mut a = Nfa::new(alphabet, 1);
        a.finals[0] = true;
        a
    }

    pub fn literal(alphabet: Arc<Alphabet>, w: &[Sym]) -> Self {
        let mut a = Nfa::new(alphabet, w.len() + 1);
        for (i, &s) in w.iter().enumerate() {
            a.add_transition(i, s, i + 1);
        }
        a.finals[w.len()] = true;
        a
    }

    /// Accepts exactly the one-letter words over `syms`.
    pub fn letters(alphabet: Arc<Alphabet>, syms: impl IntoIterator<Item = Sym>) -> Self {
        let mut a = Nfa::new(alphabet, 2);
        for s in syms {
            a.add_transition(0, s, 1);
        }
        a.finals[1] = true;
        a
    }

    pub fn universal(alphabet: Arc<Alphabet>) -> Self {
        let mut a = Nfa::new(alphabet.clone(), 1);
        for s in alphabet.symbols() {
            a.add_transition(0, s, 0);
        }
        a.finals[0] = true;
        a
    }

    pub fn from_words<'a>(alphabet: Arc<Alphabet>, words: impl IntoIterator<Item = &'a Word>) -> Self {
        let mut acc = Nfa::empty(alphabet.clone());
        for w in words {
            acc = acc.union(&Nfa::literal(alphabet.clone(), w));
        }
        acc
    }

    // ----- ε-free combinators -----

    /// Disjoint copy of `other` appended to `self`; returns the offset.
    fn append(&mut self, other: &Nfa) -> usize {
        let off = self.num_states();
        for q in 0..other.num_states() {
            self.out
                .push(other.out[q].iter().map(|&(s, r)| (s, r + off)).collect());
            self.finals.push(other.finals[q]);
        }
        off
    }

    fn copy_out(&mut self, from: State, to: State) {
        let row = self.out[from].clone();
        for (s, r) in row {
            self.add_transition(to, s, r);
        }
    }

    pub fn union(&self, other: &Nfa) -> Nfa {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        let mut a = Nfa::new(self.alphabet.clone(), 1);
        let o1 = a.append(self);
        let o2 = a.append(other);
        a.copy_out(o1 + self.initial, 0);
        a.copy_out(o2 + other.initial, 0);
        a.finals[0] = self.finals[self.initial] || other.finals[other.initial];
        a
    }

    pub fn concat(&self, other: &Nfa) -> Nfa {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        let mut a = self.clone();
        let off = a.append(other);
        let oi = off + other.initial;
        let eps = other.finals[other.initial];
        for f in 0..self.num_states() {
            if self.finals[f] {
                a.copy_out(oi, f);
                a.finals[f] = eps;
            }
        }
        a
    }

    pub fn plus(&self) -> Nfa {
        let mut a = self.clone();
        for f in 0..a.num_states() {
            if a.finals[f] {
                a.copy_out(a.initial, f);
            }
        }
        a
    }

    pub fn star(&self) -> Nfa {
        Nfa::epsilon(self.alphabet.clone()).union(&self.plus())
    }

    pub fn repeat(&self, n: usize) -> Nfa {
        let mut a = Nfa::epsilon(self.alphabet.clone());
        for _ in 0..n {
            a = a.concat(self);
        }
        a
    }

    pub fn concat_all<'a>(alphabet: Arc<Alphabet>, parts: impl IntoIterator<Item = &'a Nfa>) -> Nfa {
        let mut a = Nfa::epsilon(alphabet);
        for p in parts {
            a = a.concat(p);
        }
        a
    }

    // ----- simulation -----

    pub fn step_set(&self, set: &[State], s: Sym) -> Vec<State> {
        let mut next: Vec<State> = set.iter().flat_map(|&q| self.successors(q, s)).collect();
        next.sort_unstable();
        next.dedup();
        next
    }

    pub fn accepts(&self, w: &[Sym]) -> bool {
        let mut cur = vec![self.initial];
        for &s in w {
            cur = self.step_set(&cur, s);
            if cur.is_empty() {
                return false;
            }
        }
        cur.iter().any(|&q| self.finals[q])
    }

    /// Number of accepting runs on `w`, by dynamic programming over positions.
    pub fn count_accepting_runs(&self, w: &[Sym]) -> BigUint {
        let n = self.num_states();
        let mut cur = vec![BigUint::from(0u32); n];
        cur[self.initial] = BigUint::from(1u32);
        for &s in w {
            let mut next = vec![BigUint::from(0u32); n];
            for (p, c) in cur.iter().enumerate() {
                if c.bits() == 0 {
                    continue;
                }
                for r in self.successors(p, s) {
                    next[r] += c;
                }
            }
            cur = next;
        }
        cur.iter()
            .enumerate()
            .filter(|(q, _)| self.finals[*q])
            .fold(BigUint::from(0u32), |acc, (_, c)| acc + c)
    }

    /// Every accepting run on `w`, as a sequence of transition ids
    /// (indices into [`Nfa::transitions`]).
    pub fn accepting_runs(&self, w: &[Sym]) -> Vec<Vec<usize>> {
        let ids: HashMap<Transition, usize> = self
            .transitions()
            .into_iter()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        let co = self.backward_sets(w);
        let mut out = Vec::new();
        let mut path = Vec::with_capacity(w.len());
        self.runs_rec(w, 0, self.initial, &co, &ids, &mut path, &mut out);
        out
    }

    /// `sets[i]` holds the states from which `w[i..]` can be accepted.
    fn backward_sets(&self, w: &[Sym]) -> Vec<Vec<bool>> {
        let n = self.num_states();
        let mut sets = vec![vec![false; n]; w.len() + 1];
        sets[w.len()] = self.finals.clone();
        for i in (0..w.len()).rev() {
            for q in 0..n {
                sets[i][q] = self.successors(q, w[i]).any(|r| sets[i + 1][r]);
            }
        }
        sets
    }

    #[allow(clippy::too_many_arguments)]
    fn runs_rec(
        &self,
        w: &[Sym],
        i: usize,
        q: State,
        co: &[Vec<bool>],
        ids: &HashMap<Transition, usize>,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if !co[i][q] {
            return;
        }
        if i == w.len() {
            out.push(path.clone());
            return;
        }
        for r in self.successors(q, w[i]) {
            path.push(ids[&(q, w[i], r)]);
            self.runs_rec(w, i + 1, r, co, ids, path, out);
            path.pop();
        }
    }

    // ----- structure -----

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(q) = stack.pop() {
            for &(_, r) in &self.out[q] {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
        seen
    }

    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev = vec![Vec::new(); n];
        for (p, row) in self.out.iter().enumerate() {
            for &(_, q) in row {
                rev[q].push(p);
            }
        }
        let mut seen = self.finals.clone();
        let mut stack: Vec<State> = (0..n).filter(|&q| seen[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Restrict to useful states. The initial state is kept even if useless.
    pub fn trim(&self) -> Nfa {
        let r = self.reachable();
        let c = self.coreachable();
        let keep: Vec<bool> = (0..self.num_states())
            .map(|q| (r[q] && c[q]) || q == self.initial)
            .collect();
        let mut map = vec![usize::MAX; self.num_states()];
        let mut order = vec![self.initial];
        order.extend((0..self.num_states()).filter(|&q| keep[q] && q != self.initial));
        for (i, &q) in order.iter().enumerate() {
            map[q] = i;
        }
        let mut a = Nfa::new(self.alphabet.clone(), order.len());
        for (i, &q) in order.iter().enumerate() {
            a.finals[i] = self.finals[q];
            for &(s, r) in &self.out[q] {
                if keep[r] && map[r] != usize::MAX && c[r] {
                    a.out[i].push((s, map[r]));
                }
            }
            a.out[i].sort_unstable();
        }
        a
    }

    pub fn is_empty(&self) -> bool {
        !self.coreachable()[self.initial]
    }

    /// Shortest member, least in lex order among the shortest.
    pub fn shortest_member(&self) -> Option<Word> {
        let mut prev: Vec<Option<(State, Sym)>> = vec![None; self.num_states()];
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            if self.finals[q] {
                let mut w = Vec::new();
                let mut cur = q;
                while let Some((p, s)) = prev[cur] {
                    w.push(s);
                    cur = p;
                }
                w.reverse();
                return Some(w);
            }
            for &(s, r) in &self.out[q] {
                if !seen[r] {
                    seen[r] = true;
                    prev[r] = Some((q, s));
                    queue.push_back(r);
                }
            }
        }
        None
    }

    /// True if the trimmed automaton has a cycle (the language is infinite).
    pub fn is_infinite(&self) -> bool {
        let t = self.trim();
        if t.is_empty() {
            return false;
        }
        // iterative DFS colouring
        let n = t.num_states();
        let mut colour = vec![0u8; n];
        for root in 0..n {
            if colour[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            colour[root] = 1;
            while let Some((q, i)) = stack.pop() {
                if i < t.out[q].len() {
                    stack.push((q, i + 1));
                    let r = t.out[q][i].1;
                    match colour[r] {
                        0 => {
                            colour[r] = 1;
                            stack.push((r, 0));
                        }
                        1 => return true,
                        _ => {}
                    }
                } else {
                    colour[q] = 2;
                }
            }
        }
        false
    }

    pub fn reverse(&self) -> Nfa {
        // new initial state 0 simulates "any old final"
        let n = self.num_states();
        let mut a = Nfa::new(self.alphabet.clone(), n + 1);
        for (p, row) in self.out.iter().enumerate() {
            for &(s, q) in row {
                a.add_transition(q + 1, s, p + 1);
                if self.finals[q] {
                    a.add_transition(0, s, p + 1);
                }
            }
        }
        a.finals[self.initial + 1] = true;
        a.finals[0] = self.finals[self.initial];
        a
    }

    // ----- boolean operations -----

    pub fn intersection(&self, other: &Nfa) -> Nfa {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        product(self, other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Nfa) -> Nfa {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        self.intersection(&other.determinize().complement().to_nfa())
    }

    pub fn boolean(&self, other: &Nfa, op: BoolOp) -> Result<Nfa, AutomataError> {
        if self.alphabet != other.alphabet {
            return Err(AutomataError::AlphabetMismatch);
        }
        Ok(match op {
            BoolOp::Union => self.union(other),
            BoolOp::Intersection => self.intersection(other),
            BoolOp::Difference => self.difference(other),
        })
    }

    pub fn determinize(&self) -> Dfa {
        let mut index: HashMap<Vec<State>, usize> = HashMap::new();
        let mut sets = vec![vec![self.initial]];
        index.insert(vec![self.initial], 0);
        let mut trans: Vec<Vec<(Sym, usize)>> = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let set = sets[i].clone();
            let mut by_sym: std::collections::BTreeMap<Sym, BTreeSet<State>> = Default::default();
            for &q in &set {
                for &(s, r) in &self.out[q] {
                    by_sym.entry(s).or_default().insert(r);
                }
            }
            let mut row = Vec::with_capacity(by_sym.len());
            for (s, tgt) in by_sym {
                let tgt: Vec<State> = tgt.into_iter().collect();
                let id = match index.get(&tgt) {
                    Some(&id) => id,
                    None => {
                        sets.push(tgt.clone());
                        index.insert(tgt, sets.len() - 1);
                        sets.len() - 1
                    }
                };
                row.push((s, id));
            }
            trans.push(row);
            i += 1;
        }
        let finals = sets
            .iter()
            .map(|s| s.iter().any(|&q| self.finals[q]))
            .collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            finals,
            trans,
        }
    }

    /// `Some(w)` with `w ∈ L(self) \ L(other)` shortest, or `None` if included.
    pub fn inclusion_witness(&self, other: &Nfa) -> Option<Word> {
        assert_eq!(self.alphabet, other.alphabet, "alphabet mismatch");
        type Key = (State, Vec<State>);
        let start: Key = (self.initial, vec![other.initial]);
        let mut prev: HashMap<Key, Option<(Key, Sym)>> = HashMap::new();
        prev.insert(start.clone(), None);
        let mut queue = VecDeque::from([start]);
        while let Some(key) = queue.pop_front() {
            let (q, ref set) = key;
            if self.finals[q] && !set.iter().any(|&r| other.finals[r]) {
                let mut w = Vec::new();
                let mut cur = key.clone();
                while let Some(Some((p, s))) = prev.get(&cur) {
                    w.push(*s);
                    cur = p.clone();
                }
                w.reverse();
                return Some(w);
            }
            for &(s, q2) in &self.out[q] {
                let next = (q2, other.step_set(set, s));
                if !prev.contains_key(&next) {
                    prev.insert(next.clone(), Some((key.clone(), s)));
                    queue.push_back(next);
                }
            }
        }
        None
    }

    pub fn is_subset_of(&self, other: &Nfa) -> bool {
        self.inclusion_witness(other).is_none()
    }

    pub fn equivalent(&self, other: &Nfa) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }

    // ----- enumeration -----

    /// `table[r][q]`: some word of length exactly `r` leads from `q` to a final state.
    fn exact_length_table(&self, max: usize) -> Vec<Vec<bool>> {
        let n = self.num_states();
        let mut table = vec![self.finals.clone()];
        for r in 1..=max {
            let prev = &table[r - 1];
            let row: Vec<bool> = (0..n)
                .map(|q| self.out[q].iter().any(|&(_, t)| prev[t]))
                .collect();
            table.push(row);
        }
        table
    }

    /// All members of length exactly `len`, in lex order.
    pub fn words_of_length(&self, len: usize) -> Vec<Word> {
        let table = self.exact_length_table(len);
        let mut out = Vec::new();
        let mut w = Vec::with_capacity(len);
        self.words_rec(vec![self.initial], len, &table, &mut w, &mut out, usize::MAX);
        out
    }

    fn words_rec(
        &self,
        set: Vec<State>,
        rem: usize,
        table: &[Vec<bool>],
        w: &mut Word,
        out: &mut Vec<Word>,
        limit: usize,
    ) {
        if out.len() >= limit || !set.iter().any(|&q| table[rem][q]) {
            return;
        }
        if rem == 0 {
            out.push(w.clone());
            return;
        }
        let mut syms: Vec<Sym> = set
            .iter()
            .flat_map(|&q| self.out[q].iter().map(|&(s, _)| s))
            .collect();
        syms.sort_unstable();
        syms.dedup();
        for s in syms {
            let next = self.step_set(&set, s);
            w.push(s);
            self.words_rec(next, rem - 1, table, w, out, limit);
            w.pop();
            if out.len() >= limit {
                return;
            }
        }
    }

    /// The first `limit` members in length-lexicographic order.
    pub fn enumerate_llex(&self, limit: usize) -> Vec<Word> {
        let t = self.trim();
        let mut out = Vec::new();
        if limit == 0 || t.is_empty() {
            return out;
        }
        let infinite = t.is_infinite();
        let n = t.num_states();
        let mut len = 0;
        loop {
            if !infinite && len >= n {
                break;
            }
            let table = t.exact_length_table(len);
            let mut w = Vec::new();
            t.words_rec(vec![t.initial], len, &table, &mut w, &mut out, limit);
            if out.len() >= limit {
                break;
            }
            len += 1;
        }
        out
    }

    /// All members of length at most `max`, in length-lexicographic order.
    pub fn words_up_to(&self, max: usize) -> Vec<Word> {
        let t = self.trim();
        if t.is_empty() {
            return Vec::new();
        }
        let table = t.exact_length_table(max);
        let mut out = Vec::new();
        for len in 0..=max {
            let mut w = Vec::new();
            t.words_rec(vec![t.initial], len, &table, &mut w, &mut out, usize::MAX);
        }
        out
    }

    // ----- convolution tracks -----

    /// The projection of a convolution language onto one track.
    ///
    /// A state becomes final when the remaining tracks can be finished with
    /// letters whose projected component is padding.
    pub fn project(&self, track: usize) -> Result<Nfa, AutomataError> {
        let base = self
            .alphabet
            .base()
            .ok_or(AutomataError::NotConvolution)?
            .clone();
        let arity = self.alphabet.arity().unwrap();
        if track >= arity {
            return Err(AutomataError::ArityMismatch {
                expected: arity,
                found: track + 1,
            });
        }
        let n = self.num_states();
        // tail[q]: some padding-on-track continuation from q reaches a final
        let mut tail = self.finals.clone();
        loop {
            let mut changed = false;
            for q in 0..n {
                if tail[q] {
                    continue;
                }
                if self.out[q]
                    .iter()
                    .any(|&(s, r)| tail[r] && self.alphabet.decode(s)[track].is_none())
                {
                    tail[q] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut a = Nfa::new(base, n);
        a.initial = self.initial;
        for q in 0..n {
            a.finals[q] = tail[q];
            for &(s, r) in &self.out[q] {
                if let Some(c) = self.alphabet.decode(s)[track] {
                    a.add_transition(q, c, r);
                }
            }
        }
        Ok(a)
    }

    /// Relabel every transition; symbols mapped to `None` are dropped.
    pub fn map_symbols(&self, alphabet: Arc<Alphabet>, f: impl Fn(Sym) -> Option<Sym>) -> Nfa {
        let mut a = Nfa::new(alphabet, self.num_states());
        a.initial = self.initial;
        a.finals = self.finals.clone();
        for (p, row) in self.out.iter().enumerate() {
            for &(s, q) in row {
                if let Some(t) = f(s) {
                    a.add_transition(p, t, q);
                }
            }
        }
        a
    }
}

/// Synchronous product over reachable pairs with a verdict on finality.
pub fn product(a: &Nfa, b: &Nfa, fin: impl Fn(bool, bool) -> bool) -> Nfa {
    let mut index: HashMap<(State, State), State> = HashMap::new();
    let mut pairs = vec![(a.initial, b.initial)];
    index.insert((a.initial, b.initial), 0);
    let mut out = Nfa::new(a.alphabet.clone(), 1);
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        out.finals[i] = fin(a.finals[p], b.finals[q]);
        for &(s, p2) in &a.out[p] {
            for q2 in b.successors(q, s) {
                let id = *index.entry((p2, q2)).or_insert_with(|| {
                    pairs.push((p2, q2));
                    out.out.push(Vec::new());
                    out.finals.push(false);
                    pairs.len() - 1
                });
                out.add_transition(i, s, id);
            }
        }
        i += 1;
    }
    out
}

/// A deterministic, possibly partial automaton; missing moves reject.
#[derive(Clone, Debug)]
pub struct Dfa {
    alphabet: Arc<Alphabet>,
    finals: Vec<bool>,
    trans: Vec<Vec<(Sym, usize)>>,
}

impl Dfa {
    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn initial(&self) -> usize {
        0
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn next(&self, q: usize, s: Sym) -> Option<usize> {
        let row = &self.trans[q];
        row.binary_search_by_key(&s, |&(t, _)| t)
            .ok()
            .map(|i| row[i].1)
    }

    pub fn accepts(&self, w: &[Sym]) -> bool {
        let mut q = 0;
        for &s in w {
            match self.next(q, s) {
                Some(r) => q = r,
                None => return false,
            }
        }
        self.finals[q]
    }

    /// Add a rejecting sink so that every state has every symbol.
    pub fn complete(&self) -> Dfa {
        let k = self.alphabet.len();
        let mut d = self.clone();
        let full = d.trans.iter().all(|r| r.len() == k);
        if full {
            return d;
        }
        let sink = d.trans.len();
        d.trans.push(Vec::new());
        d.finals.push(false);
        for row in d.trans.iter_mut() {
            let mut complete = Vec::with_capacity(k);
            let mut it = row.iter().peekable();
            for s in 0..k as Sym {
                match it.peek() {
                    Some(&&(t, r)) if t == s => {
                        complete.push((s, r));
                        it.next();
                    }
                    _ => complete.push((s, sink)),
                }
            }
            *row = complete;
        }
        d
    }

    pub fn complement(&self) -> Dfa {
        let mut d = self.complete();
        for f in d.finals.iter_mut() {
            *f = !*f;
        }
        d
    }

    /// Moore-style partition refinement on the completed automaton.
    pub fn minimize(&self) -> Dfa {
        let d = self.complete();
        let n = d.num_states();
        let mut class: Vec<usize> = d.finals.iter().map(|&f| f as usize).collect();
        let mut count = {
            let mut v = class.clone();
            v.sort_unstable();
            v.dedup();
            v.len()
        };
        loop {
            let mut sig_index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next = vec![0; n];
            for q in 0..n {
                let sig = (class[q], d.trans[q].iter().map(|&(_, r)| class[r]).collect());
                let len = sig_index.len();
                next[q] = *sig_index.entry(sig).or_insert(len);
            }
            let new_count = sig_index.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // renumber so that the initial state is 0, in BFS order
        let mut map = vec![usize::MAX; count];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        map[class[0]] = 0;
        order.push(0);
        while let Some(q) = queue.pop_front() {
            for &(_, r) in &d.trans[q] {
                if map[class[r]] == usize::MAX {
                    map[class[r]] = order.len();
                    order.push(r);
                    queue.push_back(r);
                }
            }
        }
        let trans = order
            .iter()
            .map(|&q| d.trans[q].iter().map(|&(s, r)| (s, map[class[r]])).collect())
            .collect();
        let finals = order.iter().map(|&q| d.finals[q]).collect();
        Dfa {
            alphabet: d.alphabet.clone(),
            finals,
            trans,
        }
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut a = Nfa::new(self.alphabet.clone(), self.num_states());
        a.finals = self.finals.clone();
        a.out = self.trans.clone();
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Arc<Alphabet> {
        Alphabet::chars("ab")
    }

    #[test]
    fn union_of_literals() {
        let s = ab();
        let a = Nfa::literal(s.clone(), &s.word("a")).union(&Nfa::literal(s.clone(), &s.word("b")));
        assert_eq!(a.enumerate_llex(10), vec![s.word("a"), s.word("b")]);
    }

    #[test]
    fn concat_star_plus() {
        let s = ab();
        let a = Nfa::literal(s.clone(), &s.word("a"));
        let b = Nfa::literal(s.clone(), &s.word("b"));
        let astar_b = a.star().concat(&b);
        assert_eq!(
            astar_b.enumerate_llex(3),
            vec![s.word("b"), s.word("ab"), s.word("aab")]
        );
        assert!(!a.plus().accepts(&[]));
        assert!(a.star().accepts(&[]));
    }

    #[test]
    fn intersection_and_difference() {
        let s = ab();
        let a = Nfa::literal(s.clone(), &s.word("a"));
        let b = Nfa::literal(s.clone(), &s.word("b"));
        let l1 = a.star().concat(&b);
        let l2 = a.concat(&b.star());
        assert_eq!(l1.intersection(&l2).words_up_to(5), vec![s.word("ab")]);
        let d = l1.difference(&l2);
        assert!(d.accepts(&s.word("b")));
        assert!(!d.accepts(&s.word("ab")));
        assert!(Nfa::universal(s.clone())
            .intersection(&Nfa::empty(s.clone()))
            .is_empty());
    }

    #[test]
    fn minimize_collapses() {
        let s = ab();
        let a = Nfa::literal(s.clone(), &s.word("a"));
        let l = a.star().union(&a.plus());
        let m = l.determinize().minimize();
        // a* needs one live state plus the sink
        assert_eq!(m.num_states(), 2);
    }

    #[test]
    fn projection() {
        let base = ab();
        let c = Alphabet::conv(&base, 2);
        let w: Word = vec![
            c.encode(&[Some(0), Some(0)]).unwrap(),
            c.encode(&[None, Some(1)]).unwrap(),
        ];
        let r = Nfa::literal(c, &w);
        assert_eq!(r.project(0).unwrap().words_up_to(3), vec![base.word("a")]);
        assert_eq!(r.project(1).unwrap().words_up_to(3), vec![base.word("ab")]);
    }

    #[test]
    fn runs_counted_and_listed() {
        let s = ab();
        let mut a = Nfa::new(s.clone(), 3);
        a.add_transition(0, 0, 1);
        a.add_transition(0, 0, 2);
        a.set_final(1, true);
        a.set_final(2, true);
        let w = s.word("a");
        assert_eq!(a.count_accepting_runs(&w), BigUint::from(2u32));
        assert_eq!(a.accepting_runs(&w).len(), 2);
    }
}
