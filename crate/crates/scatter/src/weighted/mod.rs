//! Max-plus automata with transition weights in {−∞, 0, 1}.

mod equiv;
mod krob;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::automata::{Alphabet, AlphabetSpec, Sym, Word};

pub use equiv::{bounded_equiv, Equivalence};
pub use krob::{
    build_b_m, krob_checker, lift_a_m, prefix_max, r_value, specialize, trace_alphabet, KrobBundle, BOX,
};

pub type State = usize;
/// `None` is −∞.
pub type Value = Option<u64>;

#[derive(Debug, thiserror::Error)]
pub enum WeightedError {
    #[error("behaviour is defined on nonempty words only")]
    EmptyWord,
    #[error("weight must be 0 or 1, got {0}")]
    BadWeight(u8),
    #[error("state {0} out of range")]
    UnknownState(usize),
    #[error(transparent)]
    Automata(#[from] crate::automata::AutomataError),
    #[error("format: {0}")]
    Format(String),
}

#[derive(Clone, Debug)]
pub struct WeightedAutomaton {
    alphabet: Arc<Alphabet>,
    initial: State,
    finals: Vec<bool>,
    /// Sorted by (symbol, target); one weight per triple.
    out: Vec<Vec<(Sym, State, u8)>>,
}

impl WeightedAutomaton {
    pub fn new(alphabet: Arc<Alphabet>, n: usize) -> Self {
        let n = n.max(1);
        WeightedAutomaton {
            alphabet,
            initial: 0,
            finals: vec![false; n],
            out: vec![Vec::new(); n],
        }
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

    pub fn add_state(&mut self) -> State {
        self.out.push(Vec::new());
        self.finals.push(false);
        self.out.len() - 1
    }

    /// Set `μ(p, s, q) = w`; a repeated triple keeps the larger weight.
    pub fn add_transition(&mut self, p: State, s: Sym, q: State, w: u8) {
        assert!(w <= 1, "weights are 0 or 1");
        let row = &mut self.out[p];
        match row.binary_search_by_key(&(s, q), |&(t, r, _)| (t, r)) {
            Ok(i) => row[i].2 = row[i].2.max(w),
            Err(i) => row.insert(i, (s, q, w)),
        }
    }

    pub fn out(&self, q: State) -> &[(Sym, State, u8)] {
        &self.out[q]
    }

    pub fn weight(&self, p: State, s: Sym, q: State) -> Option<u8> {
        let row = &self.out[p];
        row.binary_search_by_key(&(s, q), |&(t, r, _)| (t, r)).ok().map(|i| row[i].2)
    }

    pub fn num_transitions(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    /// The max-plus vector after reading `w` from the initial state.
    pub fn start_vector(&self) -> Vec<Value> {
        let mut v = vec![None; self.num_states()];
        v[self.initial] = Some(0);
        v
    }

    pub fn step_vector(&self, v: &[Value], s: Sym) -> Vec<Value> {
        let mut next: Vec<Value> = vec![None; self.num_states()];
        for (p, &val) in v.iter().enumerate() {
            let Some(x) = val else { continue };
            let row = &self.out[p];
            let lo = row.partition_point(|&(t, _, _)| t < s);
            for &(t, q, w) in &row[lo..] {
                if t != s {
                    break;
                }
                let y = x + w as u64;
                if next[q].is_none_or(|z| z < y) {
                    next[q] = Some(y);
                }
            }
        }
        next
    }

    pub fn final_value(&self, v: &[Value]) -> Value {
        v.iter()
            .enumerate()
            .filter(|(q, _)| self.finals[*q])
            .filter_map(|(_, &x)| x)
            .max()
    }

    /// `‖A‖(w)` by max-plus vector-matrix products.
    pub fn behavior(&self, w: &[Sym]) -> Result<Value, WeightedError> {
        if w.is_empty() {
            return Err(WeightedError::EmptyWord);
        }
        let mut v = self.start_vector();
        for &s in w {
            v = self.step_vector(&v, s);
        }
        Ok(self.final_value(&v))
    }

    /// Every accepting run on `w` as its state sequence, with its weight.
    pub fn enumerate_runs(&self, w: &[Sym]) -> Vec<(Vec<State>, u64)> {
        let mut out = Vec::new();
        if w.is_empty() {
            return out;
        }
        let mut path = vec![self.initial];
        self.runs_from(w, 0, &mut path, 0, &mut out);
        out
    }

    fn runs_from(&self, w: &[Sym], i: usize, path: &mut Vec<State>, wt: u64, out: &mut Vec<(Vec<State>, u64)>) {
        let p = *path.last().unwrap();
        if i == w.len() {
            if self.finals[p] {
                out.push((path.clone(), wt));
            }
            return;
        }
        for &(t, q, x) in &self.out[p] {
            if t == w[i] {
                path.push(q);
                self.runs_from(w, i + 1, path, wt + x as u64, out);
                path.pop();
            }
        }
    }

    /// Disjoint union under a fresh initial state, so `‖A ∪ B‖ = max(‖A‖, ‖B‖)`.
    pub fn max_union(parts: &[&WeightedAutomaton]) -> WeightedAutomaton {
        let alphabet = parts[0].alphabet.clone();
        let mut r = WeightedAutomaton::new(alphabet, 1);
        for a in parts {
            assert_eq!(a.alphabet.len(), r.alphabet.len(), "alphabets differ");
            let off = r.num_states();
            for _ in 0..a.num_states() {
                r.add_state();
            }
            for p in 0..a.num_states() {
                r.finals[off + p] = a.finals[p];
                for &(s, q, w) in &a.out[p] {
                    r.add_transition(off + p, s, off + q, w);
                    if p == a.initial {
                        r.add_transition(0, s, off + q, w);
                    }
                }
            }
        }
        r
    }

    /// Drop states that are unreachable or cannot reach a final state.
    pub fn trim(&self) -> WeightedAutomaton {
        let n = self.num_states();
        let mut fwd = vec![false; n];
        let mut stack = vec![self.initial];
        fwd[self.initial] = true;
        while let Some(p) = stack.pop() {
            for &(_, q, _) in &self.out[p] {
                if !fwd[q] {
                    fwd[q] = true;
                    stack.push(q);
                }
            }
        }
        let mut bwd = self.finals.clone();
        loop {
            let mut changed = false;
            for p in 0..n {
                if !bwd[p] && self.out[p].iter().any(|&(_, q, _)| bwd[q]) {
                    bwd[p] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let keep: Vec<bool> = (0..n).map(|q| q == self.initial || (fwd[q] && bwd[q])).collect();
        let mut map = vec![usize::MAX; n];
        let mut order = vec![self.initial];
        map[self.initial] = 0;
        for q in 0..n {
            if keep[q] && q != self.initial {
                map[q] = order.len();
                order.push(q);
            }
        }
        let mut r = WeightedAutomaton::new(self.alphabet.clone(), order.len());
        for (i, &q) in order.iter().enumerate() {
            r.finals[i] = self.finals[q];
            for &(s, t, w) in &self.out[q] {
                if keep[t] {
                    r.add_transition(i, s, map[t], w);
                }
            }
        }
        r
    }

    pub fn to_json(&self) -> WeightedJson {
        let mut transitions = Vec::new();
        for p in 0..self.num_states() {
            for &(s, q, w) in &self.out[p] {
                transitions.push((p, self.alphabet.name(s), q, w));
            }
        }
        WeightedJson {
            alphabet: AlphabetSpec::of(&self.alphabet),
            states: self.num_states(),
            initial: self.initial,
            finals: (0..self.num_states()).filter(|&q| self.finals[q]).collect(),
            transitions,
        }
    }

    pub fn from_json(j: &WeightedJson) -> Result<Self, WeightedError> {
        let alphabet = j.alphabet.build()?;
        let n = j.states;
        if j.initial >= n {
            return Err(WeightedError::UnknownState(j.initial));
        }
        let mut a = WeightedAutomaton::new(alphabet.clone(), n);
        a.initial = j.initial;
        for &f in &j.finals {
            if f >= n {
                return Err(WeightedError::UnknownState(f));
            }
            a.finals[f] = true;
        }
        for (p, s, q, w) in &j.transitions {
            if *p >= n || *q >= n {
                return Err(WeightedError::UnknownState((*p).max(*q)));
            }
            if *w > 1 {
                return Err(WeightedError::BadWeight(*w));
            }
            let sym = alphabet
                .lookup(s)
                .ok_or_else(|| WeightedError::Format(format!("unknown symbol {s:?}")))?;
            a.add_transition(*p, sym, *q, *w);
        }
        Ok(a)
    }

    pub fn render_word(&self, w: &Word) -> String {
        self.alphabet.render(w)
    }
}

/// Transitions are `(source, symbol, target, weight)`; absent means −∞.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightedJson {
    pub alphabet: AlphabetSpec,
    pub states: usize,
    pub initial: usize,
    pub finals: Vec<usize>,
    pub transitions: Vec<(usize, String, usize, u8)>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_loop_counts_letters() {
        let ab = Alphabet::chars("a");
        let mut a = WeightedAutomaton::new(ab.clone(), 1);
        a.set_final(0, true);
        a.add_transition(0, 0, 0, 1);
        for n in 1..6 {
            assert_eq!(a.behavior(&vec![0; n]).unwrap(), Some(n as u64));
        }
        assert!(a.behavior(&[]).is_err());
        let empty = WeightedAutomaton::new(ab, 1);
        assert_eq!(empty.behavior(&[0, 0]).unwrap(), None);
        assert!(empty.enumerate_runs(&[0]).is_empty());
    }

    #[test]
    fn two_branches() {
        let s = Alphabet::chars("abc");
        let mut a = WeightedAutomaton::new(s.clone(), 7);
        // branch one weighs 2, branch two weighs 3
        a.add_transition(0, 0, 1, 1);
        a.add_transition(1, 1, 2, 1);
        a.add_transition(2, 2, 3, 0);
        a.add_transition(0, 0, 4, 1);
        a.add_transition(4, 1, 5, 1);
        a.add_transition(5, 2, 6, 1);
        a.set_final(3, true);
        a.set_final(6, true);
        let w = s.word("abc");
        assert_eq!(a.behavior(&w).unwrap(), Some(3));
        let runs = a.enumerate_runs(&w);
        assert_eq!(runs.len(), 2);
        assert_eq!(runs.iter().map(|r| r.1).max(), Some(3));
    }

    #[test]
    fn json_round_trip() {
        let s = Alphabet::chars("ab");
        let mut a = WeightedAutomaton::new(s, 2);
        a.add_transition(0, 1, 1, 1);
        a.set_final(1, true);
        let j = serde_json::to_string(&a.to_json()).unwrap();
        let b = WeightedAutomaton::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(b.behavior(&[1]).unwrap(), Some(1));
    }
}
