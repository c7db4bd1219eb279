//! The weighted automata behind the reduction from Minsky machines.
//!
//! A trace of a machine is a sequence of blocks `$ a^x b^y s_q`, one per
//! configuration, with every letter followed by a box. `CT_reg` keeps the
//! traces that start in `(initial, m, 0)`, end in the accepting state and
//! follow the control flow including zero tests; it does not check the
//! counter arithmetic. `A` scores a trace of `k` letters:
//!
//! * a zero component gives 0 on every word,
//! * a baseline scores each letter once, giving `k`,
//! * an error run picks one step and one counter, guesses the expected change
//!   `δ`, and scores `k + (x' − x − δ)` or `k − (x' − x − δ)` by dropping or
//!   doubling (via the box) the counter letters on either side.
//!
//! So `‖A‖(u) = k` on a correct trace and `> k` on a trace with an arithmetic
//! error, which is the required gap at `½|u|`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::automata::{Alphabet, Nfa, Sym, Word};
use crate::minsky::{Instr, MinskyMachine};

use super::{Value, WeightedAutomaton};

pub const BOX: &str = "□";

/// `$`, `□`, `a`, `b`, then one letter `s_q` per machine state in name order.
pub fn trace_alphabet(m: &MinskyMachine) -> Arc<Alphabet> {
    let mut names: Vec<String> = vec!["$".into(), BOX.into(), "a".into(), "b".into()];
    names.extend(m.program.keys().map(|q| format!("s_{q}")));
    Arc::new(Alphabet::new(&names).expect("distinct names"))
}

const DOLLAR: Sym = 0;
const BX: Sym = 1;
const LA: Sym = 2;
const LB: Sym = 3;

#[derive(Clone, Debug)]
pub struct KrobBundle {
    pub machine: MinskyMachine,
    pub sigma: Arc<Alphabet>,
    pub a: WeightedAutomaton,
    pub ct_reg: Nfa,
    states: Vec<String>,
}

impl KrobBundle {
    pub fn state_sym(&self, q: &str) -> Sym {
        4 + self.states.iter().position(|s| s == q).expect("declared state") as Sym
    }

    /// The interleaved word for blocks `(x, y, state)`.
    pub fn trace(&self, blocks: &[(usize, usize, &str)]) -> Word {
        let mut w = Vec::new();
        for &(x, y, q) in blocks {
            w.push(DOLLAR);
            w.extend(std::iter::repeat_n(LA, x));
            w.extend(std::iter::repeat_n(LB, y));
            w.push(self.state_sym(q));
        }
        w.into_iter().flat_map(|s| [s, BX]).collect()
    }

    /// `$□(a□)^m`
    pub fn marker(&self, m: usize) -> Word {
        marker(m)
    }
}

fn marker(m: usize) -> Word {
    let mut v = vec![DOLLAR, BX];
    for _ in 0..m {
        v.extend([LA, BX]);
    }
    v
}

/// `max{n | $□(a□)^n ≤pref u}`, or `None` when `u` does not start with `$□`.
pub fn prefix_max(u: &[Sym]) -> Option<usize> {
    if !u.starts_with(&[DOLLAR, BX]) {
        return None;
    }
    let mut n = 0;
    while u.len() >= 4 + 2 * n && u[2 + 2 * n] == LA && u[3 + 2 * n] == BX {
        n += 1;
    }
    Some(n)
}

/// Control-flow successor given which counters are zero.
fn succ(m: &MinskyMachine, q: &str, z1: bool, z2: bool) -> Option<String> {
    match &m.program[q] {
        Instr::Inc { next, .. } => Some(next.clone()),
        Instr::DecOrZero { counter, if_pos, if_zero } => {
            let z = if *counter == 1 { z1 } else { z2 };
            Some(if z { if_zero.clone() } else { if_pos.clone() })
        }
        Instr::Halt => None,
    }
}

/// Expected change of counter `c` when leaving `q`, given whether it was zero.
fn delta(m: &MinskyMachine, q: &str, c: u8, zero: bool) -> Option<i8> {
    match &m.program[q] {
        Instr::Inc { counter, .. } => Some(if *counter == c { 1 } else { 0 }),
        Instr::DecOrZero { counter, .. } => Some(if *counter == c && !zero { -1 } else { 0 }),
        Instr::Halt => None,
    }
}

/// Build states on demand from hashable keys.
struct Builder<K> {
    index: HashMap<K, usize>,
    keys: Vec<K>,
}

impl<K: Clone + Eq + std::hash::Hash> Builder<K> {
    fn new() -> Self {
        Builder { index: HashMap::new(), keys: Vec::new() }
    }

    fn id(&mut self, k: K) -> usize {
        if let Some(&i) = self.index.get(&k) {
            return i;
        }
        self.keys.push(k.clone());
        self.index.insert(k, self.keys.len() - 1);
        self.keys.len() - 1
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Ct {
    Start,
    /// Inside a block; `prev` is the previous configuration's state and zero flags.
    Block { prev: Option<(String, bool, bool)>, in_b: bool, sa: bool, sb: bool },
    After { q: String, z1: bool, z2: bool },
}

fn ct_step(m: &MinskyMachine, states: &[String], k: &Ct, s: Sym) -> Option<Ct> {
    match k {
        Ct::Start => (s == DOLLAR).then_some(Ct::Block { prev: None, in_b: false, sa: false, sb: false }),
        Ct::Block { prev, in_b, sa, sb } => match s {
            LA if !in_b => Some(Ct::Block { prev: prev.clone(), in_b: false, sa: true, sb: *sb }),
            LB if prev.is_some() => Some(Ct::Block { prev: prev.clone(), in_b: true, sa: *sa, sb: true }),
            s if s >= 4 => {
                let q = &states[(s - 4) as usize];
                let ok = match prev {
                    None => *q == m.initial,
                    Some((p, z1, z2)) => succ(m, p, *z1, *z2).as_ref() == Some(q),
                };
                ok.then(|| Ct::After { q: q.clone(), z1: !sa, z2: !sb })
            }
            _ => None,
        },
        Ct::After { q, z1, z2 } => (s == DOLLAR && m.program[q] != Instr::Halt).then(|| Ct::Block {
            prev: Some((q.clone(), *z1, *z2)),
            in_b: false,
            sa: false,
            sb: false,
        }),
    }
}

fn build_ct(m: &MinskyMachine, sigma: &Arc<Alphabet>, states: &[String]) -> Nfa {
    let mut b: Builder<(Ct, bool)> = Builder::new();
    let mut a = Nfa::new(sigma.clone(), 1);
    b.id((Ct::Start, false));
    let mut i = 0;
    while i < b.keys.len() {
        let (k, boxed) = b.keys[i].clone();
        while a.num_states() < b.keys.len() {
            a.add_state();
        }
        if boxed {
            let j = b.id((k, false));
            while a.num_states() < b.keys.len() {
                a.add_state();
            }
            a.add_transition(i, BX, j);
        } else {
            if let Ct::After { q, .. } = &k {
                a.set_final(i, *q == m.accepting);
            }
            for s in sigma.symbols().filter(|&s| s != BX) {
                if let Some(n) = ct_step(m, states, &k, s) {
                    let j = b.id((n, true));
                    while a.num_states() < b.keys.len() {
                        a.add_state();
                    }
                    a.add_transition(i, s, j);
                }
            }
        }
        i += 1;
    }
    a
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Err {
    /// Before the chosen step; `boxed` means a box is due.
    Pre { boxed: bool },
    /// In the chosen block, with the guessed change and whether the counter was seen.
    First { d: i8, seen: bool, boxed: Option<u8> },
    /// Expecting the `$` of the next block.
    Gap { d: i8, boxed: bool },
    Second { boxed: Option<u8> },
    Post { boxed: bool },
}

fn build_a(m: &MinskyMachine, sigma: &Arc<Alphabet>, states: &[String]) -> WeightedAutomaton {
    let letters: Vec<Sym> = sigma.symbols().filter(|&s| s != BX).collect();
    // zero component and baseline
    let mut zero = WeightedAutomaton::new(sigma.clone(), 1);
    zero.set_final(0, true);
    for s in sigma.symbols() {
        zero.add_transition(0, s, 0, 0);
    }
    let mut base = WeightedAutomaton::new(sigma.clone(), 2);
    base.set_final(0, true);
    for &s in &letters {
        base.add_transition(0, s, 1, 1);
    }
    base.add_transition(1, BX, 0, 0);
    let mut parts = vec![zero, base];

    for c in [1u8, 2] {
        let counter = if c == 1 { LA } else { LB };
        for up in [true, false] {
            let mut b: Builder<Err> = Builder::new();
            let mut wa = WeightedAutomaton::new(sigma.clone(), 1);
            b.id(Err::Pre { boxed: false });
            let mut i = 0;
            while i < b.keys.len() {
                let k = b.keys[i];
                let mut edges: Vec<(Sym, Err, u8)> = Vec::new();
                match k {
                    Err::Pre { boxed: true } => edges.push((BX, Err::Pre { boxed: false }, 0)),
                    Err::Pre { boxed: false } => {
                        for &s in &letters {
                            edges.push((s, Err::Pre { boxed: true }, 1));
                        }
                        for d in [-1, 0, 1] {
                            edges.push((DOLLAR, Err::First { d, seen: false, boxed: Some(0) }, 1));
                        }
                    }
                    Err::First { d, seen, boxed: Some(w) } => {
                        edges.push((BX, Err::First { d, seen, boxed: None }, w))
                    }
                    Err::First { d, seen, boxed: None } => {
                        for &s in &letters {
                            if s == counter {
                                let w = if up { 0 } else { 1 };
                                edges.push((s, Err::First { d, seen: true, boxed: Some(w) }, w));
                            } else if s == LA || s == LB {
                                edges.push((s, Err::First { d, seen, boxed: Some(0) }, 1));
                            } else if s >= 4 {
                                let q = &states[(s - 4) as usize];
                                if delta(m, q, c, !seen) == Some(d) {
                                    edges.push((s, Err::Gap { d, boxed: true }, 1));
                                }
                            }
                        }
                    }
                    Err::Gap { d, boxed: true } => edges.push((BX, Err::Gap { d, boxed: false }, 0)),
                    Err::Gap { d, boxed: false } => {
                        // constant correction for δ on the `$` and its box
                        let (lw, bw) = match (up, d) {
                            (true, 1) | (false, -1) => (0, 0),
                            (true, -1) | (false, 1) => (1, 1),
                            _ => (1, 0),
                        };
                        edges.push((DOLLAR, Err::Second { boxed: Some(bw) }, lw));
                    }
                    Err::Second { boxed: Some(w) } => edges.push((BX, Err::Second { boxed: None }, w)),
                    Err::Second { boxed: None } => {
                        for &s in &letters {
                            if s == counter {
                                let w = if up { 1 } else { 0 };
                                edges.push((s, Err::Second { boxed: Some(w) }, w));
                            } else if s == LA || s == LB {
                                edges.push((s, Err::Second { boxed: Some(0) }, 1));
                            } else if s >= 4 {
                                edges.push((s, Err::Post { boxed: true }, 1));
                            }
                        }
                    }
                    Err::Post { boxed: true } => edges.push((BX, Err::Post { boxed: false }, 0)),
                    Err::Post { boxed: false } => {
                        for &s in &letters {
                            edges.push((s, Err::Post { boxed: true }, 1));
                        }
                    }
                }
                for (s, t, w) in edges {
                    let j = b.id(t);
                    while wa.num_states() < b.keys.len() {
                        wa.add_state();
                    }
                    wa.add_transition(i, s, j, w);
                }
                wa.set_final(i, k == Err::Post { boxed: false });
                i += 1;
            }
            parts.push(wa.trim());
        }
    }
    let refs: Vec<&WeightedAutomaton> = parts.iter().collect();
    WeightedAutomaton::max_union(&refs)
}

/// The weighted automaton `A` and the trace language `CT_reg` for `m`.
pub fn krob_checker(m: &MinskyMachine) -> KrobBundle {
    let sigma = trace_alphabet(m);
    let states: Vec<String> = m.program.keys().cloned().collect();
    let ct_reg = build_ct(m, &sigma, &states).trim();
    let a = build_a(m, &sigma, &states);
    KrobBundle { machine: m.clone(), sigma, a, ct_reg, states }
}

/// `‖A_M‖(u) = max(⌊|u|/2⌋ + 1, ‖A‖(u))`
pub fn lift_a_m(bundle: &KrobBundle) -> WeightedAutomaton {
    // weight 1 at position 1 and at every even position
    let mut half = WeightedAutomaton::new(bundle.sigma.clone(), 3);
    for s in bundle.sigma.symbols() {
        half.add_transition(0, s, 1, 1);
        half.add_transition(1, s, 2, 1);
        half.add_transition(2, s, 1, 0);
    }
    half.set_final(1, true);
    half.set_final(2, true);
    WeightedAutomaton::max_union(&[&bundle.a, &half])
}

/// Deterministic case checker on `u ⊗ v`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct Check {
    /// Position in `$□(a□)^*` on track 2: 0 `$`, 1 box, 2 `a` or end, 3 box, 4 ended.
    v: u8,
    /// State of the complete `CT_reg` DFA, or whether it accepted when track 1 ended.
    ct: Result<usize, bool>,
    /// 0 agreeing, 1 just saw `a` after the marker, 2 good, 3 bad.
    cmp: u8,
}

/// The weighted automaton over pairs with the three-way case split of `B_M`.
pub fn build_b_m(bundle: &KrobBundle, a_m: &WeightedAutomaton) -> WeightedAutomaton {
    let sigma = &bundle.sigma;
    let conv = Alphabet::conv(sigma, 2);
    let ct = bundle.ct_reg.determinize().complete();

    let step = |c: Check, x: Option<Sym>, y: Option<Sym>| -> Option<Check> {
        let v = match (c.v, y) {
            (0, Some(DOLLAR)) => 1,
            (1, Some(BX)) | (3, Some(BX)) => 2,
            (2, Some(LA)) => 3,
            (2, None) | (4, None) => 4,
            _ => return None,
        };
        let ct = match (c.ct, x) {
            (Ok(q), Some(s)) => Ok(ct.next(q, s).expect("complete")),
            (Ok(q), None) => Err(ct.is_final(q)),
            (Err(f), None) => Err(f),
            (Err(_), Some(_)) => return None,
        };
        let cmp = match c.cmp {
            0 if y.is_some() => {
                if x == y {
                    0
                } else {
                    3
                }
            }
            0 => {
                if x == Some(LA) {
                    1
                } else {
                    2
                }
            }
            1 => {
                if x == Some(BX) {
                    3
                } else {
                    2
                }
            }
            k => k,
        };
        Some(Check { v, ct, cmp })
    };
    let matches = |c: &Check| {
        let ct_ok = match c.ct {
            Ok(q) => ct.is_final(q),
            Err(f) => f,
        };
        ct_ok && c.cmp != 3
    };
    let v_ok = |c: &Check| c.v == 2 || c.v == 4;

    let branch = |w: &WeightedAutomaton, want_match: bool| -> WeightedAutomaton {
        // states: (check, Some(weighted state) | None once track 1 has ended)
        let mut b: Builder<(Check, Option<usize>)> = Builder::new();
        let mut out = WeightedAutomaton::new(conv.clone(), 1);
        let start = Check { v: 0, ct: Ok(0), cmp: 0 };
        b.id((start, Some(w.initial())));
        let mut i = 0;
        while i < b.keys.len() {
            let (c, ws) = b.keys[i];
            let mut edges = Vec::new();
            for sym in conv.symbols() {
                let t = conv.decode(sym);
                let (x, y) = (t[0], t[1]);
                // u is nonempty
                if i == 0 && x.is_none() {
                    continue;
                }
                let Some(c2) = step(c, x, y) else { continue };
                match (ws, x) {
                    (Some(q), Some(s)) => {
                        for &(t, r, wt) in w.out(q) {
                            if t == s {
                                edges.push((sym, (c2, Some(r)), wt));
                            }
                        }
                    }
                    (Some(q), None) if w.is_final(q) => edges.push((sym, (c2, None), 0)),
                    (None, None) => edges.push((sym, (c2, None), 0)),
                    _ => {}
                }
            }
            for (sym, k, wt) in edges {
                let j = b.id(k);
                while out.num_states() < b.keys.len() {
                    out.add_state();
                }
                out.add_transition(i, sym, j, wt);
            }
            let fin_w = ws.is_none_or(|q| w.is_final(q));
            out.set_final(i, i != 0 && fin_w && v_ok(&c) && matches(&c) == want_match);
            i += 1;
        }
        out.trim()
    };

    let mut zero = WeightedAutomaton::new(conv.clone(), 1);
    zero.set_final(0, true);
    for s in conv.symbols() {
        zero.add_transition(0, s, 0, 0);
    }
    let b1 = branch(&bundle.a, true);
    let b2 = branch(a_m, false);
    WeightedAutomaton::max_union(&[&zero, &b1, &b2])
}

/// `B_{M,m}` over `Σ`: `‖B_{M,m}‖(u) = ‖B_M‖(u ⊗ $□(a□)^m)`.
pub fn specialize(b_m: &WeightedAutomaton, m: usize) -> WeightedAutomaton {
    let conv = b_m.alphabet().clone();
    let sigma = conv.base().expect("pair alphabet").clone();
    let v = marker(m);
    let len = v.len();
    let pair = |x: Option<Sym>, j: usize| conv.encode(&[x, v.get(j).copied()]);

    // tail[j]: states that accept the rest of the marker against padding
    let n = b_m.num_states();
    let mut tail = vec![vec![false; n]; len + 1];
    for q in 0..n {
        tail[len][q] = b_m.is_final(q);
    }
    for j in (0..len).rev() {
        let s = pair(None, j).expect("marker letter");
        for q in 0..n {
            tail[j][q] = b_m.out(q).iter().any(|&(t, r, w)| {
                if t == s && tail[j + 1][r] {
                    assert_eq!(w, 0, "padding moves carry no weight");
                    true
                } else {
                    false
                }
            });
        }
    }

    let mut b: Builder<(usize, usize)> = Builder::new();
    let mut out = WeightedAutomaton::new(sigma.clone(), 1);
    b.id((b_m.initial(), 0));
    let mut i = 0;
    while i < b.keys.len() {
        let (q, j) = b.keys[i];
        let mut edges = Vec::new();
        for s in sigma.symbols() {
            let sym = pair(Some(s), j).expect("letter on track one");
            for &(t, r, w) in b_m.out(q) {
                if t == sym {
                    edges.push((s, (r, (j + 1).min(len)), w));
                }
            }
        }
        for (s, k, w) in edges {
            let id = b.id(k);
            while out.num_states() < b.keys.len() {
                out.add_state();
            }
            out.add_transition(i, s, id, w);
        }
        out.set_final(i, i != 0 && tail[j][q]);
        i += 1;
    }
    out.trim()
}

/// `r_{M,m}(u)` evaluated on the pair automaton directly.
pub fn r_value(b_m: &WeightedAutomaton, m: usize, u: &[Sym]) -> Value {
    let conv = b_m.alphabet();
    let x = crate::automata::convolve2(conv, u, &marker(m));
    b_m.behavior(&x).expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_max_counts_marker() {
        let m = MinskyMachine::zero();
        let k = krob_checker(&m);
        let u = k.trace(&[(2, 0, "test")]);
        assert_eq!(prefix_max(&u), Some(2));
        assert_eq!(prefix_max(&[LA, BX]), None);
        assert_eq!(prefix_max(&k.marker(3)), Some(3));
    }

    #[test]
    fn zero_machine_traces() {
        let m = MinskyMachine::zero();
        let k = krob_checker(&m);
        let good = k.trace(&[(0, 0, "test"), (0, 0, "acc")]);
        assert!(k.ct_reg.accepts(&good));
        assert_eq!(good.len(), 8);
        assert_eq!(k.a.behavior(&good).unwrap(), Some(4));
        let bad = k.trace(&[(0, 0, "test"), (2, 1, "acc")]);
        assert!(k.ct_reg.accepts(&bad));
        assert_eq!(k.a.behavior(&bad).unwrap(), Some(7 + 2));
        // wrong control flow is outside CT_reg
        assert!(!k.ct_reg.accepts(&k.trace(&[(1, 0, "test"), (0, 0, "acc")])));
        // not box-shaped: zero
        assert_eq!(k.a.behavior(&[DOLLAR, DOLLAR]).unwrap(), Some(0));
    }

    #[test]
    fn a_m_formula() {
        let m = MinskyMachine::zero();
        let k = krob_checker(&m);
        let am = lift_a_m(&k);
        assert_eq!(am.behavior(&[DOLLAR, DOLLAR, DOLLAR, DOLLAR, DOLLAR]).unwrap(), Some(3));
        let bad = k.trace(&[(0, 0, "test"), (2, 1, "acc")]);
        assert_eq!(am.behavior(&bad).unwrap(), Some(9));
    }

    #[test]
    fn specialize_agrees_with_pairs() {
        let m = MinskyMachine::zero();
        let k = krob_checker(&m);
        let am = lift_a_m(&k);
        let bm = build_b_m(&k, &am);
        let words = [
            k.trace(&[(0, 0, "test"), (0, 0, "acc")]),
            k.trace(&[(0, 0, "test"), (1, 0, "acc")]),
            k.trace(&[(1, 0, "test"), (0, 0, "sink")]),
            vec![DOLLAR],
            vec![DOLLAR, BX, LA],
        ];
        for mm in 0..3 {
            let sp = specialize(&bm, mm);
            for u in &words {
                assert_eq!(sp.behavior(u).unwrap(), r_value(&bm, mm, u), "m={mm} u={u:?}");
            }
        }
        // accepted input 0: the correct trace scores only half
        let good = &words[0];
        assert_eq!(r_value(&bm, 0, good), Some(4));
        assert_eq!(r_value(&bm, 1, good), Some(5));
    }
}
