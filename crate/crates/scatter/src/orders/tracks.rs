//! Automata that read several padded tracks in lockstep, and an emptiness
//! search over their product. This is how first-order statements about
//! automatic relations are checked: each conjunct is a component bound to
//! some tracks, and existential quantification is just an extra track.

use std::collections::HashMap;

use crate::automata::{Alphabet, Nfa, Sym, Word};

use super::OrderKind;

/// A track letter; `None` is padding.
pub type Letter = Option<Sym>;

/// A nondeterministic automaton reading the letters of its own tracks.
///
/// Moves may carry the all-padding tuple, which the component reads once all
/// of its tracks have ended while other tracks continue.
#[derive(Clone, Debug)]
pub struct TrackAut {
    pub tracks: Vec<usize>,
    pub initial: usize,
    pub finals: Vec<bool>,
    pub moves: Vec<Vec<(Vec<Letter>, usize)>>,
}

impl TrackAut {
    fn with_states(tracks: Vec<usize>, n: usize) -> Self {
        TrackAut {
            tracks,
            initial: 0,
            finals: vec![false; n],
            moves: vec![Vec::new(); n],
        }
    }

    /// A convolution automaton of arity `tracks.len()` read on the given tracks.
    pub fn relation(a: &Nfa, tracks: &[usize]) -> Self {
        let al = a.alphabet();
        assert_eq!(al.arity(), Some(tracks.len()), "arity must match the track list");
        let n = a.num_states();
        let done = n;
        let mut t = TrackAut::with_states(tracks.to_vec(), n + 1);
        t.initial = a.initial();
        let pad = vec![None; tracks.len()];
        for q in 0..n {
            t.finals[q] = a.is_final(q);
            for &(s, r) in a.out(q) {
                t.moves[q].push((al.decode(s), r));
            }
            if a.is_final(q) {
                t.moves[q].push((pad.clone(), done));
            }
        }
        t.finals[done] = true;
        t.moves[done].push((pad, done));
        t.sorted()
    }

    /// Membership of one track in `L(a)`, or non-membership when `negate`.
    pub fn member(a: &Nfa, track: usize, negate: bool) -> Self {
        let d = if negate {
            a.determinize().complete()
        } else {
            a.determinize()
        };
        let n = d.num_states();
        let end = n;
        let mut t = TrackAut::with_states(vec![track], n + 1);
        for q in 0..n {
            let accepted = d.is_final(q) != negate;
            t.finals[q] = accepted;
            for s in a.alphabet().symbols() {
                if let Some(r) = d.next(q, s) {
                    t.moves[q].push((vec![Some(s)], r));
                }
            }
            if accepted {
                t.moves[q].push((vec![None], end));
            }
        }
        t.finals[end] = true;
        t.moves[end].push((vec![None], end));
        t.sorted()
    }

    /// A complete deterministic two-track automaton from a letter-pair step function.
    fn pair_dfa(
        alphabet: &Alphabet,
        tracks: [usize; 2],
        n: usize,
        step: impl Fn(usize, Letter, Letter) -> usize,
        fin: impl Fn(usize) -> bool,
    ) -> Self {
        let mut t = TrackAut::with_states(tracks.to_vec(), n);
        let letters: Vec<Letter> = std::iter::once(None)
            .chain(alphabet.symbols().map(Some))
            .collect();
        for q in 0..n {
            t.finals[q] = fin(q);
            for &x in &letters {
                for &y in &letters {
                    t.moves[q].push((vec![x, y], step(q, x, y)));
                }
            }
        }
        t.sorted()
    }

    /// Strict `track a < track b` under `kind` (not for trees).
    pub fn less(alphabet: &Alphabet, kind: OrderKind, a: usize, b: usize) -> Self {
        // verdict states: 0 equal so far, 1 less, 2 greater
        fn upd(v: usize, x: Letter, y: Letter) -> usize {
            if v != 0 {
                v
            } else if x < y {
                1
            } else if x > y {
                2
            } else {
                0
            }
        }
        match kind {
            OrderKind::Lex => Self::pair_dfa(alphabet, [a, b], 3, upd, |v| v == 1),
            OrderKind::Llex => Self::pair_dfa(
                alphabet,
                [a, b],
                9,
                |q, x, y| {
                    let (lx, ln) = (q % 3, q / 3);
                    let ln2 = if ln != 0 {
                        ln
                    } else {
                        match (x, y) {
                            (None, Some(_)) => 1,
                            (Some(_), None) => 2,
                            _ => 0,
                        }
                    };
                    upd(lx, x, y) + 3 * ln2
                },
                |q| q / 3 == 1 || (q / 3 == 0 && q % 3 == 1),
            ),
            OrderKind::Lex2 => {
                let inner = alphabet.clone();
                Self::pair_dfa(
                    alphabet,
                    [a, b],
                    9,
                    move |q, x, y| {
                        let split = |l: Letter| match l {
                            None => (None, None),
                            Some(s) => {
                                let t = inner.decode(s);
                                (t[0], t[1])
                            }
                        };
                        let (xu, xv) = split(x);
                        let (yu, yv) = split(y);
                        upd(q % 3, xu, yu) + 3 * upd(q / 3, xv, yv)
                    },
                    |q| q % 3 == 1 || (q % 3 == 0 && q / 3 == 1),
                )
            }
            OrderKind::Pref => Self::pair_dfa(
                alphabet,
                [a, b],
                3,
                // 0 equal so far, 1 a ended while b continues, 2 dead
                |q, x, y| match (q, x, y) {
                    (0, None, Some(_)) => 1,
                    (0, x, y) if x == y => 0,
                    (1, None, _) => 1,
                    _ => 2,
                },
                |q| q == 1,
            ),
            OrderKind::Trees => panic!("tree order has no word-track filter"),
        }
    }

    pub fn equal(alphabet: &Alphabet, a: usize, b: usize) -> Self {
        Self::pair_dfa(alphabet, [a, b], 2, |q, x, y| if q == 0 && x == y { 0 } else { 1 }, |q| q == 0)
    }

    /// Sort each move list so [`find`] can look up fully assigned letters.
    pub fn sorted(mut self) -> Self {
        for row in self.moves.iter_mut() {
            row.sort();
        }
        self
    }

    pub fn negate_dfa(mut self) -> Self {
        for f in self.finals.iter_mut() {
            *f = !*f;
        }
        self
    }
}

/// One satisfying assignment, as the words on each track.
pub type Witness = Vec<Word>;

/// Search for a padded convolution of `arity` tracks accepted by every component.
pub fn find(components: &[TrackAut], arity: usize, alphabet: &Alphabet) -> Option<Witness> {
    assert!(arity <= 32);
    let mut covered = vec![false; arity];
    for c in components {
        for &t in &c.tracks {
            covered[t] = true;
        }
    }
    let free: Vec<usize> = (0..arity).filter(|&t| !covered[t]).collect();
    let letters: Vec<Letter> = std::iter::once(None)
        .chain(alphabet.symbols().map(Some))
        .collect();

    type Key = (Vec<usize>, u32);
    let start: Key = (components.iter().map(|c| c.initial).collect(), 0);
    let mut states: Vec<Key> = vec![start.clone()];
    let mut index: HashMap<Key, usize> = HashMap::from([(start, 0)]);
    let mut parent: Vec<Option<(usize, Vec<Letter>)>> = vec![None];
    let mut head = 0;
    while head < states.len() {
        let (cs, ended) = states[head].clone();
        if components.iter().zip(&cs).all(|(c, &q)| c.finals[q]) {
            return Some(reconstruct(&parent, head, arity));
        }
        let mut assign: Vec<Option<Letter>> = vec![None; arity];
        let mut next = vec![0; components.len()];
        let mut succ: Vec<(Vec<usize>, Vec<Letter>)> = Vec::new();
        join(components, &cs, 0, &mut assign, &mut next, &mut |assign, next| {
            let mut fill = |assign: &[Option<Letter>]| {
                let tuple: Vec<Letter> = assign.iter().map(|l| l.unwrap()).collect();
                succ.push((next.to_vec(), tuple));
            };
            expand_free(&free, 0, &letters, assign, &mut fill);
        });
        for (nc, tuple) in succ {
            if tuple.iter().all(Option::is_none) {
                continue;
            }
            let mut e = ended;
            let mut ok = true;
            for (t, l) in tuple.iter().enumerate() {
                match l {
                    Some(_) if e & (1 << t) != 0 => {
                        ok = false;
                        break;
                    }
                    None => e |= 1 << t,
                    _ => {}
                }
            }
            if !ok {
                continue;
            }
            let key = (nc, e);
            if !index.contains_key(&key) {
                index.insert(key.clone(), states.len());
                states.push(key);
                parent.push(Some((head, tuple)));
            }
        }
        head += 1;
    }
    None
}

fn join(
    comps: &[TrackAut],
    cs: &[usize],
    i: usize,
    assign: &mut Vec<Option<Letter>>,
    next: &mut Vec<usize>,
    emit: &mut dyn FnMut(&mut Vec<Option<Letter>>, &[usize]),
) {
    if i == comps.len() {
        emit(assign, next);
        return;
    }
    let c = &comps[i];
    let row = &c.moves[cs[i]];
    if c.tracks.iter().all(|&t| assign[t].is_some()) {
        let key: Vec<Letter> = c.tracks.iter().map(|&t| assign[t].unwrap()).collect();
        let lo = row.partition_point(|(l, _)| *l < key);
        for (letters, r) in &row[lo..] {
            if *letters != key {
                break;
            }
            next[i] = *r;
            join(comps, cs, i + 1, assign, next, emit);
        }
        return;
    }
    'moves: for (letters, r) in row {
        let mut newly = Vec::new();
        for (&t, &l) in c.tracks.iter().zip(letters) {
            match assign[t] {
                Some(prev) if prev != l => {
                    for &u in &newly {
                        assign[u] = None;
                    }
                    continue 'moves;
                }
                Some(_) => {}
                None => {
                    assign[t] = Some(l);
                    newly.push(t);
                }
            }
        }
        next[i] = *r;
        join(comps, cs, i + 1, assign, next, emit);
        for &u in &newly {
            assign[u] = None;
        }
    }
}

fn expand_free(
    free: &[usize],
    k: usize,
    letters: &[Letter],
    assign: &mut Vec<Option<Letter>>,
    fill: &mut dyn FnMut(&[Option<Letter>]),
) {
    if k == free.len() {
        fill(assign);
        return;
    }
    for &l in letters {
        assign[free[k]] = Some(l);
        expand_free(free, k + 1, letters, assign, fill);
    }
    assign[free[k]] = None;
}

fn reconstruct(parent: &[Option<(usize, Vec<Letter>)>], mut at: usize, arity: usize) -> Witness {
    let mut tuples = Vec::new();
    while let Some((p, t)) = &parent[at] {
        tuples.push(t.clone());
        at = *p;
    }
    tuples.reverse();
    let mut out = vec![Vec::new(); arity];
    for t in tuples {
        for (k, l) in t.into_iter().enumerate() {
            if let Some(s) = l {
                out[k].push(s);
            }
        }
    }
    out
}
