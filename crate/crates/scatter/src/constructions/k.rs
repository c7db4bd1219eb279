//! The pair language `K` whose `≤lex²` order is the block sum over `ℕ^k` of
//! `(p(x̄)+δ)·ω* + (q(x̄)+δ)·ω`.

use std::cmp::Ordering;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::automata::{convolve2, deconvolve, Alphabet, Nfa, Sym, Word};

use super::poly::{self, encode_args, poly_run_nfa, Polynomial};
use super::ConstructionError;

/// Payload on the second track: a run word or a delimiter `3 2^i 3^j 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Payload {
    /// Transition ids of the run, in the numbering of its automaton.
    Run(Vec<usize>),
    Delim { twos: usize, threes: usize },
}

/// Decoded member `a^x̄ b^m (1−b) ⊗ payload`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KCoord {
    pub x: Vec<u64>,
    pub b: u8,
    pub m: usize,
    pub payload: Payload,
}

/// `K` for a pair of polynomials, with its alphabet
/// `Δ_p < Δ_q < 0 < 1 < 2 < 3 < ¢ < a`.
#[derive(Clone, Debug)]
pub struct KBundle {
    pub p: Polynomial,
    pub q: Polynomial,
    pub ap: Nfa,
    pub aq: Nfa,
    pub sigma: Arc<Alphabet>,
    pub conv: Arc<Alphabet>,
    pub language: Nfa,
    dp: usize,
    dq: usize,
}

impl KBundle {
    pub fn k(&self) -> usize {
        self.p.k
    }

    fn base(&self) -> Sym {
        (self.dp + self.dq) as Sym
    }

    pub fn digit(&self, d: u8) -> Sym {
        self.base() + d as Sym
    }

    pub fn cent(&self) -> Sym {
        self.base() + 4
    }

    pub fn a(&self) -> Sym {
        self.base() + 5
    }

    /// Symbol of transition `t` of `A_p` (`side` 0) or `A_q` (`side` 1).
    pub fn delta_sym(&self, side: u8, t: usize) -> Sym {
        if side == 0 {
            t as Sym
        } else {
            (self.dp + t) as Sym
        }
    }

    fn arg_sym(&self, s: Sym) -> Sym {
        if s == poly::CENT {
            self.cent()
        } else {
            self.a()
        }
    }

    pub fn automaton(&self, side: u8) -> &Nfa {
        if side == 0 {
            &self.ap
        } else {
            &self.aq
        }
    }

    /// Runs of `A_p` (`side` 0) or `A_q` on `a^x̄`, sorted lexicographically.
    pub fn runs(&self, side: u8, x: &[u64]) -> Vec<Vec<usize>> {
        let mut r = self.automaton(side).accepting_runs(&encode_args(x));
        r.sort();
        r
    }

    pub fn first_track(&self, x: &[u64], b: u8, m: usize) -> Word {
        let mut u: Word = encode_args(x).into_iter().map(|s| self.arg_sym(s)).collect();
        u.extend(std::iter::repeat_n(self.digit(b), m));
        u.push(self.digit(1 - b));
        u
    }

    pub fn second_track(&self, b: u8, payload: &Payload) -> Word {
        match payload {
            Payload::Run(r) => r.iter().map(|&t| self.delta_sym(b, t)).collect(),
            Payload::Delim { twos, threes } => {
                let mut v = vec![self.digit(3)];
                v.extend(std::iter::repeat_n(self.digit(2), *twos));
                v.extend(std::iter::repeat_n(self.digit(3), *threes));
                v.push(self.digit(2));
                v
            }
        }
    }

    pub fn tracks(&self, c: &KCoord) -> (Word, Word) {
        (self.first_track(&c.x, c.b, c.m), self.second_track(c.b, &c.payload))
    }

    pub fn encode(&self, c: &KCoord) -> Word {
        let (u, v) = self.tracks(c);
        convolve2(&self.conv, &u, &v)
    }

    /// Parse the pair shape; does not check that a run payload is a run.
    pub fn decode_tracks(&self, u: &[Sym], v: &[Sym]) -> Result<KCoord, ConstructionError> {
        let bad = |why: &str| ConstructionError::Malformed(why.to_string());
        let mut i = 0;
        let mut x = Vec::with_capacity(self.k());
        for _ in 0..self.k() {
            let start = i;
            while u.get(i) == Some(&self.a()) {
                i += 1;
            }
            if u.get(i) != Some(&self.cent()) {
                return Err(bad("argument segment"));
            }
            x.push((i - start) as u64);
            i += 1;
        }
        let rest = &u[i..];
        let b = match rest.first() {
            Some(&s) if s == self.digit(0) => 0,
            Some(&s) if s == self.digit(1) => 1,
            _ => return Err(bad("block marker")),
        };
        let m = rest.iter().take_while(|&&s| s == self.digit(b)).count();
        if rest.len() != m + 1 || rest[m] != self.digit(1 - b) {
            return Err(bad("block marker"));
        }
        let payload = if v.first() == Some(&self.digit(3)) {
            let twos = v[1..].iter().take_while(|&&s| s == self.digit(2)).count();
            let threes = v[1 + twos..].iter().take_while(|&&s| s == self.digit(3)).count();
            if twos == 0 || threes == 0 || v.len() != twos + threes + 2 || v[v.len() - 1] != self.digit(2) {
                return Err(bad("delimiter"));
            }
            Payload::Delim { twos, threes }
        } else {
            let lo = if b == 0 { 0 } else { self.dp };
            let hi = if b == 0 { self.dp } else { self.dp + self.dq };
            let mut r = Vec::with_capacity(v.len());
            for &s in v {
                let s = s as usize;
                if s < lo || s >= hi {
                    return Err(bad("run letter"));
                }
                r.push(s - lo);
            }
            Payload::Run(r)
        };
        Ok(KCoord { x, b, m, payload })
    }

    pub fn decode(&self, w: &[Sym]) -> Result<KCoord, ConstructionError> {
        let t = deconvolve(&self.conv, w)?;
        self.decode_tracks(&t[0], &t[1])
    }

    /// Every member with convolution length at most `len`, generated from
    /// the block structure rather than from the automaton.
    pub fn members_up_to(&self, len: usize) -> Vec<KCoord> {
        let k = self.k();
        let mut out = Vec::new();
        let mut x = vec![0u64; k];
        // first track has length Σ(x_i + 1) + m + 1
        loop {
            let arg_len: usize = x.iter().map(|&v| v as usize + 1).sum();
            if arg_len + 2 <= len {
                for b in [0u8, 1] {
                    let runs = self.runs(b, &x);
                    for m in 1..=len - arg_len - 1 {
                        for r in &runs {
                            out.push(KCoord { x: x.clone(), b, m, payload: Payload::Run(r.clone()) });
                        }
                        for twos in 1..len.saturating_sub(2) {
                            for threes in 1..=len - 2 - twos {
                                out.push(KCoord { x: x.clone(), b, m, payload: Payload::Delim { twos, threes } });
                            }
                        }
                    }
                }
            }
            // odometer over x̄ with Σ(x_i+1) ≤ len − 2
            let mut i = 0;
            loop {
                if i == k {
                    return out;
                }
                x[i] += 1;
                if x.iter().map(|&v| v as usize + 1).sum::<usize>() + 2 <= len {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
        }
    }
}

/// The comparator read off the block structure (cases (i) to (iii.4.3) of
/// the characterization), without looking at the words.
pub fn predicted_cmp(s: &KCoord, t: &KCoord) -> Ordering {
    use Ordering::*;
    let xo = s.x.cmp(&t.x);
    match (s.b, t.b) {
        (0, 1) => {
            if xo != Greater {
                Less
            } else {
                Greater
            }
        }
        (1, 0) => {
            if xo == Less {
                Less
            } else {
                Greater
            }
        }
        _ => {
            if xo != Equal {
                return xo;
            }
            if s.m != t.m {
                // ω* direction for b = 0, ω direction for b = 1
                return if s.b == 0 { t.m.cmp(&s.m) } else { s.m.cmp(&t.m) };
            }
            match (&s.payload, &t.payload) {
                (Payload::Run(_), Payload::Delim { .. }) => Less,
                (Payload::Delim { .. }, Payload::Run(_)) => Greater,
                (Payload::Run(r), Payload::Run(r2)) => r.cmp(r2),
                // a descending chain of ascending chains
                (Payload::Delim { twos: i, threes: j }, Payload::Delim { twos: k, threes: l }) => {
                    k.cmp(i).then(j.cmp(l))
                }
            }
        }
    }
}

/// The automaton reading `a^x̄` on track one and a run of `nfa` on it on track two.
fn run_part(kb: &KBundle, side: u8, nfa: &Nfa, out: &mut Nfa) {
    let off = out.num_states();
    let n = nfa.num_states();
    for _ in 0..n + 2 {
        out.add_state();
    }
    let (mid, end) = (off + n, off + n + 1);
    let (b, nb) = (kb.digit(side), kb.digit(1 - side));
    for (t, &(p, s, q)) in nfa.transitions().iter().enumerate() {
        let l = kb.conv.encode(&[Some(kb.arg_sym(s)), Some(kb.delta_sym(side, t))]).unwrap();
        out.add_transition(off + p, l, off + q);
    }
    let pad = |d: Sym| kb.conv.encode(&[Some(d), None]).unwrap();
    for f in nfa.finals() {
        out.add_transition(off + f, pad(b), mid);
    }
    out.add_transition(mid, pad(b), mid);
    out.add_transition(mid, pad(nb), end);
    out.set_final(end, true);
    // start from the union root
    let row: Vec<(Sym, usize)> = out.out(off + nfa.initial()).to_vec();
    for (s, r) in row {
        out.add_transition(0, s, r);
    }
}

/// Independent tracks: `{u ⊗ v | u ∈ L(a), v ∈ L(b)}`.
pub fn conv_product(conv: &Arc<Alphabet>, a: &Nfa, b: &Nfa) -> Nfa {
    use std::collections::HashMap;
    // None marks a finished track
    type K = (Option<usize>, Option<usize>);
    let mut index: HashMap<K, usize> = HashMap::new();
    let start = (Some(a.initial()), Some(b.initial()));
    let mut keys = vec![start];
    index.insert(start, 0);
    let mut out = Nfa::new(conv.clone(), 1);
    let mut i = 0;
    while i < keys.len() {
        let (p, q) = keys[i];
        let fin_p = p.is_none_or(|p| a.is_final(p));
        let fin_q = q.is_none_or(|q| b.is_final(q));
        out.set_final(i, fin_p && fin_q);
        let opts = |st: Option<usize>, n: &Nfa, fin: bool| -> Vec<(Option<Sym>, Option<usize>)> {
            let mut v: Vec<(Option<Sym>, Option<usize>)> = Vec::new();
            if let Some(p) = st {
                v.extend(n.out(p).iter().map(|&(s, r)| (Some(s), Some(r))));
            }
            if fin {
                v.push((None, None));
            }
            v
        };
        let oa = opts(p, a, fin_p);
        let ob = opts(q, b, fin_q);
        for &(x, p2) in &oa {
            for &(y, q2) in &ob {
                if x.is_none() && y.is_none() {
                    continue;
                }
                let key = (p2, q2);
                let j = *index.entry(key).or_insert_with(|| {
                    keys.push(key);
                    keys.len() - 1
                });
                while out.num_states() < keys.len() {
                    out.add_state();
                }
                out.add_transition(i, conv.encode(&[x, y]).unwrap(), j);
            }
        }
        i += 1;
    }
    out
}

/// `(a*¢)^k b^+ (1−b)` over the K alphabet.
fn first_track_language(kb: &KBundle, b: u8) -> Nfa {
    let k = kb.k();
    let mut n = Nfa::new(kb.sigma.clone(), k + 3);
    for i in 0..k {
        n.add_transition(i, kb.a(), i);
        n.add_transition(i, kb.cent(), i + 1);
    }
    n.add_transition(k, kb.digit(b), k + 1);
    n.add_transition(k + 1, kb.digit(b), k + 1);
    n.add_transition(k + 1, kb.digit(1 - b), k + 2);
    n.set_final(k + 2, true);
    n
}

/// `3 2^+ 3^+ 2` over `sigma` with the given digit symbols.
pub fn delimiter_language(sigma: &Arc<Alphabet>, two: Sym, three: Sym) -> Nfa {
    let mut n = Nfa::new(sigma.clone(), 5);
    n.add_transition(0, three, 1);
    n.add_transition(1, two, 2);
    n.add_transition(2, two, 2);
    n.add_transition(2, three, 3);
    n.add_transition(3, three, 3);
    n.add_transition(3, two, 4);
    n.set_final(4, true);
    n
}

pub fn build_k(p: &Polynomial, q: &Polynomial) -> Result<KBundle, ConstructionError> {
    if p.k != q.k {
        return Err(ConstructionError::Arity(p.k, q.k));
    }
    let ap = poly_run_nfa(p);
    let aq = poly_run_nfa(q);
    let (dp, dq) = (ap.num_transitions(), aq.num_transitions());
    let mut names: Vec<String> = (0..dp).map(|i| format!("p{i}")).collect();
    names.extend((0..dq).map(|i| format!("q{i}")));
    names.extend(["0", "1", "2", "3", "¢", "a"].map(String::from));
    let sigma = Arc::new(Alphabet::new(&names)?);
    let conv = Alphabet::conv(&sigma, 2);
    let mut kb = KBundle {
        p: p.clone(),
        q: q.clone(),
        ap,
        aq,
        sigma: sigma.clone(),
        conv: conv.clone(),
        language: Nfa::empty(conv.clone()),
        dp,
        dq,
    };
    let mut lang = Nfa::new(conv.clone(), 1);
    let (ap, aq) = (kb.ap.clone(), kb.aq.clone());
    run_part(&kb, 0, &ap, &mut lang);
    run_part(&kb, 1, &aq, &mut lang);
    let delim = delimiter_language(&sigma, kb.digit(2), kb.digit(3));
    for b in [0, 1] {
        lang = lang.union(&conv_product(&conv, &first_track_language(&kb, b), &delim));
    }
    kb.language = lang.trim();
    Ok(kb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::lex2;

    fn bundle() -> KBundle {
        build_k(&Polynomial::parse("x", 1).unwrap(), &Polynomial::parse("2", 1).unwrap()).unwrap()
    }

    #[test]
    fn decode_round_trip() {
        let kb = bundle();
        let runs = kb.runs(0, &[3]);
        assert_eq!(runs.len(), 3);
        let c = KCoord { x: vec![3], b: 0, m: 2, payload: Payload::Run(runs[1].clone()) };
        let w = kb.encode(&c);
        assert!(kb.language.accepts(&w));
        assert_eq!(kb.decode(&w).unwrap(), c);
        let d = KCoord { x: vec![0], b: 1, m: 1, payload: Payload::Delim { twos: 4, threes: 1 } };
        let w = kb.encode(&d);
        assert!(kb.language.accepts(&w));
        assert_eq!(kb.decode(&w).unwrap(), d);
        // a run of the wrong automaton is not in K
        let bad = KCoord { x: vec![1], b: 1, m: 1, payload: Payload::Run(kb.runs(0, &[1])[0].clone()) };
        assert!(!kb.language.accepts(&kb.encode(&bad)));
    }

    #[test]
    fn generated_members_match_automaton() {
        let kb = bundle();
        let mut gen: Vec<Word> = kb.members_up_to(9).iter().map(|c| kb.encode(c)).collect();
        gen.sort();
        let mut aut = kb.language.words_up_to(9);
        aut.sort();
        assert_eq!(gen, aut);
    }

    #[test]
    fn predicted_matches_small() {
        let kb = bundle();
        let ms = kb.members_up_to(8);
        for s in &ms {
            for t in &ms {
                let actual = lex2(&kb.conv, &kb.encode(s), &kb.encode(t)).unwrap();
                assert_eq!(predicted_cmp(s, t), actual, "{s:?} vs {t:?}");
            }
        }
    }
}
