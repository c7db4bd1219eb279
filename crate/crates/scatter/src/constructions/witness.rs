//! A regular nontrivial automorphism of `(K; ≤lex²)` at an argument where
//! the two polynomials agree: shift the `b = 0` blocks of that argument one
//! step right, swap the runs of `A_p` for those of `A_q` in rank order, and
//! push every `b = 1` block one step further.

use std::collections::HashMap;
use std::sync::Arc;

use crate::automata::{convolve2, Alphabet, Nfa, Sym, Word};
use crate::orders::diagonal;

use super::k::{conv_product, delimiter_language, KBundle, KCoord, Payload};
use super::ConstructionError;

#[derive(Clone, Debug)]
pub struct Witness {
    pub y: Vec<u64>,
    /// Runs of `A_p` on `a^ȳ`, lex sorted.
    pub rho: Vec<Vec<usize>>,
    /// Runs of `A_q` on `a^ȳ`, lex sorted.
    pub sigma: Vec<Vec<usize>>,
    /// Convolution graph over `conv(conv(Σ,2),2)`.
    pub relation: Nfa,
}

impl Witness {
    pub fn apply(&self, c: &KCoord) -> KCoord {
        if c.x != self.y {
            return c.clone();
        }
        let mut d = c.clone();
        match (c.b, c.m, &c.payload) {
            (0, m, _) if m > 1 => d.m = m - 1,
            (0, _, Payload::Delim { .. }) => d.b = 1,
            (0, _, Payload::Run(r)) => {
                let i = self.rho.iter().position(|x| x == r).expect("run of A_p on a^ȳ");
                d.b = 1;
                d.payload = Payload::Run(self.sigma[i].clone());
            }
            _ => d.m += 1,
        }
        d
    }

    /// The pair `w ⊗ f(w)` as a word over the relation alphabet.
    pub fn pair_word(&self, kb: &KBundle, c: &KCoord) -> Word {
        convolve2(self.relation.alphabet(), &kb.encode(c), &kb.encode(&self.apply(c)))
    }
}

/// Combine a relation on first tracks with one on second tracks into a
/// relation on the pair words. Letters `(u,u')` and `(v,v')` read at the
/// same position become the outer letter `((u,v),(u',v'))`.
fn pair_rel(inner: &Arc<Alphabet>, outer: &Arc<Alphabet>, ru: &Nfa, rv: &Nfa) -> Nfa {
    type K = (Option<usize>, Option<usize>);
    let moves = |st: Option<usize>, a: &Nfa| -> Vec<([Option<Sym>; 2], Option<usize>)> {
        let Some(q) = st else { return vec![([None, None], None)] };
        let mut v: Vec<_> = a
            .out(q)
            .iter()
            .map(|&(s, r)| {
                let t = a.alphabet().decode(s);
                ([t[0], t[1]], Some(r))
            })
            .collect();
        if a.is_final(q) {
            v.push(([None, None], None));
        }
        v
    };
    let start: K = (Some(ru.initial()), Some(rv.initial()));
    let mut keys = vec![start];
    let mut index: HashMap<K, usize> = HashMap::from([(start, 0)]);
    let mut out = Nfa::new(outer.clone(), 1);
    let mut i = 0;
    while i < keys.len() {
        let (p, q) = keys[i];
        let fin = |st: Option<usize>, a: &Nfa| st.is_none_or(|s| a.is_final(s));
        out.set_final(i, fin(p, ru) && fin(q, rv));
        for (lu, p2) in moves(p, ru) {
            for (lv, q2) in moves(q, rv) {
                let left = inner.encode(&[lu[0], lv[0]]);
                let right = inner.encode(&[lu[1], lv[1]]);
                let Some(l) = outer.encode(&[left, right]) else { continue };
                let key = (p2, q2);
                let j = *index.entry(key).or_insert_with(|| {
                    keys.push(key);
                    keys.len() - 1
                });
                while out.num_states() < keys.len() {
                    out.add_state();
                }
                out.add_transition(i, l, j);
            }
        }
        i += 1;
    }
    out.trim()
}

/// A chain of letter pairs over `conv(Σ,2)`, each read once, after `diag(prefix)`.
fn shifted(kb: &KBundle, prefix: &Nfa, tail: &[(Option<Sym>, Option<Sym>)], loop_at: Option<usize>) -> Nfa {
    let conv = &kb.conv;
    let mut t = Nfa::new(conv.clone(), tail.len() + 1);
    for (i, &(a, b)) in tail.iter().enumerate() {
        let l = conv.encode(&[a, b]).unwrap();
        t.add_transition(i, l, i + 1);
        if loop_at == Some(i) {
            t.add_transition(i + 1, l, i + 1);
        }
    }
    t.set_final(tail.len(), true);
    diagonal(prefix).concat(&t).trim()
}

pub fn automorphism_witness(kb: &KBundle, y: &[u64]) -> Result<Witness, ConstructionError> {
    if y.len() != kb.k() {
        return Err(ConstructionError::Arity(kb.k(), y.len()));
    }
    let (pv, qv) = (kb.p.eval(y), kb.q.eval(y));
    if pv != qv {
        return Err(ConstructionError::WitnessUnavailable(format!("p = {pv} but q = {qv} at {y:?}")));
    }
    let rho = kb.runs(0, y);
    let sigma = kb.runs(1, y);
    let sig = &kb.sigma;
    let conv = &kb.conv;
    let outer = Alphabet::conv(conv, 2);

    let p_word: Word = kb.first_track(y, 0, 1);
    let p_word = &p_word[..p_word.len() - 2];
    let prefix = Nfa::literal(sig.clone(), p_word);
    let run_words = |side: u8, runs: &[Vec<usize>]| -> Vec<Word> {
        runs.iter().map(|r| kb.second_track(side, &Payload::Run(r.clone()))).collect()
    };
    let delim = delimiter_language(sig, kb.digit(2), kb.digit(3));
    let runs_p = Nfa::from_words(sig.clone(), &run_words(0, &rho)).union(&delim);
    let runs_q = Nfa::from_words(sig.clone(), &run_words(1, &sigma)).union(&delim);

    // everything whose first track does not start with a^ȳ followed by a digit
    let digits = Nfa::letters(sig.clone(), [kb.digit(0), kb.digit(1)]);
    let block = prefix.concat(&digits).concat(&Nfa::universal(sig.clone()));
    let in_block = kb.language.intersection(&conv_product(conv, &block, &Nfa::universal(sig.clone())));
    let mut rel = diagonal(&kb.language.difference(&in_block).trim());

    let (d0, d1) = (Some(kb.digit(0)), Some(kb.digit(1)));
    let shrink = shifted(kb, &prefix, &[(d0, d0), (d0, d1), (d1, None)], Some(0));
    rel = rel.union(&pair_rel(conv, &outer, &shrink, &diagonal(&runs_p)));
    let flip = shifted(kb, &prefix, &[(d0, d1), (d1, d0)], None);
    rel = rel.union(&pair_rel(conv, &outer, &flip, &diagonal(&delim)));
    let swaps: Vec<Word> = run_words(0, &rho)
        .iter()
        .zip(run_words(1, &sigma))
        .map(|(r, s)| convolve2(conv, r, &s))
        .collect();
    rel = rel.union(&pair_rel(conv, &outer, &flip, &Nfa::from_words(conv.clone(), &swaps)));
    let grow = shifted(kb, &prefix, &[(d1, d1), (d0, d1), (None, d0)], Some(0));
    rel = rel.union(&pair_rel(conv, &outer, &grow, &diagonal(&runs_q)));

    Ok(Witness { y: y.to_vec(), rho, sigma, relation: rel.trim() })
}
