//! The one-track variant `K′ = {u$v^rev | u⊗v ∈ K}` ordered by `≤′lex`
//! over `Δ_p ∪ Δ_q < 0 < 1 < 3 < 2 < ¢ < a < $`, with a deterministic
//! pushdown recognizer.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::automata::{deconvolve, Alphabet, Sym, Word};
use crate::orders::lex;

use super::binarize::Binarization;
use super::k::{KBundle, KCoord, Payload};

#[derive(Clone, Debug)]
pub struct KPrime {
    pub kb: KBundle,
    pub sigma: Arc<Alphabet>,
    pub binary: Binarization,
}

/// Control states of the pushdown recognizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Ctl {
    /// Inside argument `i`, pushing.
    Arg(usize),
    /// Read `b` at least once.
    Block(u8),
    /// Read `(1−b)`; expecting `$`.
    Closed(u8),
    /// After `$`, nothing read.
    Dollar(u8),
    /// Reversed run, expecting a transition into this state of the automaton.
    Run(u8, usize),
    /// Reversed delimiter `2 3^+ 2^+ 3`, phase.
    Delim(u8),
    Accept,
}

impl KPrime {
    pub fn new(kb: &KBundle) -> Self {
        let names: Vec<String> = (0..kb.sigma.len() as Sym)
            .map(|s| kb.sigma.name(s))
            .filter(|n| !["2", "3", "¢", "a"].contains(&n.as_str()))
            .chain(["3", "2", "¢", "a", "$"].map(String::from))
            .collect();
        let sigma = Arc::new(Alphabet::new(&names).expect("distinct names"));
        let binary = Binarization::new(sigma.clone());
        KPrime { kb: kb.clone(), sigma, binary }
    }

    /// Map a K letter to its primed counterpart (only 2 and 3 move).
    pub fn prime(&self, s: Sym) -> Sym {
        let kb = &self.kb;
        if s == kb.digit(2) {
            kb.digit(3)
        } else if s == kb.digit(3) {
            kb.digit(2)
        } else {
            s
        }
    }

    pub fn dollar(&self) -> Sym {
        self.kb.a() + 1
    }

    /// `u$v^rev` from the two tracks.
    pub fn transform(&self, u: &[Sym], v: &[Sym]) -> Word {
        let mut w: Word = u.iter().map(|&s| self.prime(s)).collect();
        w.push(self.dollar());
        w.extend(v.iter().rev().map(|&s| self.prime(s)));
        w
    }

    pub fn transform_pair(&self, kw: &[Sym]) -> Word {
        let t = deconvolve(&self.kb.conv, kw).expect("pair word");
        self.transform(&t[0], &t[1])
    }

    /// Split at the unique `$` and undo the transformation.
    pub fn untransform(&self, w: &[Sym]) -> Option<(Word, Word)> {
        let d = w.iter().position(|&s| s == self.dollar())?;
        if w[d + 1..].contains(&self.dollar()) {
            return None;
        }
        let u = w[..d].iter().map(|&s| self.prime(s)).collect();
        let v = w[d + 1..].iter().rev().map(|&s| self.prime(s)).collect();
        Some((u, v))
    }

    /// Deterministic pushdown recognition: push the argument letters, keep
    /// the block marker in the control, then pop while reading a reversed
    /// run backwards through the run automaton.
    pub fn accepts(&self, w: &[Sym]) -> bool {
        let kb = &self.kb;
        let k = kb.k();
        let (a, cent) = (kb.a(), kb.cent());
        let (zero, one) = (kb.digit(0), kb.digit(1));
        // primed codes: 3 sits where 2 was and vice versa
        let (two, three) = (kb.digit(3), kb.digit(2));
        let mut stack: Vec<Sym> = Vec::new();
        let mut ctl = Ctl::Arg(0);
        for &s in w {
            ctl = match ctl {
                Ctl::Arg(i) if i < k && s == a => {
                    stack.push(a);
                    Ctl::Arg(i)
                }
                Ctl::Arg(i) if i < k && s == cent => {
                    stack.push(cent);
                    Ctl::Arg(i + 1)
                }
                Ctl::Arg(i) if i == k && (s == zero || s == one) => Ctl::Block((s == one) as u8),
                Ctl::Block(b) if s == kb.digit(b) => Ctl::Block(b),
                Ctl::Block(b) if s == kb.digit(1 - b) => Ctl::Closed(b),
                Ctl::Closed(b) if s == self.dollar() => Ctl::Dollar(b),
                Ctl::Dollar(_) if s == two => Ctl::Delim(0),
                Ctl::Dollar(b) | Ctl::Run(b, _) if self.run_letter(b, s).is_some() => {
                    let (p, sym, q) = self.run_letter(b, s).unwrap();
                    let expect = match ctl {
                        Ctl::Run(_, want) => want == q,
                        _ => kb.automaton(b).is_final(q),
                    };
                    if !expect || stack.pop() != Some(self.arg_letter(sym)) {
                        return false;
                    }
                    Ctl::Run(b, p)
                }
                Ctl::Delim(0) if s == three => Ctl::Delim(1),
                Ctl::Delim(1) if s == three => Ctl::Delim(1),
                Ctl::Delim(1) if s == two => Ctl::Delim(2),
                Ctl::Delim(2) if s == two => Ctl::Delim(2),
                Ctl::Delim(2) if s == three => Ctl::Accept,
                _ => return false,
            };
        }
        match ctl {
            Ctl::Accept => true,
            Ctl::Run(b, p) => stack.is_empty() && p == kb.automaton(b).initial(),
            // the empty run is impossible: arguments are nonempty
            _ => false,
        }
    }

    fn run_letter(&self, b: u8, s: Sym) -> Option<(usize, Sym, usize)> {
        let aut = self.kb.automaton(b);
        let t = (0..aut.num_transitions()).find(|&t| self.kb.delta_sym(b, t) == s)?;
        Some(aut.transitions()[t])
    }

    fn arg_letter(&self, s: Sym) -> Sym {
        if s == super::poly::CENT {
            self.kb.cent()
        } else {
            self.kb.a()
        }
    }

    /// An isomorphism `(K; ≤lex²) → (K′; ≤′lex)`, block by block. Delimiter
    /// coordinates swap roles under reversal, and runs are matched by rank.
    pub fn iso(&self, c: &KCoord) -> Word {
        let kb = &self.kb;
        let u = kb.first_track(&c.x, c.b, c.m);
        let v = match &c.payload {
            Payload::Delim { twos, threes } => {
                kb.second_track(c.b, &Payload::Delim { twos: *threes, threes: *twos })
            }
            Payload::Run(r) => {
                let runs = kb.runs(c.b, &c.x);
                let rank = runs.iter().position(|x| x == r).expect("run on its argument");
                let mut rev: Vec<Vec<usize>> = runs.iter().map(|r| r.iter().rev().copied().collect()).collect();
                rev.sort();
                let mut target = rev[rank].clone();
                target.reverse();
                kb.second_track(c.b, &Payload::Run(target))
            }
        };
        self.transform(&u, &v)
    }

    pub fn binary(&self, w: &[Sym]) -> Word {
        self.binary.encode_word(w)
    }
}

/// `≤′lex` is plain lex on primed symbol codes.
pub fn cmp_prime(x: &[Sym], y: &[Sym]) -> Ordering {
    lex(x, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_k, predicted_cmp, Polynomial};

    fn kp() -> KPrime {
        let kb = build_k(&Polynomial::parse("x", 1).unwrap(), &Polynomial::parse("2", 1).unwrap()).unwrap();
        KPrime::new(&kb)
    }

    #[test]
    fn alphabet_order() {
        let k = kp();
        let names = k.sigma.names();
        let tail: Vec<&str> = names[names.len() - 7..].iter().map(String::as_str).collect();
        assert_eq!(tail, ["0", "1", "3", "2", "¢", "a", "$"]);
        assert_eq!(k.sigma.name(k.prime(k.kb.digit(2))), "2");
    }

    #[test]
    fn membership_matches_transformation() {
        let k = kp();
        let ms = k.kb.members_up_to(8);
        for c in &ms {
            let (u, v) = k.kb.tracks(c);
            assert!(k.accepts(&k.transform(&u, &v)), "{c:?}");
            // the other run automaton's letters, or a dropped letter, fail
            let mut broken = k.transform(&u, &v);
            broken.pop();
            assert_eq!(k.accepts(&broken), k.untransform(&broken).is_some_and(|(u, v)| {
                k.kb.language.accepts(&crate::automata::convolve2(&k.kb.conv, &u, &v))
            }));
        }
    }

    #[test]
    fn iso_preserves_order() {
        let k = kp();
        let ms = k.kb.members_up_to(8);
        let img: Vec<Word> = ms.iter().map(|c| k.iso(c)).collect();
        for (i, s) in ms.iter().enumerate() {
            assert!(k.accepts(&img[i]));
            for (j, t) in ms.iter().enumerate() {
                assert_eq!(predicted_cmp(s, t), cmp_prime(&img[i], &img[j]));
            }
        }
    }
}
