use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::automata::{deconvolve, Alphabet, Sym};

use super::OrderError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Pref,
    Lex,
    Llex,
    Lex2,
    Trees,
}

impl FromStr for OrderKind {
    type Err = OrderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "pref" => OrderKind::Pref,
            "lex" => OrderKind::Lex,
            "llex" => OrderKind::Llex,
            "lex2" => OrderKind::Lex2,
            "trees" => OrderKind::Trees,
            other => return Err(OrderError::UnknownKind(other.to_string())),
        })
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::Pref => "pref",
            OrderKind::Lex => "lex",
            OrderKind::Llex => "llex",
            OrderKind::Lex2 => "lex2",
            OrderKind::Trees => "trees",
        })
    }
}

/// Outcome of a comparison; only the prefix order can be `Incomparable`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl From<Ordering> for Verdict {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Verdict::Less,
            Ordering::Equal => Verdict::Equal,
            Ordering::Greater => Verdict::Greater,
        }
    }
}

impl Verdict {
    pub fn ordering(self) -> Option<Ordering> {
        match self {
            Verdict::Less => Some(Ordering::Less),
            Verdict::Equal => Some(Ordering::Equal),
            Verdict::Greater => Some(Ordering::Greater),
            Verdict::Incomparable => None,
        }
    }

    pub fn reverse(self) -> Self {
        match self {
            Verdict::Less => Verdict::Greater,
            Verdict::Greater => Verdict::Less,
            v => v,
        }
    }
}

/// Lexicographic order; a proper prefix is smaller.
pub fn lex(u: &[Sym], v: &[Sym]) -> Ordering {
    u.cmp(v)
}

pub fn llex(u: &[Sym], v: &[Sym]) -> Ordering {
    u.len().cmp(&v.len()).then_with(|| u.cmp(v))
}

pub fn pref(u: &[Sym], v: &[Sym]) -> Verdict {
    if u == v {
        Verdict::Equal
    } else if v.starts_with(u) {
        Verdict::Less
    } else if u.starts_with(v) {
        Verdict::Greater
    } else {
        Verdict::Incomparable
    }
}

/// Order on pair convolutions: first tracks by lex, ties broken by second tracks.
pub fn lex2(conv: &Alphabet, x: &[Sym], y: &[Sym]) -> Result<Ordering, OrderError> {
    if conv.arity() != Some(2) {
        return Err(OrderError::Arity);
    }
    for w in [x, y] {
        for i in 0..2 {
            let mut c = w.iter().map(|&s| conv.component(s, i)).skip_while(Option::is_some);
            if c.any(|s| s.is_some()) {
                // report the position through the full decoder
                deconvolve(conv, w)?;
            }
        }
    }
    fn track<'a>(conv: &'a Alphabet, w: &'a [Sym], i: usize) -> impl Iterator<Item = Sym> + 'a {
        w.iter().map_while(move |&s| conv.component(s, i))
    }
    let track = |w, i| track(conv, w, i);
    Ok(track(x, 0).cmp(track(y, 0)).then_with(|| track(x, 1).cmp(track(y, 1))))
}

/// Compare two words under `kind`. Trees are compared with [`crate::tree::cmp_trees`].
pub fn cmp_words(kind: OrderKind, alphabet: &Alphabet, u: &[Sym], v: &[Sym]) -> Result<Verdict, OrderError> {
    Ok(match kind {
        OrderKind::Pref => pref(u, v),
        OrderKind::Lex => lex(u, v).into(),
        OrderKind::Llex => llex(u, v).into(),
        OrderKind::Lex2 => lex2(alphabet, u, v)?.into(),
        OrderKind::Trees => {
            // words are trees with domain inside 0*
            crate::tree::cmp_trees(&crate::tree::Tree::word(u), &crate::tree::Tree::word(v)).into()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = Alphabet::chars("abc");
        assert_eq!(pref(&s.word("ab"), &s.word("abc")), Verdict::Less);
        assert_eq!(pref(&s.word("ab"), &s.word("ba")), Verdict::Incomparable);
        let b = Alphabet::chars("01");
        assert_eq!(lex(&b.word("10"), &b.word("0111")), Ordering::Greater);
        assert_eq!(llex(&b.word("10"), &b.word("0111")), Ordering::Less);
        let c = Alphabet::conv(&s, 2);
        let x = crate::automata::convolve2(&c, &s.word("a"), &s.word("bb"));
        let y = crate::automata::convolve2(&c, &s.word("a"), &s.word("bc"));
        assert_eq!(lex2(&c, &x, &y).unwrap(), Ordering::Less);
        assert!(lex2(&s, &x, &y).is_err());
    }
}
