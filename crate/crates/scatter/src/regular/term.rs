use std::fmt;

use serde::{Deserialize, Serialize};

use super::RegularError;

pub type Label = u32;

/// A term denoting a regular word (a labelled linear order).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Const(Label),
    Concat(Vec<Term>),
    OmegaPow(Box<Term>),
    OmegaStarPow(Box<Term>),
    Shuffle(Vec<Term>),
}

impl Term {
    /// Concatenate the pieces, flattening nested sums. `None` for no pieces.
    pub fn sum(parts: impl IntoIterator<Item = Term>) -> Option<Term> {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Term::Concat(inner) => flat.extend(inner),
                t => flat.push(t),
            }
        }
        match flat.len() {
            0 => None,
            1 => flat.pop(),
            _ => Some(Term::Concat(flat)),
        }
    }

    pub fn omega(t: Term) -> Term {
        Term::OmegaPow(Box::new(t))
    }

    pub fn omega_star(t: Term) -> Term {
        Term::OmegaStarPow(Box::new(t))
    }

    /// Shuffle with duplicates removed.
    pub fn shuffle(parts: impl IntoIterator<Item = Term>) -> Term {
        let mut v: Vec<Term> = parts.into_iter().collect();
        v.sort();
        v.dedup();
        Term::Shuffle(v)
    }

    pub fn labels(&self) -> Vec<Label> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_labels(&self, out: &mut Vec<Label>) {
        match self {
            Term::Const(a) => out.push(*a),
            Term::Concat(v) | Term::Shuffle(v) => v.iter().for_each(|t| t.collect_labels(out)),
            Term::OmegaPow(t) | Term::OmegaStarPow(t) => t.collect_labels(out),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Const(_) => 1,
            Term::Concat(v) | Term::Shuffle(v) => 1 + v.iter().map(Term::size).sum::<usize>(),
            Term::OmegaPow(t) | Term::OmegaStarPow(t) => 1 + t.size(),
        }
    }

    pub fn map_labels(&self, f: &impl Fn(Label) -> Label) -> Term {
        match self {
            Term::Const(a) => Term::Const(f(*a)),
            Term::Concat(v) => Term::Concat(v.iter().map(|t| t.map_labels(f)).collect()),
            Term::Shuffle(v) => Term::shuffle(v.iter().map(|t| t.map_labels(f))),
            Term::OmegaPow(t) => Term::omega(t.map_labels(f)),
            Term::OmegaStarPow(t) => Term::omega_star(t.map_labels(f)),
        }
    }

    /// Render with label names.
    pub fn show(&self, names: &[String]) -> String {
        let name = |a: &Label| {
            names
                .get(*a as usize)
                .cloned()
                .unwrap_or_else(|| format!("c{a}"))
        };
        match self {
            Term::Const(a) => name(a),
            Term::Concat(v) => {
                // binary syntax, nested to the right
                let mut it = v.iter().rev();
                let mut s = it.next().map(|t| t.show(names)).unwrap_or_default();
                for t in it {
                    s = format!("({} . {})", t.show(names), s);
                }
                s
            }
            Term::OmegaPow(t) => format!("({} w)", t.show(names)),
            Term::OmegaStarPow(t) => format!("({} w*)", t.show(names)),
            Term::Shuffle(v) => {
                let parts: Vec<String> = v.iter().map(|t| t.show(names)).collect();
                format!("[{}]", parts.join(","))
            }
        }
    }

    /// Parse `a`, `(t1 . t2)`, `(t w)`, `(t w*)`, `[t1,...,tk]`; label names
    /// are interned into `names`.
    pub fn parse(src: &str, names: &mut Vec<String>) -> Result<Term, RegularError> {
        let toks = tokenize(src)?;
        let mut pos = 0;
        let t = parse_term(&toks, &mut pos, names)?;
        if pos != toks.len() {
            return Err(RegularError::Parse(format!("trailing input at token {pos}")));
        }
        Ok(t)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.show(&[]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    LBrack,
    RBrack,
    Comma,
    Dot,
    Ident(String),
}

fn tokenize(src: &str) -> Result<Vec<Tok>, RegularError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push(Tok::Open)
            }
            ')' => {
                chars.next();
                out.push(Tok::Close)
            }
            '[' => {
                chars.next();
                out.push(Tok::LBrack)
            }
            ']' => {
                chars.next();
                out.push(Tok::RBrack)
            }
            ',' => {
                chars.next();
                out.push(Tok::Comma)
            }
            '.' => {
                chars.next();
                out.push(Tok::Dot)
            }
            c if c.is_alphanumeric() || c == '_' || c == '*' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_alphanumeric() || d == '_' || d == '*' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Ident(s));
            }
            other => return Err(RegularError::Parse(format!("unexpected {other:?}"))),
        }
    }
    Ok(out)
}

fn parse_term(toks: &[Tok], pos: &mut usize, names: &mut Vec<String>) -> Result<Term, RegularError> {
    let err = |m: &str| RegularError::Parse(m.to_string());
    match toks.get(*pos) {
        Some(Tok::Ident(s)) => {
            *pos += 1;
            if s == "w" || s == "w*" {
                return Err(err("power marker outside parentheses"));
            }
            let id = match names.iter().position(|n| n == s) {
                Some(i) => i,
                None => {
                    names.push(s.clone());
                    names.len() - 1
                }
            };
            Ok(Term::Const(id as Label))
        }
        Some(Tok::Open) => {
            *pos += 1;
            let first = parse_term(toks, pos, names)?;
            let t = match toks.get(*pos) {
                Some(Tok::Dot) => {
                    *pos += 1;
                    let second = parse_term(toks, pos, names)?;
                    Term::sum([first, second]).expect("two parts")
                }
                Some(Tok::Ident(s)) if s == "w" => {
                    *pos += 1;
                    Term::omega(first)
                }
                Some(Tok::Ident(s)) if s == "w*" => {
                    *pos += 1;
                    Term::omega_star(first)
                }
                _ => return Err(err("expected '.', 'w' or 'w*'")),
            };
            if toks.get(*pos) != Some(&Tok::Close) {
                return Err(err("expected ')'"));
            }
            *pos += 1;
            Ok(t)
        }
        Some(Tok::LBrack) => {
            *pos += 1;
            let mut parts = vec![parse_term(toks, pos, names)?];
            while toks.get(*pos) == Some(&Tok::Comma) {
                *pos += 1;
                parts.push(parse_term(toks, pos, names)?);
            }
            if toks.get(*pos) != Some(&Tok::RBrack) {
                return Err(err("expected ']'"));
            }
            *pos += 1;
            Ok(Term::shuffle(parts))
        }
        _ => Err(err("expected a term")),
    }
}

/// Order-theoretic facts computed bottom-up.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermProps {
    pub finite: bool,
    pub has_min: bool,
    pub has_max: bool,
    /// No two elements are adjacent.
    pub dense: bool,
    pub cardinality: Option<usize>,
}

pub fn term_props(t: &Term) -> TermProps {
    match t {
        Term::Const(_) => TermProps {
            finite: true,
            has_min: true,
            has_max: true,
            dense: true,
            cardinality: Some(1),
        },
        Term::Concat(v) => {
            let ps: Vec<TermProps> = v.iter().map(term_props).collect();
            let finite = ps.iter().all(|p| p.finite);
            let dense = ps.iter().all(|p| p.dense)
                && ps.windows(2).all(|w| !(w[0].has_max && w[1].has_min));
            TermProps {
                finite,
                has_min: ps[0].has_min,
                has_max: ps[ps.len() - 1].has_max,
                dense,
                cardinality: if finite {
                    Some(ps.iter().map(|p| p.cardinality.unwrap()).sum())
                } else {
                    None
                },
            }
        }
        Term::OmegaPow(t) => {
            let p = term_props(t);
            TermProps {
                finite: false,
                has_min: p.has_min,
                has_max: false,
                dense: p.dense && !(p.has_max && p.has_min),
                cardinality: None,
            }
        }
        Term::OmegaStarPow(t) => {
            let p = term_props(t);
            TermProps {
                finite: false,
                has_min: false,
                has_max: p.has_max,
                dense: p.dense && !(p.has_max && p.has_min),
                cardinality: None,
            }
        }
        Term::Shuffle(v) => TermProps {
            finite: false,
            has_min: false,
            has_max: false,
            dense: v.iter().all(|t| term_props(t).dense),
            cardinality: None,
        },
    }
}
