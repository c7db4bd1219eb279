use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::AutomataError;

/// Symbols are indices into an [`Alphabet`]; index order is the symbol order.
pub type Sym = u32;

/// A word over some alphabet.
pub type Word = Vec<Sym>;

/// The padding symbol used by convolutions.
pub const PAD: &str = "#";

/// A linearly ordered finite alphabet.
///
/// Plain alphabets carry explicit names. Convolution alphabets are implicit:
/// a symbol of arity `k` over a base of size `n` is a mixed-radix number whose
/// digits are base symbols or `n` for padding. The all-padding tuple would be
/// the largest number and is left out, so symbols are exactly `0..(n+1)^k - 1`.
#[derive(Clone, PartialEq, Eq)]
pub enum Alphabet {
    Plain {
        names: Vec<String>,
        index: HashMap<String, Sym>,
    },
    Conv {
        base: Arc<Alphabet>,
        arity: usize,
    },
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Plain { names, .. } => f.debug_tuple("Plain").field(names).finish(),
            Alphabet::Conv { base, arity } => f
                .debug_struct("Conv")
                .field("base", base)
                .field("arity", arity)
                .finish(),
        }
    }
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self, AutomataError> {
        let mut index = HashMap::new();
        let mut out = Vec::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            let n = n.as_ref().to_string();
            if n == PAD {
                return Err(AutomataError::PaddingInAlphabet);
            }
            if index.insert(n.clone(), i as Sym).is_some() {
                return Err(AutomataError::DuplicateSymbol(n));
            }
            out.push(n);
        }
        Ok(Alphabet::Plain { names: out, index })
    }

    /// Shorthand for alphabets whose symbols are single characters, in the given order.
    pub fn chars(s: &str) -> Arc<Self> {
        let names: Vec<String> = s.chars().map(|c| c.to_string()).collect();
        Arc::new(Self::new(&names).expect("distinct characters"))
    }

    pub fn conv(base: &Arc<Alphabet>, arity: usize) -> Arc<Self> {
        assert!(arity >= 1);
        Arc::new(Alphabet::Conv {
            base: base.clone(),
            arity,
        })
    }

    pub fn len(&self) -> usize {
        match self {
            Alphabet::Plain { names, .. } => names.len(),
            Alphabet::Conv { base, arity } => (base.len() + 1).pow(*arity as u32) - 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> {
        0..self.len() as Sym
    }

    pub fn arity(&self) -> Option<usize> {
        match self {
            Alphabet::Plain { .. } => None,
            Alphabet::Conv { arity, .. } => Some(*arity),
        }
    }

    pub fn base(&self) -> Option<&Arc<Alphabet>> {
        match self {
            Alphabet::Plain { .. } => None,
            Alphabet::Conv { base, .. } => Some(base),
        }
    }

    /// Encode a tuple of optional base symbols (`None` is padding).
    pub fn encode(&self, tuple: &[Option<Sym>]) -> Option<Sym> {
        let Alphabet::Conv { base, arity } = self else {
            return None;
        };
        if tuple.len() != *arity || tuple.iter().all(Option::is_none) {
            return None;
        }
        let radix = base.len() as Sym + 1;
        let mut v: Sym = 0;
        for t in tuple {
            let d = match t {
                Some(s) if (*s as usize) < base.len() => *s,
                Some(_) => return None,
                None => radix - 1,
            };
            v = v * radix + d;
        }
        Some(v)
    }

    pub fn decode(&self, sym: Sym) -> Vec<Option<Sym>> {
        let Alphabet::Conv { base, arity } = self else {
            panic!("decode on a plain alphabet");
        };
        let radix = base.len() as Sym + 1;
        let mut out = vec![None; *arity];
        let mut v = sym;
        for slot in out.iter_mut().rev() {
            let d = v % radix;
            v /= radix;
            *slot = if d == radix - 1 { None } else { Some(d) };
        }
        out
    }

    /// Track `i` of a convolution letter, without building the tuple.
    pub fn component(&self, sym: Sym, i: usize) -> Option<Sym> {
        let Alphabet::Conv { base, arity } = self else {
            panic!("component on a plain alphabet");
        };
        let radix = base.len() as Sym + 1;
        let d = (sym / radix.pow((*arity - 1 - i) as u32)) % radix;
        (d != radix - 1).then_some(d)
    }

    pub fn name(&self, sym: Sym) -> String {
        match self {
            Alphabet::Plain { names, .. } => names[sym as usize].clone(),
            Alphabet::Conv { base, .. } => {
                let parts: Vec<String> = self
                    .decode(sym)
                    .into_iter()
                    .map(|c| c.map_or_else(|| PAD.to_string(), |s| base.name(s)))
                    .collect();
                format!("({})", parts.join(","))
            }
        }
    }

    pub fn lookup(&self, name: &str) -> Option<Sym> {
        match self {
            Alphabet::Plain { index, .. } => index.get(name).copied(),
            Alphabet::Conv { base, arity } => {
                let inner = name.strip_prefix('(')?.strip_suffix(')')?;
                let parts = split_top_level(inner);
                if parts.len() != *arity {
                    return None;
                }
                let mut tuple = Vec::with_capacity(*arity);
                for p in parts {
                    if p == PAD {
                        tuple.push(None);
                    } else {
                        tuple.push(Some(base.lookup(p)?));
                    }
                }
                self.encode(&tuple)
            }
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.symbols().map(|s| self.name(s)).collect()
    }

    /// Parse a word whose symbols are single characters of a plain alphabet.
    pub fn word(&self, s: &str) -> Word {
        self.try_word(s)
            .unwrap_or_else(|| panic!("{s:?} is not a word over {:?}", self.names()))
    }

    pub fn try_word(&self, s: &str) -> Option<Word> {
        s.chars().map(|c| self.lookup(&c.to_string())).collect()
    }

    pub fn render(&self, w: &[Sym]) -> String {
        let names: Vec<String> = w.iter().map(|&s| self.name(s)).collect();
        if names.iter().all(|n| n.chars().count() == 1) {
            names.concat()
        } else {
            names.join(" ")
        }
    }
}

/// Split on commas that are not nested in parentheses.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

/// Serialized form of an alphabet.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum AlphabetSpec {
    Plain(Vec<String>),
    Conv { base: Box<AlphabetSpec>, arity: usize },
}

impl AlphabetSpec {
    pub fn of(a: &Alphabet) -> Self {
        match a {
            Alphabet::Plain { names, .. } => AlphabetSpec::Plain(names.clone()),
            Alphabet::Conv { base, arity } => AlphabetSpec::Conv {
                base: Box::new(AlphabetSpec::of(base)),
                arity: *arity,
            },
        }
    }

    pub fn build(&self) -> Result<Arc<Alphabet>, AutomataError> {
        Ok(match self {
            AlphabetSpec::Plain(names) => Arc::new(Alphabet::new(names)?),
            AlphabetSpec::Conv { base, arity } => {
                if *arity == 0 {
                    return Err(AutomataError::Format("convolution arity 0".into()));
                }
                Alphabet::conv(&base.build()?, *arity)
            }
        })
    }
}
