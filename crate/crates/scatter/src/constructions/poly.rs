use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::automata::{Alphabet, Nfa, Sym, Word};

use super::ConstructionError;

/// A polynomial with natural coefficients in `k` variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polynomial {
    pub k: usize,
    /// exponent vector -> coefficient (never zero)
    pub monomials: BTreeMap<Vec<u32>, u64>,
}

impl Polynomial {
    pub fn constant(k: usize, c: u64) -> Self {
        let mut monomials = BTreeMap::new();
        if c > 0 {
            monomials.insert(vec![0; k], c);
        }
        Polynomial { k, monomials }
    }

    /// Parse sums of terms like `3`, `2x`, `x^2`, `x1*x2`, `x1^2 x2`.
    /// `x` is `x1`; the arity is the largest variable index, at least `min_k`.
    pub fn parse(src: &str, min_k: usize) -> Result<Self, ConstructionError> {
        let err = |m: &str| ConstructionError::Parse(format!("{m} in {src:?}"));
        let mut terms: Vec<(u64, BTreeMap<usize, u32>)> = Vec::new();
        for raw in src.split('+') {
            let t: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
            if t.is_empty() {
                return Err(err("empty term"));
            }
            let mut chars = t.chars().peekable();
            let mut coeff: Option<u64> = None;
            let mut vars: BTreeMap<usize, u32> = BTreeMap::new();
            let number = |chars: &mut std::iter::Peekable<std::str::Chars>| {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_digit() {
                        s.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                s
            };
            while let Some(&c) = chars.peek() {
                match c {
                    '*' => {
                        chars.next();
                    }
                    d if d.is_ascii_digit() => {
                        let n: u64 = number(&mut chars).parse().map_err(|_| err("bad number"))?;
                        coeff = Some(coeff.unwrap_or(1).checked_mul(n).ok_or_else(|| err("overflow"))?);
                    }
                    'x' => {
                        chars.next();
                        let idx = number(&mut chars);
                        let i = if idx.is_empty() { 1 } else { idx.parse().map_err(|_| err("bad index"))? };
                        if i == 0 {
                            return Err(err("variables start at x1"));
                        }
                        let mut e = 1;
                        if chars.peek() == Some(&'^') {
                            chars.next();
                            e = number(&mut chars).parse().map_err(|_| err("bad exponent"))?;
                        }
                        *vars.entry(i).or_default() += e;
                    }
                    _ => return Err(err(&format!("unexpected {c:?}"))),
                }
            }
            terms.push((coeff.unwrap_or(1), vars));
        }
        let k = terms
            .iter()
            .flat_map(|(_, v)| v.keys().copied())
            .max()
            .unwrap_or(0)
            .max(min_k)
            .max(1);
        let mut monomials: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (c, vars) in terms {
            let mut e = vec![0; k];
            for (i, x) in vars {
                e[i - 1] = x;
            }
            if c > 0 {
                *monomials.entry(e).or_default() += c;
            }
        }
        Ok(Polynomial { k, monomials })
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        assert_eq!(x.len(), self.k);
        self.monomials
            .iter()
            .map(|(e, c)| c * e.iter().zip(x).map(|(&e, &v)| v.pow(e)).product::<u64>())
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        let var = |i: usize| if self.k == 1 { "x".to_string() } else { format!("x{}", i + 1) };
        let mut first = true;
        for (e, c) in self.monomials.iter().rev() {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| if x == 1 { var(i) } else { format!("{}^{x}", var(i)) })
                .collect();
            match (c, factors.is_empty()) {
                (c, true) => write!(f, "{c}")?,
                (1, false) => f.write_str(&factors.join("*"))?,
                (c, false) => write!(f, "{c}{}", factors.join("*"))?,
            }
        }
        Ok(())
    }
}

/// The alphabet `¢ < a` of the argument encodings.
pub fn arg_alphabet() -> Arc<Alphabet> {
    Arc::new(Alphabet::new(&["¢", "a"]).unwrap())
}

pub const CENT: Sym = 0;
pub const A: Sym = 1;

/// `a^{x1}¢a^{x2}¢…a^{xk}¢`
pub fn encode_args(x: &[u64]) -> Word {
    let mut w = Vec::new();
    for &v in x {
        w.extend(std::iter::repeat_n(A, v as usize));
        w.push(CENT);
    }
    w
}

/// Stirling numbers of the second kind, `s[e][j]`.
fn stirling(e: usize) -> Vec<Vec<u64>> {
    let mut s = vec![vec![0u64; e + 1]; e + 1];
    s[0][0] = 1;
    for n in 1..=e {
        for j in 1..=n {
            s[n][j] = j as u64 * s[n - 1][j] + s[n - 1][j - 1];
        }
    }
    s
}

/// `a^*¢` with `j` marked positions chosen strictly increasing: `C(x, j)` runs on `a^x¢`.
fn marks(al: &Arc<Alphabet>, j: usize) -> Nfa {
    let mut n = Nfa::new(al.clone(), j + 2);
    for i in 0..=j {
        n.add_transition(i, A, i);
        if i < j {
            n.add_transition(i, A, i + 1);
        }
    }
    n.add_transition(j, CENT, j + 1);
    n.set_final(j + 1, true);
    n
}

fn union_all(al: &Arc<Alphabet>, parts: impl IntoIterator<Item = Nfa>) -> Nfa {
    parts
        .into_iter()
        .reduce(|a, b| a.union(&b))
        .unwrap_or_else(|| Nfa::empty(al.clone()))
        .trim()
}

/// An NFA over `{¢, a}` with exactly `p(x̄)` accepting runs on `a^x̄`.
///
/// `x^e = Σ_j S(e,j)·j!·C(x,j)`, so each variable power is a union of
/// mark-choosing gadgets; monomials concatenate segments, sums and
/// coefficients take disjoint unions.
pub fn poly_run_nfa(p: &Polynomial) -> Nfa {
    let al = arg_alphabet();
    let max_e = p.monomials.keys().flatten().copied().max().unwrap_or(0) as usize;
    let s = stirling(max_e);
    let fact = |j: usize| (1..=j as u64).product::<u64>();
    let segment = |e: usize| -> Nfa {
        if e == 0 {
            return marks(&al, 0);
        }
        let copies = (1..=e).flat_map(|j| std::iter::repeat_n(j, (s[e][j] * fact(j)) as usize));
        union_all(&al, copies.map(|j| marks(&al, j)))
    };
    let monomial = |e: &[u32]| -> Nfa {
        let mut a = Nfa::epsilon(al.clone());
        for &x in e {
            a = a.concat(&segment(x as usize));
        }
        a.trim()
    };
    let parts = p
        .monomials
        .iter()
        .flat_map(|(e, &c)| std::iter::repeat_n(e, c as usize))
        .map(|e| monomial(e));
    union_all(&al, parts)
}
