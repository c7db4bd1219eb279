//! Letterwise substitution `σ_i ↦ 1^i 0^{ℓ−i}` into `{0,1}`. All blocks
//! share the length `ℓ`, so the image of a regular pair language is regular
//! and the substitution preserves `≤lex²`.

use std::sync::Arc;

use crate::automata::{convolve2, deconvolve, Alphabet, Nfa, Sym, Word};

use super::k::KBundle;
use super::ConstructionError;

#[derive(Clone, Debug)]
pub struct Binarization {
    pub sigma: Arc<Alphabet>,
    pub bin: Arc<Alphabet>,
    pub conv: Arc<Alphabet>,
}

impl Binarization {
    pub fn new(sigma: Arc<Alphabet>) -> Self {
        let bin = Alphabet::chars("01");
        let conv = Alphabet::conv(&bin, 2);
        Binarization { sigma, bin, conv }
    }

    pub fn ell(&self) -> usize {
        self.sigma.len()
    }

    /// `g(σ_i)`, with symbol `s` being `σ_{s+1}`.
    pub fn block(&self, s: Sym) -> Word {
        let i = s as usize + 1;
        let mut w = vec![1; i];
        w.resize(self.ell(), 0);
        w
    }

    pub fn encode_word(&self, w: &[Sym]) -> Word {
        w.iter().flat_map(|&s| self.block(s)).collect()
    }

    /// Inverse of [`Self::encode_word`]; reports the first bad block index.
    pub fn decode_word(&self, w: &[Sym]) -> Result<Word, ConstructionError> {
        let ell = self.ell();
        if !w.len().is_multiple_of(ell) {
            return Err(ConstructionError::MalformedBlock(w.len() / ell));
        }
        w.chunks(ell)
            .enumerate()
            .map(|(n, c)| {
                let i = c.iter().take_while(|&&b| b == 1).count();
                if i == 0 || c[i..].iter().any(|&b| b != 0) {
                    Err(ConstructionError::MalformedBlock(n))
                } else {
                    Ok((i - 1) as Sym)
                }
            })
            .collect()
    }

    pub fn encode_pair(&self, src_conv: &Alphabet, w: &[Sym]) -> Result<Word, ConstructionError> {
        let t = deconvolve(src_conv, w)?;
        Ok(convolve2(&self.conv, &self.encode_word(&t[0]), &self.encode_word(&t[1])))
    }

    pub fn decode_pair(&self, src_conv: &Alphabet, w: &[Sym]) -> Result<Word, ConstructionError> {
        let t = deconvolve(&self.conv, w)?;
        let (u, v) = (self.decode_word(&t[0])?, self.decode_word(&t[1])?);
        Ok(convolve2(src_conv, &u, &v))
    }

    /// Replace every transition of an automaton over `conv(Σ,2)` by a chain
    /// of `ℓ` transitions reading the two blocks side by side.
    pub fn pair_nfa(&self, a: &Nfa) -> Nfa {
        let src = a.alphabet().clone();
        let ell = self.ell();
        let mut out = Nfa::new(self.conv.clone(), a.num_states());
        out.set_initial(a.initial());
        for f in a.finals() {
            out.set_final(f, true);
        }
        for (p, s, q) in a.transitions() {
            let t = src.decode(s);
            let col = |x: Option<Sym>| x.map(|x| self.block(x));
            let (bu, bv) = (col(t[0]), col(t[1]));
            let mut cur = p;
            for j in 0..ell {
                let l = self
                    .conv
                    .encode(&[bu.as_ref().map(|b| b[j]), bv.as_ref().map(|b| b[j])])
                    .expect("pad-pad letter in a pair automaton");
                let nxt = if j + 1 == ell { q } else { out.add_state() };
                out.add_transition(cur, l, nxt);
                cur = nxt;
            }
        }
        out
    }
}

/// The binary pair language `{g(u)⊗g(v) | u⊗v ∈ K}`.
#[derive(Clone, Debug)]
pub struct BinaryBundle {
    pub g: Binarization,
    pub language: Nfa,
}

pub fn binarize(kb: &KBundle) -> BinaryBundle {
    let g = Binarization::new(kb.sigma.clone());
    let language = g.pair_nfa(&kb.language);
    BinaryBundle { g, language }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_k, Polynomial};
    use crate::orders::lex2;

    #[test]
    fn blocks_and_round_trip() {
        let kb = build_k(&Polynomial::parse("x", 1).unwrap(), &Polynomial::parse("2", 1).unwrap()).unwrap();
        let bb = binarize(&kb);
        let ell = bb.g.ell();
        let mut least = vec![1];
        least.resize(ell, 0);
        assert_eq!(bb.g.block(0), least);
        assert!(bb.g.decode_word(&[0; 3]).is_err());
        let ms = kb.members_up_to(7);
        for s in ms.iter().take(60) {
            let w = kb.encode(s);
            let b = bb.g.encode_pair(&kb.conv, &w).unwrap();
            assert!(bb.language.accepts(&b));
            assert_eq!(bb.g.decode_pair(&kb.conv, &b).unwrap(), w);
            for t in ms.iter().take(60) {
                let w2 = kb.encode(t);
                let b2 = bb.g.encode_pair(&kb.conv, &w2).unwrap();
                assert_eq!(lex2(&kb.conv, &w, &w2).unwrap(), lex2(&bb.g.conv, &b, &b2).unwrap());
            }
        }
    }
}
