use super::alphabet::{Alphabet, Sym, Word};
use super::AutomataError;

/// Superimpose words into one word over the convolution alphabet.
///
/// Shorter tracks are padded; the result has the length of the longest track.
pub fn convolve(conv: &Alphabet, ws: &[&[Sym]]) -> Result<Word, AutomataError> {
    let arity = conv.arity().ok_or(AutomataError::NotConvolution)?;
    if ws.len() != arity {
        return Err(AutomataError::ArityMismatch {
            expected: arity,
            found: ws.len(),
        });
    }
    let len = ws.iter().map(|w| w.len()).max().unwrap_or(0);
    let mut tuple = vec![None; arity];
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        for (t, w) in ws.iter().enumerate() {
            tuple[t] = w.get(i).copied();
        }
        out.push(
            conv.encode(&tuple)
                .ok_or_else(|| AutomataError::UnknownSymbol(format!("{tuple:?}")))?,
        );
    }
    Ok(out)
}

/// Inverse of [`convolve`]; rejects tracks that resume after padding.
pub fn deconvolve(conv: &Alphabet, w: &[Sym]) -> Result<Vec<Word>, AutomataError> {
    let arity = conv.arity().ok_or(AutomataError::NotConvolution)?;
    let mut tracks = vec![Vec::new(); arity];
    let mut ended = vec![false; arity];
    for (pos, &s) in w.iter().enumerate() {
        for (t, c) in conv.decode(s).into_iter().enumerate() {
            match c {
                Some(c) if ended[t] => {
                    let _ = c;
                    return Err(AutomataError::PaddingResumed { track: t, position: pos });
                }
                Some(c) => tracks[t].push(c),
                None => ended[t] = true,
            }
        }
    }
    Ok(tracks)
}

/// Convenience for pairs.
pub fn convolve2(conv: &Alphabet, u: &[Sym], v: &[Sym]) -> Word {
    convolve(conv, &[u, v]).expect("arity-2 convolution alphabet")
}
