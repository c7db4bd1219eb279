use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::automata::{Sym, Word};

/// A point `(i, j)` of ω·ω*: position `i` in the `j`-th ascending chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeltaPoint {
    pub i: usize,
    pub j: usize,
}

impl DeltaPoint {
    pub fn new(i: usize, j: usize) -> Self {
        DeltaPoint { i, j }
    }
}

/// Chains are ordered downwards, positions within a chain upwards.
pub fn delta_cmp(p: DeltaPoint, q: DeltaPoint) -> Ordering {
    q.j.cmp(&p.j).then(p.i.cmp(&q.i))
}

/// `1 0^{j+1} 1^{i+1} 0` over the symbols `0 < 1`.
pub fn delta_encode(p: DeltaPoint) -> Word {
    delta_encode_with(p, 0, 1)
}

pub fn delta_encode_with(p: DeltaPoint, zero: Sym, one: Sym) -> Word {
    let mut w = Vec::with_capacity(p.i + p.j + 4);
    w.push(one);
    w.extend(std::iter::repeat_n(zero, p.j + 1));
    w.extend(std::iter::repeat_n(one, p.i + 1));
    w.push(zero);
    w
}

pub fn delta_decode(w: &[Sym]) -> Option<DeltaPoint> {
    delta_decode_with(w, 0, 1)
}

pub fn delta_decode_with(w: &[Sym], zero: Sym, one: Sym) -> Option<DeltaPoint> {
    let (&first, rest) = w.split_first()?;
    let (&last, mid) = rest.split_last()?;
    if first != one || last != zero {
        return None;
    }
    let zeros = mid.iter().take_while(|&&c| c == zero).count();
    let ones = mid[zeros..].iter().take_while(|&&c| c == one).count();
    if zeros == 0 || ones == 0 || zeros + ones != mid.len() {
        return None;
    }
    Some(DeltaPoint::new(ones - 1, zeros - 1))
}
