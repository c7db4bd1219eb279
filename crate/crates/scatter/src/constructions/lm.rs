//! The tree language `L_M` for a Minsky machine: members are
//! `t ⊗ $^k ⊗ $□(a□)^m` with `t` in `L_{A_M}` (side A) or in `L_{B_M}`
//! (side B, where the word of `t` must be `u ⊗ $□(a□)^m`), ordered so that
//! the result is `Σ_m (L_{‖A_M‖}·ω* + L_{r_{M,m}}·ω)`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::automata::{convolve2, deconvolve, Alphabet, Sym, Word};
use crate::minsky::MinskyMachine;
use crate::tree::{cmp_trees, convolve_trees, deconvolve_tree, Tree, TreeAutomaton};
use crate::weighted::{build_b_m, krob_checker, lift_a_m, KrobBundle};

use super::runtree::{build_l_a, fresh_marker, predicted_cmp_la, LaBundle, LaCoord};
use super::ConstructionError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

/// Decoded member. `inner` is over the alphabet of its side's `L_A` bundle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LmCoord {
    pub m: usize,
    pub side: Side,
    pub k: usize,
    pub inner: LaCoord,
}

/// The tracks of a member with the first one still over the base alphabet.
#[derive(Clone, Debug)]
pub struct LmView {
    pub m: usize,
    pub side: Side,
    pub k: usize,
    pub tree: Tree,
}

/// The comparator `⪯`: by `m`, then side A first, then `k` descending on
/// side A and ascending on side B, then `≤trees`.
pub fn cmp_lm(s: &LmView, t: &LmView) -> Ordering {
    s.m.cmp(&t.m).then(s.side.cmp(&t.side)).then_with(|| {
        let k = if s.side == Side::A { t.k.cmp(&s.k) } else { s.k.cmp(&t.k) };
        k.then_with(|| cmp_trees(&s.tree, &t.tree))
    })
}

/// The same order from decoded coordinates and the `L_A` decomposition.
pub fn predicted_cmp_lm(s: &LmCoord, t: &LmCoord) -> Ordering {
    s.m.cmp(&t.m).then(s.side.cmp(&t.side)).then_with(|| {
        let k = if s.side == Side::A { t.k.cmp(&s.k) } else { s.k.cmp(&t.k) };
        k.then_with(|| predicted_cmp_la(&s.inner, &t.inner))
    })
}

#[derive(Clone, Debug)]
pub struct LmBundle {
    pub krob: KrobBundle,
    pub la: LaBundle,
    pub lb: LaBundle,
    /// `Σ`, then the letters of `Σ_#²`, then the marker.
    pub base: Arc<Alphabet>,
    pub conv: Arc<Alphabet>,
    pub marker: Sym,
    pub automaton: TreeAutomaton,
}

/// Letter info a main-branch node of side B passes to its parent: the
/// second component of its letter and whether the first is present.
type Info = Option<(Option<Sym>, bool)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Key {
    s1: usize,
    k: bool,
    x3: Option<Sym>,
    info: Info,
}

impl LmBundle {
    fn n_sigma(&self) -> Sym {
        self.krob.sigma.len() as Sym
    }

    fn dollar(&self) -> Sym {
        0
    }

    pub fn marker_word(&self, m: usize) -> Word {
        self.krob.marker(m)
    }

    fn embed(&self, side: Side, s: Sym) -> Sym {
        match side {
            Side::A if s == self.la.marker => self.marker,
            Side::B if s == self.lb.marker => self.marker,
            Side::A => s,
            Side::B => self.n_sigma() + s,
        }
    }

    fn unembed(&self, side: Side, s: Sym) -> Sym {
        match side {
            _ if s == self.marker => match side {
                Side::A => self.la.marker,
                Side::B => self.lb.marker,
            },
            Side::A => s,
            Side::B => s - self.n_sigma(),
        }
    }

    fn inner_bundle(&self, side: Side) -> &LaBundle {
        match side {
            Side::A => &self.la,
            Side::B => &self.lb,
        }
    }

    /// `u ⊗ $□(a□)^m` as a letter word of `B_M`.
    pub fn b_word(&self, u: &[Sym], m: usize) -> Word {
        convolve2(self.lb.wa.alphabet(), u, &self.marker_word(m))
    }

    pub fn view(&self, c: &LmCoord) -> LmView {
        let t = self.inner_bundle(c.side).encode(&c.inner);
        LmView { m: c.m, side: c.side, k: c.k, tree: t.map_labels(&|s| self.embed(c.side, s)) }
    }

    pub fn encode(&self, c: &LmCoord) -> Tree {
        let v = self.view(c);
        let t2 = Tree::word(&vec![self.dollar(); c.k]);
        let t3 = Tree::word(&self.marker_word(c.m));
        convolve_trees(&self.conv, &[&v.tree, &t2, &t3]).expect("arity 3")
    }

    pub fn split(&self, t: &Tree) -> Result<LmView, ConstructionError> {
        let bad = |why: &str| ConstructionError::Malformed(why.to_string());
        let parts = deconvolve_tree(&self.conv, t).map_err(|e| bad(&e.to_string()))?;
        let [t1, t2, t3] = <[Tree; 3]>::try_from(parts).map_err(|_| bad("arity"))?;
        if !t2.is_word() || t2.main_branch().iter().any(|&s| s != self.dollar()) {
            return Err(bad("second track"));
        }
        let w3 = t3.main_branch();
        if !t3.is_word() || w3.len() < 2 || w3.len() % 2 != 0 || w3 != self.marker_word((w3.len() - 2) / 2) {
            return Err(bad("third track"));
        }
        let first = t1.get("0").ok_or_else(|| bad("first track"))?;
        let side = if first < self.n_sigma() {
            Side::A
        } else if first == self.marker {
            return Err(bad("first track"));
        } else {
            Side::B
        };
        Ok(LmView { m: (w3.len() - 2) / 2, side, k: t2.size(), tree: t1 })
    }

    /// Shape decoding; membership is [`Self::is_member`].
    pub fn decode(&self, t: &Tree) -> Result<LmCoord, ConstructionError> {
        let v = self.split(t)?;
        let inner_tree = v.tree.map_labels(&|s| self.unembed(v.side, s));
        let inner = self.inner_bundle(v.side).decode(&inner_tree)?;
        Ok(LmCoord { m: v.m, side: v.side, k: v.k, inner })
    }

    /// Membership from the definition, without the tree automaton.
    pub fn is_member(&self, t: &Tree) -> bool {
        let Ok(c) = self.decode(t) else { return false };
        let lab = self.inner_bundle(c.side);
        if !lab.is_member(&lab.encode(&c.inner)) {
            return false;
        }
        if c.side == Side::A {
            return true;
        }
        match deconvolve(self.lb.wa.alphabet(), c.inner.word()) {
            Ok(tr) => !tr[0].is_empty() && tr[1] == self.marker_word(c.m),
            Err(_) => false,
        }
    }

    /// All members with `m ≤ max_m`, `k ≤ max_k`, side-A words and side-B
    /// first components of length at most `max_u`, and branch lengths at
    /// most `max_branch`.
    pub fn members(&self, max_m: usize, max_k: usize, max_u: usize, max_branch: usize) -> Vec<LmCoord> {
        let sigma: Vec<Sym> = self.krob.sigma.symbols().collect();
        let words = |len: usize| -> Vec<Word> {
            itertools::Itertools::multi_cartesian_product((0..len).map(|_| sigma.iter().copied())).collect()
        };
        let mut a_inner = self.la.members(max_u, max_branch);
        a_inner.sort_by(predicted_cmp_la);
        let mut out = Vec::new();
        for m in 0..=max_m {
            let mut b_inner = Vec::new();
            for len in 1..=max_u {
                for u in words(len) {
                    let w = self.b_word(&u, m);
                    b_inner.extend(run_trees(&self.lb, &w, max_branch));
                    for i in 0..=max_branch {
                        for j in 0..=max_branch {
                            b_inner.push(LaCoord::Delim { word: w.clone(), i, j });
                        }
                    }
                }
            }
            for k in 0..=max_k {
                for inner in &a_inner {
                    out.push(LmCoord { m, side: Side::A, k, inner: inner.clone() });
                }
                for inner in &b_inner {
                    out.push(LmCoord { m, side: Side::B, k, inner: inner.clone() });
                }
            }
        }
        out
    }
}

/// Run trees with word `w`, `n ≤ max` and side chains of length `≤ max`.
fn run_trees(lab: &LaBundle, w: &[Sym], max: usize) -> Vec<LaCoord> {
    let mut out = Vec::new();
    for sides in itertools::Itertools::multi_cartesian_product((0..w.len()).map(|_| 0..=max)) {
        if lab.run_exists(w, &sides) {
            for n in 0..=max {
                out.push(LaCoord::Run { word: w.to_vec(), n, sides: sides.clone() });
            }
        }
    }
    out
}

pub fn build_l_m(machine: &MinskyMachine) -> Result<LmBundle, ConstructionError> {
    let krob = krob_checker(machine);
    let a_m = lift_a_m(&krob);
    let b_m = build_b_m(&krob, &a_m);
    let la = build_l_a(&a_m);
    let lb = build_l_a(&b_m);
    let sigma = &krob.sigma;
    let mut names = sigma.names();
    names.extend(b_m.alphabet().names());
    let probe = Alphabet::new(&names)?;
    names.push(fresh_marker(&probe));
    let base = Arc::new(Alphabet::new(&names)?);
    let marker = (names.len() - 1) as Sym;
    let conv = Alphabet::conv(&base, 3);
    let mut bundle = LmBundle {
        krob,
        la,
        lb,
        base,
        conv,
        marker,
        automaton: TreeAutomaton::new(Arc::new(Alphabet::new(&["_"])?), 1, 0),
    };
    bundle.automaton = product_automaton(&bundle);
    Ok(bundle)
}

/// The first-track automata (both sides, shared absent state) run in
/// lockstep with checks for the two word tracks and the side-B coupling.
fn product_automaton(b: &LmBundle) -> TreeAutomaton {
    let na = b.la.automaton.num_states();
    let nb = b.lb.automaton.num_states();
    let to_b = |s: usize| if s == 0 { 0 } else { na + s };
    let mut t1: Vec<(usize, Sym, usize, usize, Side)> = Vec::new();
    for &(q, s, l, r) in b.la.automaton.transitions() {
        t1.push((q, b.embed(Side::A, s), l, r, Side::A));
    }
    for &(q, s, l, r) in b.lb.automaton.transitions() {
        t1.push((to_b(q), b.embed(Side::B, s), to_b(l), to_b(r), Side::B));
    }
    let finals: Vec<usize> = (0..na)
        .filter(|&q| b.la.automaton.is_final(q))
        .chain((0..nb).filter(|&q| b.lb.automaton.is_final(q)).map(to_b))
        .collect();
    let n_sigma = b.n_sigma();
    let pair = b.lb.wa.alphabet().clone();
    let (dollar, bx, la) = (0 as Sym, 1 as Sym, 2 as Sym);
    let x3_ok = |own: Option<Sym>, kid: Option<Sym>| {
        matches!(
            (own, kid),
            (Some(d), Some(x)) if (d == dollar || d == la) && x == bx
        ) || matches!((own, kid), (Some(x), Some(y)) if x == bx && y == la)
            || matches!((own, kid), (Some(x), None) if x == bx)
            || (own, kid) == (None, None)
    };

    let absent = Key { s1: 0, k: false, x3: None, info: None };
    let mut index: HashMap<Key, usize> = HashMap::from([(absent, 0)]);
    let mut keys = vec![absent];
    let mut by_s1: HashMap<usize, Vec<usize>> = HashMap::from([(0, vec![0])]);
    let mut trans: Vec<(usize, Sym, usize, usize)> = Vec::new();
    let mut seen_trans = std::collections::HashSet::new();
    let x3s = [None, Some(dollar), Some(bx), Some(la)];

    loop {
        let before = keys.len();
        let mut found: Vec<(Key, Sym, usize, usize)> = Vec::new();
        // nodes past the end of the first track
        for &li in by_s1.get(&0).into_iter().flatten() {
            let lk = keys[li];
            for own_k in [false, true] {
                for &x3 in &x3s {
                    if (!own_k && x3.is_none()) || (!own_k && lk.k) || !x3_ok(x3, lk.x3) {
                        continue;
                    }
                    let label = b.conv.encode(&[None, own_k.then_some(dollar), x3]).unwrap();
                    found.push((Key { s1: 0, k: own_k, x3, info: None }, label, li, 0));
                }
            }
        }
        for &(q, x, l, r, side) in &t1 {
            let (Some(ls), Some(rs)) = (by_s1.get(&l), by_s1.get(&r)) else { continue };
            let info_own: Info = (side == Side::B && x != b.marker).then(|| {
                let t = pair.decode(x - n_sigma);
                (t[1], t[0].is_some())
            });
            for &ri in rs {
                let rk = keys[ri];
                if rk.k || rk.x3.is_some() {
                    continue;
                }
                for &li in ls {
                    let lk = keys[li];
                    for own_k in [false, true] {
                        if !own_k && lk.k {
                            continue;
                        }
                        for &x3 in &x3s {
                            if !x3_ok(x3, lk.x3) {
                                continue;
                            }
                            if side == Side::B {
                                let kid_v = lk.info.and_then(|(v, _)| v);
                                if kid_v != x3 {
                                    continue;
                                }
                                let kid_u = lk.info.is_some_and(|(_, u)| u);
                                if let Some((_, u)) = info_own {
                                    if kid_u && !u {
                                        continue;
                                    }
                                }
                                if finals.contains(&q) && !kid_u {
                                    continue;
                                }
                            }
                            let label = b.conv.encode(&[Some(x), own_k.then_some(dollar), x3]).unwrap();
                            found.push((Key { s1: q, k: own_k, x3, info: info_own }, label, li, ri));
                        }
                    }
                }
            }
        }
        for (key, label, li, ri) in found {
            let qi = *index.entry(key).or_insert_with(|| {
                keys.push(key);
                by_s1.entry(key.s1).or_default().push(keys.len() - 1);
                keys.len() - 1
            });
            if seen_trans.insert((qi, label, li, ri)) {
                trans.push((qi, label, li, ri));
            }
        }
        if keys.len() == before {
            break;
        }
    }
    let mut a = TreeAutomaton::new(b.conv.clone(), keys.len(), 0);
    for (q, s, l, r) in trans {
        a.add_transition(q, s, l, r);
    }
    for (i, k) in keys.iter().enumerate() {
        if finals.contains(&k.s1) && k.x3 == Some(dollar) {
            a.set_final(i, true);
        }
    }
    a
}
