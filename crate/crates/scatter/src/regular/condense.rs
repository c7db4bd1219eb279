//! Condensation of a regular word into its classes.
//!
//! Two points share a class when the interval between them is finite, or
//! when it is dense and every label occurring in it occurs between any two
//! of its points. Points with an immediate neighbour are grouped by finite
//! distance; the remaining isolated points form maximal label-dense runs. An
//! isolated point that could join two different dense runs on either side
//! stays on its own, so the partition is invariant under automorphisms.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::term::{Label, Term};

/// The isomorphism type of a class, over the labels of the level below.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassType {
    Finite(Vec<Label>),
    /// `prefix · period^ω`
    Omega { prefix: Vec<Label>, period: Vec<Label> },
    /// `period^ω* · suffix`
    OmegaStar { period: Vec<Label>, suffix: Vec<Label> },
    /// `left^ω* · middle · right^ω`
    Zeta { left: Vec<Label>, middle: Vec<Label>, right: Vec<Label> },
    /// A countable dense order where every label in `labels` is dense.
    Dense { labels: Vec<Label>, min: Option<Label>, max: Option<Label> },
}

impl ClassType {
    fn has_min(&self) -> bool {
        match self {
            ClassType::Finite(_) | ClassType::Omega { .. } => true,
            ClassType::Dense { min, .. } => min.is_some(),
            _ => false,
        }
    }

    fn has_max(&self) -> bool {
        match self {
            ClassType::Finite(_) | ClassType::OmegaStar { .. } => true,
            ClassType::Dense { max, .. } => max.is_some(),
            _ => false,
        }
    }

    fn lonely(&self) -> Option<Label> {
        match self {
            ClassType::Finite(w) if w.len() == 1 => Some(w[0]),
            _ => None,
        }
    }

    pub fn show(&self, names: &[String]) -> String {
        let w = |v: &[Label]| -> String {
            if v.is_empty() {
                "ε".into()
            } else {
                v.iter()
                    .map(|l| names.get(*l as usize).cloned().unwrap_or_else(|| format!("c{l}")))
                    .collect::<Vec<_>>()
                    .join("")
            }
        };
        match self {
            ClassType::Finite(v) => format!("Finite({})", w(v)),
            ClassType::Omega { prefix, period } => format!("Omega({},{})", w(prefix), w(period)),
            ClassType::OmegaStar { period, suffix } => format!("OmegaStar({},{})", w(period), w(suffix)),
            ClassType::Zeta { left, middle, right } => {
                format!("Zeta({},{},{})", w(left), w(middle), w(right))
            }
            ClassType::Dense { labels, min, max } => {
                let e = |x: &Option<Label>| x.map(|l| w(&[l])).unwrap_or_else(|| "-".into());
                format!("Dense({{{}}},{},{})", w(labels), e(min), e(max))
            }
        }
    }
}

fn primitive_root(u: &[Label]) -> Vec<Label> {
    let n = u.len();
    for d in 1..=n {
        if n.is_multiple_of(d) && (d..n).all(|i| u[i] == u[i - d]) {
            return u[..d].to_vec();
        }
    }
    u.to_vec()
}

fn rot_left(u: &mut [Label]) {
    u.rotate_left(1)
}

fn rot_right(u: &mut [Label]) {
    u.rotate_right(1)
}

fn least_rotation(u: &[Label]) -> usize {
    (0..u.len())
        .min_by(|&i, &j| {
            let a = u[i..].iter().chain(&u[..i]);
            let b = u[j..].iter().chain(&u[..j]);
            a.cmp(b)
        })
        .unwrap_or(0)
}

/// A normal form: two class types are isomorphic exactly when their
/// canonical forms are equal.
pub fn canonical_primitive(c: &ClassType) -> ClassType {
    match c {
        ClassType::Finite(w) => ClassType::Finite(w.clone()),
        ClassType::Omega { prefix, period } => {
            let mut p = prefix.clone();
            let mut u = primitive_root(period);
            while p.last().is_some() && p.last() == u.last() {
                p.pop();
                rot_right(&mut u);
            }
            ClassType::Omega { prefix: p, period: u }
        }
        ClassType::OmegaStar { period, suffix } => {
            let mut s = suffix.clone();
            let mut v = primitive_root(period);
            while !s.is_empty() && s[0] == v[0] {
                s.remove(0);
                rot_left(&mut v);
            }
            ClassType::OmegaStar { period: v, suffix: s }
        }
        ClassType::Zeta { left, middle, right } => {
            let mut v = primitive_root(left);
            let mut w = middle.clone();
            let mut u = primitive_root(right);
            // push the seam of the right tail as far left as it goes
            while w.last().is_some() && w.last() == u.last() {
                w.pop();
                rot_right(&mut u);
            }
            if w.is_empty() && v == u {
                let k = least_rotation(&u);
                u.rotate_left(k);
                return ClassType::Zeta { left: u.clone(), middle: Vec::new(), right: u };
            }
            // then fix the phase of the right period at its least rotation
            let k = least_rotation(&u);
            w.extend_from_slice(&u[..k]);
            u.rotate_left(k);
            // and absorb as much as possible into the left tail
            while !w.is_empty() && w[0] == v[0] {
                w.remove(0);
                rot_left(&mut v);
            }
            ClassType::Zeta { left: v, middle: w, right: u }
        }
        ClassType::Dense { labels, min, max } => {
            let mut l = labels.clone();
            l.sort_unstable();
            l.dedup();
            ClassType::Dense { labels: l, min: *min, max: *max }
        }
    }
}

/// Whether a single class admits a nontrivial automorphism.
///
/// Finite, ω and ω* orders are rigid. A ζ class moves only by shifting, which
/// preserves the labelling exactly when the word is periodic. A dense class
/// always has nontrivial automorphisms, endpoints or not.
pub fn primitive_nonrigid(c: &ClassType) -> bool {
    match canonical_primitive(c) {
        ClassType::Finite(_) | ClassType::Omega { .. } | ClassType::OmegaStar { .. } => false,
        ClassType::Zeta { left, middle, right } => middle.is_empty() && left == right,
        ClassType::Dense { .. } => true,
    }
}

/// Search for a shift `d` in `1..=bound` that fixes the labelling of a ζ
/// class, checked on a window covering both tails and the middle.
pub fn zeta_shift(c: &ClassType, bound: usize) -> Option<usize> {
    let ClassType::Zeta { left, middle, right } = c else {
        return None;
    };
    let reps = bound + middle.len() + left.len() + right.len() + 2;
    let mut word: Vec<Label> = Vec::new();
    for _ in 0..reps {
        word.extend(left);
    }
    let seam = word.len();
    word.extend(middle);
    for _ in 0..reps {
        word.extend(right);
    }
    let lo = seam.saturating_sub(bound + left.len() * 2 + 1);
    let hi = (seam + middle.len() + bound + right.len() * 2 + 1).min(word.len());
    (1..=bound).find(|&d| (lo..hi).all(|i| i + d >= word.len() || word[i] == word[i + d]))
}

/// A class fragment during condensation.
type Shape = ClassType;

/// The classes of a term: either a single class, or a first fragment, a
/// body of settled classes and a last fragment. A missing fragment means the
/// boundary is a limit of infinitely many classes.
#[derive(Clone, Debug)]
enum Cond {
    One(Shape),
    Many {
        first: Option<Shape>,
        mid: Option<Term>,
        last: Option<Shape>,
    },
}

/// Interns canonical class types as labels of the next level.
#[derive(Default, Debug, Clone)]
pub struct ClassTable {
    pub classes: Vec<ClassType>,
    index: HashMap<ClassType, Label>,
}

impl ClassTable {
    pub fn intern(&mut self, c: &ClassType) -> Label {
        let c = canonical_primitive(c);
        if let Some(&l) = self.index.get(&c) {
            return l;
        }
        let l = self.classes.len() as Label;
        self.classes.push(c.clone());
        self.index.insert(c, l);
        l
    }
}

fn dense(labels: Vec<Label>, min: Option<Label>, max: Option<Label>) -> Shape {
    ClassType::Dense { labels, min, max }
}

/// Adjacent points on both sides of a seam: join two discrete fragments.
fn join_discrete(x: Shape, y: Shape) -> Shape {
    use ClassType::*;
    match (x, y) {
        (Finite(mut a), Finite(b)) => {
            a.extend(b);
            Finite(a)
        }
        (Finite(mut a), Omega { prefix, period }) => {
            a.extend(prefix);
            Omega { prefix: a, period }
        }
        (OmegaStar { period, mut suffix }, Finite(b)) => {
            suffix.extend(b);
            OmegaStar { period, suffix }
        }
        (OmegaStar { period: v, suffix }, Omega { prefix, period: u }) => {
            let mut middle = suffix;
            middle.extend(prefix);
            Zeta { left: v, middle, right: u }
        }
        (x, y) => unreachable!("not joinable: {x:?} {y:?}"),
    }
}

/// Place `y` directly after `x`; returns the resulting fragments in order.
fn fuse(x: Shape, y: Shape) -> Vec<Shape> {
    use ClassType::*;
    match (x.has_max(), y.has_min()) {
        (false, false) => match (&x, &y) {
            (Dense { labels: a, min, .. }, Dense { labels: b, max, .. }) if a == b => {
                vec![dense(a.clone(), *min, *max)]
            }
            _ => vec![x, y],
        },
        (true, false) => {
            let Dense { labels: b, max: ymax, .. } = &y else {
                return vec![x, y];
            };
            match &x {
                Dense { labels: a, min, max: Some(r) } => {
                    if a == b {
                        vec![dense(a.clone(), *min, *ymax)]
                    } else if b.contains(r) {
                        vec![dense(a.clone(), *min, None), Finite(vec![*r]), y]
                    } else {
                        vec![x, y]
                    }
                }
                _ => match x.lonely() {
                    Some(l) if b.contains(&l) => vec![dense(b.clone(), Some(l), *ymax)],
                    _ => vec![x, y],
                },
            }
        }
        (false, true) => {
            let Dense { labels: a, min: xmin, .. } = &x else {
                return vec![x, y];
            };
            match &y {
                Dense { labels: b, min: Some(l), max } => {
                    if a == b {
                        vec![dense(a.clone(), *xmin, *max)]
                    } else if a.contains(l) {
                        vec![x, Finite(vec![*l]), dense(b.clone(), None, *max)]
                    } else {
                        vec![x, y]
                    }
                }
                _ => match y.lonely() {
                    Some(l) if a.contains(&l) => vec![dense(a.clone(), *xmin, Some(l))],
                    _ => vec![x, y],
                },
            }
        }
        (true, true) => {
            // the two extreme points are adjacent, so they leave any dense run
            let mut out = Vec::new();
            let xe = match x {
                Dense { labels, min, max: Some(r) } => {
                    out.push(dense(labels, min, None));
                    Finite(vec![r])
                }
                x => x,
            };
            let (ye, ys) = match y {
                Dense { labels, min: Some(l), max } => (Finite(vec![l]), Some(dense(labels, None, max))),
                y => (y, None),
            };
            out.push(join_discrete(xe, ye));
            out.extend(ys);
            out
        }
    }
}

struct Condenser<'a> {
    table: &'a mut ClassTable,
}

impl Condenser<'_> {
    fn settle(&mut self, shapes: impl IntoIterator<Item = Shape>) -> Vec<Term> {
        shapes
            .into_iter()
            .map(|s| Term::Const(self.table.intern(&s)))
            .collect()
    }

    fn from_list(&mut self, mut v: Vec<Shape>) -> Cond {
        if v.len() == 1 {
            return Cond::One(v.pop().unwrap());
        }
        let last = v.pop();
        let first = v.remove(0);
        let mid = Term::sum(self.settle(v));
        Cond::Many { first: Some(first), mid, last }
    }

    fn concat(&mut self, a: Cond, b: Cond) -> Cond {
        match (a, b) {
            (Cond::One(x), Cond::One(y)) => {
                let v = fuse(x, y);
                self.from_list(v)
            }
            (Cond::One(x), Cond::Many { first, mid, last }) => match first {
                None => Cond::Many { first: Some(x), mid, last },
                Some(f) => {
                    let mut v = fuse(x, f);
                    let head = v.remove(0);
                    let body = Term::sum(self.settle(v).into_iter().chain(mid));
                    Cond::Many { first: Some(head), mid: body, last }
                }
            },
            (Cond::Many { first, mid, last }, Cond::One(y)) => match last {
                None => Cond::Many { first, mid, last: Some(y) },
                Some(l) => {
                    let mut v = fuse(l, y);
                    let tail = v.pop().unwrap();
                    let body = Term::sum(mid.into_iter().chain(self.settle(v)));
                    Cond::Many { first, mid: body, last: Some(tail) }
                }
            },
            (
                Cond::Many { first: f1, mid: m1, last: l1 },
                Cond::Many { first: f2, mid: m2, last: l2 },
            ) => {
                let seam = self.seam(l1, f2);
                let body = Term::sum(m1.into_iter().chain(seam).chain(m2));
                Cond::Many { first: f1, mid: body, last: l2 }
            }
        }
    }

    /// Settled classes across an interior seam.
    fn seam(&mut self, l: Option<Shape>, f: Option<Shape>) -> Vec<Term> {
        match (l, f) {
            (Some(l), Some(f)) => {
                let v = fuse(l, f);
                self.settle(v)
            }
            (l, f) => self.settle(l.into_iter().chain(f)),
        }
    }

    fn omega(&mut self, c: Cond) -> Cond {
        match c {
            Cond::One(x) => match x {
                ClassType::Finite(w) => Cond::One(ClassType::Omega { prefix: Vec::new(), period: w }),
                ClassType::Dense { labels, min, max } => match (min, max) {
                    (Some(l), Some(r)) => {
                        let rep = self.settle([ClassType::Finite(vec![r, l]), dense(labels.clone(), None, None)]);
                        Cond::Many {
                            first: Some(dense(labels, Some(l), None)),
                            mid: Some(Term::omega(Term::sum(rep).unwrap())),
                            last: None,
                        }
                    }
                    (min, _) => Cond::One(dense(labels, min, None)),
                },
                x => {
                    let rep = self.settle([x.clone()]);
                    Cond::Many {
                        first: Some(x),
                        mid: Some(Term::omega(Term::sum(rep).unwrap())),
                        last: None,
                    }
                }
            },
            Cond::Many { first, mid, last } => {
                let join = self.seam(last, first.clone());
                let rep = Term::sum(join.into_iter().chain(mid.clone())).expect("nonempty period");
                let body = Term::sum(mid.into_iter().chain([Term::omega(rep)]));
                Cond::Many { first, mid: body, last: None }
            }
        }
    }

    fn omega_star(&mut self, c: Cond) -> Cond {
        match c {
            Cond::One(x) => match x {
                ClassType::Finite(w) => Cond::One(ClassType::OmegaStar { period: w, suffix: Vec::new() }),
                ClassType::Dense { labels, min, max } => match (min, max) {
                    (Some(l), Some(r)) => {
                        let rep = self.settle([dense(labels.clone(), None, None), ClassType::Finite(vec![r, l])]);
                        Cond::Many {
                            first: None,
                            mid: Some(Term::omega_star(Term::sum(rep).unwrap())),
                            last: Some(dense(labels, None, Some(r))),
                        }
                    }
                    (_, max) => Cond::One(dense(labels, None, max)),
                },
                x => {
                    let rep = self.settle([x.clone()]);
                    Cond::Many {
                        first: None,
                        mid: Some(Term::omega_star(Term::sum(rep).unwrap())),
                        last: Some(x),
                    }
                }
            },
            Cond::Many { first, mid, last } => {
                let join = self.seam(last.clone(), first);
                let rep = Term::sum(mid.clone().into_iter().chain(join)).expect("nonempty period");
                let body = Term::sum([Term::omega_star(rep)].into_iter().chain(mid));
                Cond::Many { first: None, mid: body, last }
            }
        }
    }

    fn shuffle(&mut self, parts: Vec<Cond>) -> Cond {
        let mut all_dense = true;
        let mut labels = BTreeSet::new();
        for p in &parts {
            match p {
                Cond::One(ClassType::Dense { labels: ls, .. }) => labels.extend(ls.iter().copied()),
                Cond::One(x) if x.lonely().is_some() => {
                    labels.insert(x.lonely().unwrap());
                }
                _ => all_dense = false,
            }
        }
        if all_dense {
            return Cond::One(dense(labels.into_iter().collect(), None, None));
        }
        let terms: Vec<Term> = parts.into_iter().map(|p| self.flatten(p)).collect();
        Cond::Many { first: None, mid: Some(Term::shuffle(terms)), last: None }
    }

    fn flatten(&mut self, c: Cond) -> Term {
        match c {
            Cond::One(x) => Term::Const(self.table.intern(&x)),
            Cond::Many { first, mid, last } => {
                let f = self.settle(first);
                let l = self.settle(last);
                Term::sum(f.into_iter().chain(mid).chain(l)).expect("nonempty condensation")
            }
        }
    }

    fn go(&mut self, t: &Term) -> Cond {
        match t {
            Term::Const(a) => Cond::One(ClassType::Finite(vec![*a])),
            Term::Concat(v) => {
                let mut it = v.iter();
                let mut acc = self.go(it.next().expect("empty concatenation"));
                for s in it {
                    let c = self.go(s);
                    acc = self.concat(acc, c);
                }
                acc
            }
            Term::OmegaPow(s) => {
                let c = self.go(s);
                self.omega(c)
            }
            Term::OmegaStarPow(s) => {
                let c = self.go(s);
                self.omega_star(c)
            }
            Term::Shuffle(v) => {
                let parts = v.iter().map(|s| self.go(s)).collect();
                self.shuffle(parts)
            }
        }
    }
}

/// The condensed term over class labels, together with the class table.
/// The term is a single constant exactly when the whole word is one class.
pub fn condense_term(t: &Term) -> (Term, ClassTable) {
    let mut table = ClassTable::default();
    let c = Condenser { table: &mut table }.go(t);
    let term = Condenser { table: &mut table }.flatten(c);
    (term, table)
}
