use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::automata::Nfa;

use super::term::{Label, Term};
use super::RegularError;

/// Right-hand side of one equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rhs {
    Label(Label),
    /// At least two variables.
    Seq(Vec<usize>),
}

/// A system `x_i = rhs_i` whose first variable is the one of interest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationSystem {
    pub rhs: Vec<Rhs>,
}

/// Which label a leaf of the prefix tree carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelMode {
    /// Every leaf has label 0; used for order rigidity.
    Constant,
    /// A leaf carries the last letter of its word.
    LastLetter,
}

impl EquationSystem {
    /// The system whose first solution is `(L; ≤lex)` as a labelled order.
    ///
    /// Nodes are the prefixes of words of `L`; a member `u` hangs a leaf under
    /// `u` before all extensions of `u`, so the frontier is lex order. Nodes
    /// are shared by residual (and by last letter in `LastLetter` mode), and
    /// nodes with a single child are collapsed into it.
    pub fn from_language(a: &Nfa, mode: LabelMode) -> Result<Self, RegularError> {
        let d = a.determinize().minimize();
        if d.is_final(0) {
            return Err(RegularError::EpsilonInLanguage);
        }
        let n = d.num_states();
        let k = a.alphabet().len() as u32;
        let mut live = vec![false; n];
        loop {
            let mut changed = false;
            for q in 0..n {
                if !live[q] && (d.is_final(q) || (0..k).any(|s| d.next(q, s).is_some_and(|r| live[r]))) {
                    live[q] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if !live[0] {
            return Err(RegularError::EmptyLanguage);
        }

        // raw variables: nodes keyed by (state, label of a leaf below it), leaves by label
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        enum Key {
            Node(usize, Label),
            Leaf(Label),
        }
        let mut index: HashMap<Key, usize> = HashMap::new();
        let mut keys: Vec<Key> = Vec::new();
        let mut raw: Vec<Option<Rhs>> = Vec::new();
        let label_of = |s: u32| match mode {
            LabelMode::Constant => 0,
            LabelMode::LastLetter => s,
        };
        let intern = |key: Key, keys: &mut Vec<Key>, index: &mut HashMap<Key, usize>, raw: &mut Vec<Option<Rhs>>| {
            *index.entry(key).or_insert_with(|| {
                keys.push(key);
                raw.push(None);
                keys.len() - 1
            })
        };
        // the root has no incoming letter; it is never final so its label is unused
        intern(Key::Node(0, 0), &mut keys, &mut index, &mut raw);
        let mut i = 0;
        while i < keys.len() {
            match keys[i] {
                Key::Leaf(l) => raw[i] = Some(Rhs::Label(l)),
                Key::Node(q, l) => {
                    let mut kids = Vec::new();
                    if d.is_final(q) {
                        kids.push(intern(Key::Leaf(l), &mut keys, &mut index, &mut raw));
                    }
                    for s in 0..k {
                        if let Some(r) = d.next(q, s).filter(|&r| live[r]) {
                            let has_ext = (0..k).any(|t| d.next(r, t).is_some_and(|x| live[x]));
                            let child = if has_ext {
                                Key::Node(r, label_of(s))
                            } else {
                                Key::Leaf(label_of(s))
                            };
                            kids.push(intern(child, &mut keys, &mut index, &mut raw));
                        }
                    }
                    raw[i] = Some(Rhs::Seq(kids));
                }
            }
            i += 1;
        }
        let raw: Vec<Rhs> = raw.into_iter().map(Option::unwrap).collect();

        // collapse unary chains
        let resolve = |mut v: usize| {
            let mut steps = 0;
            while let Rhs::Seq(kids) = &raw[v] {
                if kids.len() != 1 {
                    break;
                }
                v = kids[0];
                steps += 1;
                assert!(steps <= raw.len(), "unary cycle in a prefix tree");
            }
            v
        };
        let root = resolve(0);
        let mut renum: HashMap<usize, usize> = HashMap::from([(root, 0)]);
        let mut order = vec![root];
        let mut rhs = Vec::new();
        let mut j = 0;
        while j < order.len() {
            let v = order[j];
            let r = match &raw[v] {
                Rhs::Label(l) => Rhs::Label(*l),
                Rhs::Seq(kids) => Rhs::Seq(
                    kids.iter()
                        .map(|&c| {
                            let c = resolve(c);
                            let len = order.len();
                            *renum.entry(c).or_insert_with(|| {
                                order.push(c);
                                len
                            })
                        })
                        .collect(),
                ),
            };
            rhs.push(r);
            j += 1;
        }
        Ok(EquationSystem { rhs })
    }

    pub fn len(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhs.is_empty()
    }

    pub fn show(&self, names: &[String]) -> String {
        let name = |l: &Label| names.get(*l as usize).cloned().unwrap_or_else(|| l.to_string());
        self.rhs
            .iter()
            .enumerate()
            .map(|(i, r)| match r {
                Rhs::Label(l) => format!("x{} = {}", i + 1, name(l)),
                Rhs::Seq(v) => format!(
                    "x{} = {}",
                    i + 1,
                    v.iter().map(|j| format!("x{}", j + 1)).collect::<Vec<_>>().join(" ")
                ),
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Solve for every variable.
    ///
    /// Strongly connected components are handled bottom-up. In a component
    /// every variable has an inner child; following first inner children gives
    /// an ω-sum on the left, last inner children an ω*-sum on the right, and a
    /// component with a branching variable puts a dense shuffle of its gap
    /// blocks between the two.
    pub fn solve_all(&self) -> Result<Vec<Term>, RegularError> {
        let n = self.rhs.len();
        for r in &self.rhs {
            if let Rhs::Seq(v) = r {
                if v.len() < 2 || v.iter().any(|&j| j >= n) {
                    return Err(RegularError::MalformedSystem);
                }
            }
        }
        let comps = sccs(n, |i| match &self.rhs[i] {
            Rhs::Label(_) => Vec::new(),
            Rhs::Seq(v) => v.clone(),
        });
        let mut comp_of = vec![0; n];
        for (c, vs) in comps.iter().enumerate() {
            for &v in vs {
                comp_of[v] = c;
            }
        }
        let mut sol: Vec<Option<Term>> = vec![None; n];
        // Tarjan emits components in reverse topological order
        for (c, vs) in comps.iter().enumerate() {
            let inner = |j: usize| comp_of[j] == c;
            let recursive = vs.len() > 1
                || match &self.rhs[vs[0]] {
                    Rhs::Seq(v) => v.iter().any(|&j| j == vs[0]),
                    Rhs::Label(_) => false,
                };
            if !recursive {
                let v = vs[0];
                sol[v] = Some(match &self.rhs[v] {
                    Rhs::Label(l) => Term::Const(*l),
                    Rhs::Seq(kids) => Term::sum(kids.iter().map(|&j| sol[j].clone().unwrap())).unwrap(),
                });
                continue;
            }
            let seq = |v: usize| match &self.rhs[v] {
                Rhs::Seq(kids) => kids.as_slice(),
                Rhs::Label(_) => unreachable!("labels are never recursive"),
            };
            let ext = |js: &[usize]| -> Vec<Term> { js.iter().map(|&j| sol[j].clone().unwrap()).collect() };
            let inner_pos = |v: usize| -> Vec<usize> {
                seq(v).iter().enumerate().filter(|(_, &j)| inner(j)).map(|(p, _)| p).collect()
            };
            // ω-sum along first inner children
            let left = |x: usize| -> Option<Term> {
                let (pre, cyc) = path(x, |v| seq(v)[inner_pos(v)[0]]);
                let piece = |v: usize| {
                    let p = inner_pos(v)[0];
                    ext(&seq(v)[..p])
                };
                let head = pre.iter().flat_map(|&v| piece(v));
                let tail = Term::sum(cyc.iter().flat_map(|&v| piece(v))).map(Term::omega);
                Term::sum(head.chain(tail))
            };
            let right = |x: usize| -> Option<Term> {
                let (pre, cyc) = path(x, |v| seq(v)[*inner_pos(v).last().unwrap()]);
                let piece = |v: usize| {
                    let p = *inner_pos(v).last().unwrap();
                    ext(&seq(v)[p + 1..])
                };
                let tail = Term::sum(cyc.iter().rev().flat_map(|&v| piece(v))).map(Term::omega_star);
                let head = pre.iter().rev().flat_map(|&v| piece(v));
                Term::sum(tail.into_iter().chain(head))
            };
            let branching = vs.iter().any(|&v| inner_pos(v).len() >= 2);
            let mut blocks = Vec::new();
            if branching {
                for &a in vs {
                    let ps = inner_pos(a);
                    for w in ps.windows(2) {
                        let s = seq(a);
                        let parts = right(s[w[0]])
                            .into_iter()
                            .chain(ext(&s[w[0] + 1..w[1]]))
                            .chain(left(s[w[1]]));
                        if let Some(b) = Term::sum(parts) {
                            blocks.push(b);
                        }
                    }
                }
            }
            let mut solved = Vec::with_capacity(vs.len());
            for &x in vs {
                let mid = (!blocks.is_empty()).then(|| Term::shuffle(blocks.iter().cloned()));
                let t = Term::sum(left(x).into_iter().chain(mid).chain(right(x)));
                solved.push((x, t.ok_or(RegularError::MalformedSystem)?));
            }
            for (x, t) in solved {
                sol[x] = Some(t);
            }
        }
        Ok(sol.into_iter().map(Option::unwrap).collect())
    }

    /// The solution for the first variable.
    pub fn solve(&self) -> Result<Term, RegularError> {
        Ok(self.solve_all()?.swap_remove(0))
    }
}

/// Follow `next` from `x` until a repeat: the non-repeating prefix and the cycle.
fn path(x: usize, next: impl Fn(usize) -> usize) -> (Vec<usize>, Vec<usize>) {
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut walk = Vec::new();
    let mut v = x;
    while !seen.contains_key(&v) {
        seen.insert(v, walk.len());
        walk.push(v);
        v = next(v);
    }
    let start = seen[&v];
    let cyc = walk.split_off(start);
    (walk, cyc)
}

/// Tarjan's algorithm; components come out in reverse topological order.
pub(crate) fn sccs(n: usize, succ: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // iterative DFS: (vertex, successor list, next position)
        let mut frames: Vec<(usize, Vec<usize>, usize)> = Vec::new();
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, succ(root), 0));
        while let Some((v, ss, pos)) = frames.last_mut() {
            let v = *v;
            if *pos < ss.len() {
                let w = ss[*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, succ(w), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some((p, _, _)) = frames.last() {
                    low[*p] = low[*p].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{regex, Alphabet};

    fn solve(src: &str, mode: LabelMode) -> (Term, Vec<String>) {
        let ab = Alphabet::chars("ab");
        let a = regex::parse(&ab, src).unwrap();
        let sys = EquationSystem::from_language(&a, mode).unwrap();
        (sys.solve().unwrap(), ab.names())
    }

    #[test]
    fn ab_star() {
        let (t, names) = solve("ab*", LabelMode::LastLetter);
        assert_eq!(t.show(&names), "(a . (b w))");
        let (t, _) = solve("ab*", LabelMode::Constant);
        // the root has one child, so it collapses onto the a-node
        assert_eq!(t, Term::omega(Term::Const(0)));
    }

    #[test]
    fn singleton() {
        let ab = Alphabet::chars("ab");
        let a = regex::parse(&ab, "a").unwrap();
        let sys = EquationSystem::from_language(&a, LabelMode::LastLetter).unwrap();
        assert_eq!(sys.rhs, vec![Rhs::Label(0)]);
    }

    #[test]
    fn zeta_shape() {
        // a*b descends to b, then ba* ascends
        let (t, names) = solve("a*b|ba*", LabelMode::LastLetter);
        assert_eq!(t.show(&names), "((b w*) . (b . (a w)))");
    }

    #[test]
    fn full_binary_is_dense() {
        let (t, names) = solve("(a|b)*b", LabelMode::LastLetter);
        let s = t.show(&names);
        assert!(s.contains('['), "{s}");
    }

    #[test]
    fn epsilon_rejected() {
        let ab = Alphabet::chars("ab");
        let a = regex::parse(&ab, "a*").unwrap();
        assert!(matches!(
            EquationSystem::from_language(&a, LabelMode::Constant),
            Err(RegularError::EpsilonInLanguage)
        ));
    }
}
