use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::automata::{Alphabet, Sym, Word};

use super::TreeError;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub label: Sym,
    pub kids: [Option<Box<Node>>; 2],
}

impl Node {
    pub fn leaf(label: Sym) -> Self {
        Node {
            label,
            kids: [None, None],
        }
    }

    pub fn left(&self) -> Option<&Node> {
        self.kids[0].as_deref()
    }

    pub fn right(&self) -> Option<&Node> {
        self.kids[1].as_deref()
    }
}

/// A finite binary tree: a partial map from `{0,1}*` to symbols whose domain
/// is prefix closed and left-sibling closed. The empty tree is allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Tree {
    pub root: Option<Box<Node>>,
}

/// A path in `{0,1}*`, written as a string of `'0'` and `'1'`.
pub type Path = String;

impl Tree {
    pub fn empty() -> Self {
        Tree { root: None }
    }

    pub fn from_node(n: Node) -> Self {
        Tree {
            root: Some(Box::new(n)),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    pub fn root(&self) -> Option<&Node> {
        self.root.as_deref()
    }

    /// Build a tree from explicit `(path, label)` entries, checking both closure conditions.
    pub fn from_entries<I, P>(entries: I) -> Result<Tree, TreeError>
    where
        I: IntoIterator<Item = (P, Sym)>,
        P: AsRef<str>,
    {
        let mut map: BTreeMap<Path, Sym> = BTreeMap::new();
        for (p, s) in entries {
            let p = p.as_ref();
            if !p.chars().all(|c| c == '0' || c == '1') {
                return Err(TreeError::BadPath(p.to_string()));
            }
            map.insert(p.to_string(), s);
        }
        for p in map.keys() {
            if let Some(parent) = p.get(..p.len().saturating_sub(1)) {
                if !p.is_empty() && !map.contains_key(parent) {
                    return Err(TreeError::PrefixViolation(p.clone()));
                }
            }
            if let Some(stem) = p.strip_suffix('1') {
                if !map.contains_key(&format!("{stem}0")) {
                    return Err(TreeError::LeftSiblingViolation(p.clone()));
                }
            }
        }
        fn build(map: &BTreeMap<Path, Sym>, p: &mut String) -> Option<Box<Node>> {
            let label = *map.get(p.as_str())?;
            p.push('0');
            let l = build(map, p);
            p.pop();
            p.push('1');
            let r = build(map, p);
            p.pop();
            Some(Box::new(Node {
                label,
                kids: [l, r],
            }))
        }
        Ok(Tree {
            root: build(&map, &mut String::new()),
        })
    }

    /// Sorted `(path, label)` pairs.
    pub fn entries(&self) -> Vec<(Path, Sym)> {
        let mut out = Vec::new();
        fn walk(n: &Node, p: &mut String, out: &mut Vec<(Path, Sym)>) {
            out.push((p.clone(), n.label));
            for (i, k) in n.kids.iter().enumerate() {
                if let Some(k) = k {
                    p.push(if i == 0 { '0' } else { '1' });
                    walk(k, p, out);
                    p.pop();
                }
            }
        }
        if let Some(r) = self.root() {
            walk(r, &mut String::new(), &mut out);
        }
        out.sort();
        out
    }

    pub fn domain(&self) -> Vec<Path> {
        self.entries().into_iter().map(|(p, _)| p).collect()
    }

    pub fn size(&self) -> usize {
        fn count(n: &Node) -> usize {
            1 + n.kids.iter().flatten().map(|k| count(k)).sum::<usize>()
        }
        self.root().map_or(0, count)
    }

    pub fn get(&self, path: &str) -> Option<Sym> {
        self.node_at(path).map(|n| n.label)
    }

    pub fn node_at(&self, path: &str) -> Option<&Node> {
        let mut cur = self.root()?;
        for c in path.chars() {
            cur = match c {
                '0' => cur.left()?,
                '1' => cur.right()?,
                _ => return None,
            };
        }
        Some(cur)
    }

    /// The subtree rooted at `path`, empty if `path` is not in the domain.
    pub fn subtree(&self, path: &str) -> Tree {
        self.node_at(path)
            .map_or_else(Tree::empty, |n| Tree::from_node(n.clone()))
    }

    /// The labels along `0*`.
    pub fn main_branch(&self) -> Word {
        main_branch(self.root())
    }

    /// Side trees hanging off the main branch at `0^i 1`.
    pub fn side_trees(&self) -> Vec<Tree> {
        let mut out = Vec::new();
        let mut cur = self.root();
        while let Some(n) = cur {
            out.push(n.right().map_or_else(Tree::empty, |r| Tree::from_node(r.clone())));
            cur = n.left();
        }
        out
    }

    /// A word as a tree with domain inside `0*`.
    pub fn word(w: &[Sym]) -> Tree {
        let mut root: Option<Box<Node>> = None;
        for &s in w.iter().rev() {
            root = Some(Box::new(Node {
                label: s,
                kids: [root, None],
            }));
        }
        Tree { root }
    }

    pub fn is_word(&self) -> bool {
        let mut cur = self.root();
        while let Some(n) = cur {
            if n.right().is_some() {
                return false;
            }
            cur = n.left();
        }
        true
    }

    /// Relabel every node.
    pub fn map_labels(&self, f: &impl Fn(Sym) -> Sym) -> Tree {
        fn go(n: &Node, f: &impl Fn(Sym) -> Sym) -> Box<Node> {
            Box::new(Node {
                label: f(n.label),
                kids: [
                    n.left().map(|k| go(k, f)),
                    n.right().map(|k| go(k, f)),
                ],
            })
        }
        Tree {
            root: self.root().map(|r| go(r, f)),
        }
    }

    pub fn to_dot(&self, alphabet: &Alphabet) -> String {
        let mut s = String::from("digraph tree {\n  node [shape=circle];\n");
        for (p, sym) in self.entries() {
            let id = if p.is_empty() { "e".to_string() } else { p.clone() };
            let _ = writeln!(s, "  n{id} [label=\"{}\"];", alphabet.name(sym).replace('"', "\\\""));
            if !p.is_empty() {
                let parent = &p[..p.len() - 1];
                let pid = if parent.is_empty() { "e" } else { parent };
                let port = if p.ends_with('0') { "sw" } else { "se" };
                let _ = writeln!(s, "  n{pid}:{port} -> n{id};");
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        let parts: Vec<String> = self
            .entries()
            .into_iter()
            .map(|(p, s)| format!("{}:{}", if p.is_empty() { "ε" } else { &p }, alphabet.name(s)))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

fn main_branch(mut cur: Option<&Node>) -> Word {
    let mut w = Vec::new();
    while let Some(n) = cur {
        w.push(n.label);
        cur = n.left();
    }
    w
}

/// `s + t`: a new root labelled `root`, with `s` below `0` and `t` below `1`.
pub fn add_root(s: &Tree, t: &Tree, root: Sym) -> Result<Tree, TreeError> {
    if s.is_empty() && !t.is_empty() {
        return Err(TreeError::ClosureViolation);
    }
    Ok(Tree::from_node(Node {
        label: root,
        kids: [s.root.clone(), t.root.clone()],
    }))
}

/// Superimpose trees; missing positions become padding.
pub fn convolve_trees(conv: &Alphabet, ts: &[&Tree]) -> Result<Tree, TreeError> {
    let arity = conv.arity().ok_or(TreeError::NotConvolution)?;
    if arity != ts.len() {
        return Err(TreeError::ArityMismatch);
    }
    fn go(conv: &Alphabet, nodes: &[Option<&Node>]) -> Option<Box<Node>> {
        if nodes.iter().all(Option::is_none) {
            return None;
        }
        let tuple: Vec<Option<Sym>> = nodes.iter().map(|n| n.map(|n| n.label)).collect();
        let label = conv.encode(&tuple).expect("symbols in base alphabet");
        let kid = |i: usize| -> Vec<Option<&Node>> {
            nodes
                .iter()
                .map(|n| n.and_then(|n| n.kids[i].as_deref()))
                .collect()
        };
        Some(Box::new(Node {
            label,
            kids: [go(conv, &kid(0)), go(conv, &kid(1))],
        }))
    }
    let roots: Vec<Option<&Node>> = ts.iter().map(|t| t.root()).collect();
    Ok(Tree {
        root: go(conv, &roots),
    })
}

/// Split a convolution tree back into its components.
pub fn deconvolve_tree(conv: &Alphabet, t: &Tree) -> Result<Vec<Tree>, TreeError> {
    let arity = conv.arity().ok_or(TreeError::NotConvolution)?;
    let mut per: Vec<Vec<(Path, Sym)>> = vec![Vec::new(); arity];
    for (p, s) in t.entries() {
        for (i, c) in conv.decode(s).into_iter().enumerate() {
            if let Some(c) = c {
                per[i].push((p.clone(), c));
            }
        }
    }
    per.into_iter().map(Tree::from_entries).collect()
}

fn llex(u: &[Sym], v: &[Sym]) -> Ordering {
    u.len().cmp(&v.len()).then_with(|| u.cmp(v))
}

/// The tree order: empty tree least, then main branches by length-lex,
/// then the side trees from the root downwards.
pub fn cmp_trees(s: &Tree, t: &Tree) -> Ordering {
    cmp_nodes(s.root(), t.root())
}

pub fn cmp_nodes(s: Option<&Node>, t: Option<&Node>) -> Ordering {
    match (s, t) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(_), Some(_)) => {
            let o = llex(&main_branch(s), &main_branch(t));
            if o != Ordering::Equal {
                return o;
            }
            let (mut a, mut b) = (s, t);
            while let (Some(x), Some(y)) = (a, b) {
                let o = cmp_nodes(x.right(), y.right());
                if o != Ordering::Equal {
                    return o;
                }
                a = x.left();
                b = y.left();
            }
            Ordering::Equal
        }
    }
}

/// `t_{i,j}` over the single label `label`.
pub fn delimiter_tree(i: usize, j: usize, label: Sym) -> Tree {
    // t_{0,j}: spine of three nodes with a chain of j+1 nodes at position 1
    let mut t = Node {
        label,
        kids: [
            Some(Box::new(Node {
                label,
                kids: [Some(Box::new(Node::leaf(label))), None],
            })),
            Tree::word(&vec![label; j + 1]).root,
        ],
    };
    for _ in 0..i {
        t = Node {
            label,
            kids: [
                Some(Box::new(Node {
                    label,
                    kids: [Some(Box::new(Node::leaf(label))), Some(Box::new(t))],
                })),
                None,
            ],
        };
    }
    Tree::from_node(t)
}

/// Inverse of [`delimiter_tree`] on its image.
pub fn delimiter_coords(t: &Tree) -> Option<(usize, usize)> {
    let mut i = 0;
    let mut cur = t.root()?;
    loop {
        let zero = cur.left()?;
        let zz = zero.left()?;
        if zz.left().is_some() || zz.right().is_some() {
            return None;
        }
        match (zero.right(), cur.right()) {
            (Some(inner), None) => {
                i += 1;
                cur = inner;
            }
            (None, Some(chain)) => {
                let sub = Tree::from_node(chain.clone());
                if !sub.is_word() {
                    return None;
                }
                let j = sub.size() - 1;
                return Some((i, j));
            }
            _ => return None,
        }
    }
}
