use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::alphabet::AlphabetSpec;
use super::nfa::Nfa;
use super::AutomataError;

/// Serialized word automaton: symbols by name, states by number.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct NfaJson {
    pub alphabet: AlphabetSpec,
    pub states: Vec<usize>,
    pub initial: usize,
    pub finals: Vec<usize>,
    pub transitions: Vec<(usize, String, usize)>,
}

impl NfaJson {
    pub fn of(a: &Nfa) -> Self {
        let al = a.alphabet();
        NfaJson {
            alphabet: AlphabetSpec::of(al),
            states: (0..a.num_states()).collect(),
            initial: a.initial(),
            finals: a.finals().collect(),
            transitions: a
                .transitions()
                .into_iter()
                .map(|(p, s, q)| (p, al.name(s), q))
                .collect(),
        }
    }

    pub fn build(&self) -> Result<Nfa, AutomataError> {
        let alphabet = self.alphabet.build()?;
        // state ids may be sparse; compact them in listed order
        let mut map = std::collections::HashMap::new();
        for &s in &self.states {
            let len = map.len();
            map.entry(s).or_insert(len);
        }
        let id = |s: usize| map.get(&s).copied().ok_or(AutomataError::UnknownState(s));
        let mut trans = Vec::with_capacity(self.transitions.len());
        for (p, name, q) in &self.transitions {
            let sym = alphabet
                .lookup(name)
                .ok_or_else(|| AutomataError::UnknownSymbol(name.clone()))?;
            trans.push((id(*p)?, sym, id(*q)?));
        }
        let finals = self.finals.iter().map(|&f| id(f)).collect::<Result<Vec<_>, _>>()?;
        Nfa::from_parts(alphabet, map.len().max(1), id(self.initial)?, &finals, &trans)
    }
}

impl Nfa {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&NfaJson::of(self)).expect("serializable")
    }

    pub fn from_json(src: &str) -> Result<Nfa, AutomataError> {
        let j: NfaJson =
            serde_json::from_str(src).map_err(|e| AutomataError::Format(e.to_string()))?;
        j.build()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph nfa {\n  rankdir=LR;\n  start [shape=point];\n");
        for q in 0..self.num_states() {
            let shape = if self.is_final(q) { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  q{q} [shape={shape}];");
        }
        let _ = writeln!(s, "  start -> q{};", self.initial());
        for (p, sym, q) in self.transitions() {
            let label = self.alphabet().name(sym).replace('"', "\\\"");
            let _ = writeln!(s, "  q{p} -> q{q} [label=\"{label}\"];");
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::super::alphabet::Alphabet;
    use super::super::regex;
    use super::*;

    #[test]
    fn json_roundtrip() {
        let s = Alphabet::chars("ab");
        let a = regex::parse(&s, "a*b|ba*").unwrap();
        let back = Nfa::from_json(&a.to_json()).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn conv_json_roundtrip() {
        let s = Alphabet::chars("ab");
        let c = Alphabet::conv(&s, 2);
        let a = Nfa::letters(c.clone(), [0, 3, 5]);
        let j = a.to_json();
        assert!(j.contains("(a,#)") || j.contains("(a,a)"));
        assert_eq!(Nfa::from_json(&j).unwrap(), a);
    }

    #[test]
    fn dot_mentions_every_state() {
        let s = Alphabet::chars("ab");
        let a = regex::parse(&s, "ab").unwrap();
        let d = a.to_dot();
        for q in 0..a.num_states() {
            assert!(d.contains(&format!("q{q} ")));
        }
    }
}
