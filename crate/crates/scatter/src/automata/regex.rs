//! A tiny expression syntax for building test automata.
//!
//! Symbols are single characters of the alphabet; `|` is union, postfix `*`
//! and `+` are star and plus, parentheses group, and `()` is the empty word.

use std::sync::Arc;

use super::alphabet::Alphabet;
use super::nfa::Nfa;
use super::AutomataError;

pub fn parse(alphabet: &Arc<Alphabet>, src: &str) -> Result<Nfa, AutomataError> {
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser {
        alphabet,
        chars: &chars,
        pos: 0,
    };
    let a = p.union()?;
    if p.pos != chars.len() {
        return Err(p.error("trailing input"));
    }
    Ok(a)
}

struct Parser<'a> {
    alphabet: &'a Arc<Alphabet>,
    chars: &'a [char],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> AutomataError {
        AutomataError::Format(format!("expression: {what} at {}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn union(&mut self) -> Result<Nfa, AutomataError> {
        let mut a = self.concat()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            a = a.union(&self.concat()?);
        }
        Ok(a)
    }

    fn concat(&mut self) -> Result<Nfa, AutomataError> {
        let mut a = Nfa::epsilon(self.alphabet.clone());
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            a = a.concat(&self.postfix()?);
        }
        Ok(a)
    }

    fn postfix(&mut self) -> Result<Nfa, AutomataError> {
        let mut a = self.atom()?;
        loop {
            match self.peek() {
                Some('*') => a = a.star(),
                Some('+') => a = a.plus(),
                _ => return Ok(a),
            }
            self.pos += 1;
        }
    }

    fn atom(&mut self) -> Result<Nfa, AutomataError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let a = self.union()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(a)
            }
            Some(c) => {
                let s = self
                    .alphabet
                    .lookup(&c.to_string())
                    .ok_or_else(|| self.error(&format!("unknown symbol {c:?}")))?;
                self.pos += 1;
                Ok(Nfa::literal(self.alphabet.clone(), &[s]))
            }
            None => Err(self.error("unexpected end")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_language() {
        let s = Alphabet::chars("01");
        let a = parse(&s, "10+1+0").unwrap();
        assert!(a.accepts(&s.word("1010")));
        assert!(a.accepts(&s.word("100110")));
        assert!(!a.accepts(&s.word("110")));
    }

    #[test]
    fn empty_word_and_union() {
        let s = Alphabet::chars("ab");
        let a = parse(&s, "(aa|bb)*ab").unwrap();
        assert!(a.accepts(&s.word("ab")));
        assert!(a.accepts(&s.word("bbaaab")));
        let e = parse(&s, "()").unwrap();
        assert!(e.accepts(&[]));
        assert!(parse(&s, "(a").is_err());
    }
}
