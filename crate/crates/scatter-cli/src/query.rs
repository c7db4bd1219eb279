use std::path::Path;
use std::sync::Arc;

use serde_json::json;

use scatter::automata::{convolve2, regex, Alphabet, Nfa, Word};
use scatter::orders::{
    cmp_words, dense_witness, sorted_sample, verify_regular_automorphism, AutomorphismVerdict, OrderKind,
};
use scatter::regular::is_rigid_regular_lex;
use scatter::weighted::{bounded_equiv, Equivalence};

use crate::construct::{load_machine, load_wa};
use crate::report::{emit, read, CmdResult, Fail, Outcome};

pub fn load_nfa(path: &Path) -> Result<Nfa, Fail> {
    Nfa::from_json(&read(path)?).map_err(Fail::parse)
}

/// Symbols separated by whitespace, or one character each if there is none.
pub fn parse_word(al: &Alphabet, s: &str) -> Result<Word, Fail> {
    let toks: Vec<String> = if s.chars().any(char::is_whitespace) {
        s.split_whitespace().map(String::from).collect()
    } else {
        s.chars().map(String::from).collect()
    };
    toks.iter()
        .map(|t| al.lookup(t).ok_or_else(|| Fail::parse(format!("{t:?} is not a symbol of {:?}", al.names()))))
        .collect()
}

/// A word over `al`; over a pair alphabet, two tracks separated by `/`.
fn parse_arg(al: &Alphabet, s: &str) -> Result<Word, Fail> {
    match (al.arity(), al.base()) {
        (Some(2), Some(base)) => {
            let (u, v) = s.split_once('/').ok_or_else(|| Fail::parse(format!("expected u/v, got {s:?}")))?;
            Ok(convolve2(al, &parse_word(base, u)?, &parse_word(base, v)?))
        }
        (None, _) => parse_word(al, s),
        _ => Err(Fail::parse("only plain and pair alphabets take word arguments")),
    }
}

fn kind(s: &str) -> Result<OrderKind, Fail> {
    s.parse().map_err(Fail::parse)
}

pub fn nfa_from_regex(alphabet: &str, src: &str, dot: bool) -> CmdResult {
    let a = regex::parse(&Alphabet::chars(alphabet), src).map_err(Fail::parse)?;
    if dot {
        print!("{}", a.to_dot());
    } else {
        println!("{}", a.to_json());
    }
    Ok(Outcome::Pass)
}

pub fn order_cmp(order: &str, alphabet: Option<&str>, nfa: Option<&Path>, u: &str, v: &str) -> CmdResult {
    let kind = kind(order)?;
    let al: Arc<Alphabet> = match (alphabet, nfa) {
        (_, Some(p)) => load_nfa(p)?.alphabet().clone(),
        (Some(chars), None) if kind == OrderKind::Lex2 => Alphabet::conv(&Alphabet::chars(chars), 2),
        (Some(chars), None) => Alphabet::chars(chars),
        (None, None) => return Err(Fail::parse("give --alphabet or --nfa")),
    };
    let (x, y) = (parse_arg(&al, u)?, parse_arg(&al, v)?);
    let verdict = cmp_words(kind, &al, &x, &y).map_err(Fail::invalid)?;
    emit(&json!({ "kind": kind.to_string(), "u": u, "v": v, "verdict": verdict }));
    Ok(Outcome::Pass)
}

pub fn order_sample(path: &Path, order: &str, max_len: usize) -> CmdResult {
    let a = load_nfa(path)?;
    let kind = kind(order)?;
    let al = a.alphabet().clone();
    let cmp = |u: &Word, v: &Word| {
        cmp_words(kind, &al, u, v)
            .ok()
            .and_then(|v| v.ordering())
            .unwrap_or_else(|| u.len().cmp(&v.len()).then(u.cmp(v)))
    };
    if kind == OrderKind::Pref || kind == OrderKind::Trees {
        return Err(Fail::invalid(format!("{kind} is not a linear order on words")));
    }
    let words = sorted_sample(&a, max_len, cmp).map_err(Fail::invalid)?;
    for (rank, w) in words.iter().enumerate() {
        emit(&json!({ "rank": rank, "word": al.render(w) }));
    }
    emit(&json!({ "kind": kind.to_string(), "max_len": max_len, "members": words.len() }));
    Ok(Outcome::Pass)
}

pub fn order_scattered(path: &Path) -> CmdResult {
    let a = load_nfa(path)?;
    let al = a.alphabet();
    let rec = match dense_witness(&a) {
        None => json!({ "scattered": true }),
        Some(w) => json!({
            "scattered": false,
            "witness": {
                "prefix": al.render(&w.prefix),
                "cycle_a": al.render(&w.cycle_a),
                "cycle_b": al.render(&w.cycle_b),
                "suffix": al.render(&w.suffix),
            }
        }),
    };
    emit(&rec);
    Ok(Outcome::Pass)
}

pub fn order_automorphism(universe: &Path, rel: &Path, order: &str) -> CmdResult {
    let (u, r) = (load_nfa(universe)?, load_nfa(rel)?);
    let verdict = verify_regular_automorphism(&u, kind(order)?, &r).map_err(Fail::invalid)?;
    let al = u.alphabet();
    let show = |ws: &[Word]| ws.iter().map(|w| al.render(w)).collect::<Vec<_>>();
    let (rec, ok) = match &verdict {
        AutomorphismVerdict::NontrivialAutomorphism { moved } => {
            (json!({ "verdict": "nontrivial-automorphism", "moved": show(moved) }), true)
        }
        AutomorphismVerdict::Trivial => (json!({ "verdict": "trivial" }), false),
        AutomorphismVerdict::NotAutomorphism { reason, witness } => (
            json!({ "verdict": "not-automorphism", "reason": reason, "witness": show(witness) }),
            false,
        ),
    };
    emit(&rec);
    Ok(Outcome::from_pass(ok))
}

pub fn rigid(path: &Path) -> CmdResult {
    let a = load_nfa(path)?;
    let rep = is_rigid_regular_lex(&a).map_err(Fail::invalid)?;
    for (i, lvl) in rep.levels.iter().enumerate() {
        // every level is labelled by classes of the level before it
        emit(&json!({
            "level": i + 1,
            "term": lvl.term.to_string(),
            "classes": lvl.classes.iter().map(|c| c.show(&[])).collect::<Vec<_>>(),
        }));
    }
    emit(&json!({
        "verdict": if rep.rigid { "rigid" } else { "not rigid" },
        "rigid": rep.rigid,
        "depth": rep.depth,
        "witness": rep.witness.map(|c| c.show(&[])),
    }));
    Ok(Outcome::Pass)
}

pub fn wa_behavior(path: &Path, word: &str) -> CmdResult {
    let a = load_wa(&read(path)?)?;
    let w = parse_word(a.alphabet(), word)?;
    let v = a.behavior(&w).map_err(Fail::invalid)?;
    emit(&json!({ "word": word, "value": v }));
    Ok(Outcome::Pass)
}

pub fn wa_equiv(left: &Path, right: &Path, max_len: usize) -> CmdResult {
    let (a, b) = (load_wa(&read(left)?)?, load_wa(&read(right)?)?);
    if a.alphabet().names() != b.alphabet().names() {
        return Err(Fail::invalid("the automata have different alphabets"));
    }
    match bounded_equiv(&a, &b, max_len) {
        Equivalence::Equal => {
            emit(&json!({ "equivalence": "equal", "max_len": max_len }));
            Ok(Outcome::Pass)
        }
        Equivalence::Counterexample(w) => {
            emit(&json!({
                "equivalence": "counterexample",
                "max_len": max_len,
                "word": a.alphabet().render(&w),
                "left": a.behavior(&w).ok().flatten(),
                "right": b.behavior(&w).ok().flatten(),
            }));
            Ok(Outcome::CheckFailed)
        }
    }
}

pub fn minsky_run(src: &str, input: u64, fuel: u64) -> CmdResult {
    let m = load_machine(src)?;
    let (outcome, cfg) = m.run(input, fuel);
    emit(&json!({ "input": input, "fuel": fuel, "outcome": outcome, "config": cfg }));
    Ok(Outcome::Pass)
}
