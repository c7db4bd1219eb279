use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn scatter(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scatter"))
        .args(args)
        .current_dir(dir)
        .env_remove("SCATTER_BOUNDS_DIR")
        .output()
        .expect("binary runs")
}

fn records(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap_or_else(|e| panic!("{l:?}: {e}")))
        .collect()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn check<'a>(recs: &'a [Value], name: &str) -> &'a Value {
    recs.iter().find(|r| r["check"] == name).unwrap_or_else(|| panic!("no {name} in {recs:?}"))
}

#[test]
fn k_round_trip_passes_and_is_stable() {
    let d = tempfile::tempdir().unwrap();
    let o = scatter(&["construct", "k", "--p", "x", "--q", "2", "-o", "k", "--set", "k_len=10"], d.path());
    assert_eq!(code(&o), 0, "{o:?}");
    let v1 = scatter(&["verify", "k/manifest.json"], d.path());
    assert_eq!(code(&v1), 0);
    let recs = records(&v1);
    let order = check(&recs, "k.order");
    assert_eq!(order["verdict"], "pass");
    assert_eq!(order["bound"], "k_len=10");
    assert!(order["members"].as_u64().unwrap() > 1000);
    let v2 = scatter(&["verify", "k/manifest.json"], d.path());
    assert_eq!(v1.stdout, v2.stdout);
}

#[test]
fn bad_polynomial_is_a_parse_error() {
    let d = tempfile::tempdir().unwrap();
    let o = scatter(&["construct", "k", "--p", "x^", "--q", "2"], d.path());
    assert_eq!(code(&o), 2);
    assert_eq!(records(&o)[0]["error"], "parse");
    let o = scatter(&["construct", "k", "--p", "x"], d.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn corrupted_alphabet_order_is_caught() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&scatter(&["construct", "k", "--p", "x", "--q", "2", "-o", "k", "--set", "k_len=8"], d.path())), 0);
    let path = d.path().join("k/k.json");
    let mut j: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let names = j["alphabet"]["base"].as_array_mut().unwrap();
    let i2 = names.iter().position(|n| n == "2").unwrap();
    let i3 = names.iter().position(|n| n == "3").unwrap();
    names.swap(i2, i3);
    std::fs::write(&path, j.to_string()).unwrap();

    let o = scatter(&["verify", "k/manifest.json"], d.path());
    assert_eq!(code(&o), 1);
    let recs = records(&o);
    // same language, different letter order
    assert_eq!(check(&recs, "k.membership")["verdict"], "pass");
    let order = check(&recs, "k.order");
    assert_eq!(order["verdict"], "fail");
    assert_eq!(order["witness"]["kind"], "pair");
    assert_ne!(order["witness"]["actual"], order["witness"]["predicted"]);
    assert_eq!(recs.last().unwrap()["pass"], false);
}

#[test]
fn empty_sample_passes_with_warning() {
    let d = tempfile::tempdir().unwrap();
    scatter(&["construct", "k", "--p", "x", "--q", "2", "-o", "k"], d.path());
    let o = scatter(&["verify", "k/manifest.json", "--set", "k_len=0"], d.path());
    assert_eq!(code(&o), 0);
    let recs = records(&o);
    let order = check(&recs, "k.order");
    assert_eq!(order["members"], 0);
    assert!(order["warning"].is_string());
}

#[test]
fn missing_artifact_is_reported() {
    let d = tempfile::tempdir().unwrap();
    scatter(&["construct", "k", "--p", "x", "--q", "2", "-o", "k"], d.path());
    std::fs::remove_file(d.path().join("k/k.json")).unwrap();
    let o = scatter(&["verify", "k/manifest.json"], d.path());
    assert_eq!(code(&o), 2);
    assert_eq!(records(&o)[0]["error"], "io");
}

#[test]
fn bounds_come_from_the_environment() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(d.path().join("bounds.json"), r#"{"k_len": 6}"#).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_scatter"))
        .args(["construct", "k", "--p", "x", "--q", "2", "-o", "k"])
        .current_dir(d.path())
        .env("SCATTER_BOUNDS_DIR", d.path())
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let m: Value = serde_json::from_str(&std::fs::read_to_string(d.path().join("k/manifest.json")).unwrap()).unwrap();
    assert_eq!(m["bounds"]["k_len"], 6);
    assert_eq!(m["bounds"]["l_len"], 10);
}

#[test]
fn other_constructions_verify() {
    let d = tempfile::tempdir().unwrap();
    std::fs::write(
        d.path().join("wa.json"),
        r#"{"alphabet":["a","b"],"states":2,"initial":0,"finals":[1],"transitions":[[0,"a",1,1],[1,"a",1,0],[1,"b",1,1]]}"#,
    )
    .unwrap();
    let cases: [&[&str]; 4] = [
        &["construct", "l", "--p", "2x+1", "--q", "x", "-o", "out", "--set", "l_len=7"],
        &["construct", "kprime", "--p", "x", "--q", "2", "-o", "out", "--set", "kprime_len=9"],
        &["construct", "la", "--wa", "wa.json", "-o", "out", "--set", "la_word=3", "--set", "la_branch=2"],
        &["construct", "lm", "--machine", "builtin:zero", "-o", "out", "--set", "lm_sample=150", "--set", "lm_u=1"],
    ];
    for args in cases {
        let o = scatter(args, d.path());
        assert_eq!(code(&o), 0, "{args:?}");
        let v = scatter(&["verify", "out/manifest.json"], d.path());
        assert_eq!(code(&v), 0, "{args:?}: {}", String::from_utf8_lossy(&v.stdout));
        std::fs::remove_dir_all(d.path().join("out")).unwrap();
    }
}

#[test]
fn lm_sample_depends_on_seed_only() {
    let d = tempfile::tempdir().unwrap();
    scatter(&["construct", "lm", "--machine", "builtin:zero", "-o", "lm", "--set", "lm_sample=20", "--set", "lm_u=1"], d.path());
    let a = scatter(&["verify", "lm/manifest.json", "--seed", "7"], d.path());
    let b = scatter(&["verify", "lm/manifest.json", "--seed", "7"], d.path());
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).contains("seed=7"));
}

fn regex_file(dir: &Path, name: &str, alphabet: &str, src: &str) {
    let o = scatter(&["nfa", "--alphabet", alphabet, src], dir);
    assert_eq!(code(&o), 0);
    std::fs::write(dir.join(name), &o.stdout).unwrap();
}

#[test]
fn rigid_and_scattered_queries() {
    let d = tempfile::tempdir().unwrap();
    regex_file(d.path(), "r.json", "01", "10+1+0");
    regex_file(d.path(), "n.json", "ab", "a*b|ba*");
    regex_file(d.path(), "s.json", "ab", "(a|b)*");
    let last = |o: &Output| records(o).last().unwrap().clone();
    assert_eq!(last(&scatter(&["rigid", "--lex", "r.json"], d.path()))["verdict"], "rigid");
    assert_eq!(last(&scatter(&["rigid", "--lex", "n.json"], d.path()))["verdict"], "not rigid");
    assert_eq!(last(&scatter(&["order", "scattered", "r.json"], d.path()))["scattered"], true);
    let s = last(&scatter(&["order", "scattered", "s.json"], d.path()));
    assert_eq!(s["scattered"], false);
    assert!(s["witness"]["cycle_a"].is_string());
}

#[test]
fn order_queries() {
    let d = tempfile::tempdir().unwrap();
    let o = scatter(&["order", "cmp", "--kind", "llex", "--alphabet", "ab", "b", "aa"], d.path());
    assert_eq!(records(&o)[0]["verdict"], "less");
    let o = scatter(&["order", "cmp", "--kind", "pref", "--alphabet", "ab", "ab", "b"], d.path());
    assert_eq!(records(&o)[0]["verdict"], "incomparable");
    let o = scatter(&["order", "cmp", "--kind", "lex2", "--alphabet", "ab", "a/b", "a/ab"], d.path());
    assert_eq!(records(&o)[0]["verdict"], "greater");
    let o = scatter(&["order", "cmp", "--kind", "lex", "--alphabet", "ab", "ac", "a"], d.path());
    assert_eq!(code(&o), 2);

    regex_file(d.path(), "l.json", "ab", "a*b");
    let o = scatter(&["order", "sample", "l.json", "--max-len", "3"], d.path());
    let words: Vec<String> = records(&o).iter().filter_map(|r| r["word"].as_str().map(String::from)).collect();
    assert_eq!(words, ["aab", "ab", "b"]);
}

#[test]
fn automorphism_query() {
    let d = tempfile::tempdir().unwrap();
    // identity on a*b over pairs is trivial
    regex_file(d.path(), "u.json", "ab", "a*b");
    let u = std::fs::read_to_string(d.path().join("u.json")).unwrap();
    let a = scatter::automata::Nfa::from_json(&u).unwrap();
    let id = scatter::orders::diagonal(&a);
    std::fs::write(d.path().join("id.json"), id.to_json()).unwrap();
    let o = scatter(&["order", "check-automorphism", "u.json", "id.json", "--kind", "lex"], d.path());
    assert_eq!(code(&o), 1);
    assert_eq!(records(&o)[0]["verdict"], "trivial");
}

#[test]
fn weighted_and_minsky_queries() {
    let d = tempfile::tempdir().unwrap();
    let wa = r#"{"alphabet":["a","b"],"states":1,"initial":0,"finals":[0],"transitions":[[0,"a",0,1],[0,"b",0,0]]}"#;
    let wb = r#"{"alphabet":["a","b"],"states":1,"initial":0,"finals":[0],"transitions":[[0,"a",0,1],[0,"b",0,1]]}"#;
    std::fs::write(d.path().join("a.json"), wa).unwrap();
    std::fs::write(d.path().join("b.json"), wb).unwrap();
    let o = scatter(&["wa", "behavior", "a.json", "abab"], d.path());
    assert_eq!(records(&o)[0]["value"], 2);
    let o = scatter(&["wa", "equiv", "a.json", "a.json", "--maxlen", "6"], d.path());
    assert_eq!((code(&o), records(&o)[0]["equivalence"].clone()), (0, "equal".into()));
    let o = scatter(&["wa", "equiv", "a.json", "b.json", "--maxlen", "6"], d.path());
    assert_eq!(code(&o), 1);
    assert_eq!(records(&o)[0]["word"], "b");

    let o = scatter(&["minsky", "run", "builtin:even", "--input", "4"], d.path());
    assert_eq!(records(&o)[0]["outcome"], "accepted");
    let o = scatter(&["minsky", "run", "builtin:diverge", "--input", "1", "--fuel", "50"], d.path());
    assert_eq!(records(&o)[0]["outcome"], "fuel-exhausted");
    let o = scatter(&["minsky", "run", "builtin:nope", "--input", "1"], d.path());
    assert_eq!(code(&o), 2);
}
