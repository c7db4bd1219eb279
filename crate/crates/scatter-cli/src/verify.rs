use std::path::Path;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use scatter::automata::{deconvolve, Alphabet, Nfa, Word};
use scatter::constructions::sweep::{membership, sweep, translate, translate_tree};
use scatter::constructions::{
    binarize, build_l_a, build_l_m, cmp_lm, cmp_prime, predicted_cmp, predicted_cmp_la, predicted_cmp_lm, Binarization,
    KBundle, KCoord, KPrime, SweepReport,
};
use scatter::minsky::MinskyMachine;
use scatter::tree::{cmp_trees, TreeAutomaton};

use crate::bounds::Bounds;
use crate::construct::{k_bundle, load_wa, Kind, Manifest};
use crate::report::{emit, CmdResult, Fail, Outcome};

pub fn verify(path: &Path, sets: &[String], seed: u64) -> CmdResult {
    let (m, dir) = Manifest::load(path)?;
    let b = m.bounds.with_overrides(sets)?;
    let reports = match m.kind {
        Kind::K => verify_k(&m, &dir, &b)?,
        Kind::L => verify_l(&m, &dir, &b)?,
        Kind::Kprime => verify_kprime(&m, &dir, &b)?,
        Kind::La => verify_la(&m, &dir, &b)?,
        Kind::Lm => verify_lm(&m, &dir, &b, seed)?,
    };
    let mut pass = true;
    for r in &reports {
        pass &= r.pass;
        let mut v = serde_json::to_value(r).expect("serializable");
        v["verdict"] = Value::from(if r.pass { "pass" } else { "fail" });
        if r.members == 0 {
            v["warning"] = Value::from("empty sample, vacuous pass");
        }
        emit(&v);
    }
    emit(&json!({ "check": "summary", "kind": m.kind, "checks": reports.len(), "pass": pass, "seed": seed }));
    Ok(Outcome::from_pass(pass))
}

fn plain(names: &[String]) -> Result<Arc<Alphabet>, Fail> {
    Alphabet::new(names).map(Arc::new).map_err(Fail::invalid)
}

fn load_nfa(m: &Manifest, dir: &Path, key: &str) -> Result<Nfa, Fail> {
    Nfa::from_json(&m.artifact(dir, key)?).map_err(Fail::parse)
}

fn load_tree_automaton(m: &Manifest, dir: &Path) -> Result<TreeAutomaton, Fail> {
    TreeAutomaton::from_json(&m.artifact(dir, "automaton")?).map_err(Fail::parse)
}

fn same(check: &str, detail: &str, ok: bool) -> SweepReport {
    SweepReport {
        check: check.into(),
        bound: detail.into(),
        members: 1,
        pairs: 0,
        pass: ok,
        witness: None,
    }
}

fn render_k(kb: &KBundle, c: &KCoord) -> String {
    format!("{} {:?}", kb.conv.render(&kb.encode(c)), c)
}

/// Split pair words over the artifact alphabet into their two tracks.
fn tracks(art: &Alphabet, words: &[Option<Word>]) -> Vec<Option<(Word, Word)>> {
    words
        .iter()
        .map(|w| {
            let t = deconvolve(art, w.as_ref()?).ok()?;
            let [u, v] = <[Word; 2]>::try_from(t).ok()?;
            Some((u, v))
        })
        .collect()
}

fn pair_sweeps(
    prefix: &str,
    bound: String,
    kb: &KBundle,
    ms: &[KCoord],
    art: &Nfa,
    words: Vec<Option<Word>>,
) -> Result<Vec<SweepReport>, Fail> {
    if art.alphabet().arity() != Some(2) {
        return Err(Fail::invalid("automaton artifact is not over pairs"));
    }
    let tr = tracks(art.alphabet(), &words);
    let idx: Vec<usize> = (0..ms.len()).collect();
    let render = |&i: &usize| render_k(kb, &ms[i]);
    let mem = membership(&format!("{prefix}.membership"), bound.clone(), &idx, |&i| {
        words[i].as_ref().is_some_and(|w| art.accepts(w)) && tr[i].is_some()
    }, render);
    if !mem.pass {
        return Ok(vec![mem]);
    }
    // lex² is lex on the first track, then on the second
    let order = sweep(&format!("{prefix}.order"), bound, &idx, |&i, &j| tr[i].cmp(&tr[j]), |&i, &j| predicted_cmp(&ms[i], &ms[j]), render);
    Ok(vec![mem, order])
}

fn verify_k(m: &Manifest, dir: &Path, b: &Bounds) -> Result<Vec<SweepReport>, Fail> {
    let kb = k_bundle(m.param("p")?, m.param("q")?)?;
    let art = load_nfa(m, dir, "automaton")?;
    let mut out = vec![same("k.artifact", "rebuilt from parameters", art == kb.language)];
    let ms = kb.members_up_to(b.k_len);
    let words = ms.iter().map(|c| translate(&kb.conv, art.alphabet(), &kb.encode(c))).collect();
    out.extend(pair_sweeps("k", format!("k_len={}", b.k_len), &kb, &ms, &art, words)?);
    Ok(out)
}

fn verify_l(m: &Manifest, dir: &Path, b: &Bounds) -> Result<Vec<SweepReport>, Fail> {
    let kb = k_bundle(m.param("p")?, m.param("q")?)?;
    let art = load_nfa(m, dir, "automaton")?;
    let mut out = vec![same("l.artifact", "rebuilt from parameters", art == binarize(&kb).language)];
    // blocks follow the manifest's letter order
    let g = Binarization::new(plain(&m.alphabet)?);
    let ms = kb.members_up_to(b.l_len);
    let words = ms
        .iter()
        .map(|c| {
            let (u, v) = kb.tracks(c);
            let (u, v) = (translate(&kb.sigma, &g.sigma, &u)?, translate(&kb.sigma, &g.sigma, &v)?);
            let w = scatter::automata::convolve2(&g.conv, &g.encode_word(&u), &g.encode_word(&v));
            translate(&g.conv, art.alphabet(), &w)
        })
        .collect();
    out.extend(pair_sweeps("l", format!("l_len={}", b.l_len), &kb, &ms, &art, words)?);
    Ok(out)
}

fn verify_kprime(m: &Manifest, dir: &Path, b: &Bounds) -> Result<Vec<SweepReport>, Fail> {
    let kb = k_bundle(m.param("p")?, m.param("q")?)?;
    let (ap, aq) = (load_nfa(m, dir, "ap")?, load_nfa(m, dir, "aq")?);
    let mut out = vec![same("kprime.artifact", "run automata rebuilt from parameters", ap == kb.ap && aq == kb.aq)];
    let kp = KPrime::new(&kb);
    let order = plain(&m.alphabet)?;
    let bound = format!("kprime_len={}", b.kprime_len);
    let ms = kb.members_up_to(b.kprime_len);
    let idx: Vec<usize> = (0..ms.len()).collect();
    let render = |&i: &usize| render_k(&kb, &ms[i]);
    out.push(membership("kprime.transform", bound.clone(), &idx, |&i| {
        let (u, v) = kb.tracks(&ms[i]);
        kp.accepts(&kp.transform(&u, &v))
    }, render));
    let img: Vec<Word> = ms.iter().map(|c| kp.iso(c)).collect();
    out.push(membership("kprime.iso_membership", bound.clone(), &idx, |&i| kp.accepts(&img[i]), render));
    let ranked: Vec<Option<Word>> = img.iter().map(|w| translate(&kp.sigma, &order, w)).collect();
    if ranked.iter().any(Option::is_none) {
        return Err(Fail::invalid("manifest alphabet misses K′ letters"));
    }
    let ranked: Vec<Word> = ranked.into_iter().flatten().collect();
    out.push(sweep("kprime.order", bound, &idx, |&i, &j| cmp_prime(&ranked[i], &ranked[j]), |&i, &j| predicted_cmp(&ms[i], &ms[j]), render));
    Ok(out)
}

fn verify_la(m: &Manifest, dir: &Path, b: &Bounds) -> Result<Vec<SweepReport>, Fail> {
    let wa = load_wa(&m.artifact(dir, "wa")?)?;
    let la = build_l_a(&wa);
    let art = load_tree_automaton(m, dir)?;
    let mut out = vec![same("la.artifact", "rebuilt from the weighted automaton", art.to_json() == la.automaton.to_json())];
    let bound = format!("la_word={} la_branch={}", b.la_word, b.la_branch);
    let ms = la.members(b.la_word, b.la_branch);
    let trees: Vec<_> = ms.iter().map(|c| translate_tree(&la.alphabet, art.alphabet(), &la.encode(c))).collect();
    let idx: Vec<usize> = (0..ms.len()).collect();
    let render = |&i: &usize| format!("{:?}", ms[i]);
    let mem = membership("la.membership", bound.clone(), &idx, |&i| trees[i].as_ref().is_some_and(|t| art.accepts(t)), render);
    if !mem.pass {
        out.push(mem);
        return Ok(out);
    }
    let trees: Vec<_> = trees.into_iter().flatten().collect();
    out.push(mem);
    out.push(sweep("la.order", bound, &idx, |&i, &j| cmp_trees(&trees[i], &trees[j]), |&i, &j| predicted_cmp_la(&ms[i], &ms[j]), render));
    Ok(out)
}

fn verify_lm(m: &Manifest, dir: &Path, b: &Bounds, seed: u64) -> Result<Vec<SweepReport>, Fail> {
    let machine = MinskyMachine::from_json(&m.artifact(dir, "machine")?).map_err(Fail::parse)?;
    let lm = build_l_m(&machine).map_err(Fail::invalid)?;
    let art = load_tree_automaton(m, dir)?;
    let mut out = vec![same("lm.artifact", "rebuilt from the machine", art.to_json() == lm.automaton.to_json())];
    let all = lm.members(b.lm_m, b.lm_k, b.lm_u, b.lm_branch);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pick = rand::seq::index::sample(&mut rng, all.len(), b.lm_sample.min(all.len())).into_vec();
    pick.sort_unstable();
    let ms: Vec<_> = pick.into_iter().map(|i| all[i].clone()).collect();
    let bound = format!(
        "lm_m={} lm_k={} lm_u={} lm_branch={} lm_sample={} of {} seed={seed}",
        b.lm_m, b.lm_k, b.lm_u, b.lm_branch, ms.len(), all.len()
    );
    let trees: Vec<_> = ms.iter().map(|c| lm.encode(c)).collect();
    let idx: Vec<usize> = (0..ms.len()).collect();
    let render = |&i: &usize| format!("{:?}", ms[i]);
    out.push(membership("lm.membership", bound.clone(), &idx, |&i| {
        translate_tree(&lm.conv, art.alphabet(), &trees[i]).is_some_and(|t| art.accepts(&t))
    }, render));
    let views: Result<Vec<_>, _> = trees.iter().map(|t| lm.split(t)).collect();
    let views = views.map_err(Fail::invalid)?;
    out.push(sweep("lm.order", bound, &idx, |&i, &j| cmp_lm(&views[i], &views[j]), |&i, &j| predicted_cmp_lm(&ms[i], &ms[j]), render));
    Ok(out)
}
