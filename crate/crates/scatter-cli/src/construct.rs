use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::json;

use scatter::automata::Nfa;
use scatter::constructions::{binarize, build_k, build_l_a, build_l_m, KBundle, KPrime, Polynomial};
use scatter::minsky::MinskyMachine;
use scatter::weighted::{WeightedAutomaton, WeightedJson};

use crate::bounds::Bounds;
use crate::report::{emit, read, write, CmdResult, Fail, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// The pair language K of two polynomials.
    K,
    /// K under the binary block substitution.
    L,
    /// The one-track variant u$v^rev of K.
    Kprime,
    /// The run-tree language of a weighted automaton.
    La,
    /// The tree language of a Minsky machine.
    Lm,
}

pub const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub kind: Kind,
    /// Polynomials as given, or the artifact key of the input file.
    pub params: BTreeMap<String, String>,
    pub bounds: Bounds,
    /// Symbol order of the base alphabet, least first.
    pub alphabet: Vec<String>,
    pub decode: String,
    /// Artifact key to file name, relative to the manifest.
    pub artifacts: BTreeMap<String, String>,
    pub summary: BTreeMap<String, usize>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<(Manifest, PathBuf), Fail> {
        let m: Manifest = serde_json::from_str(&read(path)?).map_err(Fail::parse)?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((m, dir))
    }

    pub fn artifact(&self, dir: &Path, key: &str) -> Result<String, Fail> {
        let name = self
            .artifacts
            .get(key)
            .ok_or_else(|| Fail::invalid(format!("manifest lists no {key:?} artifact")))?;
        read(&dir.join(name))
    }

    pub fn param(&self, key: &str) -> Result<&str, Fail> {
        self.params
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Fail::invalid(format!("manifest lacks parameter {key:?}")))
    }
}

pub struct Inputs {
    pub p: Option<String>,
    pub q: Option<String>,
    pub wa: Option<PathBuf>,
    pub machine: Option<String>,
}

pub fn polys(p: &str, q: &str) -> Result<(Polynomial, Polynomial), Fail> {
    let p0 = Polynomial::parse(p, 1).map_err(Fail::parse)?;
    let q0 = Polynomial::parse(q, 1).map_err(Fail::parse)?;
    let k = p0.k.max(q0.k);
    Ok((Polynomial::parse(p, k).map_err(Fail::parse)?, Polynomial::parse(q, k).map_err(Fail::parse)?))
}

pub fn k_bundle(p: &str, q: &str) -> Result<KBundle, Fail> {
    let (p, q) = polys(p, q)?;
    build_k(&p, &q).map_err(Fail::invalid)
}

/// A machine file, or `builtin:NAME` for one of the bundled machines.
pub fn load_machine(src: &str) -> Result<MinskyMachine, Fail> {
    if let Some(name) = src.strip_prefix("builtin:") {
        return Ok(match name {
            "all" => MinskyMachine::all(),
            "none" => MinskyMachine::none(),
            "zero" => MinskyMachine::zero(),
            "even" => MinskyMachine::even(),
            "diverge" => MinskyMachine::diverge(),
            other => return Err(Fail::parse(format!("unknown builtin machine {other:?}"))),
        });
    }
    MinskyMachine::from_json(&read(Path::new(src))?).map_err(Fail::parse)
}

pub fn load_wa(body: &str) -> Result<WeightedAutomaton, Fail> {
    let j: WeightedJson = serde_json::from_str(body).map_err(Fail::parse)?;
    WeightedAutomaton::from_json(&j).map_err(Fail::parse)
}

fn nfa_summary(s: &mut BTreeMap<String, usize>, key: &str, a: &Nfa) {
    s.insert(format!("{key}_states"), a.num_states());
    s.insert(format!("{key}_transitions"), a.num_transitions());
}

pub fn construct(kind: Kind, inp: &Inputs, out: &Path, bounds: Bounds) -> CmdResult {
    let mut params = BTreeMap::new();
    let mut artifacts = BTreeMap::new();
    let mut summary = BTreeMap::new();
    let mut files: Vec<(String, String, String)> = Vec::new();
    let mut put = |key: &str, file: &str, body: String| {
        artifacts.insert(key.to_string(), file.to_string());
        files.push((key.to_string(), file.to_string(), body));
    };
    let need = |x: &Option<String>, flag: &str| x.clone().ok_or_else(|| Fail::parse(format!("{kind:?} needs --{flag}")));

    let (alphabet, decode) = match kind {
        Kind::K | Kind::L | Kind::Kprime => {
            let (p, q) = (need(&inp.p, "p")?, need(&inp.q, "q")?);
            let kb = k_bundle(&p, &q)?;
            params.insert("p".into(), p);
            params.insert("q".into(), q);
            put("ap", "ap.json", kb.ap.to_json());
            put("aq", "aq.json", kb.aq.to_json());
            match kind {
                Kind::K => {
                    nfa_summary(&mut summary, "k", &kb.language);
                    put("automaton", "k.json", kb.language.to_json());
                    (kb.sigma.names(), "u⊗v: (a*¢)^k with a block b^m(1-b) on track one; a run of A_p (b=0) or A_q (b=1), or 23^i2^j3, on track two")
                }
                Kind::L => {
                    let bb = binarize(&kb);
                    nfa_summary(&mut summary, "l", &bb.language);
                    summary.insert("block_len".into(), bb.g.ell());
                    put("automaton", "l.json", bb.language.to_json());
                    (kb.sigma.names(), "blocks of 1^(s+1)0^(ℓ-s-1) per K letter s on each track; alphabet lists the K letters in block order")
                }
                _ => {
                    let kp = KPrime::new(&kb);
                    summary.insert("sigma".into(), kp.sigma.len());
                    (kp.sigma.names(), "u$v^rev for u⊗v in K, with 2 and 3 swapped in the order; recognized by a pushdown automaton over A_p and A_q")
                }
            }
        }
        Kind::La => {
            let path = inp.wa.clone().ok_or_else(|| Fail::parse("la needs --wa"))?;
            let body = read(&path)?;
            let wa = load_wa(&body)?;
            let la = build_l_a(&wa);
            params.insert("wa".into(), "wa".into());
            summary.insert("states".into(), la.automaton.num_states());
            summary.insert("transitions".into(), la.automaton.transitions().len());
            put("wa", "wa.json", body);
            put("automaton", "la.json", la.automaton.to_json());
            (la.alphabet.names(), "run trees: word on 0^i, n+1 chain under 11, side chains at weight-1 positions; or w$ followed by a delimiter tree t_(i,j)")
        }
        Kind::Lm => {
            let src = need(&inp.machine, "machine")?;
            let m = load_machine(&src)?;
            let lm = build_l_m(&m).map_err(Fail::invalid)?;
            params.insert("machine".into(), "machine".into());
            summary.insert("states".into(), lm.automaton.num_states());
            summary.insert("transitions".into(), lm.automaton.transitions().len());
            put("machine", "machine.json", serde_json::to_string(&m).expect("serializable"));
            put("automaton", "lm.json", lm.automaton.to_json());
            (lm.base.names(), "t⊗$^k⊗$□(a□)^m with t an L_A tree of A_M (side A) or of B_M (side B)")
        }
    };

    std::fs::create_dir_all(out).map_err(|e| Fail::io(out, e))?;
    for (_, file, body) in &files {
        write(&out.join(file), body)?;
    }
    let manifest = Manifest { kind, params, bounds, alphabet, decode: decode.to_string(), artifacts, summary };
    let mpath = out.join(MANIFEST);
    write(&mpath, &serde_json::to_string_pretty(&manifest).expect("serializable"))?;
    emit(&json!({
        "constructed": kind,
        "manifest": mpath.display().to_string(),
        "artifacts": manifest.artifacts,
        "summary": manifest.summary,
    }));
    Ok(Outcome::Pass)
}
