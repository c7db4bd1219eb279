//! `scatter`: build the reduction automata, verify them against their
//! predicted orders, and query the library. Every record is one JSON line.

mod bounds;
mod construct;
mod query;
mod report;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use bounds::Bounds;
use construct::{Inputs, Kind};
use report::{emit, CmdResult};

/// Default seed for sampled checks.
const SEED: u64 = 0x5ca7;

#[derive(Parser)]
#[command(name = "scatter", version, about = "Automatic linear orders: constructions, checks and queries")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a construction and write its automata plus a manifest.
    Construct {
        kind: Kind,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        q: Option<String>,
        /// Weighted automaton JSON (for `la`).
        #[arg(long)]
        wa: Option<PathBuf>,
        /// Machine JSON, or `builtin:zero|all|none|even|diverge` (for `lm`).
        #[arg(long)]
        machine: Option<String>,
        #[arg(long, short, default_value = "out")]
        out: PathBuf,
        /// Bound override recorded in the manifest, `key=value`.
        #[arg(long = "set")]
        sets: Vec<String>,
    },
    /// Run the predicted-order sweep of a constructed bundle.
    Verify {
        manifest: PathBuf,
        #[arg(long = "set")]
        sets: Vec<String>,
        #[arg(long, default_value_t = SEED)]
        seed: u64,
    },
    /// Compile a regular expression over single-character symbols.
    Nfa {
        #[arg(long)]
        alphabet: String,
        regex: String,
        #[arg(long)]
        dot: bool,
    },
    #[command(subcommand)]
    Order(OrderCmd),
    /// Decide whether (L; ≤lex) is rigid and print the condensation trace.
    Rigid {
        #[arg(long)]
        lex: PathBuf,
    },
    #[command(subcommand)]
    Wa(WaCmd),
    #[command(subcommand)]
    Minsky(MinskyCmd),
}

#[derive(Subcommand)]
enum OrderCmd {
    /// Compare two words; pair words are written `u/v`.
    Cmp {
        #[arg(long, default_value = "lex")]
        kind: String,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        nfa: Option<PathBuf>,
        u: String,
        v: String,
    },
    /// Members up to a length, sorted by the order.
    Sample {
        nfa: PathBuf,
        #[arg(long, default_value = "lex")]
        kind: String,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Decide whether (L; ≤lex) is scattered.
    Scattered { nfa: PathBuf },
    /// Decide whether a pair automaton is a nontrivial automorphism.
    CheckAutomorphism {
        universe: PathBuf,
        relation: PathBuf,
        #[arg(long, default_value = "lex2")]
        kind: String,
    },
}

#[derive(Subcommand)]
enum WaCmd {
    Behavior { wa: PathBuf, word: String },
    /// Compare behaviors on all nonempty words up to `--maxlen`.
    Equiv {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, default_value_t = 8)]
        maxlen: usize,
    },
}

#[derive(Subcommand)]
enum MinskyCmd {
    Run {
        machine: String,
        #[arg(long)]
        input: u64,
        #[arg(long, default_value_t = 10_000)]
        fuel: u64,
    },
}

fn run(cmd: Cmd) -> CmdResult {
    match cmd {
        Cmd::Construct { kind, p, q, wa, machine, out, sets } => {
            let bounds = Bounds::from_env()?.with_overrides(&sets)?;
            construct::construct(kind, &Inputs { p, q, wa, machine }, &out, bounds)
        }
        Cmd::Verify { manifest, sets, seed } => verify::verify(&manifest, &sets, seed),
        Cmd::Nfa { alphabet, regex, dot } => query::nfa_from_regex(&alphabet, &regex, dot),
        Cmd::Order(o) => match o {
            OrderCmd::Cmp { kind, alphabet, nfa, u, v } => {
                query::order_cmp(&kind, alphabet.as_deref(), nfa.as_deref(), &u, &v)
            }
            OrderCmd::Sample { nfa, kind, max_len } => query::order_sample(&nfa, &kind, max_len),
            OrderCmd::Scattered { nfa } => query::order_scattered(&nfa),
            OrderCmd::CheckAutomorphism { universe, relation, kind } => {
                query::order_automorphism(&universe, &relation, &kind)
            }
        },
        Cmd::Rigid { lex } => query::rigid(&lex),
        Cmd::Wa(WaCmd::Behavior { wa, word }) => query::wa_behavior(&wa, &word),
        Cmd::Wa(WaCmd::Equiv { left, right, maxlen }) => query::wa_equiv(&left, &right, maxlen),
        Cmd::Minsky(MinskyCmd::Run { machine, input, fuel }) => query::minsky_run(&machine, input, fuel),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(o) => ExitCode::from(o.code() as u8),
        Err(f) => {
            emit(&f.record());
            eprintln!("scatter: {}: {}", f.reason, f.detail);
            ExitCode::from(2)
        }
    }
}
