//! Two-counter machines. Input goes in counter 1; acceptance means reaching
//! the designated accepting halt.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MinskyError {
    #[error("state {0:?} has no instruction")]
    UndeclaredState(String),
    #[error("counter must be 1 or 2, got {0}")]
    BadCounter(u8),
    #[error("accepting state {0:?} must halt")]
    AcceptingNotHalt(String),
    #[error("machine format: {0}")]
    Format(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Instr {
    Inc { counter: u8, next: String },
    DecOrZero { counter: u8, if_pos: String, if_zero: String },
    Halt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinskyMachine {
    pub initial: String,
    pub accepting: String,
    pub program: BTreeMap<String, Instr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Config {
    pub state: String,
    pub c1: u64,
    pub c2: u64,
    pub steps: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Next(Config),
    Halted(Config),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunOutcome {
    Accepted,
    Rejected,
    FuelExhausted,
}

impl MinskyMachine {
    pub fn new(initial: &str, accepting: &str, program: impl IntoIterator<Item = (&'static str, Instr)>) -> Result<Self, MinskyError> {
        let m = MinskyMachine {
            initial: initial.into(),
            accepting: accepting.into(),
            program: program.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), MinskyError> {
        let declared = |s: &String| {
            if self.program.contains_key(s) {
                Ok(())
            } else {
                Err(MinskyError::UndeclaredState(s.clone()))
            }
        };
        declared(&self.initial)?;
        declared(&self.accepting)?;
        if self.program[&self.accepting] != Instr::Halt {
            return Err(MinskyError::AcceptingNotHalt(self.accepting.clone()));
        }
        for ins in self.program.values() {
            match ins {
                Instr::Inc { counter, next } => {
                    check_counter(*counter)?;
                    declared(next)?;
                }
                Instr::DecOrZero { counter, if_pos, if_zero } => {
                    check_counter(*counter)?;
                    declared(if_pos)?;
                    declared(if_zero)?;
                }
                Instr::Halt => {}
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self, MinskyError> {
        let m: MinskyMachine = serde_json::from_str(s).map_err(|e| MinskyError::Format(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn start(&self, input: u64) -> Config {
        Config { state: self.initial.clone(), c1: input, c2: 0, steps: 0 }
    }

    pub fn step(&self, cfg: &Config) -> Result<Step, MinskyError> {
        let ins = self
            .program
            .get(&cfg.state)
            .ok_or_else(|| MinskyError::UndeclaredState(cfg.state.clone()))?;
        let mut c = cfg.clone();
        c.steps += 1;
        match ins {
            Instr::Halt => return Ok(Step::Halted(cfg.clone())),
            Instr::Inc { counter, next } => {
                *counter_mut(&mut c, *counter) += 1;
                c.state = next.clone();
            }
            Instr::DecOrZero { counter, if_pos, if_zero } => {
                let v = counter_mut(&mut c, *counter);
                if *v == 0 {
                    c.state = if_zero.clone();
                } else {
                    *v -= 1;
                    c.state = if_pos.clone();
                }
            }
        }
        Ok(Step::Next(c))
    }

    /// Run from `(initial, input, 0)` for at most `fuel` instructions.
    pub fn accepts(&self, input: u64, fuel: u64) -> RunOutcome {
        self.run(input, fuel).0
    }

    /// The outcome and the last configuration reached.
    pub fn run(&self, input: u64, fuel: u64) -> (RunOutcome, Config) {
        let mut cfg = self.start(input);
        loop {
            match self.step(&cfg) {
                Ok(Step::Halted(c)) => {
                    let out = if c.state == self.accepting {
                        RunOutcome::Accepted
                    } else {
                        RunOutcome::Rejected
                    };
                    return (out, c);
                }
                Ok(Step::Next(c)) => {
                    if c.steps > fuel {
                        return (RunOutcome::FuelExhausted, cfg);
                    }
                    cfg = c;
                }
                // validated machines never reach undeclared states
                Err(_) => return (RunOutcome::Rejected, cfg),
            }
        }
    }

    /// Accepts every input immediately.
    pub fn all() -> Self {
        MinskyMachine::new("acc", "acc", [("acc", Instr::Halt)]).unwrap()
    }

    /// Rejects every input.
    pub fn none() -> Self {
        MinskyMachine::new("rej", "acc", [("rej", Instr::Halt), ("acc", Instr::Halt)]).unwrap()
    }

    /// Accepts exactly input 0.
    pub fn zero() -> Self {
        MinskyMachine::new(
            "test",
            "acc",
            [
                (
                    "test",
                    Instr::DecOrZero { counter: 1, if_pos: "sink".into(), if_zero: "acc".into() },
                ),
                ("sink", Instr::Halt),
                ("acc", Instr::Halt),
            ],
        )
        .unwrap()
    }

    /// Accepts the even inputs.
    pub fn even() -> Self {
        MinskyMachine::new(
            "e",
            "acc",
            [
                ("e", Instr::DecOrZero { counter: 1, if_pos: "o".into(), if_zero: "acc".into() }),
                ("o", Instr::DecOrZero { counter: 1, if_pos: "e".into(), if_zero: "rej".into() }),
                ("acc", Instr::Halt),
                ("rej", Instr::Halt),
            ],
        )
        .unwrap()
    }

    /// Never halts on any input.
    pub fn diverge() -> Self {
        MinskyMachine::new(
            "loop",
            "acc",
            [
                ("loop", Instr::Inc { counter: 2, next: "loop".into() }),
                ("acc", Instr::Halt),
            ],
        )
        .unwrap()
    }
}

fn check_counter(c: u8) -> Result<(), MinskyError> {
    if c == 1 || c == 2 {
        Ok(())
    } else {
        Err(MinskyError::BadCounter(c))
    }
}

fn counter_mut(c: &mut Config, k: u8) -> &mut u64 {
    if k == 1 {
        &mut c.c1
    } else {
        &mut c.c2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(state: &str, c1: u64, c2: u64) -> Config {
        Config { state: state.into(), c1, c2, steps: 0 }
    }

    #[test]
    fn single_steps() {
        let m = MinskyMachine::new(
            "p",
            "acc",
            [
                ("p", Instr::Inc { counter: 1, next: "q".into() }),
                ("s", Instr::DecOrZero { counter: 1, if_pos: "q".into(), if_zero: "r".into() }),
                ("t", Instr::DecOrZero { counter: 2, if_pos: "q".into(), if_zero: "r".into() }),
                ("q", Instr::Halt),
                ("r", Instr::Halt),
                ("acc", Instr::Halt),
            ],
        )
        .unwrap();
        let Step::Next(c) = m.step(&cfg("p", 0, 0)).unwrap() else { panic!() };
        assert_eq!((c.state.as_str(), c.c1, c.c2), ("q", 1, 0));
        let Step::Next(c) = m.step(&cfg("s", 0, 5)).unwrap() else { panic!() };
        assert_eq!((c.state.as_str(), c.c1, c.c2), ("r", 0, 5));
        let Step::Next(c) = m.step(&cfg("t", 3, 2)).unwrap() else { panic!() };
        assert_eq!((c.state.as_str(), c.c1, c.c2), ("q", 3, 1));
        assert_eq!(m.step(&cfg("zz", 0, 0)), Err(MinskyError::UndeclaredState("zz".into())));
    }

    #[test]
    fn stock_machines() {
        for n in 0..5 {
            assert_eq!(MinskyMachine::all().accepts(n, 10), RunOutcome::Accepted);
            assert_eq!(MinskyMachine::none().accepts(n, 10), RunOutcome::Rejected);
            assert_eq!(MinskyMachine::diverge().accepts(n, 50), RunOutcome::FuelExhausted);
            let even = if n % 2 == 0 { RunOutcome::Accepted } else { RunOutcome::Rejected };
            assert_eq!(MinskyMachine::even().accepts(n, 100), even);
        }
        assert_eq!(MinskyMachine::zero().accepts(0, 10), RunOutcome::Accepted);
        assert_eq!(MinskyMachine::zero().accepts(1, 10), RunOutcome::Rejected);
    }

    #[test]
    fn json_round_trip() {
        let m = MinskyMachine::zero();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(MinskyMachine::from_json(&s).unwrap(), m);
        let bad = r#"{"initial":"a","accepting":"a","program":{"a":{"op":"inc","counter":3,"next":"a"}}}"#;
        assert!(MinskyMachine::from_json(bad).is_err());
    }
}
