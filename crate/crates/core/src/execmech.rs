//! A finite-state execution mechanism for `#0`-only programs.
//!
//! The mechanism never sees the program directly: it asks the program
//! service `pgs` whether the head instruction equals `u` (`hdeq:u`) and
//! drops instructions one at a time (`drop`), and it keeps pending jumps in
//! the counter `cnt`. Running it against both services and abstracting from
//! tau yields the program's extracted thread.

use std::collections::BTreeSet;
use std::fmt;

use crate::altsem::{check_pgajs0, COUNTER_FOCUS};
use crate::error::{Error, Result};
use crate::services::{compose, counter_new, Budget, Reply, Service};
use crate::syntax::{parse_instruction, BasicInstruction, Instruction, InstructionSequence};
use crate::threads::{abstract_tau, Action, Body, StateId, ThreadBuilder, ThreadSpec};

pub const PROGRAM_FOCUS: &str = "pgs";

/// The program service: holds what is left of the program.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProgramService {
    Remaining(InstructionSequence),
    Exhausted,
    Undefined,
}

pub fn pgs_new(p: &InstructionSequence) -> ProgramService {
    ProgramService::Remaining(p.clone())
}

/// Method name asking whether the head instruction is `u`.
pub fn hdeq(u: &Instruction) -> String {
    format!("hdeq:{u}")
}

impl Service for ProgramService {
    fn apply(&self, method: &str) -> (Self, Reply) {
        let blocked = (ProgramService::Undefined, Reply::Blocked);
        if *self == ProgramService::Undefined {
            return blocked;
        }
        if method == "drop" {
            return match self {
                ProgramService::Remaining(p) => (
                    p.drop_head()
                        .map_or(ProgramService::Exhausted, ProgramService::Remaining),
                    Reply::True,
                ),
                _ => (ProgramService::Exhausted, Reply::False),
            };
        }
        let Some(Ok(u)) = method.strip_prefix("hdeq:").map(parse_instruction) else {
            return blocked;
        };
        let reply = match self {
            ProgramService::Remaining(p) if *p.head() == u => Reply::True,
            _ => Reply::False,
        };
        (self.clone(), reply)
    }
}

impl fmt::Display for ProgramService {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProgramService::Remaining(p) => write!(f, "PGS[{p}]"),
            ProgramService::Exhausted => f.write_str("PGS[]"),
            ProgramService::Undefined => f.write_str("PGS_undef"),
        }
    }
}

/// The finite instruction set a mechanism can dispatch on, in dispatch
/// order: `!`, `#0`, `~`, then `a`, `+a`, `-a` for each basic instruction in
/// sorted order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    instructions: Vec<Instruction>,
}

impl Alphabet {
    pub fn new(basics: impl IntoIterator<Item = BasicInstruction>) -> Self {
        let basics: BTreeSet<_> = basics.into_iter().collect();
        let mut instructions = vec![Instruction::Halt, Instruction::Jump(0), Instruction::Shift];
        for a in basics {
            instructions.push(Instruction::Plain(a.clone()));
            instructions.push(Instruction::PosTest(a.clone()));
            instructions.push(Instruction::NegTest(a));
        }
        Alphabet { instructions }
    }

    /// The smallest alphabet covering the basic instructions of `p`.
    pub fn for_program(p: &InstructionSequence) -> Self {
        Self::new(p.instructions().filter_map(|i| i.basic().cloned()))
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, u: &Instruction) -> bool {
        self.instructions.contains(u)
    }
}

fn pgs(method: &str) -> Action {
    Action::basic(PROGRAM_FOCUS, method)
}

fn cnt(method: &str) -> Action {
    Action::basic(COUNTER_FOCUS, method)
}

/// Builds the mechanism thread for `alphabet`. It has exactly
/// `3 * alphabet.len() + 7` states:
///
/// - one dispatch state per instruction (`q{k}` asks `hdeq` for the `k`-th
///   instruction) plus `q_end` for an exhausted program,
/// - two states per basic-instruction form (`cnt.clr`, then the action), one
///   each for `~`, `#0` and `!`,
/// - shared tails: `advance` (drop, back to dispatch), `skip1`/`skip2`
///   (two increments after a failed test), the five skip-mode states, and
///   `D`.
///
/// The count assumes at least one basic instruction; without one the two
/// increment states are unreachable and get pruned, leaving 14 states.
pub fn build_exec_mechanism(alphabet: &Alphabet) -> ThreadSpec {
    let mut b = ThreadBuilder::new();
    let n = alphabet.len();
    let dispatch: Vec<StateId> = (0..n).map(|k| b.state(&format!("q{k}"))).collect();
    let q_end = b.state("q_end");
    let deadlock = b.state("D");
    let advance = b.state("advance");
    let skip1 = b.state("skip1");
    let skip2 = b.state("skip2");
    let s_unit = b.state("s_unit");
    let s_isz = b.state("s_isz");
    let s_rest = b.state("s_rest");
    let s_shift = b.state("s_shift");
    let s_drop = b.state("s_drop");

    let define = |b: &mut ThreadBuilder, id, body| b.define(id, body).expect("fresh state");
    define(&mut b, deadlock, Body::Deadlock);
    define(&mut b, advance, Body::prefix(pgs("drop"), dispatch[0]));
    define(&mut b, skip1, Body::prefix(cnt("inc"), skip2));
    define(&mut b, skip2, Body::prefix(cnt("inc"), s_drop));
    // skip mode counts down once per unit `~*; u` (an exhausted program
    // reads as #0; #0; ...) and drops the rest of a unit it does not land on
    define(&mut b, s_unit, Body::prefix(cnt("dec"), s_isz));
    define(&mut b, s_isz, Body::post(cnt("isz"), dispatch[0], s_rest));
    define(
        &mut b,
        s_rest,
        Body::post(pgs(&hdeq(&Instruction::Shift)), s_shift, s_drop),
    );
    define(&mut b, s_shift, Body::prefix(pgs("drop"), s_rest));
    define(&mut b, s_drop, Body::prefix(pgs("drop"), s_unit));
    define(&mut b, q_end, Body::post(cnt("isz"), deadlock, s_unit));

    for (k, u) in alphabet.instructions().iter().enumerate() {
        let handler = b.state(&format!("h{k}"));
        let fallback = dispatch.get(k + 1).copied().unwrap_or(q_end);
        define(
            &mut b,
            dispatch[k],
            Body::post(pgs(&hdeq(u)), handler, fallback),
        );
        let body = match u {
            Instruction::Plain(a) | Instruction::PosTest(a) | Instruction::NegTest(a) => {
                let act = b.state(&format!("h{k}.act"));
                let (yes, no) = match u {
                    Instruction::Plain(_) => (advance, advance),
                    Instruction::PosTest(_) => (advance, skip1),
                    _ => (skip1, advance),
                };
                define(&mut b, act, Body::post(Action::from(a), yes, no));
                Body::prefix(cnt("clr"), act)
            }
            Instruction::Shift => Body::prefix(cnt("inc"), advance),
            Instruction::Jump(_) => Body::post(cnt("isz"), deadlock, s_drop),
            Instruction::Halt => Body::Stop,
        };
        define(&mut b, handler, body);
    }
    b.build(dispatch[0]).expect("mechanism is closed")
}

/// A mechanism built once for a fixed alphabet.
#[derive(Debug, Clone)]
pub struct ExecMechanism {
    alphabet: Alphabet,
    thread: ThreadSpec,
}

impl ExecMechanism {
    pub fn new(alphabet: Alphabet) -> Self {
        let thread = build_exec_mechanism(&alphabet);
        ExecMechanism { alphabet, thread }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn thread(&self) -> &ThreadSpec {
        &self.thread
    }

    /// `τ((mechanism /pgs PGS_p) /cnt Cnt_0)`.
    pub fn run(&self, p: &InstructionSequence, budget: Budget) -> Result<ThreadSpec> {
        check_pgajs0(p)?;
        if let Some(u) = p.instructions().find(|u| !self.alphabet.contains(u)) {
            return Err(Error::AlphabetMismatch(u.to_string()));
        }
        let with_program = compose(&self.thread, PROGRAM_FOCUS, &pgs_new(p), budget)?;
        let with_counter = compose(&with_program, COUNTER_FOCUS, &counter_new(0), budget)?;
        Ok(abstract_tau(&with_counter).renamed("X"))
    }
}

/// Runs `p` on a mechanism for the program's own alphabet.
pub fn run_exec(p: &InstructionSequence, budget: Budget) -> Result<ThreadSpec> {
    ExecMechanism::new(Alphabet::for_program(p)).run(p, budget)
}

/// The thread family `T_0` used against finite-state mechanisms without a
/// counter: `T_i = T_{i+1} ⊴ a ⊵ T'_{i+1,0}` for `i ≤ n`, `T_{n+1} = S`, and
/// `T'_{i+1,·}` performs `b` exactly `i+1` times and then `c`, cyclically.
/// States are named `T_i` and `Tp_{i+1}_{i'}`.
pub fn theorem3_witness(n: usize) -> ThreadSpec {
    assert!(n >= 1, "witness index must be positive");
    let (a, bb, c) = (
        Action::basic("f", "a"),
        Action::basic("f", "b"),
        Action::basic("f", "c"),
    );
    let mut b = ThreadBuilder::new();
    let t: Vec<StateId> = (0..=n + 1).map(|i| b.state(&format!("T_{i}"))).collect();
    for i in 0..=n {
        let j = i + 1;
        let chain: Vec<StateId> = (0..=j).map(|k| b.state(&format!("Tp_{j}_{k}"))).collect();
        b.define(t[i], Body::post(a.clone(), t[j], chain[0]))
            .unwrap();
        for k in 0..j {
            b.define(chain[k], Body::prefix(bb.clone(), chain[k + 1]))
                .unwrap();
        }
        b.define(chain[j], Body::prefix(c.clone(), chain[0]))
            .unwrap();
    }
    b.define(t[n + 1], Body::Stop).unwrap();
    b.build(t[0]).unwrap()
}
