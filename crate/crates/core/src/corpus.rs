//! Seeded random corpora of programs and thread specs.
//!
//! Case `i` of a corpus with seed `s` draws from ChaCha8 seeded with `s` on
//! stream `i`, so any single case can be regenerated on its own.
//!
//! Programs: length uniform in `1..=max_len`; each instruction kind uniform
//! over the kinds of the chosen fragment; basic instructions uniform over
//! `f.a`, `f.b`; jump offsets uniform in `0..=max_len + 2`; with probability
//! 1/2 the sequence is periodic, with a period of uniform length in
//! `1..=len` and the rest as prefix.
//!
//! Specs: `1..=max_states` states, each `S` or `D` with probability 1/6 and
//! otherwise a post-conditional on `f.a` or `f.b` with uniform successors;
//! unreachable states are dropped.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{BasicInstruction, Instruction, InstructionSequence};
use crate::threads::{Action, Body, StateId, ThreadBuilder, ThreadSpec};

/// Which instructions a generated program may contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fragment {
    /// plain, `+`, `-`, `#l`, `!`
    ShiftFree,
    /// plain, `+`, `-`, `#0`, `!`, `~`
    Pgajs0,
    /// all six kinds, arbitrary jumps
    Full,
}

pub fn case_rng(seed: u64, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case as u64);
    rng
}

fn basics() -> [BasicInstruction; 2] {
    [
        BasicInstruction::new("f", "a").unwrap(),
        BasicInstruction::new("f", "b").unwrap(),
    ]
}

fn random_instruction(rng: &mut impl Rng, fragment: Fragment, max_len: usize) -> Instruction {
    let kinds = match fragment {
        Fragment::ShiftFree => 5,
        Fragment::Pgajs0 | Fragment::Full => 6,
    };
    let a = basics().choose(rng).unwrap().clone();
    match rng.gen_range(0..kinds) {
        0 => Instruction::Plain(a),
        1 => Instruction::PosTest(a),
        2 => Instruction::NegTest(a),
        3 if fragment == Fragment::Pgajs0 => Instruction::Jump(0),
        3 => Instruction::Jump(rng.gen_range(0..=max_len as u32 + 2)),
        4 => Instruction::Halt,
        _ => Instruction::Shift,
    }
}

pub fn random_program(
    rng: &mut impl Rng,
    fragment: Fragment,
    max_len: usize,
) -> InstructionSequence {
    assert!(max_len > 0, "programs have at least one instruction");
    let len = rng.gen_range(1..=max_len);
    let mut instrs: Vec<Instruction> = (0..len)
        .map(|_| random_instruction(rng, fragment, max_len))
        .collect();
    if rng.gen_bool(0.5) {
        let period = instrs.split_off(len - rng.gen_range(1..=len));
        InstructionSequence::periodic(instrs, period).expect("nonempty period")
    } else {
        InstructionSequence::finite(instrs).expect("nonempty program")
    }
}

pub fn program_corpus(
    fragment: Fragment,
    count: usize,
    seed: u64,
    max_len: usize,
) -> Vec<InstructionSequence> {
    (0..count)
        .map(|i| random_program(&mut case_rng(seed, i), fragment, max_len))
        .collect()
}

fn random_body(rng: &mut impl Rng, states: &[StateId]) -> Body {
    match rng.gen_range(0..6) {
        0 => Body::Stop,
        1 => Body::Deadlock,
        _ => {
            let a = basics().choose(rng).unwrap().clone();
            Body::post(
                Action::from(&a),
                *states.choose(rng).unwrap(),
                *states.choose(rng).unwrap(),
            )
        }
    }
}

pub fn random_spec(rng: &mut impl Rng, max_states: usize) -> ThreadSpec {
    assert!(max_states > 0, "specs have at least one state");
    let n = rng.gen_range(1..=max_states);
    let mut b = ThreadBuilder::new();
    let states: Vec<StateId> = (0..n).map(|i| b.state(&format!("X{i}"))).collect();
    for &id in &states {
        let body = random_body(rng, &states);
        b.define(id, body).unwrap();
    }
    b.build(states[0]).unwrap()
}

pub fn spec_corpus(count: usize, seed: u64, max_states: usize) -> Vec<ThreadSpec> {
    (0..count)
        .map(|i| random_spec(&mut case_rng(seed, i), max_states))
        .collect()
}

fn retarget(body: &Body, mut f: impl FnMut(StateId) -> StateId) -> Body {
    match body {
        Body::Post {
            action,
            then,
            otherwise,
        } => Body::post(action.clone(), f(*then), f(*otherwise)),
        other => other.clone(),
    }
}

/// Two copies of `spec` with every transition sent to a randomly chosen
/// copy of its target: bisimilar to `spec`, usually not isomorphic.
pub fn unfold_randomly(rng: &mut impl Rng, spec: &ThreadSpec) -> ThreadSpec {
    let mut b = ThreadBuilder::new();
    let copies: [Vec<StateId>; 2] = [0, 1].map(|c| {
        spec.states()
            .map(|(id, _)| b.state(&format!("{}_{c}", spec.name(id))))
            .collect()
    });
    for (id, body) in spec.states() {
        for copy in &copies {
            let body = retarget(body, |t| copies[rng.gen_range(0..2)][t.0]);
            b.define(copy[id.0], body).unwrap();
        }
    }
    b.build(copies[rng.gen_range(0..2)][spec.root().0]).unwrap()
}

/// A pair of specs: half the time `a` and a random unfolding of it, a
/// quarter of the time `a` with one state's body replaced, otherwise two
/// independent specs.
pub fn random_spec_pair(rng: &mut impl Rng, max_states: usize) -> (ThreadSpec, ThreadSpec) {
    let a = random_spec(rng, max_states);
    let b = match rng.gen_range(0..4) {
        0 | 1 => unfold_randomly(rng, &a),
        2 => {
            let victim = rng.gen_range(0..a.len());
            let mut b = ThreadBuilder::new();
            let ids: Vec<StateId> = a.states().map(|(id, _)| b.state(a.name(id))).collect();
            for (id, body) in a.states() {
                let body = if id.0 == victim {
                    random_body(rng, &ids)
                } else {
                    body.clone()
                };
                b.define(ids[id.0], body).unwrap();
            }
            b.build(ids[a.root().0]).unwrap()
        }
        _ => random_spec(rng, max_states),
    };
    (a, b)
}

pub fn spec_pair_corpus(
    count: usize,
    seed: u64,
    max_states: usize,
) -> Vec<(ThreadSpec, ThreadSpec)> {
    (0..count)
        .map(|i| random_spec_pair(&mut case_rng(seed, i), max_states))
        .collect()
}
