//! Thread extraction over the positions of a canonical sequence.
//!
//! Each non-jump position becomes one thread state. Jumps are resolved by
//! walking forward through the sequence; a walk that falls off the end of a
//! finite sequence, hits `#0`, or revisits a jump (a cyclic chain) ends in
//! deadlock.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::syntax::{normalize_shifts, Instruction, InstructionSequence, MAX_JUMP};
use crate::threads::{Action, Body, StateId, ThreadBuilder, ThreadSpec};

/// Where control ends up when it arrives at `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Landing {
    Position(usize),
    Deadlock,
}

fn land(s: &InstructionSequence, start: Option<usize>) -> Landing {
    let mut seen = HashSet::new();
    let mut cur = start;
    while let Some(i) = cur {
        match s.at(i) {
            Instruction::Jump(0) => return Landing::Deadlock,
            Instruction::Jump(l) => {
                if !seen.insert(i) {
                    return Landing::Deadlock;
                }
                cur = s.advance(i, *l as u64);
            }
            _ => return Landing::Position(i),
        }
    }
    Landing::Deadlock
}

/// Thread extraction for jump-shift-free sequences.
pub fn extract(s: &InstructionSequence) -> Result<ThreadSpec> {
    if s.instructions().any(|i| *i == Instruction::Shift) {
        return Err(Error::ShiftPresent);
    }
    let mut b = ThreadBuilder::new();
    let deadlock = b.state("D");
    b.define(deadlock, Body::Deadlock)?;
    let positions: Vec<StateId> = (0..s.len()).map(|i| b.state(&format!("P{i}"))).collect();
    let state = |landing: Landing| match landing {
        Landing::Position(i) => positions[i],
        Landing::Deadlock => deadlock,
    };

    for (i, instr) in s.instructions().enumerate() {
        let next = || state(land(s, s.advance(i, 1)));
        let skip = || state(land(s, s.advance(i, 2)));
        let body = match instr {
            Instruction::Plain(a) => Body::prefix(Action::from(a), next()),
            Instruction::PosTest(a) => Body::post(Action::from(a), next(), skip()),
            Instruction::NegTest(a) => Body::post(Action::from(a), skip(), next()),
            Instruction::Halt => Body::Stop,
            Instruction::Jump(_) => continue,
            Instruction::Shift => unreachable!(),
        };
        b.define(positions[i], body)?;
    }
    // jump positions are never referenced, but every state must have a body
    for (i, instr) in s.instructions().enumerate() {
        if instr.is_jump() {
            b.define(positions[i], Body::Deadlock)?;
        }
    }
    let root = state(land(s, Some(0)));
    Ok(b.build(root)?.renamed("X"))
}

/// Extraction for sequences that may contain jump-shift instructions.
pub fn extract_pgajs(s: &InstructionSequence) -> Result<ThreadSpec> {
    extract(&normalize_shifts(s)?)
}

/// Replaces every jump by the single jump its chain resolves to: chains
/// that reach `#0` or cycle become `#0`; chains that leave a finite sequence
/// become the shortest jump past its end.
pub fn collapse_jump_chains(s: &InstructionSequence) -> Result<InstructionSequence> {
    if s.instructions().any(|i| *i == Instruction::Shift) {
        return Err(Error::ShiftPresent);
    }
    let collapsed: Vec<Instruction> = s
        .instructions()
        .enumerate()
        .map(|(i, instr)| match instr {
            Instruction::Jump(l) if *l > 0 => {
                let first = s.advance(i, *l as u64);
                let offset = match first {
                    None => s.len() - i,
                    Some(_) => match land(s, first) {
                        Landing::Deadlock if is_fall_off(s, first) => s.len() - i,
                        Landing::Deadlock => 0,
                        Landing::Position(t) if t > i => t - i,
                        Landing::Position(t) => t + s.period().len() - i,
                    },
                };
                debug_assert!(offset as u64 <= MAX_JUMP);
                Instruction::Jump(offset as u32)
            }
            other => other.clone(),
        })
        .collect();
    let (prefix, period) = collapsed.split_at(s.prefix().len());
    InstructionSequence::new(prefix.to_vec(), period.to_vec())
}

// Whether the chain starting at `start` leaves the sequence rather than
// reaching #0 or cycling.
fn is_fall_off(s: &InstructionSequence, start: Option<usize>) -> bool {
    let mut seen = HashSet::new();
    let mut cur = start;
    while let Some(i) = cur {
        match s.at(i) {
            Instruction::Jump(l) if *l > 0 && seen.insert(i) => cur = s.advance(i, *l as u64),
            _ => return false,
        }
    }
    true
}

/// Structural congruence: equal after collapsing all jump chains.
pub fn structurally_congruent(a: &InstructionSequence, b: &InstructionSequence) -> Result<bool> {
    Ok(collapse_jump_chains(a)? == collapse_jump_chains(b)?)
}
