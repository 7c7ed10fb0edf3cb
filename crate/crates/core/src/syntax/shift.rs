use super::{Instruction, InstructionSequence, MAX_JUMP};
use crate::error::{Error, Result};

/// Removes every jump-shift instruction: a run of `n` shifts before `#l`
/// becomes `#(l+n)`, a run before any other instruction disappears, and an
/// all-shift tail becomes `(#0)*`.
///
/// Finite sequences end up terminated with `#0`, which does not change
/// their thread; that keeps the operation idempotent.
pub fn normalize_shifts(s: &InstructionSequence) -> Result<InstructionSequence> {
    if s.is_finite() {
        let mut word = s.prefix().to_vec();
        if word.last() == Some(&Instruction::Shift) {
            word.push(Instruction::Jump(0));
        }
        let mut out = absorb_shifts(&word)?;
        if out.last() != Some(&Instruction::Jump(0)) {
            out.push(Instruction::Jump(0));
        }
        return InstructionSequence::finite(out);
    }

    let period = s.period();
    let Some(last_real) = period.iter().rposition(|i| *i != Instruction::Shift) else {
        let mut prefix = s.prefix().to_vec();
        while prefix.last() == Some(&Instruction::Shift) {
            prefix.pop();
        }
        return InstructionSequence::periodic(absorb_shifts(&prefix)?, vec![Instruction::Jump(0)]);
    };

    // (A; T)* = A; (T; A)* with T the trailing shifts, so both words end in
    // an instruction that absorbs the shifts before it.
    let (body, trailing) = period.split_at(last_real + 1);
    let mut prefix = s.prefix().to_vec();
    prefix.extend_from_slice(body);
    let mut cycle = trailing.to_vec();
    cycle.extend_from_slice(body);
    InstructionSequence::periodic(absorb_shifts(&prefix)?, absorb_shifts(&cycle)?)
}

// `word` must not end in a shift.
fn absorb_shifts(word: &[Instruction]) -> Result<Vec<Instruction>> {
    let mut out = Vec::with_capacity(word.len());
    let mut pending: u64 = 0;
    for instr in word {
        match instr {
            Instruction::Shift => pending += 1,
            Instruction::Jump(l) => {
                let offset = *l as u64 + pending;
                if offset > MAX_JUMP {
                    return Err(Error::JumpOverflow(offset));
                }
                out.push(Instruction::Jump(offset as u32));
                pending = 0;
            }
            other => {
                out.push(other.clone());
                pending = 0;
            }
        }
    }
    debug_assert_eq!(pending, 0, "word ends in a shift");
    Ok(out)
}

/// Replaces every `#l` with `l > 0` by `l` shifts followed by `#0`.
pub fn transform_to_pgajs0(s: &InstructionSequence) -> Result<InstructionSequence> {
    if s.instructions().any(|i| *i == Instruction::Shift) {
        return Err(Error::ShiftPresent);
    }
    Ok(s.map_instructions(expand_jump))
}

pub(crate) fn expand_jump(instr: &Instruction) -> Vec<Instruction> {
    match instr {
        Instruction::Jump(l) if *l > 0 => {
            let mut v = vec![Instruction::Shift; *l as usize];
            v.push(Instruction::Jump(0));
            v
        }
        other => vec![other.clone()],
    }
}

/// Whether `#0` is the only jump in `s`.
pub fn is_pgajs0(s: &InstructionSequence) -> bool {
    s.instructions()
        .all(|i| !matches!(i, Instruction::Jump(l) if *l > 0))
}
