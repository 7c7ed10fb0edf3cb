//! Linear recursive specifications back into programs.
//!
//! Every state becomes a block of three instructions inside one repetition,
//! the root's block first:
//!
//! ```text
//! Y ⊴ a ⊵ Z   ->  +a; #(to Y); #(to Z)
//! S           ->  !; !; !
//! D           ->  #0; #0; #0
//! ```
//!
//! A jump at index `i` to the block starting at `t` has offset
//! `(t - i) mod L`, or `L` when that is zero, with `L` the period length.

use crate::error::{Error, Result};
use crate::syntax::shift::expand_jump;
use crate::syntax::{
    transform_to_pgajs0, BasicInstruction, Instruction, InstructionSequence, ProgramTerm,
    RESERVED_FOCI,
};
use crate::threads::{abstract_tau, Action, Body, ThreadSpec};

const BLOCK: usize = 3;

/// Compiles a tau-free spec. The result is the repetition of all blocks,
/// left unminimized so that its size is exactly three instructions per state.
pub fn compile_spec(spec: &ThreadSpec) -> Result<ProgramTerm> {
    compile_spec_with(spec, false)
}

/// As [`compile_spec`]; with `abstract_first` a spec containing tau is
/// abstracted instead of rejected.
pub fn compile_spec_with(spec: &ThreadSpec, abstract_first: bool) -> Result<ProgramTerm> {
    if spec.actions().any(Action::is_tau) {
        if !abstract_first {
            return Err(Error::TauPresent);
        }
        return compile_blocks(&abstract_tau(spec));
    }
    compile_blocks(spec)
}

fn compile_blocks(spec: &ThreadSpec) -> Result<ProgramTerm> {
    let len = BLOCK * spec.len();
    let offset = |i: usize, target: usize| {
        let t = BLOCK * target;
        let off = (t + len - i % len) % len;
        let off = if off == 0 { len } else { off };
        u32::try_from(off).map_err(|_| Error::JumpOverflow(off as u64))
    };
    let mut instrs = Vec::with_capacity(len);
    for (id, body) in spec.states() {
        let start = BLOCK * id.0;
        match body {
            Body::Stop => instrs.extend([Instruction::Halt, Instruction::Halt, Instruction::Halt]),
            Body::Deadlock => instrs.extend([
                Instruction::Jump(0),
                Instruction::Jump(0),
                Instruction::Jump(0),
            ]),
            Body::Post {
                action,
                then,
                otherwise,
            } => {
                instrs.push(Instruction::PosTest(basic_of(action)?));
                instrs.push(Instruction::Jump(offset(start + 1, then.0)?));
                instrs.push(Instruction::Jump(offset(start + 2, otherwise.0)?));
            }
        }
    }
    let body = ProgramTerm::from_instructions(&instrs).expect("a spec has at least one state");
    Ok(ProgramTerm::repeat(body))
}

fn basic_of(action: &Action) -> Result<BasicInstruction> {
    match action {
        Action::Tau => Err(Error::TauPresent),
        Action::Basic { focus, method } => {
            if RESERVED_FOCI.contains(&focus.as_str()) {
                return Err(Error::UncompilableAction(action.to_string()));
            }
            BasicInstruction::new(focus.clone(), method.clone())
                .map_err(|_| Error::UncompilableAction(action.to_string()))
        }
    }
}

/// `term` with every jump `#l` written out as `~; ...; ~; #0` in place.
pub fn expand_jumps(term: &ProgramTerm) -> ProgramTerm {
    term.flat_map_instructions(&mut expand_jump)
}

/// A `#0`-only program whose extraction is bisimilar to `spec`.
pub fn corollary1_pipeline(spec: &ThreadSpec) -> Result<InstructionSequence> {
    transform_to_pgajs0(&compile_spec(spec)?.to_canonical())
}
