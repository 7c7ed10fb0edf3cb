//! Instructions, program terms and canonical instruction sequences.

mod parser;
mod sequence;
pub(crate) mod shift;

use std::fmt;

use crate::error::{Error, Result};

pub use parser::{parse_instruction, parse_program};
pub use sequence::InstructionSequence;
pub use shift::{is_pgajs0, normalize_shifts, transform_to_pgajs0};

/// Foci that name services and therefore never appear in basic instructions.
pub const RESERVED_FOCI: [&str; 2] = ["cnt", "pgs"];

/// Largest jump offset the implementation accepts.
pub const MAX_JUMP: u64 = u32::MAX as u64;

/// A basic instruction `f.m`: a request to the service named `f` to process `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasicInstruction {
    focus: String,
    method: String,
}

impl BasicInstruction {
    pub fn new(focus: impl Into<String>, method: impl Into<String>) -> Result<Self> {
        let focus = focus.into();
        let method = method.into();
        if RESERVED_FOCI.contains(&focus.as_str()) {
            return Err(Error::ReservedFocus(focus));
        }
        if !is_ident(&focus) || !is_ident(&method) {
            return Err(Error::Syntax {
                line: 1,
                column: 1,
                message: format!("`{focus}.{method}` is not a valid basic instruction"),
            });
        }
        Ok(BasicInstruction { focus, method })
    }

    pub fn focus(&self) -> &str {
        &self.focus
    }

    pub fn method(&self) -> &str {
        &self.method
    }
}

impl fmt::Display for BasicInstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.focus, self.method)
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A primitive instruction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Instruction {
    /// `f.m`
    Plain(BasicInstruction),
    /// `+f.m`
    PosTest(BasicInstruction),
    /// `-f.m`
    NegTest(BasicInstruction),
    /// `#l`
    Jump(u32),
    /// `!`
    Halt,
    /// `~`, the jump-shift instruction.
    Shift,
}

impl Instruction {
    pub fn basic(&self) -> Option<&BasicInstruction> {
        match self {
            Instruction::Plain(a) | Instruction::PosTest(a) | Instruction::NegTest(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_jump(&self) -> bool {
        matches!(self, Instruction::Jump(_))
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Plain(a) => write!(f, "{a}"),
            Instruction::PosTest(a) => write!(f, "+{a}"),
            Instruction::NegTest(a) => write!(f, "-{a}"),
            Instruction::Jump(l) => write!(f, "#{l}"),
            Instruction::Halt => f.write_str("!"),
            Instruction::Shift => f.write_str("~"),
        }
    }
}

/// Abstract syntax of a program: instruction constants combined with
/// concatenation and repetition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProgramTerm {
    Instr(Instruction),
    Concat(Box<ProgramTerm>, Box<ProgramTerm>),
    Repeat(Box<ProgramTerm>),
}

impl ProgramTerm {
    pub fn concat(left: ProgramTerm, right: ProgramTerm) -> Self {
        ProgramTerm::Concat(Box::new(left), Box::new(right))
    }

    pub fn repeat(body: ProgramTerm) -> Self {
        ProgramTerm::Repeat(Box::new(body))
    }

    /// Right-nested concatenation of `instrs`, the shape the parser produces.
    /// Returns `None` for an empty slice.
    pub fn from_instructions(instrs: &[Instruction]) -> Option<Self> {
        let (last, init) = instrs.split_last()?;
        let mut term = ProgramTerm::Instr(last.clone());
        for i in init.iter().rev() {
            term = ProgramTerm::concat(ProgramTerm::Instr(i.clone()), term);
        }
        Some(term)
    }

    /// Applies `f` to every instruction constant, expanding each into a
    /// nonempty list of instructions.
    pub fn flat_map_instructions<F>(&self, f: &mut F) -> ProgramTerm
    where
        F: FnMut(&Instruction) -> Vec<Instruction>,
    {
        match self {
            ProgramTerm::Instr(i) => {
                let expanded = f(i);
                ProgramTerm::from_instructions(&expanded)
                    .expect("instruction expansion must be nonempty")
            }
            ProgramTerm::Concat(l, r) => {
                ProgramTerm::concat(l.flat_map_instructions(f), r.flat_map_instructions(f))
            }
            ProgramTerm::Repeat(body) => ProgramTerm::repeat(body.flat_map_instructions(f)),
        }
    }

    /// The canonical sequence this term denotes.
    pub fn to_canonical(&self) -> InstructionSequence {
        let (prefix, period) = self.unfold();
        InstructionSequence::new(prefix, period).expect("program terms are nonempty")
    }

    // (prefix, period) before minimization. An inner repetition swallows
    // everything after it, and a repeated infinite term is itself.
    fn unfold(&self) -> (Vec<Instruction>, Vec<Instruction>) {
        match self {
            ProgramTerm::Instr(i) => (vec![i.clone()], Vec::new()),
            ProgramTerm::Concat(l, r) => {
                let (mut prefix, period) = l.unfold();
                if !period.is_empty() {
                    return (prefix, period);
                }
                let (rp, rq) = r.unfold();
                prefix.extend(rp);
                (prefix, rq)
            }
            ProgramTerm::Repeat(body) => {
                let (prefix, period) = body.unfold();
                if period.is_empty() {
                    (Vec::new(), prefix)
                } else {
                    (prefix, period)
                }
            }
        }
    }

    fn fmt_term(&self, out: &mut String) {
        match self {
            ProgramTerm::Instr(i) => out.push_str(&i.to_string()),
            ProgramTerm::Concat(l, r) => {
                l.fmt_term(out);
                out.push_str("; ");
                r.fmt_term(out);
            }
            ProgramTerm::Repeat(body) => {
                out.push('(');
                body.fmt_term(out);
                out.push_str(")*");
            }
        }
    }
}

impl fmt::Display for ProgramTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.fmt_term(&mut out);
        f.write_str(&out)
    }
}

impl std::str::FromStr for ProgramTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_program(s)
    }
}

/// Canonical form of a term.
pub fn to_canonical(term: &ProgramTerm) -> InstructionSequence {
    term.to_canonical()
}

/// Whether two sequences denote the same single-pass instruction sequence.
pub fn sequences_equal(a: &InstructionSequence, b: &InstructionSequence) -> bool {
    a.minimized() == b.minimized()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(text: &str) -> InstructionSequence {
        parse_program(text).unwrap().to_canonical()
    }

    fn plain(f: &str, m: &str) -> Instruction {
        Instruction::Plain(BasicInstruction::new(f, m).unwrap())
    }

    #[test]
    fn repetition_absorbs_what_follows() {
        let s = seq("(f.a; f.b)*; f.c");
        assert!(s.prefix().is_empty());
        assert_eq!(s.period(), &[plain("f", "a"), plain("f", "b")]);
    }

    #[test]
    fn repeated_power_collapses() {
        let s = seq("(f.a; f.a)*");
        assert!(s.prefix().is_empty());
        assert_eq!(s.period(), &[plain("f", "a")]);
    }

    #[test]
    fn finite_program_is_already_canonical() {
        let s = seq("f.a; !");
        assert_eq!(s.prefix(), &[plain("f", "a"), Instruction::Halt]);
        assert!(s.period().is_empty());
    }

    #[test]
    fn nested_repetition() {
        assert_eq!(seq("((f.a)*; f.b)*"), seq("(f.a)*"));
        assert_eq!(seq("(f.b; (f.a)*)*"), seq("f.b; (f.a)*"));
    }

    #[test]
    fn equality_examples() {
        assert!(sequences_equal(
            &seq("(f.a; f.b)*"),
            &seq("f.a; (f.b; f.a)*")
        ));
        assert!(sequences_equal(&seq("f.a; (f.a)*"), &seq("(f.a)*")));
        assert!(!sequences_equal(&seq("f.a; !"), &seq("f.b; !")));
    }

    #[test]
    fn reserved_foci_rejected() {
        assert_eq!(
            BasicInstruction::new("cnt", "inc"),
            Err(Error::ReservedFocus("cnt".into()))
        );
        assert!(BasicInstruction::new("pgs", "drop").is_err());
        assert!(BasicInstruction::new("f", "9").is_err());
    }

    #[test]
    fn term_printing() {
        let t = ProgramTerm::repeat(ProgramTerm::concat(
            ProgramTerm::Instr(plain("f", "a")),
            ProgramTerm::Instr(plain("f", "b")),
        ));
        assert_eq!(t.to_string(), "(f.a; f.b)*");
        assert_eq!(ProgramTerm::Instr(Instruction::Halt).to_string(), "!");
    }
}
