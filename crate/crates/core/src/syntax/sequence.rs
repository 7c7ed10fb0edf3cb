use std::fmt;

use super::{Instruction, ProgramTerm};
use crate::error::{Error, Result};

/// A finite or eventually periodic instruction sequence `prefix; (period)*`.
///
/// Values are always kept canonical-minimal: the period is primitive and the
/// prefix cannot be rolled into it. Two sequences denote the same
/// instruction sequence exactly when they are `==`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InstructionSequence {
    prefix: Vec<Instruction>,
    period: Vec<Instruction>,
}

impl InstructionSequence {
    pub fn new(prefix: Vec<Instruction>, period: Vec<Instruction>) -> Result<Self> {
        if prefix.is_empty() && period.is_empty() {
            return Err(Error::EmptySequence);
        }
        let (prefix, period) = minimize(prefix, period);
        Ok(InstructionSequence { prefix, period })
    }

    pub fn finite(instrs: Vec<Instruction>) -> Result<Self> {
        Self::new(instrs, Vec::new())
    }

    pub fn periodic(prefix: Vec<Instruction>, period: Vec<Instruction>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::EmptySequence);
        }
        Self::new(prefix, period)
    }

    pub fn prefix(&self) -> &[Instruction] {
        &self.prefix
    }

    /// Empty for finite sequences.
    pub fn period(&self) -> &[Instruction] {
        &self.period
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// Number of distinct positions: prefix length plus period length.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Instructions at positions `0..len()`.
    pub fn instructions(&self) -> impl Iterator<Item = &Instruction> {
        self.prefix.iter().chain(self.period.iter())
    }

    pub fn at(&self, position: usize) -> &Instruction {
        if position < self.prefix.len() {
            &self.prefix[position]
        } else {
            &self.period[position - self.prefix.len()]
        }
    }

    /// Position reached by moving `offset` instructions forward from
    /// `position`, wrapping inside the period. `None` when a finite sequence
    /// runs out.
    pub fn advance(&self, position: usize, offset: u64) -> Option<usize> {
        let target = position as u64 + offset;
        let len = self.len() as u64;
        if target < len {
            return Some(target as usize);
        }
        if self.is_finite() {
            return None;
        }
        let p = self.prefix.len() as u64;
        let q = self.period.len() as u64;
        Some((p + (target - p) % q) as usize)
    }

    pub fn head(&self) -> &Instruction {
        self.at(0)
    }

    /// The sequence after its first instruction, `None` if nothing remains.
    pub fn drop_head(&self) -> Option<InstructionSequence> {
        if let Some((_, rest)) = self.prefix.split_first() {
            if rest.is_empty() && self.period.is_empty() {
                return None;
            }
            return Some(InstructionSequence::new(rest.to_vec(), self.period.clone()).unwrap());
        }
        let mut period = self.period.clone();
        period.rotate_left(1);
        Some(InstructionSequence::new(Vec::new(), period).unwrap())
    }

    /// Re-minimizes, for values assembled outside the constructor.
    pub fn minimized(&self) -> InstructionSequence {
        let (prefix, period) = minimize(self.prefix.clone(), self.period.clone());
        InstructionSequence { prefix, period }
    }

    /// A term in canonical form `P` or `P; (Q)*` denoting this sequence.
    pub fn to_term(&self) -> ProgramTerm {
        let Some(period) = ProgramTerm::from_instructions(&self.period) else {
            return ProgramTerm::from_instructions(&self.prefix).expect("sequences are nonempty");
        };
        self.prefix
            .iter()
            .rev()
            .fold(ProgramTerm::repeat(period), |term, i| {
                ProgramTerm::concat(ProgramTerm::Instr(i.clone()), term)
            })
    }

    pub fn map_instructions<F>(&self, mut f: F) -> InstructionSequence
    where
        F: FnMut(&Instruction) -> Vec<Instruction>,
    {
        let prefix = self.prefix.iter().flat_map(&mut f).collect();
        let period = self.period.iter().flat_map(&mut f).collect();
        InstructionSequence::new(prefix, period).expect("expansion keeps sequences nonempty")
    }
}

impl fmt::Display for InstructionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[Instruction]| {
            xs.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ")
        };
        match (self.prefix.is_empty(), self.period.is_empty()) {
            (false, true) => f.write_str(&join(&self.prefix)),
            (true, false) => write!(f, "({})*", join(&self.period)),
            _ => write!(f, "{}; ({})*", join(&self.prefix), join(&self.period)),
        }
    }
}

impl std::str::FromStr for InstructionSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(super::parse_program(s)?.to_canonical())
    }
}

fn minimize(
    mut prefix: Vec<Instruction>,
    mut period: Vec<Instruction>,
) -> (Vec<Instruction>, Vec<Instruction>) {
    if period.is_empty() {
        return (prefix, period);
    }
    let q = period.len();
    let root = (1..=q)
        .find(|&d| q.is_multiple_of(d) && (d..q).all(|i| period[i] == period[i - d]))
        .unwrap_or(q);
    period.truncate(root);
    while prefix
        .last()
        .is_some_and(|last| Some(last) == period.last())
    {
        prefix.pop();
        period.rotate_right(1);
    }
    (prefix, period)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::BasicInstruction;

    fn a() -> Instruction {
        Instruction::Plain(BasicInstruction::new("f", "a").unwrap())
    }
    fn b() -> Instruction {
        Instruction::Plain(BasicInstruction::new("f", "b").unwrap())
    }

    #[test]
    fn rolls_prefix_into_period() {
        let s = InstructionSequence::new(vec![b(), a(), b()], vec![a(), b()]).unwrap();
        assert!(s.prefix().is_empty());
        assert_eq!(s.period(), &[b(), a()]);
    }

    #[test]
    fn empty_rejected() {
        assert_eq!(
            InstructionSequence::new(vec![], vec![]),
            Err(Error::EmptySequence)
        );
    }

    #[test]
    fn advance_wraps_in_period() {
        let s = InstructionSequence::new(vec![Instruction::Halt], vec![a(), b()]).unwrap();
        assert_eq!(s.advance(0, 1), Some(1));
        assert_eq!(s.advance(2, 1), Some(1));
        assert_eq!(s.advance(1, 5), Some(2));
        assert_eq!(
            s.advance(0, u32::MAX as u64),
            Some(1 + ((u32::MAX as usize - 1) % 2))
        );
        let fin = InstructionSequence::finite(vec![a(), b()]).unwrap();
        assert_eq!(fin.advance(0, 1), Some(1));
        assert_eq!(fin.advance(0, 2), None);
    }

    #[test]
    fn drop_head_rotates_period() {
        let s = InstructionSequence::new(vec![], vec![a(), b()]).unwrap();
        let t = s.drop_head().unwrap();
        assert_eq!(t.period(), &[b(), a()]);
        assert_eq!(t.drop_head().unwrap(), s);
        let fin = InstructionSequence::finite(vec![a()]).unwrap();
        assert_eq!(fin.drop_head(), None);
    }

    #[test]
    fn display_forms() {
        let s = InstructionSequence::new(vec![a()], vec![Instruction::Jump(0)]).unwrap();
        assert_eq!(s.to_string(), "f.a; (#0)*");
        assert_eq!(
            InstructionSequence::finite(vec![Instruction::Halt])
                .unwrap()
                .to_string(),
            "!"
        );
    }
}
