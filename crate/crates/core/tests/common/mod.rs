//! Reference implementations used as oracles. They share no code with the
//! library beyond its data types.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use pgajs::{Action, Body, Instruction, InstructionSequence, StateId, ThreadSpec};

/// `π_n(x) = π_n(y)` for every `n ≤ depth`, by dynamic programming over
/// state pairs. Tau-free specs only.
pub fn bounded_equal(a: &ThreadSpec, b: &ThreadSpec, depth: usize) -> bool {
    let mut memo = HashMap::new();
    eq_at(a, a.root(), b, b.root(), depth, &mut memo)
}

fn eq_at(
    a: &ThreadSpec,
    x: StateId,
    b: &ThreadSpec,
    y: StateId,
    n: usize,
    memo: &mut HashMap<(StateId, StateId, usize), bool>,
) -> bool {
    if n == 0 {
        return true;
    }
    if let Some(&r) = memo.get(&(x, y, n)) {
        return r;
    }
    let r = match (a.body(x), b.body(y)) {
        (Body::Stop, Body::Stop) | (Body::Deadlock, Body::Deadlock) => true,
        (
            Body::Post {
                action: p,
                then: x1,
                otherwise: x2,
            },
            Body::Post {
                action: q,
                then: y1,
                otherwise: y2,
            },
        ) => p == q && eq_at(a, *x1, b, *y1, n - 1, memo) && eq_at(a, *x2, b, *y2, n - 1, memo),
        _ => false,
    };
    memo.insert((x, y, n), r);
    r
}

/// Projection equality up to the depth past which two deterministic specs
/// cannot first differ.
pub fn oracle_bisimilar(a: &ThreadSpec, b: &ThreadSpec) -> bool {
    bounded_equal(a, b, a.len() * b.len() + 1)
}

/// What a unit `~^k; u` does once control reaches it.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Unit {
    Halt,
    Deadlock,
    Jump(u64),
    Act(Action, Test),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Test {
    None,
    Pos,
    Neg,
}

/// A direct reading of a program as a stream of units `~^k; u`: shifts
/// before a jump lengthen it, shifts before anything else vanish, a shift
/// stream that never ends is `#0`, and running off a finite program
/// deadlocks.
pub struct Interpreter<'a> {
    p: &'a InstructionSequence,
}

impl<'a> Interpreter<'a> {
    pub fn new(p: &'a InstructionSequence) -> Self {
        Interpreter { p }
    }

    fn instr(&self, i: usize) -> Option<&Instruction> {
        let pre = self.p.prefix();
        let per = self.p.period();
        if i < pre.len() {
            Some(&pre[i])
        } else if per.is_empty() {
            None
        } else {
            Some(&per[(i - pre.len()) % per.len()])
        }
    }

    fn normal(&self, i: usize) -> usize {
        let pre = self.p.prefix().len();
        let per = self.p.period().len();
        if i < pre || per == 0 {
            i
        } else {
            pre + (i - pre) % per
        }
    }

    /// The unit starting at `i` and the start of the following unit.
    fn unit(&self, i: usize) -> (Unit, Option<usize>) {
        let mut k = 0u64;
        let mut j = i;
        let limit = self.p.prefix().len() + self.p.period().len() + 1;
        loop {
            match self.instr(j) {
                None => return (Unit::Deadlock, None),
                Some(Instruction::Shift) => {
                    k += 1;
                    j += 1;
                    if k as usize > limit {
                        return (Unit::Deadlock, None);
                    }
                }
                Some(u) => {
                    let next = Some(self.normal(j + 1));
                    let unit = match u {
                        Instruction::Jump(l) => Unit::Jump(k + *l as u64),
                        Instruction::Halt => Unit::Halt,
                        Instruction::Plain(a) => Unit::Act(Action::from(a), Test::None),
                        Instruction::PosTest(a) => Unit::Act(Action::from(a), Test::Pos),
                        Instruction::NegTest(a) => Unit::Act(Action::from(a), Test::Neg),
                        Instruction::Shift => unreachable!(),
                    };
                    return (unit, next);
                }
            }
        }
    }

    /// Where control settles after arriving at unit start `i`: a non-jump
    /// unit, or `None` for deadlock.
    fn arrive(&self, i: Option<usize>) -> Option<usize> {
        let mut seen = HashSet::new();
        let mut cur = i?;
        loop {
            let (unit, _) = self.unit(cur);
            match unit {
                Unit::Jump(0) | Unit::Deadlock => return None,
                Unit::Jump(l) => {
                    if !seen.insert(cur) {
                        return None;
                    }
                    let mut t = cur;
                    for _ in 0..l {
                        t = self.unit(t).1?;
                    }
                    cur = t;
                }
                _ => return Some(cur),
            }
        }
    }

    /// Whether the program's behaviour equals `t`. Both sides are
    /// deterministic, so this holds iff every pair reachable in their
    /// synchronized product agrees locally.
    pub fn agrees(&self, t: &ThreadSpec) -> bool {
        let start = (self.arrive(Some(0)), t.root());
        let mut seen = HashSet::from([start]);
        let mut todo = vec![start];
        while let Some((at, x)) = todo.pop() {
            let next = match (at, t.body(x)) {
                (None, Body::Deadlock) => continue,
                (None, _) => return false,
                (Some(i), body) => match (self.unit(i), body) {
                    ((Unit::Halt, _), Body::Stop) => continue,
                    (
                        (Unit::Act(a, test), following),
                        Body::Post {
                            action,
                            then,
                            otherwise,
                        },
                    ) if a == *action => {
                        let step = self.arrive(following);
                        let skip = self.arrive(following.and_then(|j| self.unit(j).1));
                        let (yes, no) = match test {
                            Test::None => (step, step),
                            Test::Pos => (step, skip),
                            Test::Neg => (skip, step),
                        };
                        [(yes, *then), (no, *otherwise)]
                    }
                    _ => return false,
                },
            };
            for pair in next {
                if seen.insert(pair) {
                    todo.push(pair);
                }
            }
        }
        true
    }
}

pub fn seq(text: &str) -> InstructionSequence {
    text.parse().expect("valid program")
}

pub fn spec(text: &str) -> ThreadSpec {
    text.parse().expect("valid spec")
}
