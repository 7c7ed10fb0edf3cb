//! Single-pass extraction for programs whose only jump is `#0`.
//!
//! Every position has two readings. In *go* mode the instruction is
//! executed; in *skip* mode the thread is counting down a pending jump held
//! in the counter `cnt`:
//!
//! ```text
//! g(a; x)   = cnt.clr ∘ (a ∘ g(x))
//! g(+a; x)  = cnt.clr ∘ (g(x) ⊴ a ⊵ (cnt.inc ∘ cnt.inc ∘ s(x)))
//! g(-a; x)  = cnt.clr ∘ ((cnt.inc ∘ cnt.inc ∘ s(x)) ⊴ a ⊵ g(x))
//! g(~; x)   = cnt.inc ∘ g(x)
//! g(#0; x)  = D ⊴ cnt.isz ⊵ s(x)
//! g(!; x)   = S
//! s(v; y)   = cnt.dec ∘ (g(v; y) ⊴ cnt.isz ⊵ s(y))       (v = ~^k; u, u ≠ ~)
//! ```
//!
//! Skip mode counts units `~^k; u`, each of which is a single jump
//! `#(k+l)` when `u = #l`, and lands on the whole unit, shifts included. A
//! counter value of `c` stands for a pending `#c`, so a failed test leaves
//! `2` in the counter to skip exactly one instruction.
//! A finite program behaves as if followed by `#0; #0; ...`: a virtual
//! terminal position whose successor is itself.

use crate::error::{Error, Result};
use crate::extraction::extract_pgajs;
use crate::services::{compose_traced, counter_new, Budget, Counter};
use crate::syntax::{Instruction, InstructionSequence};
use crate::threads::{abstract_tau, bisimilar, Action, Body, StateId, ThreadBuilder, ThreadSpec};

pub const COUNTER_FOCUS: &str = "cnt";

fn cnt(method: &str) -> Action {
    Action::basic(COUNTER_FOCUS, method)
}

pub(crate) fn check_pgajs0(s: &InstructionSequence) -> Result<()> {
    match s
        .instructions()
        .find(|i| matches!(i, Instruction::Jump(l) if *l > 0))
    {
        Some(Instruction::Jump(l)) => Err(Error::NotPgajs0(*l)),
        _ => Ok(()),
    }
}

/// The go/skip thread of a `#0`-only program, before interaction with the
/// counter. States are named `g{i}` / `s{i}` after their position, with
/// `.k` suffixes for the intermediate steps of a chain.
pub fn extract_alt(s: &InstructionSequence) -> Result<ThreadSpec> {
    check_pgajs0(s)?;
    let len = s.len();
    // position `len` is the virtual #0 of a finite program
    let positions = if s.is_finite() { len + 1 } else { len };
    let instr = |i: usize| {
        if i == len {
            Instruction::Jump(0)
        } else {
            s.at(i).clone()
        }
    };
    let succ = |i: usize| {
        if i == len {
            len
        } else {
            s.advance(i, 1).unwrap_or(len)
        }
    };

    let mut b = ThreadBuilder::new();
    let deadlock = b.state("D");
    b.define(deadlock, Body::Deadlock)?;
    let go: Vec<StateId> = (0..positions).map(|i| b.state(&format!("g{i}"))).collect();

    // skip mode counts whole units `~*; u`; landing on a unit runs it from
    // its first shift. A shift-only cycle never completes a unit and
    // deadlocks (as (~)* = (#0)* does).
    let mut skip: Vec<Option<StateId>> = vec![None; positions];
    for j in 0..positions {
        if instr(j) != Instruction::Shift {
            let i = succ(j);
            if skip[i].is_none() {
                skip[i] = Some(b.state(&format!("s{i}")));
            }
        }
    }
    // where skip mode continues after leaving position `j`
    let skip_after = |j: usize| {
        let mut cur = j;
        for _ in 0..=positions {
            if instr(cur) != Instruction::Shift {
                return skip[succ(cur)].expect("unit start");
            }
            cur = succ(cur);
        }
        deadlock
    };

    for i in 0..positions {
        let next = succ(i);
        let name = |k: usize| format!("g{i}.{k}");
        let body = match instr(i) {
            Instruction::Plain(a) => {
                let act = b.state(&name(1));
                b.define(act, Body::prefix(Action::from(&a), go[next]))?;
                Body::prefix(cnt("clr"), act)
            }
            Instruction::PosTest(a) | Instruction::NegTest(a) => {
                let positive = matches!(instr(i), Instruction::PosTest(_));
                let test = b.state(&name(1));
                let inc1 = b.state(&name(2));
                let inc2 = b.state(&name(3));
                b.define(inc2, Body::prefix(cnt("inc"), skip_after(i)))?;
                b.define(inc1, Body::prefix(cnt("inc"), inc2))?;
                let (yes, no) = if positive {
                    (go[next], inc1)
                } else {
                    (inc1, go[next])
                };
                b.define(test, Body::post(Action::from(&a), yes, no))?;
                Body::prefix(cnt("clr"), test)
            }
            Instruction::Shift => Body::prefix(cnt("inc"), go[next]),
            Instruction::Jump(_) => Body::post(cnt("isz"), deadlock, skip_after(i)),
            Instruction::Halt => Body::Stop,
        };
        b.define(go[i], body)?;

        if let Some(sk) = skip[i] {
            let test = b.state(&format!("s{i}.1"));
            b.define(test, Body::post(cnt("isz"), go[i], skip_after(i)))?;
            b.define(sk, Body::prefix(cnt("dec"), test))?;
        }
    }
    b.build(go[0])
}

/// The behaviour obtained by running the go/skip thread against `Cnt_0` and
/// abstracting from tau, together with the largest counter content seen.
pub fn behaviour_via_counter_traced(
    s: &InstructionSequence,
    budget: Budget,
) -> Result<(ThreadSpec, u64)> {
    let alt = extract_alt(s)?;
    let composed = compose_traced(&alt, COUNTER_FOCUS, &counter_new(0), budget)?;
    let max = composed
        .service_states
        .iter()
        .filter_map(Counter::content)
        .max()
        .unwrap_or(0);
    Ok((abstract_tau(&composed.thread).renamed("X"), max))
}

pub fn behaviour_via_counter(s: &InstructionSequence, budget: Budget) -> Result<ThreadSpec> {
    behaviour_via_counter_traced(s, budget).map(|(t, _)| t)
}

/// Whether the plain extraction and the counter-driven behaviour agree.
pub fn verify_theorem2(s: &InstructionSequence, budget: Budget) -> Result<bool> {
    let direct = extract_pgajs(s)?;
    let via_counter = behaviour_via_counter(s, budget)?;
    Ok(bisimilar(&direct, &via_counter))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(text: &str) -> InstructionSequence {
        text.parse().unwrap()
    }

    fn spec(text: &str) -> ThreadSpec {
        text.parse().unwrap()
    }

    #[test]
    fn halt() {
        let t = extract_alt(&seq("!")).unwrap();
        assert_eq!(t.to_string(), "g0 = S");
    }

    #[test]
    fn basic_then_halt() {
        let t = extract_alt(&seq("f.a; !")).unwrap();
        let expected = spec("A = <B> cnt.clr <B>\nB = <C> f.a <C>\nC = S");
        assert!(bisimilar(&t, &expected));
    }

    #[test]
    fn rejects_long_jumps() {
        assert_eq!(extract_alt(&seq("#2; !")), Err(Error::NotPgajs0(2)));
    }

    #[test]
    fn only_counter_and_program_foci() {
        let t = extract_alt(&seq("(+f.a; ~; -g.b; #0; !)*")).unwrap();
        for a in t.actions() {
            assert!(matches!(a.focus(), Some("cnt" | "f" | "g")), "{a}");
        }
    }

    #[test]
    fn behaviour_examples() {
        let b = Budget::default();
        let t = behaviour_via_counter(&seq("f.a; !"), b).unwrap();
        assert!(bisimilar(&t, &spec("X = <Y> f.a <Y>\nY = S")));
        assert_eq!(
            behaviour_via_counter(&seq("#0; !"), b).unwrap().to_string(),
            "X0 = D"
        );
        assert_eq!(
            behaviour_via_counter(&seq("(~)*"), b).unwrap().to_string(),
            "X0 = D"
        );
    }

    #[test]
    fn failed_test_skips_exactly_one() {
        // +f.a; f.b; ! : false branch must skip f.b
        let b = Budget::default();
        let t = behaviour_via_counter(&seq("+f.a; f.b; !"), b).unwrap();
        let expected = spec("X = <B> f.a <S>\nB = <S> f.b <S>\nS = S");
        assert!(bisimilar(&t, &expected));
    }

    #[test]
    fn theorem2_examples() {
        let b = Budget::default();
        for p in [
            "f.a; !",
            "~; #0; !",
            "(+f.a; ~; #0; !)*",
            "-f.a; ~; ~; #0; f.b; !; !",
        ] {
            assert!(verify_theorem2(&seq(p), b).unwrap(), "{p}");
        }
    }

    #[test]
    fn skip_lands_on_shifted_jump() {
        // the failed test skips `~; ~; #0` (= #2) and lands on `~; #0` (= #1)
        let b = Budget::default();
        let t = behaviour_via_counter(&seq("(+f.a; ~; ~; #0; ~; #0)*"), b).unwrap();
        assert!(bisimilar(&t, &spec("X = <X> f.a <X>")));
    }

    #[test]
    fn skip_past_end() {
        // ~; ~; #0 jumps two ahead from a one-instruction tail: deadlock
        let b = Budget::default();
        let (t, max) = behaviour_via_counter_traced(&seq("~; ~; #0; !"), b).unwrap();
        assert_eq!(t.to_string(), "X0 = D");
        assert_eq!(max, 2);
    }
}
