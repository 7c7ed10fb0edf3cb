//! Property suites over seeded corpora, shared by the command-line tool and
//! the acceptance tests.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::altsem::behaviour_via_counter_traced;
use crate::compiler::{compile_spec, corollary1_pipeline};
use crate::corpus::{program_corpus, spec_corpus, Fragment};
use crate::error::{Error, Result};
use crate::execmech::run_exec;
use crate::extraction::{extract, extract_pgajs};
use crate::services::Budget;
use crate::syntax::{normalize_shifts, transform_to_pgajs0, Instruction, InstructionSequence};
use crate::threads::{bisimilar, ThreadSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// extraction is preserved by the transformation to `#0`-only programs
    Theorem1,
    /// extraction agrees with the counter-driven single-pass behaviour
    Theorem2,
    /// the execution mechanism reproduces extraction
    Exec,
    /// compiling a spec and extracting gives the spec back
    Roundtrip,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(Suite::Theorem1),
            "2" => Ok(Suite::Theorem2),
            "exec" => Ok(Suite::Exec),
            "roundtrip" => Ok(Suite::Roundtrip),
            _ => Err(Error::Syntax {
                line: 1,
                column: 1,
                message: format!("unknown suite `{s}` (expected 1, 2, exec or roundtrip)"),
            }),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Theorem1 => "1",
            Suite::Theorem2 => "2",
            Suite::Exec => "exec",
            Suite::Roundtrip => "roundtrip",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseRecord {
    pub case: usize,
    pub verdict: Verdict,
    pub program: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub suite: Suite,
    pub records: Vec<CaseRecord>,
}

impl Report {
    pub fn passed(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.verdict == Verdict::Pass)
            .count()
    }

    pub fn total(&self) -> usize {
        self.records.len()
    }

    pub fn all_pass(&self) -> bool {
        self.passed() == self.total()
    }

    pub fn first_failure(&self) -> Option<&CaseRecord> {
        self.records.iter().find(|r| r.verdict != Verdict::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.records).expect("records serialize")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} pass", self.passed(), self.total())?;
        if let Some(r) = self.first_failure() {
            write!(f, "\nfirst counterexample (case {}): {}", r.case, r.program)?;
            if let Some(d) = &r.detail {
                write!(f, "\n{d}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub count: usize,
    pub seed: u64,
    /// program length for program suites, state count for `Roundtrip`
    pub max_len: usize,
    pub budget: Budget,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            count: 100,
            seed: 0,
            max_len: 12,
            budget: Budget::default(),
        }
    }
}

/// Outcome of one check: `Ok(None)` on success, `Ok(Some(reason))` on a
/// property violation.
pub type Check = Result<Option<String>>;

fn same(what: &str, a: &ThreadSpec, b: &ThreadSpec) -> Option<String> {
    (!bisimilar(a, b)).then(|| format!("{what} differ:\n{a}\n--\n{b}"))
}

pub fn check_theorem1(p: &InstructionSequence) -> Check {
    let shift_free = p.instructions().all(|i| *i != Instruction::Shift);
    let direct = if shift_free {
        extract(p)?
    } else {
        extract_pgajs(p)?
    };
    let transformed = transform_to_pgajs0(&normalize_shifts(p)?)?;
    Ok(same("extractions", &direct, &extract_pgajs(&transformed)?))
}

/// Agreement with the counter route, plus the bound `len + 2` on counter
/// contents.
pub fn check_theorem2(p: &InstructionSequence, budget: Budget) -> Check {
    let direct = extract_pgajs(p)?;
    let (via, max) = behaviour_via_counter_traced(p, budget)?;
    if let Some(d) = same("behaviours", &direct, &via) {
        return Ok(Some(d));
    }
    let bound = p.len() as u64 + 2;
    Ok((max > bound).then(|| format!("counter reached {max}, bound {bound}")))
}

pub fn check_exec(p: &InstructionSequence, budget: Budget) -> Check {
    Ok(same(
        "behaviours",
        &extract_pgajs(p)?,
        &run_exec(p, budget)?,
    ))
}

pub fn check_roundtrip(s: &ThreadSpec, budget: Budget) -> Check {
    let compiled = compile_spec(s)?.to_canonical();
    if let Some(d) = same("compiled and source", &extract(&compiled)?, s) {
        return Ok(Some(d));
    }
    let p = corollary1_pipeline(s)?;
    if let Some(d) = same("#0-only compiled and source", &extract_pgajs(&p)?, s) {
        return Ok(Some(d));
    }
    let (via, _) = behaviour_via_counter_traced(&p, budget)?;
    Ok(same("counter route and source", &via, s))
}

fn record(case: usize, seed: u64, program: String, outcome: Check) -> CaseRecord {
    let (verdict, detail) = match outcome {
        Ok(None) => (Verdict::Pass, None),
        Ok(Some(d)) => (Verdict::Fail, Some(d)),
        Err(e) => (Verdict::Error, Some(e.to_string())),
    };
    CaseRecord {
        case,
        verdict,
        program,
        seed,
        detail,
    }
}

fn check_program(suite: Suite, p: &InstructionSequence, budget: Budget) -> Check {
    match suite {
        Suite::Theorem1 => check_theorem1(p),
        Suite::Theorem2 => check_theorem2(p, budget),
        Suite::Exec => check_exec(p, budget),
        Suite::Roundtrip => unreachable!("round trips run on specs"),
    }
}

/// Runs `suite` over a generated corpus. Cases are independent and run on
/// all available cores; records are in case order.
pub fn run_suite(suite: Suite, config: &VerifyConfig) -> Report {
    let budget = config.budget;
    let records = match suite {
        Suite::Roundtrip => {
            let specs = spec_corpus(config.count, config.seed, config.max_len);
            par_map(&specs, |i, s| {
                let program = corollary1_pipeline(s)
                    .map(|p| p.to_string())
                    .unwrap_or_else(|_| s.to_string());
                record(i, config.seed, program, check_roundtrip(s, budget))
            })
        }
        _ => {
            let fragment = match suite {
                Suite::Theorem1 => Fragment::ShiftFree,
                _ => Fragment::Pgajs0,
            };
            let programs = program_corpus(fragment, config.count, config.seed, config.max_len);
            par_map(&programs, |i, p| {
                record(
                    i,
                    config.seed,
                    p.to_string(),
                    check_program(suite, p, budget),
                )
            })
        }
    };
    Report { suite, records }
}

/// Runs `suite` on one input: a program, or a thread spec for `Roundtrip`.
/// Input that does not meet the suite's precondition is an error rather
/// than a failing case.
pub fn run_single(suite: Suite, input: &str, budget: Budget) -> Result<Report> {
    let (program, outcome) = if suite == Suite::Roundtrip {
        let s: ThreadSpec = input.parse()?;
        let p = corollary1_pipeline(&s)?;
        (p.to_string(), check_roundtrip(&s, budget)?)
    } else {
        let p: InstructionSequence = input.parse()?;
        (p.to_string(), check_program(suite, &p, budget)?)
    };
    Ok(Report {
        suite,
        records: vec![record(0, 0, program, Ok(outcome))],
    })
}

fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(usize, &T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .enumerate()
            .map(|(c, part)| {
                let f = &f;
                scope.spawn(move || {
                    part.iter()
                        .enumerate()
                        .map(|(k, item)| f(c * chunk + k, item))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(count: usize, seed: u64, max_len: usize) -> VerifyConfig {
        VerifyConfig {
            count,
            seed,
            max_len,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn suites_pass_on_small_corpora() {
        for (suite, max_len) in [
            (Suite::Theorem1, 12),
            (Suite::Theorem2, 16),
            (Suite::Exec, 16),
            (Suite::Roundtrip, 8),
        ] {
            let r = run_suite(suite, &config(30, 7, max_len));
            assert!(r.all_pass(), "{suite}: {r}");
            assert_eq!(r.total(), 30);
        }
    }

    #[test]
    fn records_in_case_order() {
        let r = run_suite(Suite::Theorem1, &config(25, 3, 12));
        let cases: Vec<usize> = r.records.iter().map(|c| c.case).collect();
        assert_eq!(cases, (0..25).collect::<Vec<_>>());
        assert_eq!(r, run_suite(Suite::Theorem1, &config(25, 3, 12)));
    }

    #[test]
    fn single_inputs() {
        let b = Budget::default();
        assert!(run_single(Suite::Theorem2, "f.a;!", b).unwrap().all_pass());
        assert!(run_single(Suite::Exec, "(#0)*", b).unwrap().all_pass());
        assert!(run_single(Suite::Theorem1, "~; #2; !", b)
            .unwrap()
            .all_pass());
        assert!(run_single(Suite::Roundtrip, "X = <X> f.a <Y>\nY = S", b)
            .unwrap()
            .all_pass());
        assert_eq!(
            run_single(Suite::Theorem2, "#2; !", b),
            Err(Error::NotPgajs0(2))
        );
    }

    #[test]
    fn report_text() {
        let r = run_suite(Suite::Theorem1, &config(100, 7, 12));
        assert_eq!(r.to_string(), "100/100 pass");
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json[0]["verdict"], "pass");
        assert_eq!(json[3]["case"], 3);
        assert_eq!(json[3]["seed"], 7);
    }

    #[test]
    fn suite_names() {
        for s in ["1", "2", "exec", "roundtrip"] {
            assert_eq!(s.parse::<Suite>().unwrap().to_string(), s);
        }
        assert!("3".parse::<Suite>().is_err());
    }
}
