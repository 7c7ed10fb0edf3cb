use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pgajs::altsem::{behaviour_via_counter, extract_alt};
use pgajs::compiler::{compile_spec_with, expand_jumps};
use pgajs::extraction::extract_pgajs;
use pgajs::services::Budget;
use pgajs::syntax::normalize_shifts;
use pgajs::threads::{bisimilar, to_dot};
use pgajs::verify::{run_single, run_suite, Suite, VerifyConfig};
use pgajs::{Error, InstructionSequence, ThreadSpec};

/// Single-pass instruction sequences: normalization, thread extraction,
/// bisimilarity, property suites and compilation of thread specs.
#[derive(Parser)]
#[command(name = "pgajs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Input text (or a path to a file holding it)
    input: Option<String>,
    /// Input file, `-` for stdin, or literal text
    #[arg(long = "in", value_name = "PATH", conflicts_with = "input")]
    path: Option<String>,
}

impl Input {
    fn read(&self) -> Result<String, Failure> {
        match self.path.as_deref().or(self.input.as_deref()) {
            Some(source) => read_source(source),
            None => read_source("-"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form of a program
    Normalize {
        #[command(flatten)]
        input: Input,
        /// Also eliminate jump-shifts
        #[arg(long)]
        shifts: bool,
        /// Canonical form only (the default)
        #[arg(long, conflicts_with = "shifts")]
        canonical: bool,
    },
    /// Print the thread extracted from a program
    Extract {
        #[command(flatten)]
        input: Input,
        /// The go/skip thread of a #0-only program, before the counter
        #[arg(long, conflicts_with = "via_counter")]
        alt: bool,
        /// The go/skip thread run against a counter, tau abstracted
        #[arg(long)]
        via_counter: bool,
        /// Emit Graphviz DOT
        #[arg(long)]
        dot: bool,
        /// Maximum number of composed states
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Decide bisimilarity of two thread specs (files), or two programs
    Bisim {
        a: String,
        b: String,
        /// Compare the extractions of two programs
        #[arg(long)]
        programs: bool,
    },
    /// Run a property suite over a seeded corpus or a single input
    Verify {
        /// 1, 2, exec or roundtrip
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum program length (state count for roundtrip)
        #[arg(long)]
        max_len: Option<usize>,
        /// Check one program (or spec for roundtrip) instead of a corpus
        #[arg(long = "in", value_name = "PATH")]
        path: Option<String>,
        /// Print per-case records as JSON
        #[arg(long)]
        json: bool,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
    },
    /// Compile a tau-free thread spec into a program
    Compile {
        #[command(flatten)]
        input: Input,
        /// Expand every jump into jump-shifts and #0
        #[arg(long)]
        pgajs0: bool,
        /// Abstract from tau instead of rejecting it
        #[arg(long)]
        abstract_tau: bool,
    },
}

enum Failure {
    Lib(Error),
    Io(String),
    Config(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn read_source(source: &str) -> Result<String, Failure> {
    if source == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        return Ok(text);
    }
    if Path::new(source).is_file() {
        return std::fs::read_to_string(source).map_err(|e| Failure::Io(format!("{source}: {e}")));
    }
    Ok(source.to_string())
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))
}

fn budget(max_states: usize) -> Result<Budget, Failure> {
    if max_states == 0 {
        return Err(Failure::Config("--budget must be positive".into()));
    }
    Ok(Budget::new(max_states))
}

fn program(text: &str) -> Result<InstructionSequence, Failure> {
    Ok(text.trim().parse()?)
}

fn spec(text: &str) -> Result<ThreadSpec, Failure> {
    Ok(text.parse()?)
}

fn run(cli: Cli) -> Result<(String, u8), Failure> {
    match cli.command {
        Command::Normalize { input, shifts, .. } => {
            let p = program(&input.read()?)?;
            let out = if shifts { normalize_shifts(&p)? } else { p };
            Ok((out.to_string(), 0))
        }
        Command::Extract {
            input,
            alt,
            via_counter,
            dot,
            budget: max_states,
        } => {
            let p = program(&input.read()?)?;
            let t = if alt {
                extract_alt(&p)?
            } else if via_counter {
                behaviour_via_counter(&p, budget(max_states)?)?
            } else {
                extract_pgajs(&p)?
            };
            Ok((if dot { to_dot(&t) } else { t.to_string() }, 0))
        }
        Command::Bisim { a, b, programs } => {
            let (x, y) = if programs {
                (
                    extract_pgajs(&program(&read_source(&a)?)?)?,
                    extract_pgajs(&program(&read_source(&b)?)?)?,
                )
            } else {
                (spec(&read_file(&a)?)?, spec(&read_file(&b)?)?)
            };
            Ok(if bisimilar(&x, &y) {
                ("bisimilar".into(), 0)
            } else {
                ("not-bisimilar".into(), 1)
            })
        }
        Command::Verify {
            theorem,
            count,
            seed,
            max_len,
            path,
            json,
            budget: max_states,
        } => {
            let suite: Suite = theorem
                .parse()
                .map_err(|_| Failure::Config(format!("unknown --theorem `{theorem}`")))?;
            let budget = budget(max_states)?;
            let report = match path {
                Some(source) => run_single(suite, read_source(&source)?.trim(), budget)?,
                None => {
                    let max_len = max_len.unwrap_or(match suite {
                        Suite::Theorem1 => 12,
                        Suite::Roundtrip => 8,
                        _ => 16,
                    });
                    if max_len == 0 {
                        return Err(Failure::Config("--max-len must be positive".into()));
                    }
                    let config = VerifyConfig {
                        count,
                        seed,
                        max_len,
                        budget,
                    };
                    run_suite(suite, &config)
                }
            };
            let code = if report.all_pass() { 0 } else { 1 };
            let out = if json {
                report.to_json()
            } else {
                report.to_string()
            };
            Ok((out, code))
        }
        Command::Compile {
            input,
            pgajs0,
            abstract_tau,
        } => {
            let s = spec(&input.read()?)?;
            let term = compile_spec_with(&s, abstract_tau)?;
            let out = if pgajs0 { expand_jumps(&term) } else { term };
            Ok((out.to_string(), 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((out, code)) => {
            println!("{out}");
            ExitCode::from(code)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(Failure::Io(msg) | Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
