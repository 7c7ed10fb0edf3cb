use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("focus `{0}` is reserved for services and cannot be used in a basic instruction")]
    ReservedFocus(String),

    #[error("jump offset overflow: {0} exceeds the supported maximum {max}", max = u32::MAX)]
    JumpOverflow(u64),

    #[error("instruction sequence is empty")]
    EmptySequence,

    #[error("sequence contains a jump-shift instruction; normalize it first")]
    ShiftPresent,

    #[error("state `{0}` is referenced but never defined")]
    DanglingState(String),

    #[error("state `{0}` is defined more than once")]
    DuplicateState(String),

    #[error("state `{0}`: tau step with distinct branches")]
    T1Violation(String),

    #[error("thread specification has no states")]
    EmptySpec,

    #[error("program contains jump #{0}; only #0 is allowed here")]
    NotPgajs0(u32),

    #[error("product construction exceeded {0} states")]
    BudgetExceeded(usize),

    #[error("instruction `{0}` is not in the execution mechanism's alphabet")]
    AlphabetMismatch(String),

    #[error("specification contains tau steps; abstract them first")]
    TauPresent,

    #[error("action `{0}` cannot be compiled: its focus is reserved for services")]
    UncompilableAction(String),
}

impl Error {
    /// Process exit status used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. }
            | Error::EmptySequence
            | Error::DanglingState(_)
            | Error::DuplicateState(_)
            | Error::T1Violation(_)
            | Error::EmptySpec
            | Error::ReservedFocus(_) => 2,
            Error::JumpOverflow(_) => 3,
            Error::NotPgajs0(_) | Error::ShiftPresent | Error::AlphabetMismatch(_) => 4,
            Error::BudgetExceeded(_) => 5,
            Error::UncompilableAction(_) | Error::TauPresent => 6,
        }
    }
}
