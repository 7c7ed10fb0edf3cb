//! Single-pass instruction sequences (PGA with the jump-shift instruction),
//! their thread semantics, and machinery to check that the different routes
//! from a program to its behaviour agree.
//!
//! The pipeline, bottom-up:
//!
//! - [`syntax`]: instructions, program terms, canonical eventually-periodic
//!   sequences, jump-shift normalization.
//! - [`threads`]: finite-state threads as linear recursive specifications,
//!   projection, tau abstraction and bisimilarity.
//! - [`extraction`]: the position-based thread extraction.
//! - [`services`]: reply values, the service interface, counters and
//!   thread-service composition.
//! - [`altsem`]: the counter-driven single-pass extraction for programs whose
//!   only jump is `#0`.
//! - [`execmech`]: the program-text service and a finite-state execution
//!   mechanism built on top of it.
//! - [`compiler`]: linear specifications back into programs.
//! - [`corpus`] and [`verify`]: seeded random corpora and the property suites
//!   driven by the command-line tool.

pub mod altsem;
pub mod compiler;
pub mod corpus;
pub mod error;
pub mod execmech;
pub mod extraction;
pub mod services;
pub mod syntax;
pub mod threads;
pub mod verify;

pub use error::{Error, Result};
pub use syntax::{BasicInstruction, Instruction, InstructionSequence, ProgramTerm};
pub use threads::{Action, Body, StateId, ThreadSpec};
