//! Compiles graph states into scheduled stabilizer measurements on a
//! two-row surface-code layout: one row of logical patches and one ancilla
//! bus beneath it.
//!
//! The pipeline has three phases:
//!
//! 1. [`stabilizer`]: pick a maximal independent set, initialize it in `|+>`
//!    and everything else in `|0>`, leaving only the remaining generators
//!    to measure.
//! 2. [`mapping`]: place vertices on the row (natural, random or by
//!    recursive min cuts).
//! 3. [`scheduler`]: turn each measurement into an interval of the bus and
//!    pack the intervals into Tock rounds.
//!
//! [`compiler::compile`] runs all three, validates the schedule and, for
//! graphs of moderate size, replays it on a stabilizer tableau
//! ([`verify`]).

pub mod baseline;
pub mod compiler;
pub mod graph;
pub mod mapping;
pub mod rng;
pub mod scheduler;
pub mod stabilizer;
pub mod verify;

pub use compiler::{compile, CompilationResult, CompileError, CompileOptions, MapperKind, VerifyMode};
pub use graph::{generate, Graph, GraphError, GraphSpec};
pub use mapping::{KargerBudget, Mapping};
pub use scheduler::{Schedule, SchedulerKind};
pub use stabilizer::{MisOrder, PauliString, ReductionPlan};
