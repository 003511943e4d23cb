//! Synthesis of adaptive, arrival-time-oblivious schedules for a printer
//! image-processing pipeline, via safety games on networks of timed game
//! automata.
//!
//! The crate is organized around six subsystems:
//!
//! - [`zones`]: difference bound matrices and federations (the symbolic
//!   continuous state), generic over the bound scalar.
//! - [`model`]: networks of timed game automata with binary channel
//!   synchronization, urgent channels, and shared bounded integers.
//! - [`solver`]: the symbolic safety-game solver, strategy extraction, and a
//!   discrete-grid brute-force oracle for small instances.
//! - [`printer`]: builders for the copier/printer case study.
//! - [`explore`]: Pareto-frontier sweeps, fixed-strategy evaluation, and
//!   strategy replay against adversaries.
//! - [`cli`]: file formats and the command-line surface.

pub mod cli;
pub mod explore;
pub mod model;
pub mod printer;
pub mod solver;
pub mod zones;

/// Bound scalar used throughout the model and solver.
pub type Scalar = i64;

pub type Dbm = zones::Dbm<Scalar>;
pub type Dbm32 = zones::Dbm<i32>;
pub type Federation = zones::Federation<Scalar>;
pub type Federation32 = zones::Federation<i32>;
pub type Bound = zones::Bound<Scalar>;
