//! Simulation workbench for entanglement-induced errors on encoded qubit
//! blocks.
//!
//! The crate is organised bottom-up:
//!
//! - [`bitstrings`]: binary n-tuples with mod-2 algebra.
//! - [`statespace`]: dense pure states over qubit and environment factors.
//! - [`errors`]: amplitude (`σ_x`) and phase (`σ_z`) error operators.
//! - [`codes`]: code-vectors, correctability checkers, encoders, catalogue.
//! - [`channels`]: per-qubit environment-entangling maps and residues.
//! - [`decoder`]: projective syndrome measurement and recovery.
//! - [`bounds`]: exact quantum Hamming and Gilbert–Varshamov bounds.
//! - [`cli`]: the `qec` command-line front end.
//!
//! Bit position 0 is the leftmost character of the textual form `(001010)`
//! and is the most significant bit of the basis-state index, so kets print
//! left-to-right in the usual order.

pub mod bitstrings;
pub mod bounds;
pub mod channels;
pub mod cli;
pub mod codes;
pub mod decoder;
mod error;
pub mod errors;
pub mod statespace;
pub mod tolerance;

pub use bitstrings::BitString;
pub use channels::{NoiseModel, QubitChannel};
pub use codes::{ConditionReport, QuantumCode};
pub use decoder::{DecodeReport, Strategy, SyndromeTable};
pub use error::{Error, Result};
pub use errors::ErrorPattern;
pub use statespace::{FactorLayout, PureState, Subspace};
