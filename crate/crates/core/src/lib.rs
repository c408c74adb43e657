//! Compile arbitrary databases into Grover-search quantum oracles.
//!
//! The pipeline: hash every entry to a k-bit label, assemble the labels
//! into a truth table, synthesize the table into a database circuit U_D
//! (Reed-Muller, Gray, phase-tolerant or CSE-supported synthesis), then
//! wrap a phase tag between U_D and its inverse to obtain the query
//! oracle. A dense statevector simulator verifies everything at desk
//! scale, and a benchmark harness measures circuit complexity across
//! methods and database sizes.

pub mod bench;
pub mod boolean;
pub mod circuit;
pub mod error;
pub mod fixtures;
pub mod oracle;
pub mod phase;
pub mod sim;

pub use error::{Error, Result};
