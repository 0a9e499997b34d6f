//! Data-aware initialisation of parameter-stripped variational circuits.
//!
//! The pipeline: parse an OpenQASM circuit into a [`circuit::CircuitTemplate`],
//! discard its numeric angles, fit a Beta prior to the problem's features
//! ([`prior`]), inject fresh angles under one of several schemes ([`init`]),
//! optimise with a statevector VQE loop ([`optim`]), and compare schemes
//! with the paired evaluation in [`harness`].

pub mod circuit;
pub mod cli;
pub mod harness;
pub mod init;
pub mod optim;
pub mod prior;
pub mod problem;
pub mod sim;

pub use circuit::{parse_qasm, CircuitError, CircuitTemplate, GateKind, GateRole};
