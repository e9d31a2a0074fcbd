//! Exact simulation, security audits and impossibility checks for the
//! SecureNAND family of blind delegated-computation protocols.
//!
//! [`qsim`] is generic over the real scalar; everything above it runs on
//! `f64` through the aliases below.

pub mod audit;
pub mod delegation;
pub mod nogo;
pub mod protocol;
pub mod qsim;
pub mod random;
pub mod report;
pub mod rng;
pub mod selftest;

pub type Matrix = qsim::Matrix<f64>;
pub type QuantumState = qsim::QuantumState<f64>;
pub type DensityMatrix = qsim::DensityMatrix<f64>;
pub type ChoiMatrix = qsim::ChoiMatrix<f64>;

pub use protocol::{run_protocol, ProtocolTranscript, ProtocolVariant, ServerStrategy};
