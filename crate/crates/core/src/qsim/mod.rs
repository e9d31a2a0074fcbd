//! Exact finite-dimensional quantum mechanics for registers of a few qubits.
//!
//! Everything here is generic over the real scalar ([`Real`]); the rest of
//! the crate runs on `f64` through the aliases exported at the crate root.
//! Qubit 0 is always the most significant index position.

pub mod channel;
pub mod conventions;
pub mod density;
pub mod discrimination;
pub mod gates;
pub mod ghz;
pub mod matrix;
pub mod measure;
pub mod scalar;
pub mod state;

use thiserror::Error;

pub use channel::{choi_of_unitary_mixture, ChoiMatrix};
pub use density::{average_states, helstrom_probability, trace_distance, uniform_mixture, DensityMatrix};
pub use discrimination::{optimal_guessing, GuessingBound};
pub use gates::{GateKind, GateOp, ObservableBasis};
pub use ghz::{make_ghz, make_plus};
pub use matrix::Matrix;
pub use measure::{measure_observables, measure_observables_mixed, sample_outcome, Distribution};
pub use scalar::Real;
pub use state::QuantumState;

/// Largest register handled. Malicious servers may hold two ancillas next to
/// the three gadget qubits.
pub const MAX_QUBITS: usize = 6;

/// Equality tolerance for audits.
pub const EQ_TOL: f64 = 1e-12;
/// Slack allowed below zero for eigenvalues of positive operators.
pub const PSD_TOL: f64 = 1e-10;

/// `base` when `T` can resolve it, otherwise a few hundred ulps of `T`.
pub fn tolerance<T: Real>(base: f64) -> T {
    T::lit(base).max(T::epsilon() * T::lit(256.0))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QsimError {
    #[error("unsupported qubit count {0} (allowed 1..={MAX_QUBITS})")]
    UnsupportedQubitCount(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state norm {0} differs from 1")]
    NotNormalized(f64),
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    InvalidQubit { index: usize, num_qubits: usize },
    #[error("{bases} measurement bases given for {qubits} qubits")]
    BasisCountMismatch { qubits: usize, bases: usize },
    #[error("matrix is not Hermitian")]
    NotHermitian,
    #[error("trace {0} differs from 1")]
    BadTrace(f64),
    #[error("negative eigenvalue {0}")]
    NotPositive(f64),
    #[error("mixture weights are invalid (sum {0})")]
    BadWeights(f64),
    #[error("empty mixture")]
    EmptyMixture,
    #[error("partial trace needs at least one kept qubit")]
    EmptyKeepSet,
}
