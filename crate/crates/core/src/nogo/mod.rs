//! Bounded checks of the impossibility results: the XOR-client classical
//! no-go and the quantum-offline (QO2) SecureAND no-go.

pub mod affine;
pub mod classical;
pub mod qo2;

use thiserror::Error;

use crate::qsim::QsimError;

pub use affine::{AffineMap, TruthTable};
pub use classical::{
    analytic_count, classical_blindness_holds, classical_correctness_holds, search_classical_nogo, ClassicalProtocolCandidate,
    NogoSearchResult, SearchBounds, DEFAULT_BUDGET,
};
pub use qo2::{
    blindness_leakage as qo2_blindness_leakage, check_correctness as qo2_check_correctness,
    orthogonality_matrix as qo2_orthogonality_matrix, sweep as qo2_sweep, OverlapMatrix, Qo2Candidate, Qo2Correctness,
    Qo2Summary, Qo2SweepReport, Qo2Violation, SimpleQo2Candidate,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NogoError {
    #[error("search space of {} candidates exceeds the budget of {budget}", display_estimate(*.estimate))]
    BudgetExceeded { estimate: Option<u128>, budget: u128 },
    #[error("bounds too large: {0}")]
    BoundsTooLarge(String),
    #[error("invalid candidate: {0}")]
    InvalidCandidate(String),
    #[error(transparent)]
    Qsim(#[from] QsimError),
}

fn display_estimate(e: Option<u128>) -> String {
    match e {
        Some(n) => n.to_string(),
        None => "more than 2^128".into(),
    }
}
