//! State machines for the six protocol variants.

pub mod engine;
pub mod message;
pub mod strategy;
pub mod transcript;
pub mod variant;

use thiserror::Error;

use crate::delegation::policy::PolicyError;
use crate::qsim::QsimError;

pub use engine::{
    bounce_client_transform, choi_of_client_map, client_unitaries, client_encode_ghz, decode, decode_with, honest_measurement,
    measuring_client_bases, resource_state, run_program, run_protocol, single_qubit_client_transform,
};
pub use message::{Direction, Message, Payload, QuantumPayload, Slot};
pub use strategy::{MaliciousServer, Povm, PreparedState, ServerStrategy, MAX_ANCILLAS};
pub use transcript::ProtocolTranscript;
pub use variant::{ClientProgram, ClientSecrets, ProtocolVariant};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("unknown protocol variant {0:?}")]
    UnknownVariant(String),
    #[error("{what}: expected {expected} bits, found {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{name} must be 0 or 1, got {value}")]
    NotABit { name: &'static str, value: u8 },
    #[error("strategy does not fit the variant: {0}")]
    IncompatibleStrategy(String),
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("{0} has no client transform phase")]
    NoClientTransform(ProtocolVariant),
    #[error("{0} sends no quantum state from client to server")]
    NoEmission(ProtocolVariant),
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
}
