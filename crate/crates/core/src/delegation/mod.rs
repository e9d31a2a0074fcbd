//! Circuit delegation over the NAND protocols.

pub mod circuit;
pub mod evaluate;
pub mod policy;
pub mod samples;

pub use circuit::{BooleanCircuit, Gate, GateDef, ParseError};
pub use evaluate::{circuit_id, evaluate_delegated, evaluate_plain, DelegationError, DelegationTrace, GateRun};
pub use policy::{ClassicalOp, ClientCapabilityPolicy, ClientCpu, OpCensus, PolicyError};
