use serde::{Deserialize, Serialize};

use crate::{DensityMatrix, QuantumState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    ClientToServer,
    ServerToClient,
}

/// State of the carried subsystem. Honest runs carry pure states; when the
/// carried qubits are entangled with a system the sender keeps, only the
/// reduced state is recorded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuantumPayload {
    Pure(QuantumState),
    Mixed(DensityMatrix),
}

impl QuantumPayload {
    pub fn density(&self) -> DensityMatrix {
        match self {
            Self::Pure(s) => DensityMatrix::pure(s),
            Self::Mixed(d) => d.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Payload {
    Quantum {
        /// Gadget qubit indices carried by this message.
        qubits: Vec<usize>,
        state: QuantumPayload,
    },
    Classical {
        bits: Vec<u8>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub direction: Direction,
    pub payload: Payload,
}

impl Message {
    pub fn quantum(direction: Direction, qubits: usize, state: QuantumPayload) -> Self {
        Self {
            direction,
            payload: Payload::Quantum {
                qubits: (0..qubits).collect(),
                state,
            },
        }
    }

    pub fn classical(direction: Direction, bits: Vec<u8>) -> Self {
        Self {
            direction,
            payload: Payload::Classical { bits },
        }
    }

    pub fn is_quantum(&self) -> bool {
        matches!(self.payload, Payload::Quantum { .. })
    }
}

/// Shape of one message in a variant's round structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Quantum(Direction),
    Classical(Direction),
}

impl Slot {
    pub fn matches(&self, m: &Message) -> bool {
        match (self, &m.payload) {
            (Slot::Quantum(d), Payload::Quantum { .. }) => *d == m.direction,
            (Slot::Classical(d), Payload::Classical { .. }) => *d == m.direction,
            _ => false,
        }
    }
}
