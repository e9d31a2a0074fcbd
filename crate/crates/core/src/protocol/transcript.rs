use serde::{Deserialize, Serialize};

use super::engine::decode;
use super::message::{Direction, Message, Payload, Slot};
use super::variant::{ClientSecrets, ProtocolVariant};

/// Ordered record of one protocol run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolTranscript {
    pub variant: ProtocolVariant,
    pub a: u8,
    pub b: u8,
    pub r_bits: Vec<u8>,
    pub messages: Vec<Message>,
    pub server_bits: Vec<u8>,
    pub out: u8,
    pub seed: u64,
}

/// Message shapes of a variant, in order.
pub fn round_structure(variant: ProtocolVariant) -> Vec<Slot> {
    use Direction::*;
    if variant.is_preparing() {
        vec![Slot::Quantum(ClientToServer), Slot::Classical(ServerToClient)]
    } else if variant.is_bounce() {
        vec![
            Slot::Quantum(ServerToClient),
            Slot::Quantum(ClientToServer),
            Slot::Classical(ServerToClient),
        ]
    } else {
        vec![Slot::Quantum(ServerToClient)]
    }
}

impl ProtocolTranscript {
    pub fn secrets(&self) -> ClientSecrets {
        ClientSecrets {
            a: self.a,
            b: self.b,
            r_bits: self.r_bits.clone(),
        }
    }

    /// Recomputes the client's decode from the recorded bits.
    pub fn decode_holds(&self) -> bool {
        decode(self.variant, &self.server_bits, &self.secrets()) == Ok(self.out)
    }

    /// Messages match the variant's round structure, quantum messages carry
    /// exactly the gadget qubits, and the classical reply is `server_bits`.
    pub fn well_formed(&self) -> bool {
        let slots = round_structure(self.variant);
        let g = self.variant.gadget_qubits();
        slots.len() == self.messages.len()
            && slots.iter().zip(&self.messages).all(|(s, m)| s.matches(m))
            && self.messages.iter().all(|m| match &m.payload {
                Payload::Quantum { qubits, state } => {
                    *qubits == (0..g).collect::<Vec<_>>() && state.density().num_qubits() == g
                }
                Payload::Classical { bits } => *bits == self.server_bits,
            })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("transcripts always serialise")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{run_protocol, ServerStrategy};
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn json_round_trip_is_exact(v in 0usize..6, a in 0u8..2, b in 0u8..2, seed in any::<u64>()) {
            let t = run_protocol(ProtocolVariant::ALL[v], a, b, seed, &ServerStrategy::Honest).unwrap();
            let json = t.to_json();
            let back = ProtocolTranscript::from_json(&json).unwrap();
            prop_assert_eq!(&back, &t);
            prop_assert_eq!(back.to_json(), json);
        }
    }

    #[test]
    fn tampered_out_breaks_decode() {
        let mut t = run_protocol(ProtocolVariant::GhzBounce, 1, 0, 42, &ServerStrategy::Honest).unwrap();
        assert!(t.decode_holds());
        t.out ^= 1;
        assert!(!t.decode_holds());
    }

    #[test]
    fn extra_message_breaks_well_formedness() {
        let mut t = run_protocol(ProtocolVariant::GhzMeasuringClient, 0, 1, 1, &ServerStrategy::Honest).unwrap();
        assert!(t.well_formed());
        t.messages.push(Message::classical(Direction::ClientToServer, vec![0]));
        assert!(!t.well_formed());
    }
}
