use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ProtocolError;

/// The six SecureNAND protocol variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtocolVariant {
    /// Client prepares the padded, pre-rotated gadget state; server measures X⊗X⊗X.
    #[serde(rename = "ghz-prep")]
    GhzPreparingClient,
    /// Server sends the gadget state; client measures P^a ⊗ P^b ⊗ P^{a⊕b}.
    #[serde(rename = "ghz-meas")]
    GhzMeasuringClient,
    /// Server sends the gadget state, client rotates and pads all three qubits
    /// and returns them for an X⊗X⊗X measurement.
    #[serde(rename = "ghz-bounce")]
    GhzBounce,
    /// Server sends `|+⟩`, client applies `Z^r S^a S^b (S†)^{a⊕b}` and returns it.
    #[serde(rename = "sq-bounce")]
    SingleQubitBounce,
    /// Client prepares `Z^r S^a S^b (S†)^{a⊕b}|+⟩` and sends it.
    #[serde(rename = "sq-prep")]
    SingleQubitPreparingClient,
    /// Server sends `|+⟩`; client rotates locally and measures X.
    #[serde(rename = "sq-meas")]
    SingleQubitMeasuringClient,
}

impl ProtocolVariant {
    pub const ALL: [ProtocolVariant; 6] = [
        Self::GhzPreparingClient,
        Self::GhzMeasuringClient,
        Self::GhzBounce,
        Self::SingleQubitBounce,
        Self::SingleQubitPreparingClient,
        Self::SingleQubitMeasuringClient,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::GhzPreparingClient => "ghz-prep",
            Self::GhzMeasuringClient => "ghz-meas",
            Self::GhzBounce => "ghz-bounce",
            Self::SingleQubitBounce => "sq-bounce",
            Self::SingleQubitPreparingClient => "sq-prep",
            Self::SingleQubitMeasuringClient => "sq-meas",
        }
    }

    /// Qubits carried by the gadget (3 for GHZ variants, 1 otherwise).
    pub fn gadget_qubits(self) -> usize {
        if self.is_ghz() {
            3
        } else {
            1
        }
    }

    pub fn is_ghz(self) -> bool {
        matches!(
            self,
            Self::GhzPreparingClient | Self::GhzMeasuringClient | Self::GhzBounce
        )
    }

    /// Number of secret pad bits the client draws.
    pub fn random_bits(self) -> usize {
        match self {
            Self::GhzPreparingClient | Self::SingleQubitBounce | Self::SingleQubitPreparingClient => 1,
            Self::GhzBounce => 3,
            Self::GhzMeasuringClient | Self::SingleQubitMeasuringClient => 0,
        }
    }

    pub fn is_bounce(self) -> bool {
        matches!(self, Self::GhzBounce | Self::SingleQubitBounce)
    }

    pub fn is_preparing(self) -> bool {
        matches!(self, Self::GhzPreparingClient | Self::SingleQubitPreparingClient)
    }

    pub fn is_measuring(self) -> bool {
        matches!(self, Self::GhzMeasuringClient | Self::SingleQubitMeasuringClient)
    }

    /// Whether the client ever sends a quantum system to the server.
    pub fn client_emits(self) -> bool {
        !self.is_measuring()
    }

    /// Whether the server supplies the initial quantum system.
    pub fn server_prepares(self) -> bool {
        !self.is_preparing()
    }
}

impl fmt::Display for ProtocolVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolVariant {
    type Err = ProtocolError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| ProtocolError::UnknownVariant(s.to_owned()))
    }
}

/// A client program: a variant plus which of its pad bits are live. Audits
/// use weakened programs (pad bits forced to zero) as negative controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClientProgram {
    pub variant: ProtocolVariant,
    /// Bit `i` set means pad bit `i` is drawn; cleared means it is forced to 0.
    pub pad_mask: u8,
}

impl ClientProgram {
    pub fn new(variant: ProtocolVariant) -> Self {
        Self {
            variant,
            pad_mask: ((1u16 << variant.random_bits()) - 1) as u8,
        }
    }

    pub fn without_pad_bit(mut self, index: usize) -> Self {
        self.pad_mask &= !(1 << index);
        self
    }

    pub fn is_weakened(&self) -> bool {
        *self != Self::new(self.variant)
    }

    /// Every pad assignment the client can draw, with forced bits held at 0.
    /// Assignments are listed once per draw, so a uniform average over the
    /// list is the client's actual average.
    pub fn pad_assignments(&self) -> Vec<Vec<u8>> {
        let n = self.variant.random_bits();
        (0..1usize << n)
            .map(|k| {
                (0..n)
                    .map(|i| ((k >> (n - 1 - i)) & 1) as u8 & ((self.pad_mask >> i) & 1))
                    .collect()
            })
            .collect()
    }
}

impl From<ProtocolVariant> for ClientProgram {
    fn from(v: ProtocolVariant) -> Self {
        Self::new(v)
    }
}

/// Inputs and pad bits held by the client.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClientSecrets {
    pub a: u8,
    pub b: u8,
    pub r_bits: Vec<u8>,
}

impl ClientSecrets {
    pub fn new(variant: ProtocolVariant, a: u8, b: u8, r_bits: Vec<u8>) -> Result<Self, ProtocolError> {
        for (name, v) in [("a", a), ("b", b)] {
            check_bit(name, v)?;
        }
        for &r in &r_bits {
            check_bit("r", r)?;
        }
        if r_bits.len() != variant.random_bits() {
            return Err(ProtocolError::LengthMismatch {
                what: "pad bits",
                expected: variant.random_bits(),
                found: r_bits.len(),
            });
        }
        Ok(Self { a, b, r_bits })
    }

    pub fn r(&self, i: usize) -> u8 {
        self.r_bits.get(i).copied().unwrap_or(0)
    }
}

pub(crate) fn check_bit(name: &'static str, v: u8) -> Result<(), ProtocolError> {
    if v > 1 {
        Err(ProtocolError::NotABit { name, value: v })
    } else {
        Ok(())
    }
}
