//! The client's classical capability guard.
//!
//! Every classical step the client takes, inside a protocol run or while
//! evaluating a circuit, goes through [`ClientCpu::execute`]. The policy
//! admits XOR, constants, fresh random bits and bit-memory access; anything
//! else is refused at run time and never reaches the census.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassicalOp {
    Xor,
    Const,
    RandomBit,
    Read,
    Write,
    And,
    Or,
    Nand,
}

/// Which classical operations the client may run, plus the quantum gadgets
/// it is allowed to drive for the protocol family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClientCapabilityPolicy {
    allowed: BTreeSet<ClassicalOp>,
    quantum_gadgets: Vec<String>,
}

impl ClientCapabilityPolicy {
    pub fn xor_only() -> Self {
        Self {
            allowed: [
                ClassicalOp::Xor,
                ClassicalOp::Const,
                ClassicalOp::RandomBit,
                ClassicalOp::Read,
                ClassicalOp::Write,
            ]
            .into_iter()
            .collect(),
            quantum_gadgets: vec![
                "S^a / S^dag^a phase rotations".into(),
                "Z^r pad".into(),
                "GHZ or |+> preparation (preparing variants)".into(),
                "single-qubit X/Y measurement (measuring variants)".into(),
            ],
        }
    }

    pub fn permits(&self, op: ClassicalOp) -> bool {
        self.allowed.contains(&op)
    }

    pub fn allowed(&self) -> impl Iterator<Item = ClassicalOp> + '_ {
        self.allowed.iter().copied()
    }
}

impl Default for ClientCapabilityPolicy {
    fn default() -> Self {
        Self::xor_only()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("client policy forbids {0:?}")]
    Forbidden(ClassicalOp),
    #[error("{op:?} expects {expected} operand bits, got {found}")]
    Arity {
        op: ClassicalOp,
        expected: usize,
        found: usize,
    },
    #[error("memory cell {0:?} was never written")]
    UnsetCell(String),
}

/// Count of each classical operation the client executed.
pub type OpCensus = BTreeMap<ClassicalOp, u64>;

/// XOR-restricted classical processor with an instrumented bit memory.
#[derive(Debug, Clone)]
pub struct ClientCpu {
    policy: ClientCapabilityPolicy,
    census: OpCensus,
    memory: BTreeMap<String, u8>,
}

impl Default for ClientCpu {
    fn default() -> Self {
        Self::new()
    }
}

impl ClientCpu {
    pub fn new() -> Self {
        Self {
            policy: ClientCapabilityPolicy::xor_only(),
            census: OpCensus::new(),
            memory: BTreeMap::new(),
        }
    }

    pub fn policy(&self) -> &ClientCapabilityPolicy {
        &self.policy
    }

    pub fn census(&self) -> &OpCensus {
        &self.census
    }

    /// Runs one bit-level operation if the policy admits it.
    pub fn execute(&mut self, op: ClassicalOp, operands: &[u8]) -> Result<u8, PolicyError> {
        if !self.policy.permits(op) {
            return Err(PolicyError::Forbidden(op));
        }
        let arity = match op {
            ClassicalOp::Xor => 2,
            ClassicalOp::Const => 1,
            _ => 0,
        };
        if operands.len() != arity {
            return Err(PolicyError::Arity {
                op,
                expected: arity,
                found: operands.len(),
            });
        }
        let out = match op {
            ClassicalOp::Xor => (operands[0] ^ operands[1]) & 1,
            ClassicalOp::Const => operands[0] & 1,
            _ => unreachable!("memory and randomness have dedicated entry points"),
        };
        *self.census.entry(op).or_default() += 1;
        Ok(out)
    }

    pub fn xor(&mut self, a: u8, b: u8) -> u8 {
        self.execute(ClassicalOp::Xor, &[a, b]).expect("xor is always permitted")
    }

    pub fn xor_all(&mut self, bits: &[u8]) -> u8 {
        match bits.split_first() {
            None => self.constant(0),
            Some((&first, rest)) => rest.iter().fold(first & 1, |acc, &b| self.xor(acc, b)),
        }
    }

    pub fn constant(&mut self, bit: u8) -> u8 {
        self.execute(ClassicalOp::Const, &[bit]).expect("constants are always permitted")
    }

    pub fn random_bit(&mut self, rng: &mut SeededRng) -> u8 {
        *self.census.entry(ClassicalOp::RandomBit).or_default() += 1;
        rng.bit()
    }

    pub fn write(&mut self, cell: &str, bit: u8) {
        *self.census.entry(ClassicalOp::Write).or_default() += 1;
        self.memory.insert(cell.to_owned(), bit & 1);
    }

    pub fn read(&mut self, cell: &str) -> Result<u8, PolicyError> {
        let v = *self
            .memory
            .get(cell)
            .ok_or_else(|| PolicyError::UnsetCell(cell.to_owned()))?;
        *self.census.entry(ClassicalOp::Read).or_default() += 1;
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonlinear_ops_are_refused_and_not_counted() {
        let mut cpu = ClientCpu::new();
        for op in [ClassicalOp::And, ClassicalOp::Or, ClassicalOp::Nand] {
            assert_eq!(cpu.execute(op, &[1, 1]), Err(PolicyError::Forbidden(op)));
        }
        assert!(cpu.census().is_empty());
    }

    #[test]
    fn xor_and_constants_are_counted() {
        let mut cpu = ClientCpu::new();
        assert_eq!(cpu.xor(1, 1), 0);
        assert_eq!(cpu.xor_all(&[1, 0, 1, 1]), 1);
        assert_eq!(cpu.constant(1), 1);
        assert_eq!(cpu.census()[&ClassicalOp::Xor], 4);
        assert_eq!(cpu.census()[&ClassicalOp::Const], 1);
    }

    #[test]
    fn memory_round_trip_and_unset_read() {
        let mut cpu = ClientCpu::new();
        cpu.write("w", 1);
        assert_eq!(cpu.read("w"), Ok(1));
        assert!(matches!(cpu.read("nope"), Err(PolicyError::UnsetCell(_))));
    }

    #[test]
    fn arity_is_checked() {
        let mut cpu = ClientCpu::new();
        assert!(matches!(
            cpu.execute(ClassicalOp::Xor, &[1]),
            Err(PolicyError::Arity { .. })
        ));
    }
}
