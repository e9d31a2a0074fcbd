//! Plain and delegated circuit evaluation.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::circuit::{BooleanCircuit, Gate};
use super::policy::{ClassicalOp, ClientCpu, OpCensus, PolicyError};
use crate::protocol::{run_program, ClientProgram, ProtocolError, ProtocolTranscript, ProtocolVariant, ServerStrategy};
use crate::rng::SeededRng;

#[derive(Debug, Error)]
pub enum DelegationError {
    #[error("circuit declares {expected} input(s), got {found}")]
    Arity { expected: usize, found: usize },
    #[error("input {index} is {value}, not a bit")]
    NotABit { index: usize, value: u8 },
    #[error("gate {0} must be lowered before delegation")]
    NotLowered(String),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

fn check_inputs(circuit: &BooleanCircuit, inputs: &[u8]) -> Result<(), DelegationError> {
    if inputs.len() != circuit.num_inputs() {
        return Err(DelegationError::Arity {
            expected: circuit.num_inputs(),
            found: inputs.len(),
        });
    }
    match inputs.iter().position(|&v| v > 1) {
        Some(index) => Err(DelegationError::NotABit {
            index,
            value: inputs[index],
        }),
        None => Ok(()),
    }
}

pub fn evaluate_plain(circuit: &BooleanCircuit, inputs: &[u8]) -> Result<Vec<u8>, DelegationError> {
    check_inputs(circuit, inputs)?;
    let mut wire = vec![0u8; circuit.num_wires()];
    for (&w, &v) in circuit.input_ids().iter().zip(inputs) {
        wire[w] = v;
    }
    for g in circuit.gates() {
        wire[g.output] = match g.gate {
            Gate::Nand(x, y) => 1 ^ (wire[x] & wire[y]),
            Gate::Xor(x, y) => wire[x] ^ wire[y],
            Gate::And(x, y) => wire[x] & wire[y],
            Gate::Not(x) => 1 ^ wire[x],
            Gate::Const(b) => b,
        };
    }
    Ok(circuit.output_ids().iter().map(|&w| wire[w]).collect())
}

/// One delegated NAND.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateRun {
    pub gate: usize,
    pub wire: String,
    pub transcript: ProtocolTranscript,
}

/// Only [`evaluate_delegated`] builds these, so the census always reflects
/// every classical step taken for the outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelegationTrace {
    circuit_id: String,
    variant: ProtocolVariant,
    seed: u64,
    runs: Vec<GateRun>,
    outputs: Vec<u8>,
    census: OpCensus,
}

impl DelegationTrace {
    pub fn circuit_id(&self) -> &str {
        &self.circuit_id
    }

    pub fn variant(&self) -> ProtocolVariant {
        self.variant
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn runs(&self) -> &[GateRun] {
        &self.runs
    }

    pub fn transcripts(&self) -> impl Iterator<Item = &ProtocolTranscript> {
        self.runs.iter().map(|r| &r.transcript)
    }

    pub fn outputs(&self) -> &[u8] {
        &self.outputs
    }

    pub fn census(&self) -> &OpCensus {
        &self.census
    }

    pub fn count(&self, op: ClassicalOp) -> u64 {
        self.census.get(&op).copied().unwrap_or(0)
    }
}

/// FNV-1a over the canonical text; stable across builds and platforms.
pub fn circuit_id(circuit: &BooleanCircuit) -> String {
    let hash = circuit
        .to_string()
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3));
    format!("{hash:016x}")
}

/// Evaluates a lowered circuit, running one honest protocol instance per
/// NAND. Each run gets its own seed from a stream keyed by `seed`, so its
/// pads are fresh draws.
pub fn evaluate_delegated(
    circuit: &BooleanCircuit,
    inputs: &[u8],
    variant: ProtocolVariant,
    seed: u64,
) -> Result<DelegationTrace, DelegationError> {
    check_inputs(circuit, inputs)?;
    if let Some(g) = circuit.gates().iter().find(|g| matches!(g.gate, Gate::Not(_) | Gate::And(..))) {
        return Err(DelegationError::NotLowered(circuit.wire_name(g.output).to_owned()));
    }
    let mut cpu = ClientCpu::new();
    let mut seeds = SeededRng::new(seed);
    let name = |w: usize| circuit.wire_name(w);
    for (&w, &v) in circuit.input_ids().iter().zip(inputs) {
        cpu.write(name(w), v);
    }
    let mut runs = Vec::with_capacity(circuit.nand_count());
    for (i, g) in circuit.gates().iter().enumerate() {
        let value = match g.gate {
            Gate::Const(b) => cpu.constant(b),
            Gate::Xor(x, y) => {
                let (p, q) = (cpu.read(name(x))?, cpu.read(name(y))?);
                cpu.xor(p, q)
            }
            Gate::Nand(x, y) => {
                let (p, q) = (cpu.read(name(x))?, cpu.read(name(y))?);
                let t = run_program(
                    &mut cpu,
                    ClientProgram::new(variant),
                    p,
                    q,
                    seeds.next_u64(),
                    &ServerStrategy::Honest,
                )?;
                let out = t.out;
                runs.push(GateRun {
                    gate: i,
                    wire: name(g.output).to_owned(),
                    transcript: t,
                });
                out
            }
            Gate::Not(_) | Gate::And(..) => unreachable!("checked above"),
        };
        cpu.write(name(g.output), value);
    }
    let outputs = circuit
        .output_ids()
        .iter()
        .map(|&w| cpu.read(name(w)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DelegationTrace {
        circuit_id: circuit_id(circuit),
        variant,
        seed,
        runs,
        outputs,
        census: cpu.census().clone(),
    })
}
