//! Client programs, the honest server, and the round driver.
//!
//! Every classical step of the client (computing `a⊕b`, drawing pads,
//! decoding) runs on a [`ClientCpu`], so protocol runs are subject to the
//! same XOR-only guard as circuit evaluation.

use super::message::{Direction, Message, QuantumPayload};
use super::strategy::{ServerStrategy, MAX_ANCILLAS};
use super::transcript::ProtocolTranscript;
use super::variant::{check_bit, ClientProgram, ClientSecrets, ProtocolVariant};
use super::ProtocolError;
use crate::delegation::policy::ClientCpu;
use crate::qsim::gates::{tensor_all, GateKind, ObservableBasis};
use crate::qsim::ghz::{make_ghz, make_plus};
use crate::qsim::measure::{measure_observables_mixed, sample_index, sample_with};
use crate::qsim::{choi_of_unitary_mixture, QsimError};
use crate::rng::SeededRng;
use crate::{ChoiMatrix, DensityMatrix, Matrix, QuantumState};

use ProtocolVariant::*;

/// `Z^r (S†)^e` on one gadget qubit.
fn padded_rotation(e: u8, r: u8) -> Matrix {
    &GateKind::ZPower(r).matrix() * &GateKind::SDaggerPower(e).matrix()
}

fn ghz_unitary(a: u8, b: u8, c: u8, r: [u8; 3]) -> Matrix {
    tensor_all(&[
        padded_rotation(a, r[0]),
        padded_rotation(b, r[1]),
        padded_rotation(c, r[2]),
    ])
}

/// `Z^r S^a S^b (S†)^c`
fn single_qubit_unitary(a: u8, b: u8, c: u8, r: u8) -> Matrix {
    [
        GateKind::ZPower(r),
        GateKind::SPower(a),
        GateKind::SPower(b),
        GateKind::SDaggerPower(c),
    ]
    .iter()
    .fold(Matrix::identity(2), |acc, g| &acc * &g.matrix())
}

/// The client's unitary for one pad assignment, with `c = a⊕b` already
/// computed. Identity for the GHZ measuring client, who only picks bases.
pub(crate) fn client_unitary(variant: ProtocolVariant, a: u8, b: u8, c: u8, r: &[u8]) -> Matrix {
    let ri = |i: usize| r.get(i).copied().unwrap_or(0);
    match variant {
        GhzPreparingClient => ghz_unitary(a, b, c, [ri(0), 0, 0]),
        GhzBounce => ghz_unitary(a, b, c, [ri(0), ri(1), ri(2)]),
        GhzMeasuringClient => Matrix::identity(8),
        SingleQubitBounce | SingleQubitPreparingClient | SingleQubitMeasuringClient => {
            single_qubit_unitary(a, b, c, ri(0))
        }
    }
}

/// One client unitary per pad assignment the program can draw.
pub fn client_unitaries(program: ClientProgram, a: u8, b: u8) -> Vec<Matrix> {
    program
        .pad_assignments()
        .iter()
        .map(|r| client_unitary(program.variant, a, b, a ^ b, r))
        .collect()
}

/// The state an honest party starts from: the gadget state or `|+⟩`.
pub fn resource_state(variant: ProtocolVariant) -> QuantumState {
    if variant.is_ghz() {
        make_ghz()
    } else {
        make_plus()
    }
}

pub fn measuring_client_bases(a: u8, b: u8) -> Vec<ObservableBasis> {
    [a, b, a ^ b].into_iter().map(ObservableBasis::from_bit).collect()
}

fn x_bases(n: usize) -> Vec<ObservableBasis> {
    vec![ObservableBasis::MeasX; n]
}

/// Bases of the final measurement in an honest run.
fn final_bases(variant: ProtocolVariant, a: u8, b: u8) -> Vec<ObservableBasis> {
    match variant {
        GhzMeasuringClient => measuring_client_bases(a, b),
        _ => x_bases(variant.gadget_qubits()),
    }
}

fn expect_pads(secrets: &ClientSecrets, n: usize) -> Result<(), ProtocolError> {
    check_bit("a", secrets.a)?;
    check_bit("b", secrets.b)?;
    if secrets.r_bits.len() != n {
        return Err(ProtocolError::LengthMismatch {
            what: "pad bits",
            expected: n,
            found: secrets.r_bits.len(),
        });
    }
    secrets.r_bits.iter().try_for_each(|&r| check_bit("r", r))
}

/// `Z₁^r (S₁†)^a (S₂†)^b (S₃†)^{a⊕b} |Ψ⟩`
pub fn client_encode_ghz(secrets: &ClientSecrets) -> Result<QuantumState, ProtocolError> {
    expect_pads(secrets, 1)?;
    let (a, b) = (secrets.a, secrets.b);
    let u = client_unitary(GhzPreparingClient, a, b, a ^ b, &secrets.r_bits);
    Ok(make_ghz().apply_unitary(&u)?)
}

fn transform_leading(
    variant: ProtocolVariant,
    incoming: &DensityMatrix,
    secrets: &ClientSecrets,
) -> Result<DensityMatrix, ProtocolError> {
    expect_pads(secrets, variant.random_bits())?;
    let g = variant.gadget_qubits();
    if incoming.num_qubits() < g || incoming.num_qubits() - g > MAX_ANCILLAS {
        return Err(QsimError::DimensionMismatch {
            expected: 1 << g,
            found: incoming.dim(),
        }
        .into());
    }
    let (a, b) = (secrets.a, secrets.b);
    Ok(incoming.evolve_leading(&client_unitary(variant, a, b, a ^ b, &secrets.r_bits))?)
}

/// GHZ bounce client step on the leading three qubits of `incoming`; any
/// trailing qubits are the server's and are left alone.
pub fn bounce_client_transform(incoming: &DensityMatrix, secrets: &ClientSecrets) -> Result<DensityMatrix, ProtocolError> {
    transform_leading(GhzBounce, incoming, secrets)
}

/// `Z^r S^a S^b (S†)^{a⊕b}` on the leading qubit of `incoming`.
pub fn single_qubit_client_transform(
    incoming: &DensityMatrix,
    secrets: &ClientSecrets,
) -> Result<DensityMatrix, ProtocolError> {
    transform_leading(SingleQubitBounce, incoming, secrets)
}

/// The client's XOR decode, on a fresh processor.
pub fn decode(variant: ProtocolVariant, server_bits: &[u8], secrets: &ClientSecrets) -> Result<u8, ProtocolError> {
    decode_with(&mut ClientCpu::new(), variant, server_bits, secrets)
}

pub fn decode_with(
    cpu: &mut ClientCpu,
    variant: ProtocolVariant,
    server_bits: &[u8],
    secrets: &ClientSecrets,
) -> Result<u8, ProtocolError> {
    expect_pads(secrets, variant.random_bits())?;
    if server_bits.len() != variant.gadget_qubits() {
        return Err(ProtocolError::LengthMismatch {
            what: "server bits",
            expected: variant.gadget_qubits(),
            found: server_bits.len(),
        });
    }
    server_bits.iter().try_for_each(|&s| check_bit("server bit", s))?;
    let s = cpu.xor_all(server_bits);
    Ok(match variant {
        GhzMeasuringClient => s,
        GhzPreparingClient | GhzBounce => {
            let pad = cpu.xor_all(&secrets.r_bits);
            cpu.xor(s, pad)
        }
        SingleQubitBounce | SingleQubitPreparingClient => {
            let padded = cpu.xor(s, secrets.r_bits[0]);
            let one = cpu.constant(1);
            cpu.xor(padded, one)
        }
        SingleQubitMeasuringClient => {
            let one = cpu.constant(1);
            cpu.xor(s, one)
        }
    })
}

/// The state measured at the end of an honest run and the bases used.
pub fn honest_measurement(
    variant: ProtocolVariant,
    secrets: &ClientSecrets,
) -> Result<(QuantumState, Vec<ObservableBasis>), ProtocolError> {
    expect_pads(secrets, variant.random_bits())?;
    let (a, b) = (secrets.a, secrets.b);
    let u = client_unitary(variant, a, b, a ^ b, &secrets.r_bits);
    let state = resource_state(variant).apply_unitary(&u)?;
    Ok((state, final_bases(variant, a, b)))
}

pub(crate) fn validate_strategy(variant: ProtocolVariant, strategy: &ServerStrategy) -> Result<(), ProtocolError> {
    let m = match strategy {
        ServerStrategy::Honest => return Ok(()),
        ServerStrategy::Malicious(m) => m,
    };
    let bad = |msg: String| Err(ProtocolError::IncompatibleStrategy(format!("{variant}: {msg}")));
    let g = variant.gadget_qubits();
    let held_dim = if variant.is_preparing() {
        if m.prepared.is_some() {
            return bad("the client prepares the quantum system".into());
        }
        1 << g
    } else {
        let Some(p) = &m.prepared else {
            return bad("the server must supply the initial state".into());
        };
        if p.sent_qubits != g || p.state.num_qubits() < g {
            return bad(format!("expected {g} sent qubits, got {}", p.sent_qubits));
        }
        if p.ancillas() > MAX_ANCILLAS {
            return bad(format!("{} ancillas exceed the cap of {MAX_ANCILLAS}", p.ancillas()));
        }
        if variant.is_measuring() {
            1 << p.ancillas()
        } else {
            p.state.dim()
        }
    };
    match (&m.povm, variant.is_measuring()) {
        (None, true) => Ok(()),
        (None, false) => bad("a measurement is required".into()),
        (Some(povm), _) if povm.dim() != held_dim => {
            bad(format!("POVM acts on dimension {} but the server holds {held_dim}", povm.dim()))
        }
        (Some(povm), true) if povm.replies().iter().any(|r| !r.is_empty()) => {
            bad("the server sends nothing back in a measuring-client run".into())
        }
        (Some(povm), false) if povm.replies().iter().any(|r| r.len() != g || r.iter().any(|&x| x > 1)) => {
            bad(format!("every reply must be {g} bits"))
        }
        _ => Ok(()),
    }
}

/// What the sender hands over: the pure state in honest runs, otherwise the
/// reduced state of the leading `g` qubits.
fn carried(full: &DensityMatrix, pure: Option<&QuantumState>, g: usize) -> Result<QuantumPayload, ProtocolError> {
    Ok(match pure {
        Some(psi) => QuantumPayload::Pure(psi.clone()),
        None if full.num_qubits() == g => QuantumPayload::Mixed(full.clone()),
        None => QuantumPayload::Mixed(full.partial_trace(&(0..g).collect::<Vec<_>>())?),
    })
}

fn server_measure(
    strategy: &ServerStrategy,
    held: &DensityMatrix,
    g: usize,
    rng: &mut SeededRng,
) -> Result<Vec<u8>, ProtocolError> {
    match strategy {
        ServerStrategy::Honest => Ok(sample_with(&measure_observables_mixed(held, &x_bases(g))?, rng)),
        ServerStrategy::Malicious(m) => {
            let povm = m.povm.as_ref().expect("validated");
            let k = sample_index(&povm.probabilities(held), rng);
            Ok(povm.replies()[k].clone())
        }
    }
}

/// Runs one variant end to end with a fresh client processor.
pub fn run_protocol(
    variant: ProtocolVariant,
    a: u8,
    b: u8,
    seed: u64,
    strategy: &ServerStrategy,
) -> Result<ProtocolTranscript, ProtocolError> {
    run_program(&mut ClientCpu::new(), ClientProgram::new(variant), a, b, seed, strategy)
}

/// Runs `program` with the client's classical work on `cpu`. The seed feeds
/// the pad draws first, then outcome sampling.
///
/// For measuring-client variants the recorded `server_bits` are the
/// client's own outcomes; nothing goes back to the server.
pub fn run_program(
    cpu: &mut ClientCpu,
    program: ClientProgram,
    a: u8,
    b: u8,
    seed: u64,
    strategy: &ServerStrategy,
) -> Result<ProtocolTranscript, ProtocolError> {
    let variant = program.variant;
    check_bit("a", a)?;
    check_bit("b", b)?;
    validate_strategy(variant, strategy)?;
    let g = variant.gadget_qubits();
    let mut rng = SeededRng::new(seed);

    let c = cpu.xor(a, b);
    let r_bits: Vec<u8> = (0..variant.random_bits())
        .map(|i| {
            if (program.pad_mask >> i) & 1 == 1 {
                cpu.random_bit(&mut rng)
            } else {
                cpu.constant(0)
            }
        })
        .collect();
    let u = client_unitary(variant, a, b, c, &r_bits);
    let mut messages = Vec::with_capacity(3);

    let server_bits = if variant.is_preparing() {
        let psi = resource_state(variant).apply_unitary(&u)?;
        messages.push(Message::quantum(Direction::ClientToServer, g, QuantumPayload::Pure(psi.clone())));
        server_measure(strategy, &DensityMatrix::pure(&psi), g, &mut rng)?
    } else {
        let (held, pure) = match strategy {
            ServerStrategy::Honest => {
                let psi = resource_state(variant);
                (DensityMatrix::pure(&psi), Some(psi))
            }
            ServerStrategy::Malicious(m) => (m.prepared.as_ref().expect("validated").state.clone(), None),
        };
        messages.push(Message::quantum(Direction::ServerToClient, g, carried(&held, pure.as_ref(), g)?));
        if variant.is_bounce() {
            let returned = held.evolve_leading(&u)?;
            let returned_pure = pure.map(|p| p.apply_unitary(&u)).transpose()?;
            messages.push(Message::quantum(
                Direction::ClientToServer,
                g,
                carried(&returned, returned_pure.as_ref(), g)?,
            ));
            server_measure(strategy, &returned, g, &mut rng)?
        } else {
            let local = match carried(&held, None, g)? {
                QuantumPayload::Mixed(d) => d,
                QuantumPayload::Pure(_) => unreachable!(),
            };
            let bases = match variant {
                GhzMeasuringClient => [a, b, c].into_iter().map(ObservableBasis::from_bit).collect(),
                _ => x_bases(g),
            };
            let local = local.evolve(&u)?;
            sample_with(&measure_observables_mixed(&local, &bases)?, &mut rng)
        }
    };
    if !variant.is_measuring() {
        messages.push(Message::classical(Direction::ServerToClient, server_bits.clone()));
    }

    let secrets = ClientSecrets { a, b, r_bits };
    let out = decode_with(cpu, variant, &server_bits, &secrets)?;
    Ok(ProtocolTranscript {
        variant,
        a,
        b,
        r_bits: secrets.r_bits,
        messages,
        server_bits,
        out,
        seed,
    })
}

/// Choi matrix of the client's step in a bounce variant, averaged over
/// every pad assignment the program draws.
pub fn choi_of_client_map(program: impl Into<ClientProgram>, a: u8, b: u8) -> Result<ChoiMatrix, ProtocolError> {
    let program = program.into();
    if !program.variant.is_bounce() {
        return Err(ProtocolError::NoClientTransform(program.variant));
    }
    check_bit("a", a)?;
    check_bit("b", b)?;
    let us = client_unitaries(program, a, b);
    let w = vec![1.0 / us.len() as f64; us.len()];
    Ok(choi_of_unitary_mixture(&us, &w)?)
}
