//! Server strategies used by the leakage audits.

use crate::protocol::{MaliciousServer, Povm, PreparedState, ProtocolVariant, ServerStrategy, MAX_ANCILLAS};
use crate::qsim::gates::tensor_all;
use crate::qsim::gates::ObservableBasis::{self, MeasX, MeasY};
use crate::qsim::scalar::C;
use crate::random::random_density;
use crate::rng::SeededRng;
use crate::{DensityMatrix, Matrix, QuantumState};

fn reply_prefix(g: usize) -> impl Fn(&[u8]) -> Vec<u8> {
    move |r: &[u8]| r[..g].to_vec()
}

/// Every sent qubit but the last is half of a Bell pair whose other half the
/// server keeps (at most [`MAX_ANCILLAS`] pairs); the rest are `|+⟩`. The
/// server then measures everything it holds in fixed Pauli bases.
pub fn entangler(variant: ProtocolVariant) -> ServerStrategy {
    let g = variant.gadget_qubits();
    if variant.is_preparing() {
        return ServerStrategy::Malicious(MaliciousServer {
            label: "Y-basis probe of the emission".into(),
            prepared: None,
            povm: Some(Povm::pauli(&vec![MeasY; g], 0)),
        });
    }
    let pairs = g.clamp(1, MAX_ANCILLAS);
    let pairs = if g == 1 { 1 } else { pairs };
    let n = g + pairs;
    let norm = (1.0 / (1u64 << g) as f64).sqrt();
    let mut amps = vec![C::new(0.0, 0.0); 1 << n];
    for x in 0..1usize << g {
        let anc = x >> (g - pairs);
        amps[(x << pairs) | anc] = C::new(norm, 0.0);
    }
    let state = DensityMatrix::pure(&QuantumState::new(n, amps).expect("normalised"));
    let bases: Vec<ObservableBasis> = (0..n).map(|q| if q % 2 == 0 { MeasX } else { MeasY }).collect();
    let povm = if variant.is_measuring() {
        Povm::pauli(&bases[g..], 0).relabel(|_| Vec::new())
    } else {
        Povm::pauli(&bases, 0).relabel(reply_prefix(g))
    };
    ServerStrategy::Malicious(MaliciousServer {
        label: format!("{pairs} Bell pair(s) shared with the sent qubits"),
        prepared: Some(PreparedState { state, sent_qubits: g }),
        povm: Some(povm),
    })
}

/// Random prepared state (random rank, up to [`MAX_ANCILLAS`] ancillas) and
/// random POVM with random replies.
pub fn random_malicious(variant: ProtocolVariant, rng: &mut SeededRng) -> ServerStrategy {
    let g = variant.gadget_qubits();
    let outcomes = 2 + (rng.next_u64() % 7) as usize;
    if variant.is_preparing() {
        return ServerStrategy::Malicious(MaliciousServer {
            label: "random POVM".into(),
            prepared: None,
            povm: Some(Povm::random(rng, 1 << g, outcomes, g)),
        });
    }
    let ancillas = (rng.next_u64() % (MAX_ANCILLAS as u64 + 1)) as usize;
    let rank = 1 + (rng.next_u64() % 4) as usize;
    let state = random_density(rng, g + ancillas, rank);
    let (dim, reply) = if variant.is_measuring() {
        (1 << ancillas, 0)
    } else {
        (state.dim(), g)
    };
    ServerStrategy::Malicious(MaliciousServer {
        label: format!("random rank-{rank} state with {ancillas} ancilla(s), random POVM"),
        prepared: Some(PreparedState { state, sent_qubits: g }),
        povm: Some(Povm::random(rng, dim, outcomes, reply)),
    })
}

/// Attack on a bounce run whose pads on qubits 2 and 3 are missing: send
/// `|+++⟩` and measure qubits 2 and 3 along `(X + Y)/√2`, which separates
/// `|+⟩` from `(S†)|+⟩` as well as one copy allows. The replies are the two
/// guesses for `b` and `a⊕b`.
pub fn pad_probe() -> ServerStrategy {
    let plus = crate::qsim::make_plus::<f64>();
    let state = plus.tensor(&plus).and_then(|s| s.tensor(&plus)).expect("three qubits");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let diag = (&MeasX.observable::<f64>() + &MeasY.observable()).scale_real(h);
    let proj = |s: u8| {
        let sign = if s == 0 { 0.5 } else { -0.5 };
        &Matrix::identity(2).scale_real(0.5) + &diag.scale_real(sign)
    };
    let (elements, replies) = [(0, 0), (0, 1), (1, 0), (1, 1)]
        .into_iter()
        .map(|(s2, s3)| (tensor_all(&[Matrix::identity(2), proj(s2), proj(s3)]), vec![0, s2, s3]))
        .unzip();
    ServerStrategy::Malicious(MaliciousServer {
        label: "|+++> probe, qubits 2 and 3 measured along (X+Y)/sqrt2".into(),
        prepared: Some(PreparedState {
            state: DensityMatrix::pure(&state),
            sent_qubits: 3,
        }),
        povm: Some(Povm::new(elements, replies).expect("projective measurement")),
    })
}
