use serde::{Deserialize, Serialize};

use super::ProtocolError;
use crate::qsim::gates::{tensor_all, ObservableBasis};
use crate::qsim::measure::bits_of;
use crate::qsim::{tolerance, PSD_TOL};
use crate::rng::SeededRng;
use crate::{DensityMatrix, Matrix};

/// Most ancilla qubits a malicious server may keep.
pub const MAX_ANCILLAS: usize = 2;

/// Generalised measurement with a classical reply attached to each outcome.
/// The reply is what the server sends back; relabelling outcomes models any
/// deviation in the server's classical message.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Povm {
    elements: Vec<Matrix>,
    replies: Vec<Vec<u8>>,
}

impl Povm {
    /// Checks every element is PSD and the elements sum to the identity,
    /// both within `1e-10`.
    pub fn new(elements: Vec<Matrix>, replies: Vec<Vec<u8>>) -> Result<Self, ProtocolError> {
        let first = elements
            .first()
            .ok_or_else(|| ProtocolError::InvalidPovm("no elements".into()))?;
        let d = first.dim();
        if replies.len() != elements.len() {
            return Err(ProtocolError::InvalidPovm(format!(
                "{} elements but {} replies",
                elements.len(),
                replies.len()
            )));
        }
        let tol = tolerance::<f64>(PSD_TOL);
        let mut sum = Matrix::zeros(d);
        for (k, e) in elements.iter().enumerate() {
            if e.dim() != d {
                return Err(ProtocolError::InvalidPovm(format!("element {k} has dimension {}", e.dim())));
            }
            if !e.is_hermitian(tol) || e.hermitian_eigenvalues()[0] < -tol {
                return Err(ProtocolError::InvalidPovm(format!("element {k} is not positive")));
            }
            sum = &sum + e;
        }
        if !sum.approx_eq(&Matrix::identity(d), tol) {
            return Err(ProtocolError::InvalidPovm("elements do not sum to the identity".into()));
        }
        Ok(Self { elements, replies })
    }

    /// Per-qubit Pauli measurement of the leading qubits, identity on
    /// `ancillas` trailing qubits. Replies are the outcome bits.
    pub fn pauli(bases: &[ObservableBasis], ancillas: usize) -> Self {
        let n = bases.len();
        let anc = Matrix::identity(1 << ancillas);
        let (elements, replies) = (0..1usize << n)
            .map(|k| {
                let bits = bits_of(k, n);
                let factors: Vec<Matrix> = bases.iter().zip(&bits).map(|(b, &o)| b.projector(o)).collect();
                (tensor_all(&factors).kron(&anc), bits)
            })
            .unzip();
        Self { elements, replies }
    }

    /// The one-outcome measurement that learns nothing.
    pub fn trivial(dim: usize) -> Self {
        Self {
            elements: vec![Matrix::identity(dim)],
            replies: vec![vec![]],
        }
    }

    /// Random POVM with `outcomes` elements on `dim` levels, normalised as
    /// `Eₖ = G^{-1/2} Aₖ Aₖ† G^{-1/2}` from complex Gaussian `Aₖ`. Replies are
    /// drawn uniformly from `reply_len`-bit strings.
    pub fn random(rng: &mut SeededRng, dim: usize, outcomes: usize, reply_len: usize) -> Self {
        let raw: Vec<Matrix> = (0..outcomes)
            .map(|_| {
                let a = crate::random::gaussian_matrix(rng, dim);
                &a * &a.adjoint()
            })
            .collect();
        let g = raw.iter().fold(Matrix::zeros(dim), |acc, e| &acc + e);
        let gi = g.psd_inv_sqrt(1e-12);
        let elements = raw.iter().map(|e| &(&gi * e) * &gi).collect();
        let replies = (0..outcomes)
            .map(|_| (0..reply_len).map(|_| rng.bit()).collect())
            .collect();
        Self { elements, replies }
    }

    /// Same measurement with every reply rewritten by `f`.
    pub fn relabel(mut self, f: impl Fn(&[u8]) -> Vec<u8>) -> Self {
        self.replies = self.replies.iter().map(|r| f(r)).collect();
        self
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn replies(&self) -> &[Vec<u8>] {
        &self.replies
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn probabilities(&self, rho: &DensityMatrix) -> Vec<f64> {
        self.elements.iter().map(|e| rho.expectation(e).max(0.0)).collect()
    }
}

/// State prepared by a malicious server: the leading `sent_qubits` go to the
/// client, the rest stay with the server.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreparedState {
    pub state: DensityMatrix,
    pub sent_qubits: usize,
}

impl PreparedState {
    pub fn ancillas(&self) -> usize {
        self.state.num_qubits() - self.sent_qubits
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaliciousServer {
    pub label: String,
    /// Initial state for variants in which the server supplies the quantum
    /// system; must be absent for preparing-client variants.
    pub prepared: Option<PreparedState>,
    /// Measurement on everything the server holds after the client's round.
    pub povm: Option<Povm>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ServerStrategy {
    Honest,
    Malicious(MaliciousServer),
}

impl ServerStrategy {
    pub fn describe(&self) -> String {
        match self {
            Self::Honest => "honest".into(),
            Self::Malicious(m) => format!("malicious: {}", m.label),
        }
    }
}
