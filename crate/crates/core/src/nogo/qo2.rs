//! Checkers for two-round quantum-offline SecureAND protocols.
//!
//! The client prepares `ρ^{x,y}_r` from random bits, sends `(a', b') =
//! (a⊕x, b⊕y)`, the server measures `{Π^{a'b'}_0, Π^{a'b'}_1}` and the client
//! outputs the outcome XOR `r`. States are indexed `4x + 2y + r`, POVMs
//! `2a' + b'`.

use serde::{Deserialize, Serialize};

use super::NogoError;
use crate::qsim::{optimal_guessing, tolerance, uniform_mixture, GuessingBound, PSD_TOL};
use crate::random::{random_density_on, random_unitary};
use crate::rng::SeededRng;
use crate::{DensityMatrix, Matrix};

/// Tolerance of the trace condition and of the overlap test.
pub const QO2_TOL: f64 = 1e-9;
/// Tightened tolerance for re-checking a flagged overlap.
pub const RECHECK_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Qo2Candidate {
    states: Vec<DensityMatrix>,
    povms: Vec<[Matrix; 2]>,
}

fn check_povm(pair: &[Matrix; 2], dim: usize, label: &str) -> Result<(), NogoError> {
    let tol = tolerance::<f64>(PSD_TOL);
    for (o, e) in pair.iter().enumerate() {
        if e.dim() != dim || !e.is_hermitian(tol) || e.hermitian_eigenvalues()[0] < -tol {
            return Err(NogoError::InvalidCandidate(format!("{label} outcome {o} is not a positive operator on {dim} levels")));
        }
    }
    if !(&pair[0] + &pair[1]).approx_eq(&Matrix::identity(dim), tol) {
        return Err(NogoError::InvalidCandidate(format!("{label} does not sum to the identity")));
    }
    Ok(())
}

fn bit(i: usize, shift: usize) -> u8 {
    ((i >> shift) & 1) as u8
}

impl Qo2Candidate {
    pub fn new(states: Vec<DensityMatrix>, povms: Vec<[Matrix; 2]>) -> Result<Self, NogoError> {
        if states.len() != 8 || povms.len() != 4 {
            return Err(NogoError::InvalidCandidate(format!(
                "need 8 states and 4 measurements, got {} and {}",
                states.len(),
                povms.len()
            )));
        }
        let dim = states[0].dim();
        if let Some(s) = states.iter().find(|s| s.dim() != dim) {
            return Err(NogoError::InvalidCandidate(format!("state dimension {} differs from {dim}", s.dim())));
        }
        for (m, pair) in povms.iter().enumerate() {
            check_povm(pair, dim, &format!("measurement {m}"))?;
        }
        Ok(Self { states, povms })
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn povms(&self) -> &[[Matrix; 2]] {
        &self.povms
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    /// Each state occupies its own block of an orthonormal frame and each
    /// measurement projects onto the union of blocks whose required outcome
    /// is 0. `blocks[t]` lists the columns of block `t`.
    fn from_blocks(states: Vec<DensityMatrix>, blocks: &[Vec<Vec<crate::qsim::scalar::C<f64>>>]) -> Result<Self, NogoError> {
        let dim = states[0].dim();
        let povms = (0..4)
            .map(|m| {
                let mut zero = Matrix::zeros(dim);
                for (t, block) in blocks.iter().enumerate() {
                    if required_outcome(m, t) == 0 {
                        for v in block {
                            zero = &zero + &Matrix::outer(v, v);
                        }
                    }
                }
                let one = &Matrix::identity(dim) - &zero;
                [zero, one]
            })
            .collect();
        Self::new(states, povms)
    }

    /// `ρ^{x,y}_r = |xyr⟩⟨xyr|` with matching computational-basis projectors.
    pub fn positive_control() -> Self {
        let basis: Vec<Vec<Vec<_>>> = (0..8)
            .map(|t| {
                let mut v = vec![crate::qsim::scalar::C::new(0.0, 0.0); 8];
                v[t] = crate::qsim::scalar::C::new(1.0, 0.0);
                vec![v]
            })
            .collect();
        let states = basis
            .iter()
            .map(|b| DensityMatrix::new(Matrix::outer(&b[0], &b[0])).expect("basis projector"))
            .collect();
        Self::from_blocks(states, &basis).expect("valid by construction")
    }

    /// Every state equal to `I/8`, every measurement answering 0.
    pub fn constant() -> Self {
        let mixed = DensityMatrix::maximally_mixed(3).expect("three qubits");
        let povm = [Matrix::identity(8), Matrix::zeros(8)];
        Self::new(vec![mixed; 8], vec![povm; 4]).expect("valid by construction")
    }

    /// Positive control with each state depolarised: `(1−p)|xyr⟩⟨xyr| + p·I/8`,
    /// same measurements.
    pub fn depolarised_control(p: f64) -> Self {
        let base = Self::positive_control();
        let noise = Matrix::identity(8).scale_real(p / 8.0);
        let states = base
            .states
            .iter()
            .map(|s| DensityMatrix::new(&s.matrix().scale_real(1.0 - p) + &noise).expect("convex mixture"))
            .collect();
        Self::new(states, base.povms).expect("valid by construction")
    }

    /// A random correct candidate: a Haar-random frame in dimension
    /// `8·block` split into eight blocks, a random mixed state on each block,
    /// and the projective measurements they force.
    pub fn random_correct(rng: &mut SeededRng, block: usize) -> Self {
        let dim = 8 * block;
        let u = random_unitary(rng, dim);
        let blocks: Vec<Vec<Vec<_>>> = (0..8)
            .map(|t| {
                (0..block)
                    .map(|c| (0..dim).map(|i| u[(i, t * block + c)]).collect())
                    .collect()
            })
            .collect();
        let states = blocks
            .iter()
            .map(|b| DensityMatrix::new(random_density_on(rng, b)).expect("random state on a block"))
            .collect();
        Self::from_blocks(states, &blocks).expect("valid by construction")
    }
}

/// Outcome the measurement for message `m = 2a' + b'` must give on state
/// `t = 4x + 2y + r`: `(a'⊕x)(b'⊕y) ⊕ r`.
fn required_outcome(m: usize, t: usize) -> usize {
    let (ap, bp) = (bit(m, 1), bit(m, 0));
    let (x, y, r) = (bit(t, 2), bit(t, 1), bit(t, 0));
    (((ap ^ x) & (bp ^ y)) ^ r) as usize
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Qo2Violation {
    pub a_prime: u8,
    pub b_prime: u8,
    pub x: u8,
    pub y: u8,
    pub r: u8,
    /// `Tr(Π ρ)` for the outcome that should be certain.
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Qo2Correctness {
    pub holds: bool,
    pub violations: Vec<Qo2Violation>,
}

/// Checks `Tr(Π^{a'b'}_{(a'⊕x)(b'⊕y)⊕r} ρ^{x,y}_r) = 1` for all 32 tuples.
pub fn check_correctness(cand: &Qo2Candidate) -> Qo2Correctness {
    let mut violations = Vec::new();
    for m in 0..4 {
        for t in 0..8 {
            let p = cand.states[t].expectation(&cand.povms[m][required_outcome(m, t)]);
            if (p - 1.0).abs() > QO2_TOL {
                violations.push(Qo2Violation {
                    a_prime: bit(m, 1),
                    b_prime: bit(m, 0),
                    x: bit(t, 2),
                    y: bit(t, 1),
                    r: bit(t, 0),
                    probability: p,
                });
            }
        }
    }
    Qo2Correctness {
        holds: violations.is_empty(),
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapMatrix {
    /// Fidelity `F(ρ_s, ρ_t)` over the state index `4x + 2y + r`.
    pub entries: [[f64; 8]; 8],
    pub max_off_diagonal: f64,
    /// Off-diagonal pairs above [`QO2_TOL`].
    pub flagged: Vec<(usize, usize)>,
    /// Flagged pairs whose `Tr(ρ_s ρ_t)` still exceeds [`RECHECK_TOL`]; for a
    /// correct candidate this would contradict the orthogonality argument.
    pub confirmed: Vec<(usize, usize)>,
}

pub fn orthogonality_matrix(cand: &Qo2Candidate) -> Result<OverlapMatrix, NogoError> {
    let mut entries = [[0.0; 8]; 8];
    let mut flagged = Vec::new();
    let mut confirmed = Vec::new();
    for s in 0..8 {
        for t in s..8 {
            entries[s][t] = cand.states[s].fidelity(&cand.states[t])?;
            entries[t][s] = entries[s][t];
            if s < t && entries[s][t] > QO2_TOL {
                flagged.push((s, t));
                let overlap = (cand.states[s].matrix() * cand.states[t].matrix()).trace().re;
                if overlap > RECHECK_TOL {
                    confirmed.push((s, t));
                }
            }
        }
    }
    let max_off_diagonal = (0..8)
        .flat_map(|s| (0..8).filter(move |&t| t != s).map(move |t| (s, t)))
        .map(|(s, t)| entries[s][t])
        .fold(0.0, f64::max);
    Ok(OverlapMatrix {
        entries,
        max_off_diagonal,
        flagged,
        confirmed,
    })
}

/// Certified optimal probability of naming `(x, y)` from
/// `½(ρ^{x,y}_0 + ρ^{x,y}_1)`, uniform prior.
pub fn blindness_leakage(cand: &Qo2Candidate) -> Result<GuessingBound<f64>, NogoError> {
    let sigmas = (0..4)
        .map(|xy| uniform_mixture(&cand.states[2 * xy..2 * xy + 2]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(optimal_guessing(&sigmas, &[0.25; 4], 1e-11, 20_000)?)
}

/// Protocol with two output pads `r₁, r₂`, states indexed
/// `8x + 4y + 2r₁ + r₂`; the client outputs the outcome XOR `r₁ ⊕ r₂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimpleQo2Candidate {
    pub states: Vec<DensityMatrix>,
    pub povms: Vec<[Matrix; 2]>,
}

impl SimpleQo2Candidate {
    /// Small candidate with `ρ^{x,y}_r = ½(ρ^{x,y}_{0,r} + ρ^{x,y}_{1,1⊕r})`
    /// and the same measurements.
    pub fn reduce(&self) -> Result<Qo2Candidate, NogoError> {
        if self.states.len() != 16 {
            return Err(NogoError::InvalidCandidate(format!("need 16 states, got {}", self.states.len())));
        }
        let states = (0..8)
            .map(|t| {
                let (xy, r) = (t >> 1, t & 1);
                uniform_mixture(&[self.states[4 * xy + r].clone(), self.states[4 * xy + 2 + (1 ^ r)].clone()])
            })
            .collect::<Result<Vec<_>, _>>()?;
        Qo2Candidate::new(states, self.povms.clone())
    }
}

/// Checker results for one candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Qo2Summary {
    pub block: usize,
    pub correct: bool,
    pub max_off_diagonal: f64,
    pub confirmed_overlaps: usize,
    pub leakage_lower: f64,
    pub leakage_upper: f64,
}

impl Qo2Summary {
    pub fn of(cand: &Qo2Candidate) -> Result<Self, NogoError> {
        let overlaps = orthogonality_matrix(cand)?;
        let leak = blindness_leakage(cand)?;
        Ok(Self {
            block: cand.dim() / 8,
            correct: check_correctness(cand).holds,
            max_off_diagonal: overlaps.max_off_diagonal,
            confirmed_overlaps: overlaps.confirmed.len(),
            leakage_lower: leak.lower,
            leakage_upper: leak.upper,
        })
    }

    /// Correct, orthogonal and fully leaking.
    pub fn leaks_fully(&self) -> bool {
        self.correct
            && self.max_off_diagonal <= QO2_TOL
            && self.confirmed_overlaps == 0
            && (1.0 - self.leakage_lower) <= QO2_TOL
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Qo2SweepReport {
    pub seed: u64,
    pub positive_control: Qo2Summary,
    pub candidates: Vec<Qo2Summary>,
    pub correct: usize,
    pub min_leakage: f64,
    /// Every correct candidate and the positive control leak fully.
    pub pass: bool,
}

/// Runs the checkers on the positive control and on `count` random correct
/// candidates with blocks of size 1 and 2 alternating.
pub fn sweep(count: usize, seed: u64) -> Result<Qo2SweepReport, NogoError> {
    use rayon::prelude::*;
    let mut rng = SeededRng::new(seed);
    let cands: Vec<_> = (0..count).map(|i| Qo2Candidate::random_correct(&mut rng, 1 + i % 2)).collect();
    let positive_control = Qo2Summary::of(&Qo2Candidate::positive_control())?;
    let candidates = cands.par_iter().map(Qo2Summary::of).collect::<Result<Vec<_>, _>>()?;
    let correct = candidates.iter().filter(|s| s.correct).count();
    let min_leakage = candidates.iter().map(|s| s.leakage_lower).fold(positive_control.leakage_lower, f64::min);
    let pass = positive_control.leaks_fully() && candidates.iter().filter(|s| s.correct).all(Qo2Summary::leaks_fully);
    Ok(Qo2SweepReport {
        seed,
        positive_control,
        candidates,
        correct,
        min_leakage,
        pass,
    })
}
