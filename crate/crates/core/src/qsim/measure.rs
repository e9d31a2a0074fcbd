//! Born-rule statistics for per-qubit Pauli measurements.
//!
//! Outcome bits follow the eigenvalue convention `+1 ↦ 0`, `−1 ↦ 1`, so the
//! XOR of the outcome bits is the eigenvalue sign of the product observable.

use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use super::gates::{tensor_all, ObservableBasis};
use super::scalar::Real;
use super::state::QuantumState;
use super::{tolerance, QsimError, EQ_TOL};
use crate::rng::SeededRng;

/// Exact distribution over `num_bits`-bit outcomes. Index `k` encodes the
/// outcome with bit 0 (qubit 0) as the most significant bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Distribution<T> {
    num_bits: usize,
    probs: Vec<T>,
}

impl<T: Real> Distribution<T> {
    pub fn new(num_bits: usize, probs: Vec<T>) -> Result<Self, QsimError> {
        if probs.len() != 1 << num_bits {
            return Err(QsimError::DimensionMismatch {
                expected: 1 << num_bits,
                found: probs.len(),
            });
        }
        let total = probs.iter().fold(T::zero(), |s, &p| s + p);
        if probs.iter().any(|&p| p < -tolerance::<T>(EQ_TOL))
            || (total - T::one()).abs() > tolerance::<T>(EQ_TOL)
        {
            return Err(QsimError::BadWeights(total.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { num_bits, probs })
    }

    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn prob(&self, outcome: &[u8]) -> T {
        self.probs[index_of(outcome)]
    }

    /// Outcomes with probability above `tol`, paired with their probability.
    pub fn support(&self, tol: T) -> impl Iterator<Item = (Vec<u8>, T)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(move |(_, &p)| p > tol)
            .map(move |(k, &p)| (bits_of(k, self.num_bits), p))
    }
}

pub fn bits_of(index: usize, num_bits: usize) -> Vec<u8> {
    (0..num_bits)
        .map(|q| ((index >> (num_bits - 1 - q)) & 1) as u8)
        .collect()
}

pub fn index_of(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | (b & 1) as usize)
}

fn check_bases(n: usize, bases: &[ObservableBasis]) -> Result<(), QsimError> {
    if bases.len() != n {
        Err(QsimError::BasisCountMismatch {
            qubits: n,
            bases: bases.len(),
        })
    } else {
        Ok(())
    }
}

/// Measures each qubit of a pure state in its own Pauli basis.
pub fn measure_observables<T: Real>(
    state: &QuantumState<T>,
    bases: &[ObservableBasis],
) -> Result<Distribution<T>, QsimError> {
    check_bases(state.num_qubits(), bases)?;
    let rotated = bases
        .iter()
        .enumerate()
        .fold(state.clone(), |s, (q, b)| s.apply_local_unchecked(&b.readout_rotation(), q));
    let probs = rotated.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    Distribution::new(state.num_qubits(), probs)
}

/// Mixed-state counterpart of [`measure_observables`].
pub fn measure_observables_mixed<T: Real>(
    rho: &DensityMatrix<T>,
    bases: &[ObservableBasis],
) -> Result<Distribution<T>, QsimError> {
    check_bases(rho.num_qubits(), bases)?;
    let rot: Vec<_> = bases.iter().map(|b| b.readout_rotation()).collect();
    let rotated = rho.matrix().conjugate_by(&tensor_all(&rot));
    let probs = (0..rotated.dim())
        .map(|i| rotated[(i, i)].re.max(T::zero()))
        .collect();
    Distribution::new(rho.num_qubits(), probs)
}

/// Draws one outcome: a single uniform draw from `seed` is located on the
/// cumulative distribution in index order.
pub fn sample_outcome(dist: &Distribution<f64>, seed: u64) -> Vec<u8> {
    sample_with(dist, &mut SeededRng::new(seed))
}

pub fn sample_with(dist: &Distribution<f64>, rng: &mut SeededRng) -> Vec<u8> {
    bits_of(sample_index(&dist.probs, rng), dist.num_bits)
}

/// Index of the first entry whose cumulative weight exceeds one uniform
/// draw. Zero-weight entries are never returned.
pub fn sample_index(probs: &[f64], rng: &mut SeededRng) -> usize {
    let u = rng.unit();
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (k, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            last_nonzero = k;
            acc += p;
            if u < acc {
                return k;
            }
        }
    }
    last_nonzero
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::ghz::make_plus;
    use crate::qsim::gates::{GateKind, GateOp};

    #[test]
    fn x_on_plus_is_deterministic_zero() {
        let d = measure_observables(&make_plus::<f64>(), &[ObservableBasis::MeasX]).unwrap();
        assert!((d.prob(&[0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn x_on_minus_is_deterministic_one() {
        let minus = make_plus::<f64>().apply_gate(GateOp::new(GateKind::PauliZ, 0)).unwrap();
        let d = measure_observables(&minus, &[ObservableBasis::MeasX]).unwrap();
        assert!((d.prob(&[1]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basis_count_mismatch_is_rejected() {
        let err = measure_observables(&make_plus::<f64>(), &[]).unwrap_err();
        assert!(matches!(err, QsimError::BasisCountMismatch { .. }));
    }

    #[test]
    fn point_mass_always_sampled() {
        let d = Distribution::new(1, vec![1.0, 0.0]).unwrap();
        for seed in 0..50 {
            assert_eq!(sample_outcome(&d, seed), vec![0]);
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let d = Distribution::new(2, vec![0.25; 4]).unwrap();
        assert_eq!(sample_outcome(&d, 99), sample_outcome(&d, 99));
    }

    #[test]
    fn parity_one_support_sampled_with_parity_one() {
        let probs: Vec<f64> = (0..8)
            .map(|k: usize| if k.count_ones() % 2 == 1 { 0.25 } else { 0.0 })
            .collect();
        let d = Distribution::new(3, probs).unwrap();
        let out = sample_outcome(&d, 7);
        assert_eq!(out.iter().fold(0, |a, b| a ^ b), 1);
    }

    #[test]
    fn bit_index_round_trip() {
        for k in 0..16 {
            assert_eq!(index_of(&bits_of(k, 4)), k);
        }
        assert_eq!(bits_of(0b001, 3), vec![0, 0, 1]);
    }
}
