use serde::{Deserialize, Serialize};

use super::gates::{embed, GateOp};
use super::matrix::Matrix;
use super::scalar::{zero, Real, C};
use super::{QsimError, MAX_QUBITS};

/// Normalised pure state of a small qubit register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct QuantumState<T> {
    num_qubits: usize,
    amplitudes: Vec<C<T>>,
}

impl<T: Real> QuantumState<T> {
    /// Validates length `2^num_qubits` and unit norm within `1e-12` (scaled
    /// to the precision of `T`).
    pub fn new(num_qubits: usize, amplitudes: Vec<C<T>>) -> Result<Self, QsimError> {
        check_qubits(num_qubits)?;
        if amplitudes.len() != 1 << num_qubits {
            return Err(QsimError::DimensionMismatch {
                expected: 1 << num_qubits,
                found: amplitudes.len(),
            });
        }
        let norm: T = amplitudes.iter().fold(T::zero(), |s, a| s + a.norm_sqr()).sqrt();
        let tol = T::lit(1e-12).max(T::epsilon() * T::lit(64.0));
        if (norm - T::one()).abs() > tol {
            return Err(QsimError::NotNormalized(norm.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self, QsimError> {
        check_qubits(num_qubits)?;
        let dim = 1 << num_qubits;
        if index >= dim {
            return Err(QsimError::InvalidQubit { index, num_qubits });
        }
        let mut amps = vec![zero(); dim];
        amps[index] = C::new(T::one(), T::zero());
        Self::new(num_qubits, amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    pub fn inner(&self, other: &Self) -> C<T> {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(zero(), |acc, (a, b)| acc + a.conj() * b)
    }

    /// Equality up to global phase: `|⟨φ|ψ⟩| = 1` within `tol`.
    pub fn equals_up_to_phase(&self, other: &Self, tol: T) -> bool {
        self.dim() == other.dim() && (self.inner(other).norm() - T::one()).abs() <= tol
    }

    /// Entrywise comparison, global phase included.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.dim() == other.dim()
            && self
                .amplitudes
                .iter()
                .zip(&other.amplitudes)
                .all(|(a, b)| (*a - *b).norm() <= tol)
    }

    pub fn apply_gate(&self, op: GateOp) -> Result<Self, QsimError> {
        if op.target >= self.num_qubits {
            return Err(QsimError::InvalidQubit {
                index: op.target,
                num_qubits: self.num_qubits,
            });
        }
        let u = op.kind.matrix::<T>();
        let stride = 1 << (self.num_qubits - 1 - op.target);
        let mut out = self.amplitudes.clone();
        for i in 0..self.dim() {
            if i & stride != 0 {
                continue;
            }
            let (a0, a1) = (self.amplitudes[i], self.amplitudes[i | stride]);
            out[i] = u[(0, 0)] * a0 + u[(0, 1)] * a1;
            out[i | stride] = u[(1, 0)] * a0 + u[(1, 1)] * a1;
        }
        Ok(Self {
            num_qubits: self.num_qubits,
            amplitudes: out,
        })
    }

    pub fn apply_gates(&self, ops: &[GateOp]) -> Result<Self, QsimError> {
        ops.iter().try_fold(self.clone(), |s, &op| s.apply_gate(op))
    }

    /// Applies a full-register unitary. The caller guarantees unitarity.
    pub fn apply_unitary(&self, u: &Matrix<T>) -> Result<Self, QsimError> {
        if u.dim() != self.dim() {
            return Err(QsimError::DimensionMismatch {
                expected: self.dim(),
                found: u.dim(),
            });
        }
        Ok(Self {
            num_qubits: self.num_qubits,
            amplitudes: u.apply(&self.amplitudes),
        })
    }

    /// Applies a 2×2 operator on one qubit without re-checking normalisation.
    pub(crate) fn apply_local_unchecked(&self, u: &Matrix<T>, target: usize) -> Self {
        let full = embed(u, target, self.num_qubits);
        Self {
            num_qubits: self.num_qubits,
            amplitudes: full.apply(&self.amplitudes),
        }
    }

    pub fn scaled(&self, s: C<T>) -> Self {
        Self {
            num_qubits: self.num_qubits,
            amplitudes: self.amplitudes.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn tensor(&self, other: &Self) -> Result<Self, QsimError> {
        let n = self.num_qubits + other.num_qubits;
        check_qubits(n)?;
        let amps = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| *a * *b))
            .collect();
        Ok(Self {
            num_qubits: n,
            amplitudes: amps,
        })
    }

    /// `|ψ⟩⟨ψ|`
    pub fn projector(&self) -> Matrix<T> {
        Matrix::outer(&self.amplitudes, &self.amplitudes)
    }
}

pub(crate) fn check_qubits(n: usize) -> Result<(), QsimError> {
    if n == 0 || n > MAX_QUBITS {
        Err(QsimError::UnsupportedQubitCount(n))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::gates::GateKind;
    use crate::qsim::scalar::c;

    #[test]
    fn rejects_bad_length_and_norm() {
        assert!(matches!(
            QuantumState::<f64>::new(1, vec![c(1.0, 0.0)]),
            Err(QsimError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            QuantumState::<f64>::new(1, vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(QsimError::NotNormalized(_))
        ));
    }

    #[test]
    fn invalid_target_is_rejected() {
        let s = QuantumState::<f64>::basis(2, 0).unwrap();
        let err = s.apply_gate(GateOp::new(GateKind::PauliX, 2)).unwrap_err();
        assert!(matches!(err, QsimError::InvalidQubit { index: 2, .. }));
    }

    #[test]
    fn x_on_qubit_zero_flips_most_significant_bit() {
        let s = QuantumState::<f64>::basis(3, 0).unwrap();
        let t = s.apply_gate(GateOp::new(GateKind::PauliX, 0)).unwrap();
        assert_eq!(t, QuantumState::basis(3, 0b100).unwrap());
    }

    #[test]
    fn z_power_zero_leaves_state_untouched() {
        let s = QuantumState::<f64>::new(1, vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let t = s.apply_gate(GateOp::new(GateKind::ZPower(0), 0)).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn phase_equality_ignores_global_phase() {
        let s = QuantumState::<f64>::new(1, vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let t = s.scaled(c(0.0, 1.0));
        assert!(s.equals_up_to_phase(&t, 1e-12));
        assert!(!s.approx_eq(&t, 1e-12));
    }
}
