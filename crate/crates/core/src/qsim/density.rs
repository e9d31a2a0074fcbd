use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::scalar::{Real, C};
use super::state::{check_qubits, QuantumState};
use super::{tolerance, QsimError, EQ_TOL, PSD_TOL};

/// Mixed state of a small qubit register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct DensityMatrix<T> {
    num_qubits: usize,
    matrix: Matrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates Hermiticity and unit trace (within `1e-12`) and eigenvalues
    /// no lower than `-1e-10`.
    pub fn new(matrix: Matrix<T>) -> Result<Self, QsimError> {
        let num_qubits = qubits_for_dim(matrix.dim())?;
        let eq = tolerance::<T>(EQ_TOL);
        if !matrix.is_hermitian(eq) {
            return Err(QsimError::NotHermitian);
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > eq || tr.im.abs() > eq {
            return Err(QsimError::BadTrace(tr.re.to_f64().unwrap_or(f64::NAN)));
        }
        let min = matrix.hermitian_eigenvalues()[0];
        if min < -tolerance::<T>(PSD_TOL) {
            return Err(QsimError::NotPositive(min.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { num_qubits, matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: Matrix<T>) -> Self {
        let num_qubits = matrix.dim().trailing_zeros() as usize;
        Self { num_qubits, matrix }
    }

    pub fn pure(state: &QuantumState<T>) -> Self {
        Self {
            num_qubits: state.num_qubits(),
            matrix: state.projector(),
        }
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self, QsimError> {
        check_qubits(num_qubits)?;
        let dim = 1 << num_qubits;
        Ok(Self {
            num_qubits,
            matrix: Matrix::identity(dim).scale_real(T::one() / T::lit(dim as f64)),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.matrix.approx_eq(&other.matrix, tol)
    }

    /// `U ρ U†` for a full-register unitary.
    pub fn evolve(&self, u: &Matrix<T>) -> Result<Self, QsimError> {
        if u.dim() != self.dim() {
            return Err(QsimError::DimensionMismatch {
                expected: self.dim(),
                found: u.dim(),
            });
        }
        Ok(Self {
            num_qubits: self.num_qubits,
            matrix: self.matrix.conjugate_by(u),
        })
    }

    /// `(U ⊗ 1) ρ (U ⊗ 1)†` where `U` acts on the leading qubits.
    pub fn evolve_leading(&self, u: &Matrix<T>) -> Result<Self, QsimError> {
        if u.dim() > self.dim() || !self.dim().is_multiple_of(u.dim()) {
            return Err(QsimError::DimensionMismatch {
                expected: self.dim(),
                found: u.dim(),
            });
        }
        let full = u.kron(&Matrix::identity(self.dim() / u.dim()));
        self.evolve(&full)
    }

    pub fn tensor(&self, other: &Self) -> Result<Self, QsimError> {
        check_qubits(self.num_qubits + other.num_qubits)?;
        Ok(Self {
            num_qubits: self.num_qubits + other.num_qubits,
            matrix: self.matrix.kron(&other.matrix),
        })
    }

    /// Probability of a POVM element, `Tr(E ρ)`.
    pub fn expectation(&self, element: &Matrix<T>) -> T {
        (element * &self.matrix).trace().re
    }

    /// Reduced state on `keep` (qubit indices, any order; output keeps them in
    /// ascending order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self, QsimError> {
        if keep.is_empty() {
            return Err(QsimError::EmptyKeepSet);
        }
        let n = self.num_qubits;
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if let Some(&bad) = kept.iter().find(|&&q| q >= n) {
            return Err(QsimError::InvalidQubit {
                index: bad,
                num_qubits: n,
            });
        }
        let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
        let bit = |idx: usize, q: usize| (idx >> (n - 1 - q)) & 1;
        let gather = |idx: usize, qs: &[usize]| qs.iter().fold(0, |acc, &q| (acc << 1) | bit(idx, q));

        let kdim = 1 << kept.len();
        let mut out = Matrix::zeros(kdim);
        for i in 0..self.dim() {
            let ti = gather(i, &traced);
            let ki = gather(i, &kept);
            for j in 0..self.dim() {
                if gather(j, &traced) != ti {
                    continue;
                }
                let kj = gather(j, &kept);
                out[(ki, kj)] = out[(ki, kj)] + self.matrix[(i, j)];
            }
        }
        Ok(Self {
            num_qubits: kept.len(),
            matrix: out,
        })
    }

    /// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`.
    pub fn fidelity(&self, other: &Self) -> Result<T, QsimError> {
        same_dims(self, other)?;
        let sr = self.matrix.psd_sqrt();
        let inner = &(&sr * &other.matrix) * &sr;
        let root_sum = inner
            .hermitian_eigenvalues()
            .into_iter()
            .fold(T::zero(), |s, x| s + x.max(T::zero()).sqrt());
        Ok(root_sum * root_sum)
    }

    pub fn purity(&self) -> T {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// Convex mixture `Σ wᵢ ρᵢ`. Weights must be non-negative and sum to 1.
pub fn average_states<T: Real>(
    states: &[DensityMatrix<T>],
    weights: &[T],
) -> Result<DensityMatrix<T>, QsimError> {
    let first = states.first().ok_or(QsimError::EmptyMixture)?;
    if states.len() != weights.len() {
        return Err(QsimError::DimensionMismatch {
            expected: states.len(),
            found: weights.len(),
        });
    }
    let total = weights.iter().fold(T::zero(), |s, &w| s + w);
    if weights.iter().any(|&w| w < T::zero()) || (total - T::one()).abs() > tolerance::<T>(EQ_TOL) {
        return Err(QsimError::BadWeights(total.to_f64().unwrap_or(f64::NAN)));
    }
    let mut acc = Matrix::zeros(first.dim());
    for (s, &w) in states.iter().zip(weights) {
        same_dims(first, s)?;
        acc = &acc + &s.matrix.scale_real(w);
    }
    Ok(DensityMatrix {
        num_qubits: first.num_qubits,
        matrix: acc,
    })
}

/// Uniform mixture of the given states.
pub fn uniform_mixture<T: Real>(states: &[DensityMatrix<T>]) -> Result<DensityMatrix<T>, QsimError> {
    let w = T::one() / T::lit(states.len().max(1) as f64);
    average_states(states, &vec![w; states.len()])
}

/// `½ ‖ρ − σ‖₁`
pub fn trace_distance<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T, QsimError> {
    same_dims(rho, sigma)?;
    let d = (&rho.matrix - &sigma.matrix).hermitian_trace_norm() * T::lit(0.5);
    Ok(d.min(T::one()).max(T::zero()))
}

/// Optimal success probability for telling two equiprobable states apart,
/// `½(1 + T(ρ, σ))`.
pub fn helstrom_probability<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T, QsimError> {
    Ok(T::lit(0.5) * (T::one() + trace_distance(rho, sigma)?))
}

fn same_dims<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<(), QsimError> {
    if a.dim() != b.dim() {
        Err(QsimError::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        })
    } else {
        Ok(())
    }
}

pub(crate) fn qubits_for_dim(dim: usize) -> Result<usize, QsimError> {
    if !dim.is_power_of_two() {
        return Err(QsimError::DimensionMismatch {
            expected: dim.next_power_of_two(),
            found: dim,
        });
    }
    let n = dim.trailing_zeros() as usize;
    check_qubits(n)?;
    Ok(n)
}

/// Diagonal density matrix from a probability vector over basis states.
pub fn classical_state<T: Real>(probs: &[T]) -> Result<DensityMatrix<T>, QsimError> {
    let diag: Vec<C<T>> = probs.iter().map(|&p| C::new(p, T::zero())).collect();
    DensityMatrix::new(Matrix::diagonal(&diag))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::scalar::c;

    fn basis_dm(n: usize, i: usize) -> DensityMatrix<f64> {
        DensityMatrix::pure(&QuantumState::basis(n, i).unwrap())
    }

    #[test]
    fn single_state_weight_one_is_identity_mixture() {
        let rho = basis_dm(2, 3);
        let avg = average_states(std::slice::from_ref(&rho), &[1.0]).unwrap();
        assert_eq!(avg, rho);
    }

    #[test]
    fn equal_mixture_of_basis_states_is_maximally_mixed() {
        let avg = uniform_mixture(&[basis_dm(1, 0), basis_dm(1, 1)]).unwrap();
        assert!(avg.approx_eq(&DensityMatrix::maximally_mixed(1).unwrap(), 1e-15));
    }

    #[test]
    fn mixture_rejects_mismatched_dims_and_bad_weights() {
        assert!(matches!(
            average_states(&[basis_dm(1, 0), basis_dm(2, 0)], &[0.5, 0.5]),
            Err(QsimError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            average_states(&[basis_dm(1, 0), basis_dm(1, 1)], &[0.5, 0.6]),
            Err(QsimError::BadWeights(_))
        ));
    }

    #[test]
    fn trace_distance_extremes() {
        let a = basis_dm(1, 0);
        let b = basis_dm(1, 1);
        assert!(trace_distance(&a, &a).unwrap().abs() < 1e-15);
        assert!((trace_distance(&a, &b).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            trace_distance(&a, &basis_dm(2, 0)),
            Err(QsimError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn partial_trace_of_product_returns_factor() {
        let plus = QuantumState::<f64>::new(1, vec![c(0.5f64.sqrt(), 0.), c(0.5f64.sqrt(), 0.)]).unwrap();
        let one = QuantumState::<f64>::basis(1, 1).unwrap();
        let prod = DensityMatrix::pure(&plus.tensor(&one).unwrap());
        let left = prod.partial_trace(&[0]).unwrap();
        let right = prod.partial_trace(&[1]).unwrap();
        assert!(left.approx_eq(&DensityMatrix::pure(&plus), 1e-15));
        assert!(right.approx_eq(&DensityMatrix::pure(&one), 1e-15));
        assert!((left.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_empty_and_out_of_range() {
        let rho = basis_dm(2, 0);
        assert!(matches!(rho.partial_trace(&[]), Err(QsimError::EmptyKeepSet)));
        assert!(matches!(rho.partial_trace(&[2]), Err(QsimError::InvalidQubit { .. })));
    }

    #[test]
    fn validation_rejects_non_states() {
        let m = Matrix::<f64>::diagonal(&[c(1.5, 0.), c(-0.5, 0.)]);
        assert!(matches!(DensityMatrix::new(m), Err(QsimError::NotPositive(_))));
        let m = Matrix::<f64>::diagonal(&[c(0.5, 0.), c(0.4, 0.)]);
        assert!(matches!(DensityMatrix::new(m), Err(QsimError::BadTrace(_))));
        let mut m = Matrix::<f64>::diagonal(&[c(0.5, 0.), c(0.5, 0.)]);
        m[(0, 1)] = c(0.1, 0.);
        assert!(matches!(DensityMatrix::new(m), Err(QsimError::NotHermitian)));
    }

    #[test]
    fn fidelity_of_orthogonal_and_identical_states() {
        let a = basis_dm(2, 1);
        assert!((a.fidelity(&a).unwrap() - 1.0).abs() < 1e-12);
        assert!(a.fidelity(&basis_dm(2, 2)).unwrap().abs() < 1e-12);
    }
}
