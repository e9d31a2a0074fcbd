//! Choi representation of channels built from unitary mixtures.

use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use super::matrix::Matrix;
use super::scalar::{Real, C};
use super::{tolerance, QsimError, EQ_TOL};

/// `J = Σᵢⱼ |i⟩⟨j| ⊗ Λ(|i⟩⟨j|)`, input factor first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct ChoiMatrix<T> {
    dim_in: usize,
    dim_out: usize,
    matrix: Matrix<T>,
}

impl<T: Real> ChoiMatrix<T> {
    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    /// Choi matrix of the identity channel on `dim` levels.
    pub fn identity_channel(dim: usize) -> Self {
        choi_of_unitary_mixture(&[Matrix::identity(dim)], &[T::one()]).expect("identity channel")
    }

    /// `Tr_out J`, which is the identity exactly when the map is trace
    /// preserving.
    pub fn output_marginal(&self) -> Matrix<T> {
        let (di, d_o) = (self.dim_in, self.dim_out);
        Matrix::from_fn(di, |i, j| {
            (0..d_o).fold(C::new(T::zero(), T::zero()), |acc, k| {
                acc + self.matrix[(i * d_o + k, j * d_o + k)]
            })
        })
    }

    pub fn is_trace_preserving(&self, tol: T) -> bool {
        self.output_marginal().approx_eq(&Matrix::identity(self.dim_in), tol)
    }

    /// `J / d_in`, a density matrix on input ⊗ output.
    pub fn normalized_state(&self) -> DensityMatrix<T> {
        DensityMatrix::from_matrix_unchecked(self.matrix.scale_real(T::one() / T::lit(self.dim_in as f64)))
    }

    /// `(Λ ⊗ id)(ρ)` for `ρ` on input ⊗ ancilla, evaluated from `J` alone.
    pub fn apply_extended(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>, QsimError> {
        let (di, d_o) = (self.dim_in, self.dim_out);
        if !rho.dim().is_multiple_of(di) {
            return Err(QsimError::DimensionMismatch {
                expected: di,
                found: rho.dim(),
            });
        }
        let da = rho.dim() / di;
        let m = rho.matrix();
        let out = Matrix::from_fn(d_o * da, |row, col| {
            let (k, alpha) = (row / da, row % da);
            let (l, beta) = (col / da, col % da);
            let mut acc = C::new(T::zero(), T::zero());
            for i in 0..di {
                for j in 0..di {
                    let r = m[(i * da + alpha, j * da + beta)];
                    if r.norm_sqr() == T::zero() {
                        continue;
                    }
                    acc = acc + r * self.matrix[(i * d_o + k, j * d_o + l)];
                }
            }
            acc
        });
        Ok(DensityMatrix::from_matrix_unchecked(out))
    }

    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>, QsimError> {
        if rho.dim() != self.dim_in {
            return Err(QsimError::DimensionMismatch {
                expected: self.dim_in,
                found: rho.dim(),
            });
        }
        self.apply_extended(rho)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T, QsimError> {
        if self.dim_in != other.dim_in || self.dim_out != other.dim_out {
            return Err(QsimError::DimensionMismatch {
                expected: self.matrix.dim(),
                found: other.matrix.dim(),
            });
        }
        Ok(self.matrix.max_abs_diff(&other.matrix))
    }
}

/// Choi matrix of `ρ ↦ Σₖ wₖ Uₖ ρ Uₖ†`.
pub fn choi_of_unitary_mixture<T: Real>(unitaries: &[Matrix<T>], weights: &[T]) -> Result<ChoiMatrix<T>, QsimError> {
    let first = unitaries.first().ok_or(QsimError::EmptyMixture)?;
    if unitaries.len() != weights.len() {
        return Err(QsimError::DimensionMismatch {
            expected: unitaries.len(),
            found: weights.len(),
        });
    }
    let total = weights.iter().fold(T::zero(), |s, &w| s + w);
    if (total - T::one()).abs() > tolerance::<T>(EQ_TOL) {
        return Err(QsimError::BadWeights(total.to_f64().unwrap_or(f64::NAN)));
    }
    let d = first.dim();
    let mut j = Matrix::zeros(d * d);
    for (u, &w) in unitaries.iter().zip(weights) {
        if u.dim() != d {
            return Err(QsimError::DimensionMismatch {
                expected: d,
                found: u.dim(),
            });
        }
        // Column-stacked |U⟫ = Σᵢ |i⟩ ⊗ U|i⟩ gives J = Σ w |U⟫⟪U|.
        let mut vec_u = Vec::with_capacity(d * d);
        for i in 0..d {
            for k in 0..d {
                vec_u.push(u[(k, i)]);
            }
        }
        j = &j + &Matrix::outer(&vec_u, &vec_u).scale_real(w);
    }
    Ok(ChoiMatrix {
        dim_in: d,
        dim_out: d,
        matrix: j,
    })
}
