//! Random states, unitaries and channels for property tests and adversary
//! sampling.

use rand_distr::{Distribution, StandardNormal};

use crate::qsim::scalar::C;
use crate::rng::SeededRng;
use crate::{DensityMatrix, Matrix, QuantumState};

fn gaussian(rng: &mut SeededRng) -> f64 {
    StandardNormal.sample(rng.inner())
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix(rng: &mut SeededRng, dim: usize) -> Matrix {
    Matrix::from_fn(dim, |_, _| C::new(gaussian(rng), gaussian(rng)))
}

/// Haar-random unitary via Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary(rng: &mut SeededRng, dim: usize) -> Matrix {
    let g = gaussian_matrix(rng, dim);
    let mut cols: Vec<Vec<C<f64>>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v: Vec<C<f64>> = (0..dim).map(|i| g[(i, j)]).collect();
        for q in &cols {
            let proj = q.iter().zip(&v).fold(C::new(0.0, 0.0), |s, (a, b)| s + a.conj() * b);
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|x| x / norm).collect());
    }
    Matrix::from_fn(dim, |i, j| cols[j][i])
}

pub fn random_pure_state(rng: &mut SeededRng, num_qubits: usize) -> QuantumState {
    let dim = 1 << num_qubits;
    let v: Vec<C<f64>> = (0..dim).map(|_| C::new(gaussian(rng), gaussian(rng))).collect();
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    QuantumState::new(num_qubits, v.into_iter().map(|x| x / norm).collect()).expect("normalised")
}

/// Random mixed state of the given rank (Ginibre ensemble).
pub fn random_density(rng: &mut SeededRng, num_qubits: usize, rank: usize) -> DensityMatrix {
    let dim = 1 << num_qubits;
    let mut acc = Matrix::zeros(dim);
    for _ in 0..rank.max(1) {
        let psi = random_pure_state(rng, num_qubits);
        acc = &acc + &psi.projector().scale_real(gaussian(rng).abs() + 1e-3);
    }
    let tr = acc.trace().re;
    DensityMatrix::from_matrix_unchecked(acc.scale_real(1.0 / tr))
}

/// Random state supported on the span of the given orthonormal columns.
pub fn random_density_on(rng: &mut SeededRng, basis: &[Vec<C<f64>>]) -> Matrix {
    let dim = basis[0].len();
    let mut acc = Matrix::zeros(dim);
    let mut total = 0.0;
    for _ in 0..basis.len() {
        let coeffs: Vec<C<f64>> = basis.iter().map(|_| C::new(gaussian(rng), gaussian(rng))).collect();
        let v: Vec<C<f64>> = (0..dim)
            .map(|i| {
                basis
                    .iter()
                    .zip(&coeffs)
                    .fold(C::new(0.0, 0.0), |s, (col, &k)| s + col[i] * k)
            })
            .collect();
        let w = gaussian(rng).abs() + 1e-3;
        let n2: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        acc = &acc + &Matrix::outer(&v, &v).scale_real(w / n2);
        total += w;
    }
    acc.scale_real(1.0 / total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = SeededRng::new(5);
        for d in [2, 4, 8, 16] {
            assert!(random_unitary(&mut rng, d).is_unitary(1e-12));
        }
    }

    #[test]
    fn random_density_is_valid() {
        let mut rng = SeededRng::new(6);
        let rho = random_density(&mut rng, 3, 4);
        assert!(DensityMatrix::new(rho.into_matrix()).is_ok());
    }
}
