//! Dense square complex matrices and the Hermitian eigensolver the audits
//! are built on.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use super::scalar::{one, zero, Real, C};

/// Dense square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = one();
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Builds a matrix from row-major entries. `None` if the length is not a
    /// perfect square.
    pub fn from_row_major(data: Vec<C<T>>) -> Option<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        (dim * dim == data.len()).then_some(Self { dim, data })
    }

    pub fn diagonal(entries: &[C<T>]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// `|v⟩⟨w|`
    pub fn outer(v: &[C<T>], w: &[C<T>]) -> Self {
        assert_eq!(v.len(), w.len(), "outer product of unequal lengths");
        Self::from_fn(v.len(), |i, j| v[i] * w[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim).fold(zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.scale(C::new(s, T::zero()))
    }

    /// Kronecker product `self ⊗ other`; `self` occupies the most significant
    /// index positions.
    pub fn kron(&self, other: &Self) -> Self {
        let n = other.dim;
        Self::from_fn(self.dim * n, |i, j| {
            self[(i / n, j / n)] * other[(i % n, j % n)]
        })
    }

    /// `U · self · U†`
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    pub fn apply(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(v.len(), self.dim, "matrix-vector dimension mismatch");
        (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(zero(), |acc, j| acc + self[(i, j)] * v[j])
            })
            .collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }

    pub fn is_unitary(&self, tol: T) -> bool {
        (&self.adjoint() * self).approx_eq(&Self::identity(self.dim), tol)
    }

    /// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
    /// rotations. Eigenvalues are returned in ascending order, eigenvectors
    /// as the matching columns of the returned matrix.
    pub fn hermitian_eigen(&self) -> (Vec<T>, Self) {
        let n = self.dim;
        let mut a = self.clone();
        let mut v = Self::identity(n);
        let two = T::lit(2.0);
        let frob: T = a.data.iter().map(|x| x.norm_sqr()).fold(T::zero(), |s, x| s + x);
        let threshold = T::epsilon() * T::epsilon() * frob.max(T::min_positive_value());

        for _sweep in 0..100 {
            let mut off = T::zero();
            for p in 0..n {
                for q in (p + 1)..n {
                    off = off + a[(p, q)].norm_sqr();
                }
            }
            if off <= threshold {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    let mag = apq.norm();
                    if mag <= T::min_positive_value() {
                        continue;
                    }
                    let phase = apq / C::new(mag, T::zero());
                    let tau = (a[(q, q)].re - a[(p, p)].re) / (two * mag);
                    let t = if tau >= T::zero() {
                        T::one() / (tau + (T::one() + tau * tau).sqrt())
                    } else {
                        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                    };
                    let cs = T::one() / (T::one() + t * t).sqrt();
                    let sn = t * cs;
                    // J = [[c, s·e^{iφ}], [-s·e^{-iφ}, c]] on the (p, q) plane.
                    let jpq = phase * sn;
                    let jqp = -(phase.conj() * sn);
                    let cc = C::new(cs, T::zero());
                    // A ← A J
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * cc + akq * jqp;
                        a[(k, q)] = akp * jpq + akq * cc;
                    }
                    // A ← J† A
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = cc * apk + jqp.conj() * aqk;
                        a[(q, k)] = jpq.conj() * apk + cc * aqk;
                    }
                    a[(p, q)] = zero();
                    a[(q, p)] = zero();
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * cc + vkq * jqp;
                        v[(k, q)] = vkp * jpq + vkq * cc;
                    }
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| {
            a[(i, i)]
                .re
                .partial_cmp(&a[(j, j)].re)
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let values = order.iter().map(|&i| a[(i, i)].re).collect();
        let vectors = Self::from_fn(n, |row, col| v[(row, order[col])]);
        (values, vectors)
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<T> {
        self.hermitian_eigen().0
    }

    /// Applies `f` to the spectrum of a Hermitian matrix.
    pub fn hermitian_map(&self, f: impl Fn(T) -> T) -> Self {
        let (vals, vecs) = self.hermitian_eigen();
        let d: Vec<C<T>> = vals.into_iter().map(|x| C::new(f(x), T::zero())).collect();
        &(&vecs * &Self::diagonal(&d)) * &vecs.adjoint()
    }

    /// Sum of absolute eigenvalues of a Hermitian matrix.
    pub fn hermitian_trace_norm(&self) -> T {
        self.hermitian_eigenvalues()
            .into_iter()
            .fold(T::zero(), |s, x| s + x.abs())
    }

    /// Principal square root of a positive semidefinite matrix; negative
    /// round-off eigenvalues are clamped to zero.
    pub fn psd_sqrt(&self) -> Self {
        self.hermitian_map(|x| x.max(T::zero()).sqrt())
    }

    /// Moore-Penrose inverse square root of a PSD matrix; eigenvalues below
    /// `cutoff` are treated as zero.
    pub fn psd_inv_sqrt(&self, cutoff: T) -> Self {
        self.hermitian_map(|x| if x > cutoff { T::one() / x.sqrt() } else { T::zero() })
    }

    /// Converts every entry to another scalar type.
    pub fn cast<U: Real>(&self) -> Matrix<U> {
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| {
                    C::new(
                        U::lit(z.re.to_f64().unwrap_or(f64::NAN)),
                        U::lit(z.im.to_f64().unwrap_or(f64::NAN)),
                    )
                })
                .collect(),
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = C<T>;
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik == zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] = out.data[i * n + j] + aik * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix sum dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix difference dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::scalar::c;

    fn hermitian_sample() -> Matrix<f64> {
        Matrix::from_row_major(vec![
            c(2.0, 0.0),
            c(1.0, -1.0),
            c(0.0, 0.5),
            c(1.0, 1.0),
            c(-1.0, 0.0),
            c(0.3, 0.0),
            c(0.0, -0.5),
            c(0.3, 0.0),
            c(0.5, 0.0),
        ])
        .unwrap()
    }

    #[test]
    fn eigen_reconstructs_hermitian_input() {
        let m = hermitian_sample();
        let (vals, vecs) = m.hermitian_eigen();
        assert!(vecs.is_unitary(1e-12));
        let d: Vec<C<f64>> = vals.iter().map(|&x| c(x, 0.0)).collect();
        let back = &(&vecs * &Matrix::diagonal(&d)) * &vecs.adjoint();
        assert!(back.approx_eq(&m, 1e-12));
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eigenvalues_of_pauli_y() {
        let y = Matrix::<f64>::from_row_major(vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
            .unwrap();
        let vals = y.hermitian_eigenvalues();
        assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trace_sum_matches_eigenvalue_sum() {
        let m = hermitian_sample();
        let s: f64 = m.hermitian_eigenvalues().iter().sum();
        assert!((s - m.trace().re).abs() < 1e-12);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let a = hermitian_sample();
        let psd = &a * &a.adjoint();
        let r = psd.psd_sqrt();
        assert!((&r * &r).approx_eq(&psd, 1e-10));
    }

    #[test]
    fn kron_orders_first_factor_most_significant() {
        let e01 = Matrix::<f64>::from_fn(2, |i, j| if i == 0 && j == 1 { c(1.0, 0.0) } else { c(0.0, 0.0) });
        let id = Matrix::<f64>::identity(2);
        let k = e01.kron(&id);
        assert_eq!(k[(0, 2)], c(1.0, 0.0));
        assert_eq!(k[(1, 3)], c(1.0, 0.0));
        assert_eq!(k[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn from_row_major_rejects_non_square() {
        assert!(Matrix::<f64>::from_row_major(vec![c(1.0, 0.0); 3]).is_none());
    }
}
