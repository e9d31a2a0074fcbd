//! Minimum-error discrimination of several states.
//!
//! The primal POVM is refined by the fixed-point iteration
//! `Πᵢ ← G⁻¹ (pᵢρᵢ) Πᵢ (pᵢρᵢ) G⁻¹`, `G² = Σᵢ (pᵢρᵢ) Πᵢ (pᵢρᵢ)`, which keeps
//! `Σ Πᵢ = 1`. Every iterate is certified: `Y = Herm(Σ pᵢρᵢΠᵢ) + μ·1` with
//! `μ = maxᵢ λ_max(pᵢρᵢ − Herm(...))⁺` is dual feasible, so `Tr Y` bounds
//! the optimum from above while the POVM bounds it from below.

use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use super::matrix::Matrix;
use super::scalar::Real;
use super::QsimError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct GuessingBound<T> {
    /// Success probability achieved by `povm`.
    pub lower: T,
    /// Dual certificate value; the optimum lies in `[lower, upper]`.
    pub upper: T,
    pub iterations: usize,
    #[serde(skip)]
    pub povm: Vec<Matrix<T>>,
}

impl<T: Real> GuessingBound<T> {
    pub fn gap(&self) -> T {
        self.upper - self.lower
    }

    pub fn value(&self) -> T {
        (self.lower + self.upper) * T::lit(0.5)
    }
}

/// Optimal probability of identifying which of `states` was prepared, with
/// prior `priors`. Iterates until the certified gap is at most `gap_tol` or
/// `max_iter` is reached; check [`GuessingBound::gap`] on return.
pub fn optimal_guessing<T: Real>(
    states: &[DensityMatrix<T>],
    priors: &[T],
    gap_tol: T,
    max_iter: usize,
) -> Result<GuessingBound<T>, QsimError> {
    let first = states.first().ok_or(QsimError::EmptyMixture)?;
    if priors.len() != states.len() {
        return Err(QsimError::DimensionMismatch {
            expected: states.len(),
            found: priors.len(),
        });
    }
    let d = first.dim();
    let weighted: Vec<Matrix<T>> = states
        .iter()
        .zip(priors)
        .map(|(s, &p)| {
            if s.dim() != d {
                Err(QsimError::DimensionMismatch {
                    expected: d,
                    found: s.dim(),
                })
            } else {
                Ok(s.matrix().scale_real(p))
            }
        })
        .collect::<Result<_, _>>()?;

    let cutoff = T::epsilon() * T::lit(1e3);
    // Start from the pretty-good measurement; it is already optimal for
    // orthogonally supported states.
    let mut povm = normalised(&weighted, cutoff);
    let mut best = certify(&weighted, &povm);
    let mut best_povm = povm.clone();
    let mut iterations = 0;

    while best.1 - best.0 > gap_tol && iterations < max_iter {
        iterations += 1;
        let sandwiches: Vec<Matrix<T>> = weighted
            .iter()
            .zip(&povm)
            .map(|(w, p)| &(w * p) * w)
            .collect();
        povm = normalised(&sandwiches, cutoff);
        let cert = certify(&weighted, &povm);
        if cert.1 - cert.0 < best.1 - best.0 {
            best = cert;
            best_povm = povm.clone();
        }
    }

    Ok(GuessingBound {
        lower: best.0,
        upper: best.1,
        iterations,
        povm: best_povm,
    })
}

/// `G^{-1/2} Aᵢ G^{-1/2}` with `G = Σ Aᵢ`. Directions outside supp(G) carry
/// no weight; they go to outcome 0 so the elements still sum to the identity.
fn normalised<T: Real>(parts: &[Matrix<T>], cutoff: T) -> Vec<Matrix<T>> {
    let d = parts[0].dim();
    let g = parts.iter().fold(Matrix::zeros(d), |acc, s| &acc + s);
    let g_inv = g.psd_inv_sqrt(cutoff);
    let mut out: Vec<Matrix<T>> = parts.iter().map(|s| &(&g_inv * s) * &g_inv).collect();
    let covered = out.iter().fold(Matrix::zeros(d), |acc, p| &acc + p);
    out[0] = &out[0] + &(&Matrix::identity(d) - &covered);
    out
}

fn certify<T: Real>(weighted: &[Matrix<T>], povm: &[Matrix<T>]) -> (T, T) {
    let d = weighted[0].dim();
    let r = weighted
        .iter()
        .zip(povm)
        .fold(Matrix::zeros(d), |acc, (w, p)| &acc + &(w * p));
    let herm = (&r + &r.adjoint()).scale_real(T::lit(0.5));
    let lower = herm.trace().re;
    let mu = weighted
        .iter()
        .map(|w| *(w - &herm).hermitian_eigenvalues().last().expect("non-empty"))
        .fold(T::zero(), T::max);
    (lower, lower + mu * T::lit(d as f64))
}
