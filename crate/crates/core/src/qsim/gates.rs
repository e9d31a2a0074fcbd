//! Single-qubit gates and Pauli observables.
//!
//! `S = diag(1, i)`. This is the only phase-gate convention under which the
//! Pauli/Clifford commutation identities the protocols rely on all hold; see
//! [`crate::qsim::conventions`].

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::scalar::{c, Real};

/// Kind of single-qubit gate. The `*Power` variants carry their exponent bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    Identity,
    PauliX,
    PauliY,
    PauliZ,
    S,
    SDagger,
    ZPower(u8),
    SPower(u8),
    SDaggerPower(u8),
}

impl GateKind {
    pub fn matrix<T: Real>(self) -> Matrix<T> {
        let m = |e: [(f64, f64); 4]| {
            Matrix::from_row_major(e.iter().map(|&(re, im)| c(re, im)).collect())
                .expect("2x2 gate")
        };
        match self {
            GateKind::Identity => Matrix::identity(2),
            GateKind::PauliX => m([(0., 0.), (1., 0.), (1., 0.), (0., 0.)]),
            GateKind::PauliY => m([(0., 0.), (0., -1.), (0., 1.), (0., 0.)]),
            GateKind::PauliZ => m([(1., 0.), (0., 0.), (0., 0.), (-1., 0.)]),
            GateKind::S => m([(1., 0.), (0., 0.), (0., 0.), (0., 1.)]),
            GateKind::SDagger => m([(1., 0.), (0., 0.), (0., 0.), (0., -1.)]),
            GateKind::ZPower(r) => power(GateKind::PauliZ, r),
            GateKind::SPower(a) => power(GateKind::S, a),
            GateKind::SDaggerPower(a) => power(GateKind::SDagger, a),
        }
    }
}

fn power<T: Real>(base: GateKind, bit: u8) -> Matrix<T> {
    if bit & 1 == 1 {
        base.matrix()
    } else {
        Matrix::identity(2)
    }
}

/// A gate applied to one qubit. Qubit 0 is the most significant position of
/// the computational-basis index (the leftmost label in `|b₀b₁b₂⟩`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    pub target: usize,
}

impl GateOp {
    pub fn new(kind: GateKind, target: usize) -> Self {
        Self { kind, target }
    }
}

/// Pauli observable measured on one qubit: `P⁰ = X`, `P¹ = Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ObservableBasis {
    MeasX,
    MeasY,
}

impl ObservableBasis {
    /// `P^b`
    pub fn from_bit(b: u8) -> Self {
        if b & 1 == 0 {
            Self::MeasX
        } else {
            Self::MeasY
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Self::MeasX => 0,
            Self::MeasY => 1,
        }
    }

    pub fn observable<T: Real>(self) -> Matrix<T> {
        match self {
            Self::MeasX => GateKind::PauliX.matrix(),
            Self::MeasY => GateKind::PauliY.matrix(),
        }
    }

    /// Unitary taking the +1 eigenvector to `|0⟩` and the −1 eigenvector to
    /// `|1⟩`, so a computational-basis readout gives the outcome bit directly.
    pub fn readout_rotation<T: Real>(self) -> Matrix<T> {
        let h = hadamard();
        match self {
            Self::MeasX => h,
            Self::MeasY => &h * &GateKind::SDagger.matrix(),
        }
    }

    /// Projector onto the eigenspace reported as `outcome` (0 ↦ +1, 1 ↦ −1).
    pub fn projector<T: Real>(self, outcome: u8) -> Matrix<T> {
        let sign = if outcome & 1 == 0 { 1.0 } else { -1.0 };
        let half = T::lit(0.5);
        (&Matrix::identity(2) + &self.observable::<T>().scale_real(T::lit(sign))).scale_real(half)
    }
}

pub fn hadamard<T: Real>() -> Matrix<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Matrix::from_row_major(vec![c(h, 0.), c(h, 0.), c(h, 0.), c(-h, 0.)]).expect("2x2 gate")
}

/// Embeds a 2×2 unitary acting on `target` into an `n`-qubit operator.
pub fn embed<T: Real>(u: &Matrix<T>, target: usize, num_qubits: usize) -> Matrix<T> {
    let mut out = Matrix::identity(1);
    for q in 0..num_qubits {
        let factor = if q == target { u.clone() } else { Matrix::identity(2) };
        out = out.kron(&factor);
    }
    out
}

/// Tensor product of one 2×2 operator per qubit, qubit 0 first.
pub fn tensor_all<T: Real>(factors: &[Matrix<T>]) -> Matrix<T> {
    factors
        .iter()
        .fold(Matrix::identity(1), |acc, f| acc.kron(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: [GateKind; 12] = [
        GateKind::Identity,
        GateKind::PauliX,
        GateKind::PauliY,
        GateKind::PauliZ,
        GateKind::S,
        GateKind::SDagger,
        GateKind::ZPower(0),
        GateKind::ZPower(1),
        GateKind::SPower(0),
        GateKind::SPower(1),
        GateKind::SDaggerPower(0),
        GateKind::SDaggerPower(1),
    ];

    #[test]
    fn every_gate_is_unitary() {
        for g in ALL {
            assert!(g.matrix::<f64>().is_unitary(1e-12), "{g:?}");
            assert!(g.matrix::<f32>().is_unitary(1e-6), "{g:?}");
        }
    }

    #[test]
    fn zero_exponents_are_exact_identity() {
        let id = Matrix::<f64>::identity(2);
        for g in [GateKind::ZPower(0), GateKind::SPower(0), GateKind::SDaggerPower(0)] {
            assert_eq!(g.matrix::<f64>(), id);
        }
    }

    #[test]
    fn s_squared_is_z() {
        let s = GateKind::S.matrix::<f64>();
        assert!((&s * &s).approx_eq(&GateKind::PauliZ.matrix(), 1e-15));
    }

    #[test]
    fn readout_rotation_diagonalises_observable() {
        for basis in [ObservableBasis::MeasX, ObservableBasis::MeasY] {
            let r = basis.readout_rotation::<f64>();
            let z = GateKind::PauliZ.matrix::<f64>();
            // R P R† = Z
            assert!(basis.observable::<f64>().conjugate_by(&r).approx_eq(&z, 1e-14));
        }
    }

    #[test]
    fn projectors_sum_to_identity() {
        for basis in [ObservableBasis::MeasX, ObservableBasis::MeasY] {
            let s = &basis.projector::<f64>(0) + &basis.projector::<f64>(1);
            assert!(s.approx_eq(&Matrix::identity(2), 1e-15));
        }
    }
}
