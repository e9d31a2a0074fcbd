//! Resource states: the three-qubit NAND gadget state and `|+⟩`.

use super::gates::{tensor_all, GateKind, ObservableBasis};
use super::matrix::Matrix;
use super::scalar::{c, zero, Real, C};
use super::state::QuantumState;

/// Index pair carrying the gadget state's support, `|001⟩` and `|110⟩`.
pub const GHZ_SUPPORT: (usize, usize) = (0b001, 0b110);

/// The three-qubit gadget state `(|001⟩ − |110⟩)/√2`.
///
/// It is the unique state (up to global phase) with
/// `P₁^a P₂^b P₃^{a⊕b} |Ψ⟩ = (−1)^{1⊕ab} |Ψ⟩` for all `a, b`. The value is
/// hard-coded; [`crate::qsim::conventions::derive`] re-derives it from the
/// eigenvalue constraints and a regression test keeps the two in sync.
pub fn make_ghz<T: Real>() -> QuantumState<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![zero(); 8];
    amps[GHZ_SUPPORT.0] = c(h, 0.0);
    amps[GHZ_SUPPORT.1] = c(-h, 0.0);
    QuantumState::new(3, amps).expect("gadget state is normalised")
}

/// `(|0⟩ + |1⟩)/√2`
pub fn make_plus<T: Real>() -> QuantumState<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    QuantumState::new(1, vec![c(h, 0.0), c(h, 0.0)]).expect("|+> is normalised")
}

/// `P₁^a ⊗ P₂^b ⊗ P₃^{a⊕b}` as an 8×8 operator.
pub fn nand_observable<T: Real>(a: u8, b: u8) -> Matrix<T> {
    tensor_all(&[
        ObservableBasis::from_bit(a).observable(),
        ObservableBasis::from_bit(b).observable(),
        ObservableBasis::from_bit(a ^ b).observable(),
    ])
}

/// Returns the eigenvalue `λ` if `op |ψ⟩ = λ |ψ⟩` within `tol`.
pub fn eigenvalue_of<T: Real>(op: &Matrix<T>, psi: &QuantumState<T>, tol: T) -> Option<C<T>> {
    let image = op.apply(psi.amplitudes());
    let lambda = psi
        .amplitudes()
        .iter()
        .zip(&image)
        .fold(zero::<T>(), |acc, (p, q)| acc + p.conj() * q);
    psi.amplitudes()
        .iter()
        .zip(&image)
        .all(|(p, q)| (*q - lambda * p).norm() <= tol)
        .then_some(lambda)
}

/// `Z^r Z^{a∧b}|+⟩` as produced by `S^a S^b (S†)^{a⊕b}` on `|+⟩` followed by
/// the pad.
pub fn single_qubit_encoding<T: Real>(a: u8, b: u8, r: u8) -> Matrix<T> {
    let ops = [
        GateKind::SPower(a).matrix::<T>(),
        GateKind::SPower(b).matrix(),
        GateKind::SDaggerPower(a ^ b).matrix(),
    ];
    let core = ops.iter().fold(Matrix::identity(2), |acc, u| &acc * u);
    &GateKind::ZPower(r).matrix() * &core
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plus_amplitudes() {
        let p = make_plus::<f64>();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((p.amplitudes()[0].re - h).abs() < 1e-16);
        assert!((p.amplitudes()[1].re - h).abs() < 1e-16);
    }

    #[test]
    fn z_on_plus_flips_sign() {
        let p = make_plus::<f64>()
            .apply_gate(super::super::gates::GateOp::new(GateKind::PauliZ, 0))
            .unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((p.amplitudes()[1].re + h).abs() < 1e-16);
    }

    #[test]
    fn xxx_eigenvalue_is_minus_one() {
        let l = eigenvalue_of(&nand_observable::<f64>(0, 0), &make_ghz(), 1e-12).unwrap();
        assert!((l - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn yyx_eigenvalue_is_plus_one() {
        let l = eigenvalue_of(&nand_observable::<f64>(1, 1), &make_ghz(), 1e-12).unwrap();
        assert!((l - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn single_precision_gadget_still_computes_nand() {
        for a in 0..2 {
            for b in 0..2 {
                let l = eigenvalue_of(&nand_observable::<f32>(a, b), &make_ghz::<f32>(), 1e-6).unwrap();
                let want = if 1 ^ (a & b) == 1 { -1.0 } else { 1.0 };
                assert!((l.re - want).abs() < 1e-6);
            }
        }
    }
}
