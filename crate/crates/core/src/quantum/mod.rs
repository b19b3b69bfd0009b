//! Dense statevector simulation primitives.
//!
//! Qubit 0 is the leftmost tensor factor, i.e. the most significant bit of a
//! basis-state index. On `q` qubits, qubit `j` is bit `q - 1 - j` of the index.

mod gate;
mod pauli;
mod statevector;

pub(crate) use gate::rotation_matrix as rotation;
pub use gate::{
    encoding_gate, hermitian_from_params, unitary_exp, EigenExp, HermitianGenerator, UnitaryGate,
};
pub use pauli::{generator_basis, pauli_word, Pauli, PauliWord, PAULI_ORDERING_TAG};
pub use statevector::{Statevector, MAX_QUBITS};

use nalgebra::{Complex, DMatrix};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

pub(crate) const I: C64 = C64 { re: 0.0, im: 1.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Largest elementwise deviation of `u * u^dagger` from the identity.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let prod = u * u.adjoint();
    let n = u.nrows();
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            let target = if r == c { ONE } else { ZERO };
            worst = worst.max((prod[(r, c)] - target).norm());
        }
    }
    worst
}

/// `state <- m * state` for a full-width matrix.
pub(crate) fn apply_full(m: &CMatrix, state: &mut Statevector) {
    let next = statevector::matvec(m, state.amplitudes());
    state.amplitudes_mut().copy_from_slice(&next);
}
