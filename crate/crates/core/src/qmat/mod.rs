//! Dense complex linear algebra for small qubit registers.
//!
//! Everything here works on at most a handful of qubits (dimension ≤ 16 in
//! practice), so plain dense `nalgebra` matrices are used throughout. Qubit 0
//! is the leftmost tensor factor, i.e. the most significant bit of a basis
//! index: `|q0 q1 … q(n-1)⟩`.

mod gates;
mod linalg;
mod pauli;
mod random;
mod state;

pub use gates::{cnot, cnot_power, ry, rz, u3};
pub use linalg::{
    evolution_unitary, hermitian_eig, hermiticity_error, numerical_rank, pseudo_inverse,
    singular_values, tensor_all, tensor_product, EigenDecomposition,
};
pub use pauli::{Pauli, PauliString};
pub use random::{haar_random_pure_state, haar_random_unitary};
pub use state::{
    hilbert_schmidt_distance, partial_trace, place_subsystems, trace_distance, DensityMatrix,
    HERMITIAN_TOL, PSD_TOL, TRACE_TOL,
};

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type ComplexMatrix = DMatrix<Complex64>;
pub type RealMatrix = DMatrix<f64>;

pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

pub fn dagger(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

/// `u · m · u†`
pub fn conjugate(u: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    u * m * u.adjoint()
}
