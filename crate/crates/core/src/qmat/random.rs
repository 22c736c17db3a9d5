use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{ComplexMatrix, DensityMatrix};

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state: a normalized vector of i.i.d. complex Gaussians.
pub fn haar_random_pure_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> DensityMatrix {
    let dim = 1 << n_qubits;
    let mut v = nalgebra::DVector::from_fn(dim, |_, _| complex_gaussian(rng));
    let norm = v.norm();
    v.unscale_mut(norm);
    DensityMatrix::from_matrix_unchecked(&v * v.adjoint())
}

/// Haar-random unitary from the QR factorization of a complex Ginibre
/// matrix, with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for z in q.column_mut(j).iter_mut() {
            *z *= phase;
        }
    }
    q
}
