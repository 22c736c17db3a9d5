use nalgebra::{SymmetricEigen, SVD};
use num_complex::Complex64;

use super::{ComplexMatrix, RealMatrix};
use crate::error::{Error, Result};

/// Hermiticity tolerance accepted by [`hermitian_eig`].
const EIG_HERMITIAN_TOL: f64 = 1e-8;

pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Left-to-right Kronecker product of all factors; the empty product is `[1]`.
pub fn tensor_all<'a, I>(factors: I) -> ComplexMatrix
where
    I: IntoIterator<Item = &'a ComplexMatrix>,
{
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1, 1), |acc, f| acc.kronecker(f))
}

/// Largest entry of `|m - m†|`; `+∞` for non-square input.
pub fn hermiticity_error(m: &ComplexMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Spectrum of a Hermitian matrix: eigenvalues ascending, eigenvectors as the
/// matching orthonormal columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V f(Λ) V†` for a scalar function applied to the spectrum.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            for z in scaled.column_mut(j).iter_mut() {
                *z *= w;
            }
        }
        scaled * v.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| Complex64::new(l, 0.0))
    }
}

pub fn hermitian_eig(h: &ComplexMatrix) -> Result<EigenDecomposition> {
    let deviation = hermiticity_error(h);
    if deviation > EIG_HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    // Symmetrize so the solver sees an exactly Hermitian input.
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let n = h.nrows();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(EigenDecomposition {
        eigenvalues: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        eigenvectors,
    })
}

/// `e^{-iH}` for a Hermitian generator, with unit time step.
pub fn evolution_unitary(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    Ok(eig.map_spectrum(|l| Complex64::new(0.0, -l).exp()))
}

/// Singular values in descending order; `min(rows, cols)` of them.
pub fn singular_values(m: &RealMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = SVD::new(m.clone(), false, false)
        .singular_values
        .iter()
        .map(|s| s.max(0.0))
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Number of singular values strictly above `rel_threshold * σ_max`.
pub fn numerical_rank(m: &RealMatrix, rel_threshold: f64) -> usize {
    let sv = singular_values(m);
    let Some(&max) = sv.first() else { return 0 };
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_threshold * max).count()
}

/// Moore–Penrose inverse through the SVD. Singular values at or below
/// `rel_tol * σ_max` are treated as zero.
pub fn pseudo_inverse(m: &RealMatrix, rel_tol: f64) -> RealMatrix {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return RealMatrix::zeros(cols, rows);
    }
    let svd = SVD::new(m.clone(), true, true);
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V^T");
    let max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let cutoff = rel_tol * max;

    let mut out = RealMatrix::zeros(cols, rows);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= cutoff || s == 0.0 {
            continue;
        }
        // out += v_k (1/s) u_kᵀ
        let vk = v_t.row(k).transpose();
        let uk = u.column(k);
        out.ger(1.0 / s, &vk, &uk, 1.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{Pauli, ONE, ZERO};
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_complex(rng: &mut ChaCha8Rng, r: usize, c: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(r, c, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
        let a = random_complex(rng, n, n);
        (&a + a.adjoint()).scale(0.5)
    }

    fn max_abs(m: &ComplexMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn kron_of_identities() {
        let i2 = ComplexMatrix::identity(2, 2);
        assert_eq!(tensor_product(&i2, &i2), ComplexMatrix::identity(4, 4));
    }

    #[test]
    fn kron_plus_zero_projector() {
        let half = Complex64::new(0.5, 0.0);
        let plus = ComplexMatrix::from_element(2, 2, half);
        let zero = ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO]);
        let k = tensor_product(&plus, &zero);
        for i in 0..4 {
            for j in 0..4 {
                let expected = if [(0, 0), (0, 2), (2, 0), (2, 2)].contains(&(i, j)) {
                    half
                } else {
                    ZERO
                };
                assert_eq!(k[(i, j)], expected, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn kron_matches_index_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_complex(&mut rng, 2, 2);
        let b = random_complex(&mut rng, 2, 2);
        let k = tensor_product(&a, &b);
        for i in 0..2 {
            for j in 0..2 {
                for p in 0..2 {
                    for q in 0..2 {
                        assert_eq!(k[(2 * i + p, 2 * j + q)], a[(i, j)] * b[(p, q)]);
                    }
                }
            }
        }
    }

    #[test]
    fn kron_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_complex(&mut rng, 2, 3);
        let b = random_complex(&mut rng, 3, 2);
        let c = random_complex(&mut rng, 2, 2);
        let left = tensor_product(&tensor_product(&a, &b), &c);
        let right = tensor_product(&a, &tensor_product(&b, &c));
        assert_eq!(left.shape(), right.shape());
        assert!(max_abs(&(left - right)) <= 1e-12);
    }

    #[test]
    fn eig_of_diagonal() {
        let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]));
        let e = hermitian_eig(&d).unwrap();
        assert_eq!(e.eigenvalues.len(), 2);
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 2.0).abs() < 1e-14);
        // Columns are |1⟩ then |0⟩ up to phase.
        assert!((e.eigenvectors[(1, 0)].norm() - 1.0).abs() < 1e-14);
        assert!((e.eigenvectors[(0, 1)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_of_diagonal_ascending_input_is_identity() {
        let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
        ]));
        let e = hermitian_eig(&d).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0]);
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((e.eigenvectors[(i, j)].norm() - want).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn eig_of_pauli_x() {
        let e = hermitian_eig(&Pauli::X.matrix()).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // (|0⟩ − |1⟩)/√2 and (|0⟩ + |1⟩)/√2 up to a global phase.
        let v0 = e.eigenvectors.column(0);
        let v1 = e.eigenvectors.column(1);
        let phase0 = v0[0] / Complex64::new(s, 0.0);
        assert!((v0[1] / phase0 + Complex64::new(s, 0.0)).norm() < 1e-12);
        let phase1 = v1[0] / Complex64::new(s, 0.0);
        assert!((v1[1] / phase1 - Complex64::new(s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let h = random_hermitian(&mut rng, 4);
            let e = hermitian_eig(&h).unwrap();
            assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
            assert!((e.reconstruct() - &h).norm() < 1e-9);
            let gram = e.eigenvectors.adjoint() * &e.eigenvectors;
            assert!(max_abs(&(gram - ComplexMatrix::identity(4, 4))) < 1e-10);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_row_slice(2, 2, &[ONE, ONE, ZERO, ONE]);
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let u = evolution_unitary(&ComplexMatrix::zeros(4, 4)).unwrap();
        assert!(max_abs(&(u - ComplexMatrix::identity(4, 4))) < 1e-15);
    }

    #[test]
    fn exp_of_scaled_z() {
        let h = Pauli::Z.matrix().scale(std::f64::consts::FRAC_PI_2);
        let u = evolution_unitary(&h).unwrap();
        let half_pi = std::f64::consts::FRAC_PI_2;
        assert!((u[(0, 0)] - Complex64::new(0.0, -half_pi).exp()).norm() < 1e-14);
        assert!((u[(1, 1)] - Complex64::new(0.0, half_pi).exp()).norm() < 1e-14);
        assert!(u[(0, 1)].norm() < 1e-14 && u[(1, 0)].norm() < 1e-14);
    }

    /// Scaling-and-squaring Taylor oracle for e^{-iH}, independent of the
    /// eigendecomposition route.
    fn taylor_exp(h: &ComplexMatrix) -> ComplexMatrix {
        let a = h.map(|z| z * Complex64::new(0.0, -1.0));
        let norm = a.norm();
        let squarings = (norm.log2().ceil().max(0.0) as u32) + 2;
        let scaled = a.scale(1.0 / 2f64.powi(squarings as i32));
        let n = h.nrows();
        let mut term = ComplexMatrix::identity(n, n);
        let mut sum = term.clone();
        for k in 1..=20 {
            term = &term * &scaled / Complex64::new(k as f64, 0.0);
            sum += &term;
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    #[test]
    fn exp_matches_taylor_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let h = random_hermitian(&mut rng, 4).scale(2.0);
            let u = evolution_unitary(&h).unwrap();
            assert!(max_abs(&(&u - taylor_exp(&h))) < 1e-8);
            let uu = &u * u.adjoint();
            assert!(max_abs(&(uu - ComplexMatrix::identity(4, 4))) < 1e-10);
            assert!(max_abs(&(&u * &h - &h * &u)) < 1e-9);
        }
    }

    #[test]
    fn singular_values_identity_and_rank_one() {
        assert_eq!(singular_values(&DMatrix::identity(3, 3)), vec![1.0; 3]);
        let a = nalgebra::DVector::from_vec(vec![0.6, 0.8, 0.0]);
        let b = nalgebra::DVector::from_vec(vec![0.0, 1.0]);
        let sv = singular_values(&(&a * b.transpose()));
        assert_eq!(sv.len(), 2);
        assert!((sv[0] - 1.0).abs() < 1e-14);
        assert!(sv[1].abs() < 1e-14);
    }

    #[test]
    fn singular_values_match_gram_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let m = DMatrix::from_fn(10, 5, |_, _| rng.random_range(-1.0..1.0));
        let sv = singular_values(&m);
        assert!(sv.windows(2).all(|w| w[0] >= w[1]));
        let gram = m.transpose() * &m;
        let mut eig: Vec<f64> = SymmetricEigen::new(gram).eigenvalues.iter().cloned().collect();
        eig.sort_by(|a, b| b.total_cmp(a));
        for (s, l) in sv.iter().zip(&eig) {
            assert!((s * s - l).abs() < 1e-10, "{s}^2 vs {l}");
        }
    }

    #[test]
    fn pinv_of_diagonal_and_zero() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![2.0, 4.0]));
        let p = pseudo_inverse(&d, 1e-12);
        assert!((p[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((p[(1, 1)] - 0.25).abs() < 1e-15);
        assert!(p[(0, 1)].abs() < 1e-15 && p[(1, 0)].abs() < 1e-15);
        let z = pseudo_inverse(&DMatrix::<f64>::zeros(3, 2), 1e-12);
        assert_eq!(z, DMatrix::<f64>::zeros(2, 3));
    }

    fn penrose_residuals(m: &RealMatrix, p: &RealMatrix) -> [f64; 4] {
        let mpm = m * p * m;
        let pmp = p * m * p;
        let mp = m * p;
        let pm = p * m;
        [
            (mpm - m).amax(),
            (pmp - p).amax(),
            (&mp - mp.transpose()).amax(),
            (&pm - pm.transpose()).amax(),
        ]
    }

    #[test]
    fn pinv_penrose_identities_rank_deficient() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..10 {
            let a = DMatrix::from_fn(7, 3, |_, _| rng.random_range(-1.0..1.0));
            let b = DMatrix::from_fn(3, 5, |_, _| rng.random_range(-1.0..1.0));
            let m = a * b; // rank 3
            let p = pseudo_inverse(&m, 1e-10);
            for r in penrose_residuals(&m, &p) {
                assert!(r < 1e-8, "residual {r}");
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn pinv_penrose_identities(seed in 0u64..1000, rows in 1usize..8, cols in 1usize..8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-2.0..2.0));
            let p = pseudo_inverse(&m, 1e-10);
            for r in penrose_residuals(&m, &p) {
                proptest::prop_assert!(r < 1e-8);
            }
        }
    }
}
