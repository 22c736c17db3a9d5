use num_complex::Complex64;

use super::{hermitian_eig, hermiticity_error, ComplexMatrix, ZERO};
use crate::error::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue tolerated before a state is rejected.
pub const PSD_TOL: f64 = 1e-9;

/// Hermitian, unit-trace, positive semidefinite operator on `n` qubits.
///
/// Constructors validate the invariants; the simulation kernels produce new
/// states through CPTP maps and re-check the cheap invariants (trace and
/// Hermiticity) as they go. States are never renormalized.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

fn qubits_for_dim(rows: usize, cols: usize) -> Result<usize> {
    if rows != cols || rows == 0 || !rows.is_power_of_two() || rows == 1 {
        return Err(Error::BadDimension { rows, cols });
    }
    Ok(rows.trailing_zeros() as usize)
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let n_qubits = qubits_for_dim(matrix.nrows(), matrix.ncols())?;
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let state = DensityMatrix { n_qubits, matrix };
        state.validate()?;
        Ok(state)
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        let n_qubits = matrix.nrows().trailing_zeros() as usize;
        DensityMatrix { n_qubits, matrix }
    }

    /// `|ψ⟩⟨ψ|`; the vector must already be normalized.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(amplitudes);
        let norm = v.norm();
        if (norm - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("state vector norm {norm}")));
        }
        Self::new(&v * v.adjoint())
    }

    /// `|0…0⟩⟨0…0|`
    pub fn zero_state(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        DensityMatrix { n_qubits, matrix: m }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        DensityMatrix {
            n_qubits,
            matrix: ComplexMatrix::identity(dim, dim).scale(1.0 / dim as f64),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `tr(ρ²)`
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eig(&self.matrix)
            .map(|e| e.eigenvalues[0])
            .unwrap_or(f64::NEG_INFINITY)
    }

    /// `U ρ U†` without re-validation; `U` must be unitary.
    pub fn conjugated(&self, u: &ComplexMatrix) -> Self {
        DensityMatrix {
            n_qubits: self.n_qubits,
            matrix: u * &self.matrix * u.adjoint(),
        }
    }

    /// Trace and Hermiticity within tolerance. O(d²).
    pub fn check_cheap(&self) -> Result<()> {
        let herm = hermiticity_error(&self.matrix);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("Hermiticity error {herm:e}")));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        Ok(())
    }

    /// All invariants, including positivity via the spectrum.
    pub fn validate(&self) -> Result<()> {
        self.check_cheap()?;
        let min = self.min_eigenvalue();
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("minimum eigenvalue {min:e}")));
        }
        Ok(())
    }
}

/// Gathers the bits of `index` that belong to `qubits` into a compact index,
/// `qubits[0]` most significant.
fn gather_bits(index: usize, qubits: &[usize], n: usize) -> usize {
    qubits
        .iter()
        .fold(0, |acc, &q| (acc << 1) | (index >> (n - 1 - q) & 1))
}

fn scatter_bits(compact: usize, qubits: &[usize], n: usize) -> usize {
    let k = qubits.len();
    qubits
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &q)| acc | ((compact >> (k - 1 - i) & 1) << (n - 1 - q)))
}

fn check_selection(selection: &[usize], n_qubits: usize) -> Result<Vec<usize>> {
    let mut sorted = selection.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != selection.len() || sorted.iter().any(|&q| q >= n_qubits) {
        return Err(Error::BadQubitSelection {
            selection: selection.to_vec(),
            n_qubits,
        });
    }
    Ok(sorted)
}

/// Traces out `traced` qubits; the remaining qubits keep their relative order.
pub fn partial_trace(rho: &DensityMatrix, traced: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits;
    let traced = check_selection(traced, n)?;
    if traced.len() == n {
        return Err(Error::BadQubitSelection {
            selection: traced,
            n_qubits: n,
        });
    }
    let kept: Vec<usize> = (0..n).filter(|q| !traced.contains(q)).collect();
    let out_dim = 1 << kept.len();
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for i in 0..out_dim {
        let row_base = scatter_bits(i, &kept, n);
        for j in 0..out_dim {
            let col_base = scatter_bits(j, &kept, n);
            let mut acc = ZERO;
            for t in 0..1usize << traced.len() {
                let off = scatter_bits(t, &traced, n);
                acc += rho.matrix[(row_base | off, col_base | off)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

/// Embeds the product `a ⊗ b` where `a` lives on qubits `a_qubits` and `b` on
/// the complementary qubits `b_qubits`, both in ascending order, into an
/// `n`-qubit operator with the natural qubit ordering.
pub fn place_subsystems(
    a: &ComplexMatrix,
    a_qubits: &[usize],
    b: &ComplexMatrix,
    b_qubits: &[usize],
) -> Result<ComplexMatrix> {
    let n = a_qubits.len() + b_qubits.len();
    let mut all: Vec<usize> = a_qubits.iter().chain(b_qubits).copied().collect();
    all.sort_unstable();
    all.dedup();
    if all.len() != n
        || all.last().is_some_and(|&q| q >= n)
        || a.nrows() != 1 << a_qubits.len()
        || b.nrows() != 1 << b_qubits.len()
    {
        return Err(Error::BadQubitSelection {
            selection: a_qubits.to_vec(),
            n_qubits: n,
        });
    }
    let dim = 1 << n;
    Ok(ComplexMatrix::from_fn(dim, dim, |i, j| {
        a[(gather_bits(i, a_qubits, n), gather_bits(j, a_qubits, n))]
            * b[(gather_bits(i, b_qubits, n), gather_bits(j, b_qubits, n))]
    }))
}

/// Frobenius norm of `ρ − σ`.
pub fn hilbert_schmidt_distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    (&a.matrix - &b.matrix).norm()
}

/// `½ ‖ρ − σ‖₁`
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    let diff = &a.matrix - &b.matrix;
    let eig = hermitian_eig(&diff)?;
    Ok(0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>())
}
