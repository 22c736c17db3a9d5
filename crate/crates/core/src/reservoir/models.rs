use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::encoding::{reset_encode, AxisConfig};
use super::sk::{build_sk_hamiltonian, SkHamiltonianConfig};
use super::QuantumReservoir;
use crate::error::{Error, Result};
use crate::qmat::{
    cnot_power, evolution_unitary, haar_random_unitary, ry, tensor_product, ComplexMatrix,
    DensityMatrix, ONE, ZERO,
};

/// SK Hamiltonian dynamics driven by reset-input encoding on subsystem `A`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NsModelConfig {
    pub hamiltonian: SkHamiltonianConfig,
    pub axis: AxisConfig,
    pub reset_subsystem: Vec<usize>,
}

impl NsModelConfig {
    pub fn new(hamiltonian: SkHamiltonianConfig, axis: AxisConfig) -> Self {
        NsModelConfig {
            hamiltonian,
            axis,
            reset_subsystem: vec![0],
        }
    }
}

/// Compiled form of [`NsModelConfig`]: `ρ ↦ e^{-iH} (tr_A ρ ⊗ σ_A(u)) e^{iH}`.
#[derive(Clone, Debug)]
pub struct NsModel {
    n_qubits: usize,
    propagator: ComplexMatrix,
    axis: AxisConfig,
    reset: Vec<usize>,
}

impl NsModel {
    pub fn new(cfg: &NsModelConfig) -> Result<Self> {
        let h = build_sk_hamiltonian(&cfg.hamiltonian)?;
        Self::with_hamiltonian(&h, cfg.axis, &cfg.reset_subsystem)
    }

    pub fn with_hamiltonian(h: &ComplexMatrix, axis: AxisConfig, reset: &[usize]) -> Result<Self> {
        axis.validate()?;
        let n_qubits = h.nrows().trailing_zeros() as usize;
        if h.nrows() != 1 << n_qubits || n_qubits < 2 {
            return Err(Error::BadDimension {
                rows: h.nrows(),
                cols: h.ncols(),
            });
        }
        let mut reset = reset.to_vec();
        reset.sort_unstable();
        reset.dedup();
        if reset.is_empty() || reset.len() >= n_qubits || reset.iter().any(|&q| q >= n_qubits) {
            return Err(Error::BadQubitSelection {
                selection: reset,
                n_qubits,
            });
        }
        Ok(NsModel {
            n_qubits,
            propagator: evolution_unitary(h)?,
            axis,
            reset,
        })
    }

    pub fn axis(&self) -> &AxisConfig {
        &self.axis
    }

    pub fn propagator(&self) -> &ComplexMatrix {
        &self.propagator
    }
}

impl QuantumReservoir for NsModel {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn step(&self, rho: &DensityMatrix, u: f64) -> Result<DensityMatrix> {
        Ok(reset_encode(rho, u, &self.axis, &self.reset)?.conjugated(&self.propagator))
    }
}

/// Kraus pair of the single-qubit amplitude damping channel.
pub fn amplitude_damping_kraus(gamma: f64) -> Result<[ComplexMatrix; 2]> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::Parameter {
            name: "damping_rate",
            value: gamma,
            expected: "in [0, 1]",
        });
    }
    let k0 = ComplexMatrix::from_row_slice(
        2,
        2,
        &[ONE, ZERO, ZERO, ONE.scale((1.0 - gamma).sqrt())],
    );
    let k1 = ComplexMatrix::from_row_slice(2, 2, &[ZERO, ONE.scale(gamma.sqrt()), ZERO, ZERO]);
    Ok([k0, k1])
}

fn embed_single(op: &ComplexMatrix, qubit: usize, n_qubits: usize) -> ComplexMatrix {
    let left = ComplexMatrix::identity(1 << qubit, 1 << qubit);
    let right_dim = 1 << (n_qubits - qubit - 1);
    let right = ComplexMatrix::identity(right_dim, right_dim);
    tensor_product(&tensor_product(&left, op), &right)
}

/// Applies amplitude damping of rate `gamma` to one qubit.
pub fn amplitude_damping(rho: &DensityMatrix, qubit: usize, gamma: f64) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    if qubit >= n {
        return Err(Error::BadQubitSelection {
            selection: vec![qubit],
            n_qubits: n,
        });
    }
    let [k0, k1] = amplitude_damping_kraus(gamma)?;
    let k0 = embed_single(&k0, qubit, n);
    let k1 = embed_single(&k1, qubit, n);
    let m = &k0 * rho.matrix() * k0.adjoint() + &k1 * rho.matrix() * k1.adjoint();
    Ok(DensityMatrix::from_matrix_unchecked(m))
}

pub fn amplitude_damping_qubit0(rho: &DensityMatrix, gamma: f64) -> Result<DensityMatrix> {
    amplitude_damping(rho, 0, gamma)
}

/// Two-qubit model with local random unitaries, amplitude damping on qubit 0
/// and a fractional CNOT, followed by `R_Y(arccos u)` on both qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubsetModelConfig {
    pub damping_rate: f64,
    pub cnot_exponent: f64,
    pub u0_seed: u64,
    pub u1_seed: u64,
}

impl Default for SubsetModelConfig {
    fn default() -> Self {
        SubsetModelConfig {
            damping_rate: 0.5,
            cnot_exponent: 0.5,
            u0_seed: DEFAULT_U0_SEED,
            u1_seed: DEFAULT_U1_SEED,
        }
    }
}

pub const DEFAULT_U0_SEED: u64 = 100;
pub const DEFAULT_U1_SEED: u64 = 101;

#[derive(Clone, Debug)]
pub struct SubsetModel {
    local: ComplexMatrix,
    entangler: ComplexMatrix,
    damping_rate: f64,
}

impl SubsetModel {
    pub fn new(cfg: &SubsetModelConfig) -> Result<Self> {
        let u0 = haar_random_unitary(2, &mut ChaCha8Rng::seed_from_u64(cfg.u0_seed));
        let u1 = haar_random_unitary(2, &mut ChaCha8Rng::seed_from_u64(cfg.u1_seed));
        Self::from_parts(&u0, &u1, cfg.damping_rate, cfg.cnot_exponent)
    }

    pub fn from_parts(
        u0: &ComplexMatrix,
        u1: &ComplexMatrix,
        damping_rate: f64,
        cnot_exponent: f64,
    ) -> Result<Self> {
        amplitude_damping_kraus(damping_rate)?;
        if !cnot_exponent.is_finite() {
            return Err(Error::Parameter {
                name: "cnot_exponent",
                value: cnot_exponent,
                expected: "finite",
            });
        }
        Ok(SubsetModel {
            local: tensor_product(u0, u1),
            entangler: cnot_power(cnot_exponent),
            damping_rate,
        })
    }

    /// The input-free part `E_sys`.
    pub fn system_channel(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let local = rho.conjugated(&self.local);
        let damped = amplitude_damping(&local, 0, self.damping_rate)?;
        Ok(damped.conjugated(&self.entangler))
    }
}

/// `R_Y(arccos u) ⊗ R_Y(arccos u)`
pub fn product_input_unitary(u: f64, n_qubits: usize) -> Result<ComplexMatrix> {
    if !(-1.0..=1.0).contains(&u) {
        return Err(Error::InputDomain {
            value: u,
            low: -1.0,
            high: 1.0,
        });
    }
    let r = ry(u.acos());
    Ok((1..n_qubits).fold(r.clone(), |acc, _| tensor_product(&acc, &r)))
}

impl QuantumReservoir for SubsetModel {
    fn n_qubits(&self) -> usize {
        2
    }

    fn step(&self, rho: &DensityMatrix, u: f64) -> Result<DensityMatrix> {
        let input = product_input_unitary(u, 2)?;
        Ok(self.system_channel(rho)?.conjugated(&input))
    }
}

/// Test reservoir: a unitary step followed by global depolarization,
/// `ρ ↦ (1-ε) V(u) W ρ W† V(u)† + ε I/d` with `V(u)` the product `R_Y`
/// encoding.
#[derive(Clone, Debug)]
pub struct DepolarizingModel {
    n_qubits: usize,
    unitary: ComplexMatrix,
    epsilon: f64,
}

impl DepolarizingModel {
    pub fn new(unitary: ComplexMatrix, epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::Parameter {
                name: "epsilon",
                value: epsilon,
                expected: "in [0, 1]",
            });
        }
        let n_qubits = unitary.nrows().trailing_zeros() as usize;
        Ok(DepolarizingModel {
            n_qubits,
            unitary,
            epsilon,
        })
    }
}

impl QuantumReservoir for DepolarizingModel {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn step(&self, rho: &DensityMatrix, u: f64) -> Result<DensityMatrix> {
        let v = product_input_unitary(u, self.n_qubits)? * &self.unitary;
        let dim = rho.dim();
        let mixed = ComplexMatrix::identity(dim, dim).scale(self.epsilon / dim as f64);
        let evolved = rho.conjugated(&v);
        Ok(DensityMatrix::from_matrix_unchecked(
            evolved.into_matrix().scale(1.0 - self.epsilon) + mixed,
        ))
    }
}

/// Diagonal of `K0†K0 + K1†K1`, for completeness checks.
pub fn kraus_completeness(gamma: f64) -> Result<DVector<f64>> {
    let [k0, k1] = amplitude_damping_kraus(gamma)?;
    let sum = k0.adjoint() * &k0 + k1.adjoint() * &k1;
    Ok(DVector::from_fn(2, |i, _| sum[(i, i)].re))
}
