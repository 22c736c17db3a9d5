//! Reservoir models and trajectory runners.

pub mod classical;
pub mod encoding;
pub mod models;
pub mod sk;

pub use classical::{delay_line, run_classical_reference, run_with_map, ClassicalKind, ClassicalRefConfig, InnerMap};
pub use encoding::{axis_to_euler, encoded_state, input_unitary, reset_encode, AxisConfig, EulerAngles};
pub use models::{
    amplitude_damping, amplitude_damping_kraus, amplitude_damping_qubit0, kraus_completeness,
    product_input_unitary, DepolarizingModel, NsModel, NsModelConfig, SubsetModel,
    SubsetModelConfig, DEFAULT_U0_SEED, DEFAULT_U1_SEED,
};
pub use sk::{build_sk_hamiltonian, HamiltonianPreset, SkCouplings, SkHamiltonianConfig};

use crate::error::Result;
use crate::qmat::{DensityMatrix, PauliString};
use crate::series::TimeSeries;

/// An input-driven quantum channel acting on `n_qubits` qubits.
pub trait QuantumReservoir: Sync {
    fn n_qubits(&self) -> usize;

    fn step(&self, rho: &DensityMatrix, u: f64) -> Result<DensityMatrix>;
}

/// Pauli readout of a trajectory: row `t` is measured after consuming input `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReadoutTrajectory {
    pub basis: Vec<PauliString>,
    pub series: TimeSeries,
}

impl ReadoutTrajectory {
    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn row(&self, t: usize) -> &[f64] {
        self.series.row(t)
    }
}

pub fn pauli_expectations(rho: &DensityMatrix, basis: &[PauliString]) -> Result<Vec<f64>> {
    basis.iter().map(|p| p.expectation(rho.matrix())).collect()
}

/// How often the full eigenvalue check runs inside [`run_reservoir`].
const PSD_CHECK_INTERVAL: usize = 256;

/// Drives `model` with `inputs` from `rho0`.
///
/// Trace and Hermiticity are checked after every step, positivity every few
/// hundred steps and at the end.
pub fn run_reservoir<M: QuantumReservoir + ?Sized>(
    model: &M,
    inputs: &[f64],
    rho0: &DensityMatrix,
    basis: &[PauliString],
) -> Result<ReadoutTrajectory> {
    run_with_states(model, inputs, rho0, basis, |_, _| ())
}

/// Like [`run_reservoir`], also handing each state to `visit`.
pub fn run_with_states<M: QuantumReservoir + ?Sized>(
    model: &M,
    inputs: &[f64],
    rho0: &DensityMatrix,
    basis: &[PauliString],
    mut visit: impl FnMut(usize, &DensityMatrix),
) -> Result<ReadoutTrajectory> {
    if rho0.n_qubits() != model.n_qubits() {
        return Err(crate::Error::BadDimension {
            rows: rho0.dim(),
            cols: 1 << model.n_qubits(),
        });
    }
    for p in basis {
        if p.n_qubits() != model.n_qubits() {
            return Err(crate::Error::PauliSizeMismatch {
                string: p.to_string(),
                n_qubits: model.n_qubits(),
            });
        }
    }
    let mut series = TimeSeries::with_capacity(basis.len(), inputs.len());
    let mut rho = rho0.clone();
    for (t, &u) in inputs.iter().enumerate() {
        rho = model.step(&rho, u).map_err(|e| e.at_step(t))?;
        rho.check_cheap().map_err(|e| e.at_step(t))?;
        if (t + 1) % PSD_CHECK_INTERVAL == 0 || t + 1 == inputs.len() {
            rho.validate().map_err(|e| e.at_step(t))?;
        }
        visit(t, &rho);
        series.push(&pauli_expectations(&rho, basis)?)?;
    }
    Ok(ReadoutTrajectory {
        basis: basis.to_vec(),
        series,
    })
}

/// Full-basis readout, identity string included.
pub fn run_full_readout<M: QuantumReservoir + ?Sized>(
    model: &M,
    inputs: &[f64],
    rho0: &DensityMatrix,
) -> Result<ReadoutTrajectory> {
    run_reservoir(model, inputs, rho0, &PauliString::all(model.n_qubits()))
}
