//! Input encodings: rotation about a Bloch-sphere axis and the reset-input
//! channel that overwrites a subsystem with an input-dependent pure state.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{
    conjugate, partial_trace, place_subsystems, rz, tensor_all, u3, ComplexMatrix, DensityMatrix,
    ONE, ZERO,
};

/// Rotation axis given by spherical angles; polar 0 is `+Z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisConfig {
    pub azimuth: f64,
    pub polar: f64,
}

impl AxisConfig {
    pub fn new(azimuth: f64, polar: f64) -> Result<Self> {
        let axis = AxisConfig { azimuth, polar };
        axis.validate()?;
        Ok(axis)
    }

    pub fn plus_z() -> Self {
        AxisConfig { azimuth: 0.0, polar: 0.0 }
    }

    pub fn minus_z() -> Self {
        AxisConfig { azimuth: 0.0, polar: PI }
    }

    pub fn plus_x() -> Self {
        AxisConfig { azimuth: 0.0, polar: PI / 2.0 }
    }

    pub fn plus_y() -> Self {
        AxisConfig { azimuth: PI / 2.0, polar: PI / 2.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..TAU).contains(&self.azimuth) {
            return Err(Error::Parameter {
                name: "azimuth",
                value: self.azimuth,
                expected: "in [0, 2π)",
            });
        }
        if !(0.0..=PI).contains(&self.polar) {
            return Err(Error::Parameter {
                name: "polar",
                value: self.polar,
                expected: "in [0, π]",
            });
        }
        Ok(())
    }

    pub fn unit_vector(&self) -> [f64; 3] {
        let (sp, cp) = self.polar.sin_cos();
        let (sa, ca) = self.azimuth.sin_cos();
        [sp * ca, sp * sa, cp]
    }
}

/// Angles of the `U3` gate used to diagonalize the axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerAngles {
    pub theta: f64,
    pub phi: f64,
    pub lambda: f64,
}

impl EulerAngles {
    pub fn u3(&self) -> ComplexMatrix {
        u3(self.theta, self.phi, self.lambda)
    }
}

/// Euler angles of a `U3` with `U3 (n·σ) U3† = Z`, so `U3†` carries `Z` onto
/// the axis `n`.
///
/// `U3(Θ, Φ, Λ) ∝ R_z(Φ) R_y(Θ) R_z(Λ)` and the required rotation is
/// `R_y(-polar) R_z(-azimuth)`; choosing `Θ = polar, Φ = π, Λ = π - azimuth`
/// realizes it while keeping `Θ` in `[0, π]`.
pub fn axis_to_euler(axis: &AxisConfig) -> EulerAngles {
    let lambda = (PI - axis.azimuth).rem_euclid(TAU);
    EulerAngles {
        theta: axis.polar,
        phi: PI,
        lambda,
    }
}

fn check_input(u: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&u) {
        return Err(Error::InputDomain {
            value: u,
            low: -1.0,
            high: 1.0,
        });
    }
    Ok(())
}

/// `U(u; n) = U3† R_Z(arccos u) U3`: rotation by `arccos u` about the axis.
pub fn input_unitary(u: f64, axis: &AxisConfig) -> Result<ComplexMatrix> {
    check_input(u)?;
    let u3 = axis_to_euler(axis).u3();
    Ok(u3.adjoint() * rz(u.acos()) * u3)
}

/// `σ_A(u) = U(u)^{⊗k} |0…0⟩⟨0…0| U(u)^{†⊗k}` for `k` reset qubits.
pub fn encoded_state(u: f64, axis: &AxisConfig, n_qubits: usize) -> Result<ComplexMatrix> {
    let rot = input_unitary(u, axis)?;
    let zero = ComplexMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ZERO]);
    let single = conjugate(&rot, &zero);
    Ok(tensor_all(std::iter::repeat_n(&single, n_qubits)))
}

/// `tr_A(ρ) ⊗ σ_A(u)` with the fresh state placed back on the qubits of `A`.
pub fn reset_encode(
    rho: &DensityMatrix,
    u: f64,
    axis: &AxisConfig,
    reset: &[usize],
) -> Result<DensityMatrix> {
    let mut reset_sorted = reset.to_vec();
    reset_sorted.sort_unstable();
    let rest_state = partial_trace(rho, &reset_sorted)?;
    let kept: Vec<usize> = (0..rho.n_qubits())
        .filter(|q| !reset_sorted.contains(q))
        .collect();
    let sigma = encoded_state(u, axis, reset_sorted.len())?;
    let m = place_subsystems(&sigma, &reset_sorted, rest_state.matrix(), &kept)?;
    Ok(DensityMatrix::from_matrix_unchecked(m))
}
