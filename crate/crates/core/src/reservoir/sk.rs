use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{ComplexMatrix, Pauli, PauliString};

/// Transverse-coupled SK Hamiltonian with a longitudinal field,
///
/// `H = Σ_{i>j} J_ij X_i X_j + ½ Σ_i (h + D_i) Z_i`,
///
/// with `J_ij ~ U[-J_s/2, J_s/2]` and `D_i ~ U[-W·J_s/2, W·J_s/2]` drawn from `seed`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkHamiltonianConfig {
    pub n_qubits: usize,
    pub j_scale: f64,
    pub field_width: f64,
    pub global_field: f64,
    pub seed: u64,
}

/// Named parameter sets. `H1` is the main experiment; `H2`–`H5` vary the
/// field strengths.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HamiltonianPreset {
    #[default]
    H1,
    H2,
    H3,
    H4,
    H5,
}

impl HamiltonianPreset {
    pub const ALL: [HamiltonianPreset; 5] = [
        HamiltonianPreset::H1,
        HamiltonianPreset::H2,
        HamiltonianPreset::H3,
        HamiltonianPreset::H4,
        HamiltonianPreset::H5,
    ];

    /// `(h, W)` of the preset, to three significant digits.
    pub fn fields(self) -> (f64, f64) {
        match self {
            HamiltonianPreset::H1 => (0.013, 0.312),
            HamiltonianPreset::H2 => (0.013, 1.05),
            HamiltonianPreset::H3 => (0.377, 24.8),
            HamiltonianPreset::H4 => (57.2, 47.5),
            HamiltonianPreset::H5 => (48.3, 0.0305),
        }
    }

    fn default_seed(self) -> u64 {
        match self {
            HamiltonianPreset::H1 => PRESET_SEEDS[0],
            HamiltonianPreset::H2 => PRESET_SEEDS[1],
            HamiltonianPreset::H3 => PRESET_SEEDS[2],
            HamiltonianPreset::H4 => PRESET_SEEDS[3],
            HamiltonianPreset::H5 => PRESET_SEEDS[4],
        }
    }
}

/// Coupling seeds of the presets. The `H1` seed draws a strong `XX` coupling
/// and a large field on the unreset qubit,
/// so that pole-axis dynamics forget their initial state quickly.
const PRESET_SEEDS: [u64; 5] = [352, 2, 3, 4, 5];

impl SkHamiltonianConfig {
    pub fn preset(preset: HamiltonianPreset, n_qubits: usize) -> Self {
        let (h, w) = preset.fields();
        SkHamiltonianConfig {
            n_qubits,
            j_scale: 1.0,
            field_width: w,
            global_field: h,
            seed: preset.default_seed(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits < 2 || self.n_qubits > 8 {
            return Err(Error::Parameter {
                name: "n_qubits",
                value: self.n_qubits as f64,
                expected: "2 <= n_qubits <= 8",
            });
        }
        if !(self.j_scale > 0.0 && self.j_scale.is_finite()) {
            return Err(Error::Parameter {
                name: "j_scale",
                value: self.j_scale,
                expected: "finite and > 0",
            });
        }
        if !(self.field_width >= 0.0 && self.field_width.is_finite()) {
            return Err(Error::Parameter {
                name: "field_width",
                value: self.field_width,
                expected: "finite and >= 0",
            });
        }
        if !self.global_field.is_finite() {
            return Err(Error::Parameter {
                name: "global_field",
                value: self.global_field,
                expected: "finite",
            });
        }
        Ok(())
    }
}

impl Default for SkHamiltonianConfig {
    fn default() -> Self {
        Self::preset(HamiltonianPreset::H1, 2)
    }
}

/// A drawn coupling realization.
#[derive(Clone, Debug, PartialEq)]
pub struct SkCouplings {
    /// `((i, j), J_ij)` for `i > j`, in `(1,0), (2,0), (2,1), …` order.
    pub pairs: Vec<((usize, usize), f64)>,
    /// `D_i`
    pub local_fields: Vec<f64>,
}

impl SkCouplings {
    pub fn sample(cfg: &SkHamiltonianConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let half_j = 0.5 * cfg.j_scale;
        let mut pairs = Vec::new();
        for i in 0..cfg.n_qubits {
            for j in 0..i {
                pairs.push(((i, j), rng.random_range(-half_j..=half_j)));
            }
        }
        let half_d = 0.5 * cfg.field_width * cfg.j_scale;
        let local_fields = (0..cfg.n_qubits)
            .map(|_| {
                if half_d == 0.0 {
                    0.0
                } else {
                    rng.random_range(-half_d..=half_d)
                }
            })
            .collect();
        Ok(SkCouplings {
            pairs,
            local_fields,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.local_fields.len()
    }

    pub fn hamiltonian(&self, global_field: f64) -> ComplexMatrix {
        let n = self.n_qubits();
        let dim = 1 << n;
        let mut h = ComplexMatrix::zeros(dim, dim);
        for &((i, j), coupling) in &self.pairs {
            let mut letters = vec![Pauli::I; n];
            letters[i] = Pauli::X;
            letters[j] = Pauli::X;
            h += PauliString::new(letters).matrix().scale(coupling);
        }
        for (i, &d) in self.local_fields.iter().enumerate() {
            let mut letters = vec![Pauli::I; n];
            letters[i] = Pauli::Z;
            h += PauliString::new(letters).matrix().scale(0.5 * (global_field + d));
        }
        h
    }
}

pub fn build_sk_hamiltonian(cfg: &SkHamiltonianConfig) -> Result<ComplexMatrix> {
    Ok(SkCouplings::sample(cfg)?.hamiltonian(cfg.global_field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{hermiticity_error, tensor_product};

    #[test]
    fn vanishing_couplings_give_zero() {
        let cfg = SkHamiltonianConfig {
            n_qubits: 3,
            j_scale: 1e-300,
            field_width: 0.0,
            global_field: 0.0,
            seed: 9,
        };
        let h = build_sk_hamiltonian(&cfg).unwrap();
        assert!(h.iter().all(|z| z.norm() <= 1e-300));
    }

    #[test]
    fn explicit_two_qubit_expansion() {
        let couplings = SkCouplings {
            pairs: vec![((1, 0), 1.0)],
            local_fields: vec![0.0, 0.0],
        };
        let h = couplings.hamiltonian(2.0);
        let x = Pauli::X.matrix();
        let z = Pauli::Z.matrix();
        let i = Pauli::I.matrix();
        let want = tensor_product(&x, &x) + tensor_product(&z, &i) + tensor_product(&i, &z);
        assert_eq!(h, want);
    }

    #[test]
    fn sampled_hamiltonian_structure() {
        for seed in 0..20 {
            let cfg = SkHamiltonianConfig {
                seed,
                ..SkHamiltonianConfig::preset(HamiltonianPreset::H3, 2)
            };
            let c = SkCouplings::sample(&cfg).unwrap();
            let h = c.hamiltonian(cfg.global_field);
            assert_eq!(hermiticity_error(&h), 0.0);
            assert!(h.iter().all(|z| z.im == 0.0));
            let (a, b) = (
                0.5 * (cfg.global_field + c.local_fields[0]),
                0.5 * (cfg.global_field + c.local_fields[1]),
            );
            let diag = [a + b, a - b, -a + b, -a - b];
            for (k, d) in diag.iter().enumerate() {
                assert!((h[(k, k)].re - d).abs() < 1e-12);
            }
            let (_, j) = c.pairs[0];
            assert!(j.abs() <= 0.5 * cfg.j_scale);
            assert_eq!(h[(0, 3)].re, j);
            assert_eq!(h[(1, 2)].re, j);
            for d in &c.local_fields {
                assert!(d.abs() <= 0.5 * cfg.field_width * cfg.j_scale);
            }
        }
    }

    #[test]
    fn presets_carry_reported_fields() {
        let cfg = SkHamiltonianConfig::preset(HamiltonianPreset::H1, 2);
        assert_eq!((cfg.j_scale, cfg.field_width, cfg.global_field), (1.0, 0.312, 0.013));
        assert_eq!(HamiltonianPreset::H4.fields(), (57.2, 47.5));
    }

    #[test]
    fn invalid_configs_rejected() {
        for cfg in [
            SkHamiltonianConfig { n_qubits: 1, ..Default::default() },
            SkHamiltonianConfig { j_scale: 0.0, ..Default::default() },
            SkHamiltonianConfig { field_width: -1.0, ..Default::default() },
        ] {
            assert!(build_sk_hamiltonian(&cfg).is_err());
        }
    }
}
