use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{tensor_all, ComplexMatrix, ONE, ZERO};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> ComplexMatrix {
        let i = Complex64::new(0.0, 1.0);
        let entries = match self {
            Pauli::I => [ONE, ZERO, ZERO, ONE],
            Pauli::X => [ZERO, ONE, ONE, ZERO],
            Pauli::Y => [ZERO, -i, i, ZERO],
            Pauli::Z => [ONE, ZERO, ZERO, -ONE],
        };
        ComplexMatrix::from_row_slice(2, 2, &entries)
    }

    fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// Entry `⟨row|P|row ⊕ flip⟩`.
    fn row_phase(self, row_bit: bool) -> Complex64 {
        match (self, row_bit) {
            (Pauli::I, _) | (Pauli::X, _) | (Pauli::Z, false) => ONE,
            (Pauli::Z, true) => -ONE,
            (Pauli::Y, false) => Complex64::new(0.0, -1.0),
            (Pauli::Y, true) => Complex64::new(0.0, 1.0),
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Pauli operators; letter `q` acts on qubit `q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        PauliString(letters)
    }

    pub fn identity(n_qubits: usize) -> Self {
        PauliString(vec![Pauli::I; n_qubits])
    }

    /// All `4^n` strings in lexicographic `I < X < Y < Z` order, qubit 0 most
    /// significant; the all-identity string comes first.
    pub fn all(n_qubits: usize) -> Vec<PauliString> {
        let count = 1usize << (2 * n_qubits);
        (0..count)
            .map(|code| {
                PauliString(
                    (0..n_qubits)
                        .map(|q| Pauli::ALL[(code >> (2 * (n_qubits - 1 - q))) & 3])
                        .collect(),
                )
            })
            .collect()
    }

    pub fn n_qubits(&self) -> usize {
        self.0.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&p| p == Pauli::I)
    }

    /// True when every non-identity letter sits on one of `qubits`.
    pub fn supported_within(&self, qubits: &[usize]) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(q, &p)| p == Pauli::I || qubits.contains(&q))
    }

    /// True when no letter is the identity.
    pub fn is_full_weight(&self) -> bool {
        self.0.iter().all(|&p| p != Pauli::I)
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let factors: Vec<ComplexMatrix> = self.0.iter().map(|p| p.matrix()).collect();
        tensor_all(&factors)
    }

    /// `tr(P ρ)` for a `2^n × 2^n` operator, using the signed-permutation
    /// structure of `P` instead of a dense product.
    pub fn expectation(&self, rho: &ComplexMatrix) -> Result<f64> {
        let n = self.0.len();
        if rho.nrows() != 1 << n || rho.ncols() != 1 << n {
            return Err(Error::PauliSizeMismatch {
                string: self.to_string(),
                n_qubits: rho.nrows().trailing_zeros() as usize,
            });
        }
        let flip_mask = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, p)| p.flips())
            .fold(0usize, |m, (q, _)| m | 1 << (n - 1 - q));
        let mut acc = ZERO;
        for row in 0..1usize << n {
            let col = row ^ flip_mask;
            let mut phase = ONE;
            for (q, &p) in self.0.iter().enumerate() {
                phase *= p.row_phase(row >> (n - 1 - q) & 1 == 1);
            }
            acc += phase * rho[(col, row)];
        }
        Ok(acc.re)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|ch| match ch.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(Error::PauliParse(s.to_owned())),
            })
            .collect::<Result<Vec<_>>>()
            .and_then(|v| {
                if v.is_empty() {
                    Err(Error::PauliParse(s.to_owned()))
                } else {
                    Ok(PauliString(v))
                }
            })
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
