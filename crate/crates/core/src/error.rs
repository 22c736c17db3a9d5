use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the simulation, diagnostic and benchmark layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix dimension {rows}x{cols} is not a square power of two")]
    BadDimension { rows: usize, cols: usize },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("qubit selection {selection:?} is invalid for a {n_qubits}-qubit system")]
    BadQubitSelection { selection: Vec<usize>, n_qubits: usize },

    #[error("Pauli string {string:?} does not match a {n_qubits}-qubit system")]
    PauliSizeMismatch { string: String, n_qubits: usize },

    #[error("cannot parse Pauli string {0:?}")]
    PauliParse(String),

    #[error("input {value} is outside the encoding domain [{low}, {high}]")]
    InputDomain { value: f64, low: f64, high: f64 },

    #[error("parameter {name} = {value} is out of range: {expected}")]
    Parameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{what} overflowed at step {step}")]
    Overflow { what: &'static str, step: usize },

    #[error("identical initial states: the ESP indicator denominator is zero")]
    IdenticalInitialStates,

    #[error("window of {window} samples needs index >= {needed}, got {index}")]
    InsufficientHistory {
        window: usize,
        index: usize,
        needed: usize,
    },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("target sequence has zero variance")]
    ConstantTarget,

    #[error("empty selection or empty data: {0}")]
    Empty(String),

    #[error("NARMA{order} diverged at step {step} (|y| = {value:e})")]
    NarmaDiverged { order: usize, step: usize, value: f64 },

    #[error("IPC term {terms:?} has degree {got}, expected {expected}")]
    DegreeMismatch {
        terms: Vec<(usize, usize)>,
        got: usize,
        expected: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    /// Stable short identifier, written into sweep outputs for failed points.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotHermitian { .. } => "not_hermitian",
            Error::BadDimension { .. } => "bad_dimension",
            Error::InvalidState(_) => "invalid_state",
            Error::BadQubitSelection { .. } => "bad_qubit_selection",
            Error::PauliSizeMismatch { .. } => "pauli_size_mismatch",
            Error::PauliParse(_) => "pauli_parse",
            Error::InputDomain { .. } => "input_domain",
            Error::Parameter { .. } => "parameter",
            Error::Step { source, .. } => source.code(),
            Error::Overflow { .. } => "overflow",
            Error::IdenticalInitialStates => "identical_initial_states",
            Error::InsufficientHistory { .. } => "insufficient_history",
            Error::LengthMismatch(_) => "length_mismatch",
            Error::ConstantTarget => "constant_target",
            Error::Empty(_) => "empty",
            Error::NarmaDiverged { .. } => "narma_diverged",
            Error::DegreeMismatch { .. } => "degree_mismatch",
            Error::Config(_) => "config",
            Error::Io { .. } => "io",
            Error::Json { .. } => "json",
        }
    }

    pub(crate) fn at_step(self, step: usize) -> Self {
        Error::Step {
            step,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
