use thiserror::Error;

/// Errors produced anywhere in the mapping and optimization pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("qubit index {qubit} out of range for {n_qubits} qubits")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("duplicate qubit index {0} in subsystem")]
    DuplicateIndex(usize),

    #[error("CNOT control and target must differ (both {0})")]
    DegenerateCnot(usize),

    #[error("mode index {mode} out of range for {n_modes} modes")]
    ModeOutOfRange { mode: usize, n_modes: usize },

    #[error("Majorana index {index} out of range for {n_modes} modes")]
    MajoranaOutOfRange { index: usize, n_modes: usize },

    #[error("imaginary residue {imag:e} on term {pauli} (non-Hermitian input?)")]
    ImaginaryResidue { pauli: String, imag: f64 },

    #[error("non-finite coefficient in {0}")]
    NonFinite(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("percentage reduction undefined for zero reference weight")]
    ZeroReference,

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
