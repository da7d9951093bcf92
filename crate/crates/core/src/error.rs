use thiserror::Error;

use crate::gates::GateKind;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} {value} out of range (must be < {bound})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        bound: usize,
    },
    #[error("lattice side {0} unsupported: need n >= 2 and n^2 <= {max} qubits", max = crate::MAX_QUBITS)]
    UnsupportedLattice(usize),
    #[error("{0} qubits exceeds the supported maximum of {max}", max = crate::MAX_QUBITS)]
    TooManyQubits(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("control and target must differ (both are qubit {0})")]
    SameQubit(usize),
    #[error("gate angle must be finite, got {0}")]
    NonFiniteAngle(f64),
    #[error("first-order gate angle must satisfy |theta| < 1, got {0}")]
    AngleOutsidePerturbative(f64),
    #[error("{kind} is not unitary; its inverse would amplify numerical noise")]
    NotInvertible { kind: GateKind },
    #[error("dense matrix refused for {0} qubits (limit {limit})", limit = crate::gates::DENSE_MATRIX_MAX_QUBITS)]
    DenseTooLarge(usize),
    #[error("normalization violated: residual {residual:.3e}")]
    NotNormalized { residual: f64 },
    #[error("vectors are not orthogonal: overlap {overlap:.3e}")]
    NotOrthogonal { overlap: f64 },
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("{0} must not be empty")]
    Empty(&'static str),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
