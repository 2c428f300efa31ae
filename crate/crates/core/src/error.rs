use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("register of {qubits} qubits exceeds the memory cap of {max_qubits} qubits")]
    Capacity { qubits: usize, max_qubits: usize },

    #[error("qubit index {qubit} out of range for a {total}-qubit register")]
    QubitOutOfRange { qubit: usize, total: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("projector terms {first} and {second} overlap without being orthogonal")]
    OverlappingProjectors { first: usize, second: usize },

    #[error("post-selection pattern has no support in the state")]
    ZeroNormProjection,

    #[error("post-selection pattern is empty")]
    EmptyPattern,

    #[error("subsystem is entangled with its complement (linear entropy {residual:.3e})")]
    ResidualEntanglement { residual: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid target state: {0}")]
    InvalidTarget(String),

    #[error("invalid bit plan: {0}")]
    InvalidPlan(String),

    #[error("precision m = {m} rounds every amplitude to zero; the smallest admissible precision is {min_m}")]
    AllZeroPlan { m: u32, min_m: u32 },

    #[error("circuit text line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
