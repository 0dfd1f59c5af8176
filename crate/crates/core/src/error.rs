use crate::qsim::MAX_QUBITS;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("qubit count {0} outside 1..={MAX_QUBITS}")]
    QubitCount(usize),
    #[error("dimension mismatch: expected {expected} qubits, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("amplitude vector of length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("unknown named state `{0}`")]
    UnknownState(alloc::string::String),
    #[error("invalid observable: {0}")]
    InvalidObservable(&'static str),
    #[error("stream length mismatch: expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("basis code {value} in record {record} is out of range")]
    OutOfRangeBasis { record: usize, value: u64 },
    #[error("invalid code: {0}")]
    InvalidCode(&'static str),
    #[error("crossover probability {0} outside [0, 0.5)")]
    InvalidCrossover(f64),
    #[error("bit error probability {0} leaves debiasing undefined")]
    Degenerate(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("estimation requested on a transmission in outage")]
    EstimateOnOutage,
    #[error("no admissible configuration fits a budget of {target} bits")]
    InfeasibleBudget { target: usize },
}
