use thiserror::Error;

/// Errors produced by circuit construction, synthesis, simulation and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("layout error: {0}")]
    Layout(String),

    #[error("gate operands must be distinct: {0}")]
    DuplicateOperand(String),

    #[error("RZ angle {angle} is not within {tolerance} of any pi*a/2^m with m <= {max_m}")]
    NonDyadicAngle {
        angle: f64,
        tolerance: f64,
        max_m: u32,
    },

    #[error("circuit contains composite gates; lower it first")]
    MustLowerFirst,

    #[error("vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("register size {register} does not match phase vector of length {phases}")]
    SizeMismatch { register: usize, phases: usize },

    #[error("route does not visit parity operator with mask {mask:#b}")]
    RouteMissesOperator { mask: u64 },

    #[error("polynomial evaluation references unassigned variable {0}")]
    UnassignedVariable(String),

    #[error("empty synthesis method pool")]
    EmptyPool,

    #[error("database needs at least two entries")]
    EmptyDatabase,

    #[error("label size {0} out of range (1..=64)")]
    BadLabelSize(usize),

    #[error("similarity measure returned {0}, outside [0, 1]")]
    MeasureOutOfRange(f64),

    #[error("label register of {0} qubits exceeds the advanced-tag limit of 12")]
    LabelTooWideForTag(usize),

    #[error("circuit needs {needed} qubits, above the configured cap of {cap}")]
    QubitCapExceeded { needed: usize, cap: usize },

    #[error("tagged count {m} exceeds database size {n}")]
    TooManyTagged { m: usize, n: usize },

    #[error("ancilla budget {budget} exceeded: synthesis needs {needed}")]
    AncillaBudgetExceeded { budget: usize, needed: usize },

    #[error("bad benchmark size {0}: must be a power of two in 4..=1024")]
    BadBenchmarkSize(usize),

    #[error("unknown synthesis method {0:?}")]
    UnknownMethod(String),

    #[error("query entry is not covered by the fixture labeling")]
    QueryNotLabeled,

    #[error("bad bitstring {0:?}")]
    BadBitstring(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
