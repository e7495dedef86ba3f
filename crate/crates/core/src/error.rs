use thiserror::Error;

/// Errors shared across the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point index {index} out of range (n = {n})")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid quotas: {0}")]
    InvalidQuotas(String),

    #[error("quotas infeasible: group {group} needs {required} points but only {available} exist")]
    InfeasibleQuotas {
        group: usize,
        required: usize,
        available: usize,
    },

    #[error("oracle budget exceeded: about {candidates:.2e} candidate subsets > budget {budget:.2e}")]
    BudgetExceeded { candidates: f64, budget: f64 },

    #[error("empty guess schedule: {0}")]
    EmptySchedule(String),

    #[error("no feasible guess: {0}")]
    NoFeasibleGuess(String),

    #[error("LP solver failed: {0}")]
    Numerical(String),

    #[error("all rounding weights are zero")]
    ZeroWeights,

    #[error("cluster of {size} points exceeds the subset-enumeration cap {cap}")]
    ClusterTooLarge { size: usize, cap: usize },

    #[error("dp table of {cells} cells exceeds the cell budget {budget}")]
    DpBudgetExceeded { cells: u128, budget: u64 },

    #[error("{op} requires coordinate input ({detail})")]
    ModeMismatch { op: &'static str, detail: String },

    #[error("stream already consumed; single-pass algorithms may not re-read it")]
    StreamConsumed,

    #[error("point id {0} assigned to more than one site")]
    OverlappingPartitions(String),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
