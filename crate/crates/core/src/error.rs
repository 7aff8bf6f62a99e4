use thiserror::Error;

/// Errors produced by the solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("gauge group rank must be at least 2, got {0}")]
    InvalidRank(u32),

    #[error("invalid trace word: {0}")]
    InvalidWord(String),

    #[error("contraction position {index} out of range for a word of length {len}")]
    PositionOutOfRange { index: usize, len: usize },

    #[error("letter at position {0} has the wrong species for this contraction")]
    WrongSpecies(usize),

    #[error("Cayley-Hamilton reduction undefined for {0}: annihilation letters in a trace longer than N")]
    UnsupportedReduction(String),

    #[error("expression is not a pure creation polynomial: {0}")]
    NotPureCreation(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error(
        "Gram matrix is not positive definite at basis index {index} (smallest normalized eigenvalue {smallest:e})"
    )]
    SingularGram { index: usize, smallest: f64 },

    #[error("Gram block with {quanta} quanta has rank {rank} < {dim}: the trace states are linearly dependent")]
    RankDeficient { quanta: u32, rank: usize, dim: usize },

    #[error("dense oracle limit exceeded: {0}")]
    OracleLimit(String),

    #[error("brick data unavailable for N={n}, nF={nf}")]
    BrickDataUnavailable { n: u32, nf: u32 },

    #[error("E = {energy} is not a root of the quantization condition of family {family}")]
    NotARoot { energy: f64, family: String },

    #[error("mixing ansatz for family {family} is inconsistent: {detail}")]
    InconsistentAnsatz { family: String, detail: String },

    #[error("invalid fermionic dressing: {0}")]
    InvalidDressing(String),

    #[error("no vacuum in sector nF={nf} for N={n}")]
    NoVacuum { n: u32, nf: u32 },

    #[error("regulator z must lie in (0, 1), got {0}")]
    InvalidRegulator(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cache file {path} does not match the requested run: {detail}")]
    CacheMismatch { path: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_rank(n: u32) -> Result<()> {
    if n < 2 {
        Err(Error::InvalidRank(n))
    } else {
        Ok(())
    }
}
