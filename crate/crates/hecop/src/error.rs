use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit codes:
/// `InvalidArgument`/`UnsupportedRank` are validation failures (exit 2),
/// the remaining numeric variants are runtime failures (exit 3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input lies on a reflecting hyperplane (coordinate coincidence,
    /// zero coordinate, exact collision) where a drift or density factor
    /// is singular.
    #[error("singular input: {0}")]
    SingularInput(String),

    /// Rank exceeds the cap for explicit Weyl-group enumeration.
    #[error("unsupported rank: {0}")]
    UnsupportedRank(String),

    /// The adaptive integrator could not make progress: step halving fell
    /// below the configured floor, or the step budget ran out.
    #[error("step failure at process time {time_reached}: {message}")]
    StepFailure { time_reached: f64, message: String },

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    /// Monte Carlo estimate with too little effective sample mass to trust.
    #[error("unreliable estimate: {0}")]
    UnreliableEstimate(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn singular(msg: impl Into<String>) -> Self {
        Error::SingularInput(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::NumericFailure(msg.into())
    }
}
