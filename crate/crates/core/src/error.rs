use thiserror::Error;

/// Errors produced by trace parsing, metric derivation and projection.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: malformed row: {detail}")]
    MalformedRow { line: usize, detail: String },
    #[error("line {line}: time is not strictly increasing")]
    NonMonotonicTime { line: usize },
    #[error("line {line}: voltage must be positive, got {volts}")]
    NonPositiveVoltage { line: usize, volts: f64 },
    #[error("line {line}: invalid sample: {reason}")]
    InvalidSample { line: usize, reason: String },
    #[error("missing column '{name}' in trace header")]
    MissingColumn { name: String },
    #[error("trace contains no samples")]
    EmptyTrace,
    #[error("trace has {count} samples, at least 2 required")]
    TooFewSamples { count: usize },
    #[error("trace duration {observed_s} s deviates more than 5% from declared {declared_s} s")]
    DurationMismatch { declared_s: f64, observed_s: f64 },
    #[error("cannot aggregate an empty trial list")]
    EmptyTrialList,
    #[error("scenario stats '{label}' violate an invariant: {reason}")]
    InvalidStats { label: String, reason: String },
    #[error("uniformity check needs at least 2 nodes, got {count}")]
    TooFewNodes { count: usize },
    #[error("uniformity tolerance must be in (0,1), got {tol}")]
    InvalidTolerance { tol: f64 },
    #[error("node analytics are not uniform: max spread {max_spread:.5} exceeds tolerance {tol}")]
    NonUniformNodes { max_spread: f64, tol: f64 },
    #[error("per-node division requires node analytics or an explicit override")]
    MissingAnalytics,
    #[error("unknown scenario '{label}'")]
    UnknownScenario { label: String },
    #[error("no loaded scenario at rate {rate} mps")]
    UnknownRate { rate: f64 },
    #[error("rate must be positive, got {rate}")]
    NonPositiveRate { rate: f64 },
    #[error("scenario '{label}' power {value_w} W is below its baseline {baseline_w} W; measurement error")]
    NegativeNormalization {
        label: String,
        value_w: f64,
        baseline_w: f64,
    },
    #[error("per-message curve must have at least one point")]
    EmptyCurve,
    #[error("curve point {index}: {reason}")]
    InvalidCurvePoint { index: usize, reason: String },
    #[error("cannot convert {from} to {to}: dimension mismatch")]
    DimensionMismatch { from: String, to: String },
    #[error("comparison baseline must be non-zero")]
    ZeroBaseline,
    #[error("invalid fleet: {0}")]
    InvalidFleet(String),
    #[error("invalid rate profile: {0}")]
    InvalidProfile(String),
    #[error("invalid baseline '{name}': {reason}")]
    InvalidBaseline { name: String, reason: String },
    #[error("report needs at least one section")]
    EmptyReport,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for violations of data invariants, as opposed to malformed input.
    /// The CLI maps these to a distinct exit code.
    pub fn is_data_invariant(&self) -> bool {
        matches!(
            self,
            Error::NegativeNormalization { .. }
                | Error::NonUniformNodes { .. }
                | Error::MissingAnalytics
                | Error::InvalidStats { .. }
                | Error::DurationMismatch { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
