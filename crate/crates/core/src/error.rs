use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the geometric kernel and the probes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("iteration count {n} exceeds the configured cap {cap}")]
    IterationCap { n: i64, cap: u32 },

    #[error("point ({x}, {y}) is outside the {domain} domain")]
    OutsideDomain { x: f64, y: f64, domain: &'static str },

    #[error("argument {value} is outside the domain of {profile}")]
    OutsideProfile { value: f64, profile: &'static str },

    #[error("invalid map parameter: {0}")]
    MapParameter(String),

    #[error("curve needs at least two samples with distinct consecutive points")]
    DegenerateCurve,

    #[error("whisker spec rejected: {0}")]
    WhiskerSpec(String),

    #[error("operation not supported for the {0} domain")]
    UnsupportedDomain(&'static str),

    #[error("point ({x}, {y}) has no orbit representative in the fundamental cell: {reason}")]
    NotReducible { x: f64, y: f64, reason: &'static str },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("invalid metric parameter: {0}")]
    MetricParameter(String),

    #[error("sampled point ({x}, {y}) escaped the domain while iterating")]
    SampleEscaped { x: f64, y: f64 },

    #[error("probe setup rejected: {0}")]
    ProbeSetup(String),

    #[error("leaf trace does not meet the requested window")]
    EmptyTrace,

    #[error("reeb graph malformed: {0}")]
    MalformedGraph(String),

    #[error("unknown flow: {0}")]
    UnknownFlow(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn outside<T: num_traits::ToPrimitive>(x: T, y: T, domain: &'static str) -> Self {
        Error::OutsideDomain {
            x: x.to_f64().unwrap_or(f64::NAN),
            y: y.to_f64().unwrap_or(f64::NAN),
            domain,
        }
    }
}
