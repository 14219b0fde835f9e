use thiserror::Error;

/// Errors produced by every stage of the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "swarm placement infeasible: accepted {accepted} of {requested} centers after {attempts} attempts"
    )]
    PlacementInfeasible {
        accepted: usize,
        requested: usize,
        attempts: u64,
    },

    #[error(
        "brute-force evaluation needs {terms} terms, above the cost ceiling of {ceiling}; reduce the scale"
    )]
    CostCeiling { terms: u128, ceiling: u128 },

    #[error("degenerate pattern: every sample is zero")]
    DegeneratePattern,

    #[error("beam truncated: {0}")]
    BeamTruncated(String),

    #[error("target ({lat_deg}, {lon_deg}) is below the horizon of the slot at longitude {slot_lon_deg}")]
    NotVisible {
        lat_deg: f64,
        lon_deg: f64,
        slot_lon_deg: f64,
    },

    #[error("beam misses the earth")]
    BeamMissesEarth,

    #[error("config parse error: {0}")]
    ConfigParse(String),

    #[error("config validation error: `{field}` {constraint}")]
    Validation { field: String, constraint: String },

    #[error("malformed {what}: {reason}")]
    Format { what: &'static str, reason: String },

    #[error("oracle mismatch: max relative deviation {deviation:e} exceeds {tolerance:e}")]
    OracleMismatch { deviation: f64, tolerance: f64 },

    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// The innermost error, looking through stage labels.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    /// Process exit code: 2 for validation problems, 3 for numerical or
    /// stage failures, 4 for an oracle mismatch.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::InvalidParameter { .. }
            | Error::ConfigParse(_)
            | Error::Validation { .. }
            | Error::CostCeiling { .. } => 2,
            Error::OracleMismatch { .. } => 4,
            _ => 3,
        }
    }
}
