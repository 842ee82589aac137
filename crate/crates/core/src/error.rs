use thiserror::Error;

pub type Result<T, E = SwarmError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SwarmError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("potential is singular at r = {r}")]
    Singularity { r: f64 },

    #[error("collision between agents {i} and {j} (distance {distance:e}){}", fmt_time(.t))]
    Collision {
        i: usize,
        j: usize,
        distance: f64,
        t: Option<f64>,
    },

    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("residual has no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("phase '{phase}' timed out at t = {t} before '{predicate}' held")]
    PhaseTimeout {
        phase: String,
        predicate: String,
        t: f64,
    },

    #[error("control bound M = {m} does not exceed the required threshold {threshold}")]
    ThresholdViolation { m: f64, threshold: f64 },

    #[error("control budget violated: realized sup |u| = {realized} > {budget}")]
    BudgetViolation { realized: f64, budget: f64 },

    #[error("tracking diverged: error {error} exceeds envelope {envelope}")]
    TrackingDivergence { error: f64, envelope: f64 },

    #[error("geometric precondition failed: {0}")]
    Geometry(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

fn fmt_time(t: &Option<f64>) -> String {
    match t {
        Some(t) => format!(" at t = {t}"),
        None => String::new(),
    }
}

impl SwarmError {
    /// Attach a simulation time to collision errors raised by time-agnostic force code.
    pub fn at_time(self, time: f64) -> Self {
        match self {
            SwarmError::Collision { i, j, distance, .. } => SwarmError::Collision {
                i,
                j,
                distance,
                t: Some(time),
            },
            other => other,
        }
    }

    /// Process exit status for the command-line tool: 1 for unmet run-time guarantees
    /// (timeouts, budgets, tracking), 2 for bad input, 3 for numeric breakdown.
    pub fn exit_code(&self) -> i32 {
        match self {
            SwarmError::PhaseTimeout { .. } | SwarmError::BudgetViolation { .. } | SwarmError::TrackingDivergence { .. } => 1,
            SwarmError::Config(_)
            | SwarmError::Param(_)
            | SwarmError::Io(_)
            | SwarmError::ThresholdViolation { .. }
            | SwarmError::Geometry(_)
            | SwarmError::Domain(_) => 2,
            SwarmError::Collision { .. }
            | SwarmError::NonFinite { .. }
            | SwarmError::Singularity { .. }
            | SwarmError::Degenerate(_)
            | SwarmError::NoSignChange { .. } => 3,
        }
    }

    /// True for collision and non-finite failures.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            SwarmError::Collision { .. } | SwarmError::NonFinite { .. } | SwarmError::Singularity { .. }
        )
    }
}

impl From<std::io::Error> for SwarmError {
    fn from(e: std::io::Error) -> Self {
        SwarmError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for SwarmError {
    fn from(e: serde_json::Error) -> Self {
        SwarmError::Config(e.to_string())
    }
}
