use std::path::PathBuf;

use thiserror::Error;

use crate::spectral::Representation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid of {points} points exceeds the configured cap of {cap}")]
    GridTooLarge { points: usize, cap: usize },

    #[error("field is in {found:?} representation, expected {expected:?}")]
    RepresentationMismatch {
        expected: Representation,
        found: Representation,
    },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("non-finite value at index {index} of {what}")]
    NonFinite { what: &'static str, index: usize },

    #[error("solver produced a non-finite value at t = {time} (step {step})")]
    SolverBlowup { time: f64, step: usize },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("no real roots: Q(y_min) = {q_min} > 0 at y_min = {y_min}")]
    NoRealRoots { y_min: f64, q_min: f64 },

    #[error("root finder did not converge after {iterations} iterations")]
    RootNotConverged { iterations: usize },

    #[error("outside series regime: eta*delta^(p-1) = {value} (limit {limit})")]
    SeriesRegime { value: f64, limit: f64 },

    #[error("relative error never reaches {epsilon} within t <= {horizon}")]
    NoCrossing { epsilon: f64, horizon: f64 },

    #[error("epsilon {epsilon} is below the floor {floor}")]
    EpsilonBelowFloor { epsilon: f64, floor: f64 },

    #[error("norm of the true field vanishes at t = {time}")]
    VanishingNorm { time: f64 },

    #[error("regression needs at least 3 usable points, got {0}")]
    InsufficientPoints(usize),

    #[error("trajectories are not comparable: {0}")]
    TrajectoryMismatch(String),

    #[error("config error at {key}: {reason}")]
    Config { key: String, reason: String },

    #[error("failed to parse config: {0}")]
    ConfigParse(String),

    #[error("output directory {0} is locked by another process")]
    Locked(PathBuf),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
