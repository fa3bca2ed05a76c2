use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("radius {radius} outside the represented range [0, {r_max}]")]
    RadiusOutOfRange { radius: f64, r_max: f64 },

    #[error("warp is not positive at r = {radius} (f = {value})")]
    NonPositiveWarp { radius: f64, value: f64 },

    #[error("radius {radius} sits on a kink of the warp: one-sided mean curvatures {left} / {right}")]
    Kink { radius: f64, left: f64, right: f64 },

    #[error("empty or malformed profile table: {0}")]
    EmptyTable(String),

    #[error("area {area} is not below the tail infimum {liminf} of the profile")]
    NonDegeneracyExceeded { area: f64, liminf: f64 },

    #[error("integral of 1/Ip diverges at v = 0 (fitted head exponent {exponent})")]
    IntegralDiverges { exponent: f64 },

    #[error("volume {volume} beyond the represented profile range {v_max}")]
    VolumeOutOfRange { volume: f64, v_max: f64 },

    #[error("sublevel set at t = {t} is not precompact (maximal existence time {t_max})")]
    NotPrecompact { t: f64, t_max: f64 },

    #[error("sublevel set at t = {t} leaves the represented radius range")]
    BeyondRepresentation { t: f64 },

    #[error("radius {radius} lies on a plateau of u; |grad u| = 0 there")]
    PlateauRegion { radius: f64 },

    #[error("time {t} exceeds the guaranteed horizon {horizon}")]
    BeyondHorizon { t: f64, horizon: f64 },

    #[error("infeasible obstacles: inner set is not contained in outer set")]
    InfeasibleObstacles,

    #[error("no precompact minimizing hull: tail infimum {liminf} of f does not exceed {level}")]
    NoPrecompactHull { liminf: f64, level: f64 },

    #[error("minimizing hull escapes B({bound}): outermost radius {radius}")]
    ContainmentViolated { bound: f64, radius: f64 },

    #[error("cone construction failed: {0}")]
    Construction(String),

    #[error("grid too coarse: {cells} cells, need at least {required}")]
    GridTooCoarse { cells: usize, required: usize },

    #[error("i/o: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
