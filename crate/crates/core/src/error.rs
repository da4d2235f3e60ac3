use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("vector ({x}, {y}, {z}) has norm {norm}, not within 1e-6 of 1")]
    NotUnit { x: f64, y: f64, z: f64, norm: f64 },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("cap height {0} outside [-1, 1]")]
    HeightOutOfRange(f64),
    #[error("latitude {0} outside [-pi/2, pi/2]")]
    LatitudeOutOfRange(f64),
    #[error("cover-cap radius {0} outside (0, sqrt 2]")]
    RadiusOutOfRange(f64),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
}

#[derive(Debug, Error)]
pub enum PointSetError {
    #[error("parameter n = {0} is too small (need n >= 2)")]
    OrderTooSmall(usize),
    #[error("point count must be at least 1")]
    EmptyRequest,
    #[error("point file {0} contains no points")]
    Empty(PathBuf),
    #[error("{path}:{line}: malformed row: {reason}")]
    Malformed {
        path: PathBuf,
        line: u64,
        reason: String,
    },
    #[error("{path}:{line}: point is not on the unit sphere (norm {norm})")]
    NonUnitPoint { path: PathBuf, line: u64, norm: f64 },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiscrepancyError {
    /// The hypothesis `Dis_v + 1/t <= d` fails at this direction, so
    /// the direction itself witnesses discrepancy at least `d - 1/t`.
    #[error(
        "direction ({x}, {y}, {z}) has directed discrepancy {directed} > d - 1/t = {threshold}"
    )]
    Witness {
        x: f64,
        y: f64,
        z: f64,
        directed: f64,
        threshold: f64,
    },
    #[error("point set has {t} points, above the exhaustive-search limit {limit}")]
    TooLarge { t: usize, limit: usize },
    #[error("point set is empty")]
    Empty,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoverError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid cover parameters: {0}")]
    InvalidParams(String),
    #[error("covering needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error(
        "sampled confidence radii at latitude {phi} have zero median; the orbit cannot be stepped"
    )]
    DegenerateOrbit { phi: f64 },
}
