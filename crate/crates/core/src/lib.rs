//! Cap discrepancy of point sets on the unit sphere: directed discrepancy,
//! confidence balls around directions, a covering search that certifies an
//! upper bound over a region of directions, and the polar coordinate
//! constructions.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix `f64`, which is what certification runs should use.
// NaN-rejecting comparisons are written as negations on purpose.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod covering;
pub mod discrepancy;
pub mod error;
pub mod geometry;
pub mod points;
pub mod polar;
pub mod scalar;

pub use covering::{cover_region, Counters, CoverStatus, Origin, Timings};
pub use discrepancy::{
    confidence_radius, directed_discrepancy, evaluate_direction, evaluate_direction_with,
    lipschitz_radius, naive_discrepancy, project, RadiusRule, NAIVE_DEFAULT_LIMIT,
};
pub use error::{CoverError, DiscrepancyError, GeometryError, PointSetError};
pub use points::{Generator, PointSetMeta};
pub use polar::{conjecture_check, Structure};
pub use scalar::Real;

pub type UnitVector = geometry::UnitVec<f64>;
pub type PolarDirection = geometry::Polar<f64>;
pub type Cap = geometry::Cap<f64>;
pub type Region = geometry::Region<f64>;
pub type PointSet = points::PointSet<f64>;
pub type OrbitLayout = points::OrbitLayout<f64>;
pub type ProjectionProfile = discrepancy::ProjectionProfile<f64>;
pub type DirectedResult = discrepancy::DirectedResult<f64>;
pub type ConfidenceBall = discrepancy::ConfidenceBall<f64>;
pub type NaiveResult = discrepancy::NaiveResult<f64>;
pub type CoverParams = covering::CoverParams<f64>;
pub type CoverageRecord = covering::CoverageRecord<f64>;
pub type CoverOutcome = covering::CoverOutcome<f64>;
pub type NorthPoleCertificate = polar::NorthPoleCertificate<f64>;
pub type ConjectureResult = polar::ConjectureResult<f64>;
