//! Certifies `Dis_v <= d` for every direction `v` of a polar rectangle by
//! covering it with confidence balls.
//!
//! Phase 1 sweeps latitude orbits from the top of the region downwards. On
//! each orbit the centers are walked in longitude, each step as wide as the
//! current ball allows, and the next orbit is placed as low as possible
//! while still overlapping the latitude band the current one covers.
//! Directions whose ball is smaller than the orbit's `r_min` are queued and
//! treated as having radius `r_min`; phase 2 certifies each of them with
//! [`cover_cap_recurse`].

mod cover_cap;
mod orbit;

use std::collections::VecDeque;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use cover_cap::{cover_cap_recurse, CapOutcome};
pub use orbit::{
    meridian_interval, orbit_band, orbit_intersection_latitude, split_longitude, step_theta,
    OrbitCenter, SpansOrbit,
};

use crate::discrepancy::{
    evaluate_direction_with, lipschitz_radius, ConfidenceBall, DirectedResult, RadiusRule,
};
use crate::error::CoverError;
use crate::geometry::{
    cartesian_to_polar, chord_to_angle, polar_to_cartesian, Polar, Region, UnitVec,
};
use crate::points::PointSet;
use crate::scalar::{median, Real};

pub const DEFAULT_ORBIT_SAMPLES: usize = 20;
pub const DEFAULT_R_MIN_FACTOR: f64 = 0.5;
pub const DEFAULT_COVER_CAP_DEPTH: usize = 3;
pub const DEFAULT_BINARY_SEARCH_TOL: f64 = 1e-9;

/// Relative shrink applied to every radius used for placement geometry, so
/// that computed boundaries fall strictly inside the open balls.
const RADIUS_SHRINK: f64 = 1e-9;
/// Re-searches of the next latitude when the sampled `r_min` there is
/// smaller than the one the search assumed.
const RESEARCH_LIMIT: usize = 3;
/// Re-placements of an orbit whose band fails to reach the previous one.
const PLACEMENT_LIMIT: usize = 8;
const ORBIT_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverParams<T> {
    pub d: T,
    pub region: Region<T>,
    pub orbit_sample_count: usize,
    pub r_min_factor: T,
    pub cover_cap_max_depth: usize,
    pub binary_search_tol: T,
    /// Radius used when walking the orbits.
    #[serde(default)]
    pub radius_rule: RadiusRule,
    /// Radius used inside Cover Cap, including for the queued direction
    /// itself.
    #[serde(default = "lipschitz_rule")]
    pub cover_cap_radius_rule: RadiusRule,
}

fn lipschitz_rule() -> RadiusRule {
    RadiusRule::WindowOrLipschitz
}

impl<T: Real> CoverParams<T> {
    pub fn new(d: T, region: Region<T>) -> Self {
        Self {
            d,
            region,
            orbit_sample_count: DEFAULT_ORBIT_SAMPLES,
            r_min_factor: T::lit(DEFAULT_R_MIN_FACTOR),
            cover_cap_max_depth: DEFAULT_COVER_CAP_DEPTH,
            binary_search_tol: T::lit(DEFAULT_BINARY_SEARCH_TOL),
            radius_rule: RadiusRule::Window,
            cover_cap_radius_rule: RadiusRule::WindowOrLipschitz,
        }
    }

    pub fn validate(&self) -> Result<(), CoverError> {
        if !(self.d > T::zero() && self.d <= T::one()) {
            return Err(CoverError::InvalidParams(format!(
                "d = {} outside (0, 1]",
                self.d
            )));
        }
        if self.orbit_sample_count == 0 {
            return Err(CoverError::InvalidParams(
                "orbit_sample_count must be >= 1".into(),
            ));
        }
        if !(self.r_min_factor > T::zero() && self.r_min_factor <= T::one()) {
            return Err(CoverError::InvalidParams(format!(
                "r_min_factor = {} outside (0, 1]",
                self.r_min_factor
            )));
        }
        if !(self.binary_search_tol > T::zero()) {
            return Err(CoverError::InvalidParams(
                "binary_search_tol must be positive".into(),
            ));
        }
        let r = self.region;
        Region::new(r.phi_min, r.phi_max, r.theta_min, r.theta_max)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    Orbit,
    CoverCap,
}

/// One certified ball: every direction within chord `radius` of `center`
/// has directed discrepancy at most `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageRecord<T> {
    pub direction: Polar<T>,
    pub center: UnitVec<T>,
    pub radius: T,
    pub directed_value: T,
    pub origin: Origin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Uncovered<T> {
    pub direction: Polar<T>,
    pub center: UnitVec<T>,
    pub required_radius: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverStatus {
    Covered,
    Counterexample,
    Residual,
}

impl CoverStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CoverStatus::Covered => "covered",
            CoverStatus::Counterexample => "counterexample",
            CoverStatus::Residual => "residual",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    /// Directions placed to cover the region: the orbit centers and the
    /// pole ball.
    pub n_dd: usize,
    /// Orbit centers handed to Cover Cap.
    pub n_cc: usize,
    /// Every directed-discrepancy evaluation, including `r_min` samples,
    /// rejected placements and Cover Cap centers.
    pub evaluations: usize,
    pub orbits: usize,
}

/// Wall-clock seconds.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub phase1: f64,
    pub cover_cap: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverOutcome<T> {
    pub status: CoverStatus,
    pub records: Vec<CoverageRecord<T>>,
    pub counterexample: Option<DirectedResult<T>>,
    pub not_covered: Vec<Uncovered<T>>,
    pub counters: Counters,
    pub timings: Timings,
    /// Smallest per-orbit `r_min` used; `None` if no orbit was placed.
    pub r_min: Option<T>,
    /// `r_min` of each placed orbit, top down.
    pub orbit_r_min: Vec<T>,
    /// Largest directed discrepancy among evaluated directions.
    pub max_directed: T,
}

impl<T: Real> CoverOutcome<T> {
    /// Median of the per-orbit `r_min`.
    pub fn median_orbit_r_min(&self) -> Option<T> {
        median(&self.orbit_r_min)
    }
}

/// `r_min_factor × median` of the confidence radii at `orbit_sample_count`
/// evenly spaced longitudes on latitude `phi`.
pub fn r_min_from_samples<T: Real>(radii: &[T], factor: T) -> Option<T> {
    median(radii).map(|m| m * factor)
}

/// Samples the orbit at latitude `phi` and returns its `r_min`, or the
/// first sampled direction that breaks the hypothesis `Dis_v + 1/t <= d`.
pub fn estimate_orbit_r_min<T: Real>(
    ps: &PointSet<T>,
    phi: T,
    params: &CoverParams<T>,
) -> Result<T, DirectedResult<T>> {
    let dirs = sample_directions(&params.region, phi, params.orbit_sample_count);
    let radii = dirs
        .par_iter()
        .map(|v| {
            evaluate_direction_with(ps.points(), v, params.d, params.radius_rule).map(|b| b.radius)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(r_min_from_samples(&radii, params.r_min_factor).unwrap_or(T::zero()))
}

fn sample_directions<T: Real>(region: &Region<T>, phi: T, count: usize) -> Vec<UnitVec<T>> {
    let span = region.theta_span();
    (0..count)
        .map(|i| {
            let theta =
                region.theta_min + (T::from_count(i) + T::lit(0.5)) * span / T::from_count(count);
            polar_to_cartesian(Polar { theta, phi })
        })
        .collect()
}

/// Runs the covering search.
pub fn cover_region<T: Real>(
    ps: &PointSet<T>,
    params: &CoverParams<T>,
) -> Result<CoverOutcome<T>, CoverError> {
    params.validate()?;
    if ps.len() < 2 {
        return Err(CoverError::TooFewPoints(ps.len()));
    }
    let start = Instant::now();
    let mut engine = Engine::new(ps.points(), params);
    let phase1 = engine.phase1();
    let phase1_s = start.elapsed().as_secs_f64();
    let cc_start = Instant::now();
    let halted = match phase1 {
        Ok(()) => engine.phase2(),
        Err(h) => Err(h),
    };
    let cover_cap_s = cc_start.elapsed().as_secs_f64();
    let counterexample = match halted {
        Ok(()) => None,
        Err(Halt::Counterexample(cx)) => Some(cx),
        Err(Halt::Error(e)) => return Err(e),
    };
    let status = if counterexample.is_some() {
        CoverStatus::Counterexample
    } else if !engine.not_covered.is_empty() || !engine.queue.is_empty() {
        CoverStatus::Residual
    } else {
        CoverStatus::Covered
    };
    Ok(CoverOutcome {
        status,
        records: engine.records,
        counterexample,
        not_covered: engine.not_covered,
        counters: engine.counters,
        timings: Timings {
            phase1: phase1_s,
            cover_cap: cover_cap_s,
            total: start.elapsed().as_secs_f64(),
        },
        r_min: engine.orbit_r_min.iter().copied().reduce(|a, b| a.min(b)),
        orbit_r_min: engine.orbit_r_min,
        max_directed: engine.max_directed,
    })
}

/// Whether an orbit band contains its own latitude (a band clamped at the
/// south pole counts).
fn holds<T: Real>(phi: T, low: T, up: T) -> bool {
    (low < phi || phi <= -T::FRAC_PI_2()) && phi < up
}

enum Halt<T> {
    Counterexample(DirectedResult<T>),
    Error(CoverError),
}

impl<T> From<CoverError> for Halt<T> {
    fn from(e: CoverError) -> Self {
        Halt::Error(e)
    }
}

struct Placement<T> {
    low: T,
    up: T,
    centers: usize,
    records: Vec<CoverageRecord<T>>,
    queued: Vec<(UnitVec<T>, ConfidenceBall<T>, T)>,
}

struct Engine<'a, T> {
    points: &'a [UnitVec<T>],
    params: &'a CoverParams<T>,
    shrink: T,
    records: Vec<CoverageRecord<T>>,
    queue: VecDeque<(UnitVec<T>, ConfidenceBall<T>, T)>,
    not_covered: Vec<Uncovered<T>>,
    counters: Counters,
    orbit_r_min: Vec<T>,
    max_directed: T,
}

impl<'a, T: Real> Engine<'a, T> {
    fn new(points: &'a [UnitVec<T>], params: &'a CoverParams<T>) -> Self {
        Self {
            points,
            params,
            shrink: T::one() - T::lit(RADIUS_SHRINK),
            records: Vec::new(),
            queue: VecDeque::new(),
            not_covered: Vec::new(),
            counters: Counters::default(),
            orbit_r_min: Vec::new(),
            max_directed: T::zero(),
        }
    }

    fn evaluate(
        &mut self,
        dirs: &[UnitVec<T>],
    ) -> Vec<Result<ConfidenceBall<T>, DirectedResult<T>>> {
        self.evaluate_with(dirs, self.params.radius_rule)
    }

    fn evaluate_with(
        &mut self,
        dirs: &[UnitVec<T>],
        rule: RadiusRule,
    ) -> Vec<Result<ConfidenceBall<T>, DirectedResult<T>>> {
        let (points, d) = (self.points, self.params.d);
        let out: Vec<_> = dirs
            .par_iter()
            .map(|v| evaluate_direction_with(points, v, d, rule))
            .collect();
        self.counters.evaluations += dirs.len();
        for r in &out {
            let value = match r {
                Ok(b) => b.directed,
                Err(cx) => cx.value,
            };
            self.max_directed = self.max_directed.max(value);
        }
        out
    }

    fn evaluate_one(&mut self, v: UnitVec<T>) -> Result<ConfidenceBall<T>, Halt<T>> {
        self.evaluate(&[v]).remove(0).map_err(Halt::Counterexample)
    }

    fn sample_r_min(&mut self, phi: T) -> Result<T, Halt<T>> {
        let dirs = sample_directions(&self.params.region, phi, self.params.orbit_sample_count);
        let radii = self
            .evaluate(&dirs)
            .into_iter()
            .map(|r| r.map(|b| b.radius))
            .collect::<Result<Vec<_>, _>>()
            .map_err(Halt::Counterexample)?;
        let r = r_min_from_samples(&radii, self.params.r_min_factor).unwrap_or(T::zero());
        if r > T::zero() {
            Ok(r)
        } else {
            Err(CoverError::DegenerateOrbit { phi: phi.as_f64() }.into())
        }
    }

    fn record(&mut self, center: UnitVec<T>, ball: &ConfidenceBall<T>, origin: Origin) {
        if ball.radius > T::zero() {
            self.records.push(CoverageRecord {
                direction: cartesian_to_polar(&center),
                center,
                radius: ball.radius,
                directed_value: ball.directed,
                origin,
            });
        }
    }

    /// Single ball at the north pole; returns the lowest latitude it covers.
    fn north_pole(&mut self) -> Result<T, Halt<T>> {
        let v = UnitVec::north_pole();
        let ball = self.evaluate_one(v)?;
        if !(ball.radius > T::zero()) {
            return Err(CoverError::DegenerateOrbit {
                phi: T::FRAC_PI_2().as_f64(),
            }
            .into());
        }
        self.record(v, &ball, Origin::Orbit);
        self.counters.n_dd += 1;
        Ok(T::FRAC_PI_2() - chord_to_angle(ball.radius * self.shrink))
    }

    fn walk(&mut self, phi: T, r_min: T) -> Result<Placement<T>, Halt<T>> {
        let region = self.params.region;
        let mut theta = region.theta_min;
        let mut centers = Vec::new();
        let mut records = Vec::new();
        let mut queued = Vec::new();
        loop {
            let v = polar_to_cartesian(Polar { theta, phi });
            let ball = self.evaluate_one(v)?;
            let effective = if ball.radius >= r_min {
                if ball.radius > T::zero() {
                    records.push(CoverageRecord {
                        direction: Polar::new(theta, phi).map_err(CoverError::from)?,
                        center: v,
                        radius: ball.radius,
                        directed_value: ball.directed,
                        origin: Origin::Orbit,
                    });
                }
                ball.radius
            } else {
                queued.push((v, ball, r_min));
                r_min
            };
            let radius = effective * self.shrink;
            centers.push(OrbitCenter { theta, radius });
            if theta >= region.theta_max {
                break;
            }
            let next = match step_theta(radius, phi) {
                Ok(step) => theta + step,
                Err(SpansOrbit) => region.theta_max,
            };
            if !(next > theta) {
                return Err(CoverError::DegenerateOrbit { phi: phi.as_f64() }.into());
            }
            theta = next.min(region.theta_max);
        }
        let (low, up) = orbit_band(phi, &centers).unwrap_or((T::infinity(), T::neg_infinity()));
        Ok(Placement {
            low,
            up,
            centers: centers.len(),
            records,
            queued,
        })
    }

    fn commit(&mut self, p: Placement<T>, r_min: T) {
        self.counters.n_dd += p.centers;
        self.records.extend(p.records);
        self.queue.extend(p.queued);
        self.counters.orbits += 1;
        self.orbit_r_min.push(r_min);
    }

    /// Upper edge of the band an evenly spaced orbit of radius-`r` balls at
    /// latitude `phi` would cover.
    fn model_up(&self, phi: T, r: T) -> T {
        let rho = r * self.shrink;
        let half_span = self.params.region.theta_span() / T::lit(2.0);
        let delta = match step_theta(rho, phi) {
            Ok(step) => (step / T::lit(2.0)).min(half_span),
            Err(SpansOrbit) => half_span,
        };
        meridian_interval(phi, delta, rho).map_or(T::neg_infinity(), |(_, hi)| hi)
    }

    /// Lowest latitude whose model band still reaches above `prev_low`.
    fn next_latitude(&self, prev_low: T, r: T) -> T {
        let tol = self.params.binary_search_tol;
        let target = prev_low + tol;
        let mut lo = self.params.region.phi_min;
        let mut hi = prev_low;
        if self.model_up(lo, r) > target {
            return lo;
        }
        while hi - lo > tol {
            let mid = lo + (hi - lo) / T::lit(2.0);
            if self.model_up(mid, r) > target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    fn phase1(&mut self) -> Result<(), Halt<T>> {
        let region = self.params.region;
        let half_pi = T::FRAC_PI_2();
        let pole_slack = T::lit(1e-12);
        let mut prev_low;
        let mut r_model;
        if region.phi_max >= half_pi - pole_slack {
            prev_low = self.north_pole()?;
            if prev_low < region.phi_min {
                return Ok(());
            }
            r_model = self.sample_r_min(prev_low.max(region.phi_min))?;
        } else {
            let phi = region.phi_max;
            let r_min = self.sample_r_min(phi)?;
            let p = self.walk(phi, r_min)?;
            if !holds(phi, p.low, p.up) {
                return Err(CoverError::DegenerateOrbit { phi: phi.as_f64() }.into());
            }
            prev_low = p.low;
            self.commit(p, r_min);
            if phi <= region.phi_min || prev_low < region.phi_min {
                return Ok(());
            }
            r_model = r_min;
        }

        while self.counters.orbits < ORBIT_LIMIT {
            let (phi, r_min, placement) = self.place_next(prev_low, r_model)?;
            let low = placement.low;
            self.commit(placement, r_min);
            if phi <= region.phi_min || low < region.phi_min {
                return Ok(());
            }
            if !(low < prev_low) {
                return Err(CoverError::DegenerateOrbit { phi: phi.as_f64() }.into());
            }
            prev_low = low;
            r_model = r_min;
        }
        Err(CoverError::DegenerateOrbit {
            phi: prev_low.as_f64(),
        }
        .into())
    }

    fn place_next(&mut self, prev_low: T, mut r_model: T) -> Result<(T, T, Placement<T>), Halt<T>> {
        let mut researches = 0;
        let mut placements = 0;
        while placements < PLACEMENT_LIMIT {
            let phi = self.next_latitude(prev_low, r_model);
            let r_min = self.sample_r_min(phi)?;
            if r_min < r_model && researches < RESEARCH_LIMIT {
                researches += 1;
                r_model = r_min;
                continue;
            }
            let p = self.walk(phi, r_min)?;
            if holds(phi, p.low, p.up) && p.up > prev_low {
                return Ok((phi, r_min, p));
            }
            placements += 1;
            r_model = r_model.min(r_min) / T::lit(2.0);
        }
        let phi = prev_low;
        let r_min = self.sample_r_min(phi)?;
        let p = self.walk(phi, r_min)?;
        if holds(phi, p.low, p.up) {
            Ok((phi, r_min, p))
        } else {
            Err(CoverError::DegenerateOrbit { phi: phi.as_f64() }.into())
        }
    }

    fn phase2(&mut self) -> Result<(), Halt<T>> {
        self.counters.n_cc = self.queue.len();
        let depth = self.params.cover_cap_max_depth;
        let rule = self.params.cover_cap_radius_rule;
        while let Some((v, mut ball, required)) = self.queue.pop_front() {
            if rule == RadiusRule::WindowOrLipschitz {
                ball.radius = ball
                    .radius
                    .max(lipschitz_radius(ball.directed, self.params.d));
            }
            let mut eval = |dirs: &[UnitVec<T>]| self.evaluate_with(dirs, rule);
            match cover_cap_recurse(v, ball, required, depth, &mut eval)? {
                CapOutcome::Covered(balls) => {
                    for b in balls {
                        self.record(b.center, &b, Origin::CoverCap);
                    }
                }
                CapOutcome::Residual {
                    accepted, residual, ..
                } => {
                    for b in accepted {
                        self.record(b.center, &b, Origin::CoverCap);
                    }
                    for (c, r) in residual {
                        self.not_covered.push(Uncovered {
                            direction: cartesian_to_polar(&c),
                            center: c,
                            required_radius: r,
                        });
                    }
                }
                CapOutcome::Counterexample(cx) => return Err(Halt::Counterexample(cx)),
            }
        }
        Ok(())
    }
}
