//! JSON documents written by `cover` and `directed --json`.

use capdisc::covering::{CoverOutcome, CoverParams};
use capdisc::discrepancy::{DirectedResult, RadiusRule};
use capdisc::geometry::{cartesian_to_polar, Region};
use capdisc::points::{Generator, PointSet};
use capdisc::{CoverStatus, Origin};
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct DirectedJson {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
    pub witness_height: f64,
    pub witness_inclusive: bool,
}

impl DirectedJson {
    pub fn new(r: &DirectedResult<f64>) -> Self {
        let p = cartesian_to_polar(&r.direction);
        Self {
            x: r.direction.x(),
            y: r.direction.y(),
            z: r.direction.z(),
            theta: p.theta,
            phi: p.phi,
            value: r.value,
            witness_height: r.witness_height,
            witness_inclusive: r.witness_inclusive,
        }
    }
}

#[derive(Serialize)]
pub struct CoverReport {
    pub schema_version: u32,
    pub points_meta: PointsMeta,
    pub params: Params,
    pub outcome: Outcome,
    pub records: Vec<Record>,
    pub not_covered: Vec<NotCovered>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<DirectedJson>,
}

#[derive(Serialize)]
pub struct PointsMeta {
    pub generator: Generator,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub t: usize,
}

#[derive(Serialize)]
pub struct Params {
    pub d: f64,
    pub region: Region<f64>,
    pub defaults: Defaults,
}

#[derive(Serialize)]
pub struct Defaults {
    pub orbit_sample_count: usize,
    pub r_min_factor: f64,
    pub cover_cap_max_depth: usize,
    pub binary_search_tol: f64,
    pub radius_rule: RadiusRule,
    pub cover_cap_radius_rule: RadiusRule,
}

#[derive(Serialize)]
pub struct Outcome {
    pub status: CoverStatus,
    pub counters: Counters,
    pub timings: Option<Timings>,
    pub r_min: Option<f64>,
    pub median_orbit_r_min: Option<f64>,
    pub max_directed: f64,
}

#[derive(Serialize)]
pub struct Counters {
    #[serde(rename = "n_DD")]
    pub n_dd: usize,
    #[serde(rename = "n_CC")]
    pub n_cc: usize,
    pub evaluations: usize,
    pub orbits: usize,
}

#[derive(Serialize)]
pub struct Timings {
    pub phase1_s: f64,
    pub cover_cap_s: f64,
    pub total_s: f64,
}

#[derive(Serialize)]
pub struct Record {
    pub theta: f64,
    pub phi: f64,
    pub radius: f64,
    pub directed_value: f64,
    pub origin: Origin,
}

#[derive(Serialize)]
pub struct NotCovered {
    pub theta: f64,
    pub phi: f64,
    pub required_radius: f64,
}

impl CoverReport {
    pub fn new(
        ps: &PointSet<f64>,
        params: &CoverParams<f64>,
        o: &CoverOutcome<f64>,
        timings: bool,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            points_meta: PointsMeta {
                generator: ps.meta.generator,
                n: ps.meta.n,
                seed: ps.meta.seed,
                t: ps.len(),
            },
            params: Params {
                d: params.d,
                region: params.region,
                defaults: Defaults {
                    orbit_sample_count: params.orbit_sample_count,
                    r_min_factor: params.r_min_factor,
                    cover_cap_max_depth: params.cover_cap_max_depth,
                    binary_search_tol: params.binary_search_tol,
                    radius_rule: params.radius_rule,
                    cover_cap_radius_rule: params.cover_cap_radius_rule,
                },
            },
            outcome: Outcome {
                status: o.status,
                counters: Counters {
                    n_dd: o.counters.n_dd,
                    n_cc: o.counters.n_cc,
                    evaluations: o.counters.evaluations,
                    orbits: o.counters.orbits,
                },
                timings: timings.then_some(Timings {
                    phase1_s: o.timings.phase1,
                    cover_cap_s: o.timings.cover_cap,
                    total_s: o.timings.total,
                }),
                r_min: o.r_min,
                median_orbit_r_min: o.median_orbit_r_min(),
                max_directed: o.max_directed,
            },
            records: o
                .records
                .iter()
                .map(|r| Record {
                    theta: r.direction.theta,
                    phi: r.direction.phi,
                    radius: r.radius,
                    directed_value: r.directed_value,
                    origin: r.origin,
                })
                .collect(),
            not_covered: o
                .not_covered
                .iter()
                .map(|u| NotCovered {
                    theta: u.direction.theta,
                    phi: u.direction.phi,
                    required_radius: u.required_radius,
                })
                .collect(),
            counterexample: o.counterexample.as_ref().map(DirectedJson::new),
        }
    }
}
