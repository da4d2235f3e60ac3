//! Directed discrepancy, the window confidence radius, and the exhaustive
//! cap search used as an oracle on small point sets.
//!
//! For a direction `v`, the caps `{x : <x, v> >= h}` only change their point
//! count where `h` crosses a projection `<p, v>`, while the normalized area
//! `(1 - h)/2` is monotone in between. The supremum over `h` is therefore one
//! of finitely many one-sided limits at the sorted projections.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::DiscrepancyError;
use crate::geometry::{Cap, UnitVec};
use crate::points::PointSet;
use crate::scalar::Real;

/// Default upper bound on `t` for [`naive_discrepancy`] (cost grows like t⁴).
pub const NAIVE_DEFAULT_LIMIT: usize = 400;

/// Sorted projections of a point set onto one direction.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionProfile<T> {
    direction: UnitVec<T>,
    sorted: Vec<T>,
}

impl<T: Real> ProjectionProfile<T> {
    /// Builds a profile from projections in any order. Values are clamped to
    /// [-1, 1]; non-finite values are a caller bug.
    pub fn from_projections(direction: UnitVec<T>, mut values: Vec<T>) -> Self {
        for v in values.iter_mut() {
            *v = v.max(-T::one()).min(T::one());
        }
        values.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite projection"));
        Self {
            direction,
            sorted: values,
        }
    }

    pub fn direction(&self) -> UnitVec<T> {
        self.direction
    }

    pub fn sorted(&self) -> &[T] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }
}

/// `<p, v>` for every point, sorted ascending.
pub fn project<T: Real>(ps: &PointSet<T>, v: &UnitVec<T>) -> ProjectionProfile<T> {
    project_points(ps.points(), v)
}

pub fn project_points<T: Real>(points: &[UnitVec<T>], v: &UnitVec<T>) -> ProjectionProfile<T> {
    ProjectionProfile::from_projections(*v, points.iter().map(|p| p.dot(v)).collect())
}

/// Directed discrepancy at one direction together with a cap that attains
/// (or, for an open boundary, approaches) it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectedResult<T> {
    pub direction: UnitVec<T>,
    pub value: T,
    pub witness_height: T,
    /// Whether points with projection equal to `witness_height` are counted
    /// inside. When false the supremum is the limit of caps with heights
    /// just above `witness_height`.
    pub witness_inclusive: bool,
}

impl<T: Real> DirectedResult<T> {
    pub fn witness_cap(&self) -> Cap<T> {
        Cap {
            axis: self.direction,
            height: self.witness_height,
        }
    }
}

/// `| N/t - (1 - h)/2 |` where `N` counts points with `<p, axis> >= h`
/// (`boundary_inside`) or `> h` (otherwise).
pub fn evaluate_cap<T: Real>(points: &[UnitVec<T>], cap: &Cap<T>, boundary_inside: bool) -> T {
    let count = points
        .iter()
        .filter(|p| {
            let s = p.dot(&cap.axis);
            if boundary_inside {
                s >= cap.height
            } else {
                s > cap.height
            }
        })
        .count();
    deviation(count, points.len(), cap.height)
}

/// `|N/t - (1 - h)/2|` written as `|(2N - t)/t + h| / 2`, which is exactly
/// symmetric under `(N, h) -> (t - N, -h)`, so `v` and `-v` give bitwise
/// equal values.
fn deviation<T: Real>(count: usize, t: usize, h: T) -> T {
    let signed = T::from_count(2 * count) - T::from_count(t);
    (signed / T::from_count(t) + h).abs() * T::lit(0.5)
}

/// Exact `sup_h |N(h)/t - (1 - h)/2|` over caps with normal `profile.direction()`.
pub fn directed_discrepancy<T: Real>(profile: &ProjectionProfile<T>) -> DirectedResult<T> {
    let s = profile.sorted();
    let t = s.len();
    let mut best = DirectedResult {
        direction: profile.direction(),
        value: T::zero(),
        witness_height: T::one(),
        witness_inclusive: false,
    };
    let mut lo = 0;
    while lo < t {
        let value = s[lo];
        let mut hi = lo + 1;
        while hi < t && s[hi] == value {
            hi += 1;
        }
        let inclusive = deviation(t - lo, t, value);
        let exclusive = deviation(t - hi, t, value);
        if inclusive > best.value {
            best.value = inclusive;
            best.witness_height = value;
            best.witness_inclusive = true;
        }
        if exclusive > best.value {
            best.value = exclusive;
            best.witness_height = value;
            best.witness_inclusive = false;
        }
        lo = hi;
    }
    best
}

/// Convenience: project and evaluate.
pub fn directed_at<T: Real>(points: &[UnitVec<T>], v: &UnitVec<T>) -> DirectedResult<T> {
    directed_discrepancy(&project_points(points, v))
}

/// Largest directed discrepancy over a list of directions (first maximum wins).
pub fn max_directed<T: Real>(
    points: &[UnitVec<T>],
    directions: &[UnitVec<T>],
) -> Option<DirectedResult<T>> {
    directions
        .par_iter()
        .enumerate()
        .map(|(i, v)| (i, directed_at(points, v)))
        .reduce_with(|a, b| {
            if b.1.value > a.1.value || (b.1.value == a.1.value && b.0 < a.0) {
                b
            } else {
                a
            }
        })
        .map(|(_, r)| r)
}

/// Ball of directions around `center` in which `d` bounds the directed
/// discrepancy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceBall<T> {
    pub center: UnitVec<T>,
    pub radius: T,
    pub bound: T,
    pub k: usize,
    /// Directed discrepancy at the center.
    pub directed: T,
}

/// Radius `min_i (s_{i+k} - s_i)` with `k = ⌊t (d - Dis_v)⌋`.
///
/// Any `u` with `|u - v| < radius` has `Dis_u <= d`: rotating the normal
/// from `v` to `u` moves a point across a cap boundary only if its
/// projection lies within `|u - v|` of the boundary height, and a window
/// that short holds at most `k` projections.
///
/// Fails with [`DiscrepancyError::Witness`] unless `Dis_v + 1/t <= d`.
pub fn confidence_radius<T: Real>(
    profile: &ProjectionProfile<T>,
    d: T,
) -> Result<ConfidenceBall<T>, DiscrepancyError> {
    let directed = directed_discrepancy(profile).value;
    confidence_radius_given(profile, directed, d)
}

/// [`confidence_radius`] when the directed value is already known.
pub fn confidence_radius_given<T: Real>(
    profile: &ProjectionProfile<T>,
    directed: T,
    d: T,
) -> Result<ConfidenceBall<T>, DiscrepancyError> {
    let s = profile.sorted();
    let t = s.len();
    if t == 0 {
        return Err(DiscrepancyError::Empty);
    }
    let tt = T::from_count(t);
    let slack = (d - directed) * tt;
    if !(slack >= T::one()) {
        let v = profile.direction();
        return Err(DiscrepancyError::Witness {
            x: v.x().as_f64(),
            y: v.y().as_f64(),
            z: v.z().as_f64(),
            directed: directed.as_f64(),
            threshold: (d - T::one() / tt).as_f64(),
        });
    }
    let k = slack.floor().to_usize().unwrap_or(usize::MAX);
    let radius = if k >= t {
        T::lit(2.0)
    } else {
        s[k..]
            .iter()
            .zip(&s[..t - k])
            .map(|(hi, lo)| *hi - *lo)
            .fold(T::lit(2.0), |acc, gap| acc.min(gap))
    };
    Ok(ConfidenceBall {
        center: profile.direction(),
        radius,
        bound: d,
        k,
        directed,
    })
}

/// How a confidence radius is derived from one direction's profile.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusRule {
    /// Smallest gap spanning `k` consecutive projections.
    #[default]
    Window,
    /// The larger of the window radius and [`lipschitz_radius`].
    WindowOrLipschitz,
}

/// `2 (d - Dis_v)`.
///
/// Moving the axis by chord `δ` moves every projection by at most `δ` and
/// the area of a cap of fixed height by `δ/2`, so `Dis_u <= Dis_v + |u - v|/2`.
pub fn lipschitz_radius<T: Real>(directed: T, d: T) -> T {
    (T::lit(2.0) * (d - directed))
        .max(T::zero())
        .min(T::lit(2.0))
}

/// Directed value and confidence ball at `v`, or the directed result itself
/// when it breaks the hypothesis `Dis_v + 1/t <= d`.
pub fn evaluate_direction<T: Real>(
    points: &[UnitVec<T>],
    v: &UnitVec<T>,
    d: T,
) -> Result<ConfidenceBall<T>, DirectedResult<T>> {
    evaluate_direction_with(points, v, d, RadiusRule::Window)
}

pub fn evaluate_direction_with<T: Real>(
    points: &[UnitVec<T>],
    v: &UnitVec<T>,
    d: T,
    rule: RadiusRule,
) -> Result<ConfidenceBall<T>, DirectedResult<T>> {
    let profile = project_points(points, v);
    let directed = directed_discrepancy(&profile);
    let mut ball = confidence_radius_given(&profile, directed.value, d).map_err(|_| directed)?;
    if rule == RadiusRule::WindowOrLipschitz {
        ball.radius = ball.radius.max(lipschitz_radius(directed.value, d));
    }
    Ok(ball)
}

/// Result of the exhaustive cap search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NaiveResult<T> {
    pub value: T,
    pub witness: Cap<T>,
    pub witness_inclusive: bool,
}

#[derive(Clone, Copy)]
struct Candidate<T> {
    value: T,
    cap: Cap<T>,
    inclusive: bool,
}

fn better<T: Real>(best: &mut Option<Candidate<T>>, c: Candidate<T>) {
    match best {
        Some(b) if !(c.value > b.value) => {}
        _ => *best = Some(c),
    }
}

fn score<T: Real>(points: &[UnitVec<T>], axis: UnitVec<T>, height: T, eps: T) -> [Candidate<T>; 2] {
    let height = height.max(-T::one()).min(T::one());
    let mut inside = 0usize;
    let mut strictly = 0usize;
    for p in points {
        let s = p.dot(&axis) - height;
        if s >= -eps {
            inside += 1;
            if s > eps {
                strictly += 1;
            }
        }
    }
    let tt = T::from_count(points.len());
    let area = (T::one() - height) / T::lit(2.0);
    let cap = Cap { axis, height };
    [
        Candidate {
            value: (T::from_count(inside) / tt - area).abs(),
            cap,
            inclusive: true,
        },
        Candidate {
            value: (T::from_count(strictly) / tt - area).abs(),
            cap,
            inclusive: false,
        },
    ]
}

/// Exact cap discrepancy by enumerating every cap whose boundary is pinned
/// by one, two or three points, each with its boundary counted inside and
/// outside (both orientations for the three-point planes).
///
/// `O(t⁴)`; refuses sets larger than `limit`.
pub fn naive_discrepancy<T: Real>(
    ps: &PointSet<T>,
    limit: usize,
) -> Result<NaiveResult<T>, DiscrepancyError> {
    let points = ps.points();
    let t = points.len();
    if t == 0 {
        return Err(DiscrepancyError::Empty);
    }
    if t > limit {
        return Err(DiscrepancyError::TooLarge { t, limit });
    }
    let eps = T::unit_slack();
    let collinear = T::lit(1e-12).max(eps);

    // Per first index: singleton, then pairs, then triples, in index order;
    // the reduction keeps the earliest strict maximum.
    let best = (0..t)
        .into_par_iter()
        .map(|i| {
            let a = points[i];
            let mut best: Option<Candidate<T>> = None;
            for c in score(points, a, T::one(), eps) {
                better(&mut best, c);
            }
            for j in i + 1..t {
                let b = points[j];
                if let Some(axis) = UnitVec::normalize(a.x() + b.x(), a.y() + b.y(), a.z() + b.z())
                {
                    for c in score(points, axis, a.dot(&axis), eps) {
                        better(&mut best, c);
                    }
                }
            }
            for j in i + 1..t {
                let b = points[j];
                let ab = [b.x() - a.x(), b.y() - a.y(), b.z() - a.z()];
                for c in &points[j + 1..] {
                    let ac = [c.x() - a.x(), c.y() - a.y(), c.z() - a.z()];
                    let nx = ab[1] * ac[2] - ab[2] * ac[1];
                    let ny = ab[2] * ac[0] - ab[0] * ac[2];
                    let nz = ab[0] * ac[1] - ab[1] * ac[0];
                    if (nx * nx + ny * ny + nz * nz).sqrt() < collinear {
                        continue;
                    }
                    let Some(axis) = UnitVec::normalize(nx, ny, nz) else {
                        continue;
                    };
                    let h = a.dot(&axis);
                    for cand in score(points, axis, h, eps) {
                        better(&mut best, cand);
                    }
                    for cand in score(points, -axis, -h, eps) {
                        better(&mut best, cand);
                    }
                }
            }
            (i, best.expect("singleton candidate always present"))
        })
        .reduce_with(|x, y| {
            if y.1.value > x.1.value || (y.1.value == x.1.value && y.0 < x.0) {
                y
            } else {
                x
            }
        })
        .expect("t >= 1");
    let c = best.1;
    Ok(NaiveResult {
        value: c.value,
        witness: c.cap,
        witness_inclusive: c.inclusive,
    })
}
