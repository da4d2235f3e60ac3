//! Latitude-orbit geometry: longitude steps between ball centers, the
//! latitudes a ball covers along a meridian, and the band of latitudes a
//! whole orbit of balls covers.
//!
//! All radii here are chord radii of open balls `{u : |u - v| < r}`.

use crate::scalar::Real;

/// The ball is wide enough to contain the whole circle of latitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpansOrbit;

/// Longitude step between two points at latitude `phi` that are chord `r`
/// apart: `2 asin(r / (2 cos φ))`.
pub fn step_theta<T: Real>(r: T, phi: T) -> Result<T, SpansOrbit> {
    let ratio = r / (T::lit(2.0) * phi.cos());
    if !(ratio <= T::one()) {
        return Err(SpansOrbit);
    }
    Ok(T::lit(2.0) * ratio.asin())
}

/// Latitudes `ψ` (open interval, clamped to [-π/2, π/2]) such that the
/// direction at longitude offset `delta` and latitude `ψ` lies within chord
/// `r` of the center at latitude `phi`. `None` if the meridian misses the
/// ball.
///
/// `<u, v> = cos ψ cos φ cos Δ + sin ψ sin φ = R cos(ψ - α)` and the ball is
/// `<u, v> > 1 - r²/2`.
pub fn meridian_interval<T: Real>(phi: T, delta: T, r: T) -> Option<(T, T)> {
    let half_pi = T::FRAC_PI_2();
    let c = T::one() - r * r / T::lit(2.0);
    let a = phi.cos() * delta.cos();
    let b = phi.sin();
    let big_r = a.hypot(b);
    if c <= -big_r {
        return Some((-half_pi, half_pi));
    }
    if c >= big_r {
        return None;
    }
    let alpha = b.atan2(a);
    let half = (c / big_r).acos();
    let lo = (alpha - half).max(-half_pi);
    let hi = (alpha + half).min(half_pi);
    (lo < hi).then_some((lo, hi))
}

/// Lower intersection latitude of two radius-`r` balls centered on latitude
/// `phi` a chord `r` apart.
pub fn orbit_intersection_latitude<T: Real>(phi: T, r: T) -> Result<T, SpansOrbit> {
    let tau = step_theta(r, phi)? / T::lit(2.0);
    Ok(meridian_interval(phi, tau, r).map_or(phi, |(lo, _)| lo))
}

/// How far the covered meridian interval reaches past the orbit latitude on
/// its tighter side; `-inf` when the orbit point itself is not covered.
fn margin<T: Real>(phi: T, delta: T, r: T) -> T {
    match meridian_interval(phi, delta, r) {
        Some((lo, hi)) if lo < phi && phi < hi => (phi - lo).min(hi - phi),
        _ => T::neg_infinity(),
    }
}

/// Longitude between two neighbouring centers at which their covered
/// margins around the orbit are equal. Each center then owns the
/// longitudes on its side of the split.
pub fn split_longitude<T: Real>(phi: T, theta_a: T, r_a: T, theta_b: T, r_b: T) -> T {
    let mut lo = theta_a;
    let mut hi = theta_b;
    for _ in 0..100 {
        let mid = lo + (hi - lo) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if margin(phi, mid - theta_a, r_a) > margin(phi, theta_b - mid, r_b) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo + (hi - lo) / T::lit(2.0)
}

/// One ball center on an orbit, with the radius used for geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitCenter<T> {
    pub theta: T,
    pub radius: T,
}

/// Latitude band `(low, up)` covered at every longitude in
/// `[centers[0].theta, centers.last().theta]`, or `None` if some center's
/// owned longitudes leave the orbit latitude itself uncovered.
///
/// Along a meridian the covered latitudes shrink monotonically as the
/// longitude offset grows, so each center's band is its meridian interval
/// at the far end of the longitudes it owns.
pub fn orbit_band<T: Real>(phi: T, centers: &[OrbitCenter<T>]) -> Option<(T, T)> {
    let m = centers.len();
    if m == 0 {
        return None;
    }
    let mut reach = vec![T::zero(); m];
    for i in 0..m.saturating_sub(1) {
        let (a, b) = (centers[i], centers[i + 1]);
        let beta = split_longitude(phi, a.theta, a.radius, b.theta, b.radius);
        reach[i] = reach[i].max(beta - a.theta);
        reach[i + 1] = reach[i + 1].max(b.theta - beta);
    }
    let mut low = T::neg_infinity();
    let mut up = T::infinity();
    for (c, delta) in centers.iter().zip(&reach) {
        let (lo, hi) = meridian_interval(phi, *delta, c.radius)?;
        if !((lo < phi || phi <= -T::FRAC_PI_2()) && (phi < hi || phi >= T::FRAC_PI_2())) {
            return None;
        }
        low = low.max(lo);
        up = up.min(hi);
    }
    Some((low, up))
}
