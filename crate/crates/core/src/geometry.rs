//! Directions, caps and latitude/longitude bookkeeping on the unit sphere.
//!
//! Distances are chord (Euclidean) distances in R³ throughout; a "ball of
//! radius r around v" is the set of unit vectors u with `|u - v| < r`.

use std::ops::Neg;

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::scalar::Real;

/// Largest deviation of an input norm from 1 that is still accepted (and
/// then normalized away) by [`UnitVec::new`].
pub const NORM_ACCEPT_TOLERANCE: f64 = 1e-6;

/// Radius of the satellite ring in the eight-cap covering, as a multiple of
/// the covered radius.
pub const COVER_CAP_RING_FACTOR: f64 = 0.86;

/// Number of satellites placed on the ring.
pub const COVER_CAP_SATELLITES: usize = 7;

/// A point (or direction) on S².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitVec<T> {
    x: T,
    y: T,
    z: T,
}

impl<T: Real> UnitVec<T> {
    /// Validates and normalizes a vector that is supposed to be unit length.
    ///
    /// Inputs further than [`NORM_ACCEPT_TOLERANCE`] from unit norm are
    /// rejected rather than silently rescaled.
    pub fn new(x: T, y: T, z: T) -> Result<Self, GeometryError> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let norm = (x * x + y * y + z * z).sqrt();
        if (norm - T::one()).abs() > T::lit(NORM_ACCEPT_TOLERANCE) {
            return Err(GeometryError::NotUnit {
                x: x.as_f64(),
                y: y.as_f64(),
                z: z.as_f64(),
                norm: norm.as_f64(),
            });
        }
        Ok(Self::scaled(x, y, z, norm))
    }

    /// Normalizes an arbitrary vector; `None` if it is (numerically) zero.
    pub fn normalize(x: T, y: T, z: T) -> Option<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm <= T::min_positive_value().sqrt() {
            return None;
        }
        Some(Self::scaled(x, y, z, norm))
    }

    fn scaled(x: T, y: T, z: T, norm: T) -> Self {
        Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        }
    }

    /// Builds a vector the caller already knows to be unit length.
    pub(crate) fn from_raw(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn north_pole() -> Self {
        Self::from_raw(T::zero(), T::zero(), T::one())
    }

    pub fn south_pole() -> Self {
        Self::from_raw(T::zero(), T::zero(), -T::one())
    }

    #[inline]
    pub fn x(&self) -> T {
        self.x
    }

    #[inline]
    pub fn y(&self) -> T {
        self.y
    }

    #[inline]
    pub fn z(&self) -> T {
        self.z
    }

    #[inline]
    pub fn to_array(&self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn dot(&self, other: &Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Raw (unnormalized) cross product.
    pub fn cross(&self, other: &Self) -> [T; 3] {
        [
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        ]
    }

    /// Euclidean norm of the difference.
    #[inline]
    pub fn chord_distance(&self, other: &Self) -> T {
        chord_distance(self, other)
    }

    /// Mirror image in the plane z = 0.
    pub fn mirror_z(&self) -> Self {
        Self::from_raw(self.x, self.y, -self.z)
    }

    pub fn to_polar(&self) -> Polar<T> {
        cartesian_to_polar(self)
    }

    pub fn from_polar(p: Polar<T>) -> Self {
        polar_to_cartesian(p)
    }

    pub fn cast<U: Real>(&self) -> UnitVec<U> {
        UnitVec {
            x: U::lit(self.x.as_f64()),
            y: U::lit(self.y.as_f64()),
            z: U::lit(self.z.as_f64()),
        }
    }
}

impl<T: Real> Neg for UnitVec<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Self::from_raw(-self.x, -self.y, -self.z)
    }
}

/// Longitude/latitude pair. `theta` in [0, 2π), `phi` in [-π/2, π/2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Polar<T> {
    pub theta: T,
    pub phi: T,
}

impl<T: Real> Polar<T> {
    /// Wraps `theta` into [0, 2π) and validates `phi`.
    pub fn new(theta: T, phi: T) -> Result<Self, GeometryError> {
        if !(theta.is_finite() && phi.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let half_pi = T::FRAC_PI_2();
        if phi.abs() > half_pi + T::lit(1e-12) {
            return Err(GeometryError::LatitudeOutOfRange(phi.as_f64()));
        }
        Ok(Self {
            theta: wrap_angle(theta),
            phi: phi.max(-half_pi).min(half_pi),
        })
    }

    pub fn to_unit(self) -> UnitVec<T> {
        polar_to_cartesian(self)
    }
}

/// Wraps an angle into [0, 2π).
pub fn wrap_angle<T: Real>(theta: T) -> T {
    let tau = T::TAU();
    let mut w = theta % tau;
    if w < T::zero() {
        w = w + tau;
    }
    if w >= tau {
        w = w - tau;
    }
    w
}

/// `(cos φ cos θ, cos φ sin θ, sin φ)`.
pub fn polar_to_cartesian<T: Real>(p: Polar<T>) -> UnitVec<T> {
    let (sin_phi, cos_phi) = p.phi.sin_cos();
    let (sin_theta, cos_theta) = p.theta.sin_cos();
    UnitVec::from_raw(cos_phi * cos_theta, cos_phi * sin_theta, sin_phi)
}

/// Inverse of [`polar_to_cartesian`]; `theta = 0` at the poles.
pub fn cartesian_to_polar<T: Real>(v: &UnitVec<T>) -> Polar<T> {
    let rho = v.x.hypot(v.y);
    let phi = v.z.atan2(rho);
    let theta = if rho == T::zero() {
        T::zero()
    } else {
        wrap_angle(v.y.atan2(v.x))
    };
    Polar { theta, phi }
}

/// Fraction of the sphere's area inside a cap `{x : <x, v> >= h}`: `(1 - h)/2`.
pub fn cap_area_fraction<T: Real>(h: T) -> Result<T, GeometryError> {
    if !(h >= -T::one() && h <= T::one()) {
        return Err(GeometryError::HeightOutOfRange(h.as_f64()));
    }
    Ok((T::one() - h) / T::lit(2.0))
}

#[inline]
pub fn chord_distance<T: Real>(u: &UnitVec<T>, v: &UnitVec<T>) -> T {
    let dx = u.x - v.x;
    let dy = u.y - v.y;
    let dz = u.z - v.z;
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Angular radius (radians) of the set of unit vectors within chord `r` of a point.
pub fn chord_to_angle<T: Real>(r: T) -> T {
    let half = (r / T::lit(2.0)).min(T::one());
    T::lit(2.0) * half.asin()
}

/// Closed cap `{x : <x, axis> >= height}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cap<T> {
    pub axis: UnitVec<T>,
    pub height: T,
}

impl<T: Real> Cap<T> {
    pub fn new(axis: UnitVec<T>, height: T) -> Result<Self, GeometryError> {
        cap_area_fraction(height)?;
        Ok(Self { axis, height })
    }

    pub fn contains(&self, p: &UnitVec<T>) -> bool {
        p.dot(&self.axis) >= self.height
    }

    pub fn area_fraction(&self) -> T {
        (T::one() - self.height) / T::lit(2.0)
    }

    /// Closure of the complement: `{x : <x, -axis> >= -height}`.
    pub fn complement(&self) -> Self {
        Self {
            axis: -self.axis,
            height: -self.height,
        }
    }
}

/// Polar rectangle of directions `phi_min <= φ <= phi_max`, `theta_min <= θ <= theta_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region<T> {
    pub phi_min: T,
    pub phi_max: T,
    pub theta_min: T,
    pub theta_max: T,
}

impl<T: Real> Region<T> {
    pub fn new(phi_min: T, phi_max: T, theta_min: T, theta_max: T) -> Result<Self, GeometryError> {
        let half_pi = T::FRAC_PI_2();
        let slack = T::lit(1e-12);
        if ![phi_min, phi_max, theta_min, theta_max]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(GeometryError::NonFinite);
        }
        if phi_min > phi_max {
            return Err(GeometryError::InvalidRegion(format!(
                "phi_min {phi_min} > phi_max {phi_max}"
            )));
        }
        if theta_min > theta_max {
            return Err(GeometryError::InvalidRegion(format!(
                "theta_min {theta_min} > theta_max {theta_max}"
            )));
        }
        if phi_min < -half_pi - slack || phi_max > half_pi + slack {
            return Err(GeometryError::InvalidRegion(
                "latitudes must lie in [-pi/2, pi/2]".into(),
            ));
        }
        if theta_max - theta_min > T::TAU() + slack {
            return Err(GeometryError::InvalidRegion(
                "longitude span exceeds 2 pi".into(),
            ));
        }
        Ok(Self {
            phi_min: phi_min.max(-half_pi),
            phi_max: phi_max.min(half_pi),
            theta_min,
            theta_max,
        })
    }

    /// The upper hemisphere, enough for any point set by antipodal symmetry.
    pub fn upper_hemisphere() -> Self {
        Self {
            phi_min: T::zero(),
            phi_max: T::FRAC_PI_2(),
            theta_min: T::zero(),
            theta_max: T::TAU(),
        }
    }

    pub fn theta_span(&self) -> T {
        self.theta_max - self.theta_min
    }

    /// Whether the longitude range wraps all the way around.
    pub fn is_full_circle(&self) -> bool {
        self.theta_span() >= T::TAU() - T::lit(1e-12)
    }

    pub fn contains(&self, p: &Polar<T>) -> bool {
        if p.phi < self.phi_min || p.phi > self.phi_max {
            return false;
        }
        if self.is_full_circle() || p.phi.abs() >= T::FRAC_PI_2() {
            return true;
        }
        let rel = wrap_angle(p.theta - self.theta_min);
        rel <= self.theta_span()
    }
}

/// Orthonormal pair spanning the plane orthogonal to `c`.
pub fn tangent_frame<T: Real>(c: &UnitVec<T>) -> (UnitVec<T>, UnitVec<T>) {
    let [ax, ay, az] = [c.x.abs(), c.y.abs(), c.z.abs()];
    let helper = if ax <= ay && ax <= az {
        UnitVec::from_raw(T::one(), T::zero(), T::zero())
    } else if ay <= az {
        UnitVec::from_raw(T::zero(), T::one(), T::zero())
    } else {
        UnitVec::from_raw(T::zero(), T::zero(), T::one())
    };
    let proj = helper.dot(c);
    let e1 = UnitVec::normalize(
        helper.x - proj * c.x,
        helper.y - proj * c.y,
        helper.z - proj * c.z,
    )
    .expect("helper axis is never parallel to c");
    let [x, y, z] = c.cross(&e1);
    let e2 = UnitVec::normalize(x, y, z).expect("orthonormal");
    (e1, e2)
}

/// Point at frame latitude `lat` and frame longitude `lon` in the frame
/// whose pole is `c`.
pub fn frame_point<T: Real>(
    c: &UnitVec<T>,
    frame: &(UnitVec<T>, UnitVec<T>),
    lat: T,
    lon: T,
) -> UnitVec<T> {
    let (s, k) = lat.sin_cos();
    let (sl, cl) = lon.sin_cos();
    let (e1, e2) = frame;
    let x = s * c.x + k * (cl * e1.x + sl * e2.x);
    let y = s * c.y + k * (cl * e1.y + sl * e2.y);
    let z = s * c.z + k * (cl * e1.z + sl * e2.z);
    UnitVec::normalize(x, y, z).expect("unit combination")
}

/// Centers of eight balls of radius `r/2` that together cover the ball of
/// radius `r` around `center`: the center itself, then seven points spaced
/// 2π/7 apart on the ring at chord distance `0.86 r`.
pub fn cover_cap_centers<T: Real>(
    center: &UnitVec<T>,
    r: T,
) -> Result<[UnitVec<T>; 8], GeometryError> {
    if !(r > T::zero() && r <= T::SQRT_2() + T::lit(1e-12)) {
        return Err(GeometryError::RadiusOutOfRange(r.as_f64()));
    }
    let ring = T::lit(COVER_CAP_RING_FACTOR) * r;
    let sin_lat = (T::lit(2.0) - ring * ring) / T::lit(2.0);
    let lat = sin_lat.max(-T::one()).min(T::one()).asin();
    let frame = tangent_frame(center);
    let step = T::TAU() / T::from_count(COVER_CAP_SATELLITES);
    let mut out = [*center; 8];
    for (k, slot) in out.iter_mut().skip(1).enumerate() {
        *slot = frame_point(center, &frame, lat, step * T::from_count(k));
    }
    Ok(out)
}
