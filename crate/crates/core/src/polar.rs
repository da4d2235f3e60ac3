//! Analysis specific to Polar Coordinates: orbit sums, the directed
//! discrepancy at the north pole, the radius around the pole inside which a
//! cap boundary meets at most one orbit, and the driver that certifies the
//! north pole as the worst direction for one `n`.

use serde::{Deserialize, Serialize};

use crate::covering::{cover_region, CoverOutcome, CoverParams};
use crate::discrepancy::directed_at;
use crate::error::{CoverError, PointSetError};
use crate::geometry::{chord_to_angle, Region, UnitVec};
use crate::points::{
    generate_polar, generate_twisted_polar, orbit_height, orbit_point_count, PointSet,
};
use crate::scalar::Real;

/// Which polar generator to use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Structure {
    Polar,
    #[default]
    Twisted,
}

impl Structure {
    pub fn generate<T: Real>(&self, n: usize) -> Result<PointSet<T>, PointSetError> {
        match self {
            Structure::Polar => generate_polar(n),
            Structure::Twisted => generate_twisted_polar(n),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Structure::Polar => "polar",
            Structure::Twisted => "twisted",
        }
    }
}

/// `sums[j]` is the number of points on or above orbit `j`, where orbit 0
/// is the south pole and orbit `n` the north pole.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSums {
    pub n: usize,
    pub sums: Vec<usize>,
    pub t: usize,
}

impl OrbitSums {
    /// Points on orbit `j` (1 for the poles).
    pub fn count(&self, j: usize) -> usize {
        self.sums[j] - self.sums.get(j + 1).copied().unwrap_or(0)
    }
}

pub fn orbit_sums(n: usize) -> Result<OrbitSums, PointSetError> {
    if n < 2 {
        return Err(PointSetError::OrderTooSmall(n));
    }
    let mut sums = vec![0usize; n + 1];
    sums[n] = 1;
    for j in (1..n).rev() {
        sums[j] = sums[j + 1] + orbit_point_count(n, j);
    }
    sums[0] = sums[1] + 1;
    Ok(OrbitSums {
        n,
        t: sums[0],
        sums,
    })
}

/// `√3 n (cos(π/2n) + cos((2j-1)π/2n)) / (2 sin(π/2n))`, the orbit sum
/// without the rounding of each `n_i`.
pub fn orbit_sum_closed_form(n: usize, j: usize) -> f64 {
    use std::f64::consts::PI;
    let nn = n as f64;
    let h = PI / (2.0 * nn);
    3f64.sqrt() * nn * (h.cos() + ((2.0 * j as f64 - 1.0) * h).cos()) / (2.0 * h.sin())
}

/// Directed discrepancy of the order-`n` polar structure at `(0, 0, 1)`,
/// from orbit sums: caps at each orbit height with the orbit counted inside
/// (`S_j`) or outside (`S_{j+1}`).
pub fn north_pole_directed<T: Real>(n: usize) -> Result<T, PointSetError> {
    let sums = orbit_sums(n)?;
    let t = T::from_count(sums.t);
    let half = T::lit(0.5);
    let mut best = T::zero();
    for j in 0..=n {
        let z = match j {
            0 => -T::one(),
            j if j == n => T::one(),
            j => orbit_height::<T>(n, j).0,
        };
        let area = (T::one() - z) * half;
        let above = sums.sums.get(j + 1).copied().unwrap_or(0);
        best = best
            .max((T::from_count(sums.sums[j]) / t - area).abs())
            .max((T::from_count(above) / t - area).abs());
    }
    Ok(best)
}

/// Chord radius around `(0, 0, 1)` such that every plane whose normal lies
/// within it meets at most one orbit (the poles count as orbits).
///
/// For orbits at heights `z₁ < z₂` in a box whose faces circumscribe the
/// wider orbit (half-width `ρ`), the steepest plane crossing both has normal
/// `∝ (0, -(z₂ - z₁), 2ρ)`; a plane tilted less cannot climb from one height
/// to the other within the box.
pub fn north_pole_local_radius<T: Real>(n: usize) -> Result<T, PointSetError> {
    if n < 2 {
        return Err(PointSetError::OrderTooSmall(n));
    }
    // Heights and radii of the orbits at z >= 0, bottom up, then the pole.
    let mut upper: Vec<(T, T)> = (1..n)
        .filter(|&j| 2 * j >= n)
        .map(|j| orbit_height::<T>(n, j))
        .collect();
    upper.push((T::one(), T::zero()));
    let mut pairs: Vec<(T, T, T)> = upper
        .windows(2)
        .map(|w| (w[0].0, w[1].0, w[0].1.max(w[1].1)))
        .collect();
    if n % 2 == 1 {
        // The two orbits nearest the equator straddle it.
        let (z, rho) = upper[0];
        pairs.push((-z, z, rho));
    }
    let two = T::lit(2.0);
    let radius = pairs
        .into_iter()
        .map(|(z1, z2, rho)| {
            let (ny, nz) = (-(z2 - z1), two * rho);
            let nz = nz / ny.hypot(nz);
            (two - two * nz).max(T::zero()).sqrt()
        })
        .fold(T::infinity(), |a, b| a.min(b));
    Ok(radius)
}

/// Latitude above which directions are within chord `r` of the north pole.
pub fn phi_max_from_radius<T: Real>(r: T) -> T {
    T::FRAC_PI_2() - chord_to_angle(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NorthPoleCertificate<T> {
    pub n: usize,
    pub t: usize,
    pub north_value: T,
    pub local_radius: T,
    pub phi_max: T,
    /// `north_value · t / n`; the orbit-sum bound says this is at most `√3/2 + 4`.
    pub bound_constant_check: T,
}

impl<T: Real> NorthPoleCertificate<T> {
    pub fn new(n: usize) -> Result<Self, PointSetError> {
        let t = orbit_sums(n)?.t;
        let north_value = north_pole_directed::<T>(n)?;
        let local_radius = north_pole_local_radius::<T>(n)?;
        Ok(Self {
            n,
            t,
            north_value,
            local_radius,
            phi_max: phi_max_from_radius(local_radius),
            bound_constant_check: north_value * T::from_count(t) / T::from_count(n),
        })
    }

    /// `(√3/2 + 4) n / t`.
    pub fn bound(&self) -> T {
        (T::lit(3f64.sqrt() / 2.0) + T::lit(4.0)) * T::from_count(self.n) / T::from_count(self.t)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConjectureError {
    #[error(transparent)]
    Points(#[from] PointSetError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}

/// Output of [`conjecture_setup`].
pub type ConjectureSetup<T> = (PointSet<T>, NorthPoleCertificate<T>, CoverParams<T>);

/// Point set, certificate and cover parameters of one conjecture check:
/// `d` is the directed discrepancy at the north pole and the region is
/// `0 <= φ <= φ_max`, `0 <= θ <= π`.
///
/// Directions `-v` and `v` have the same directed discrepancy and the set
/// is symmetric under `z -> -z`, so `(θ, φ)` and `(θ + π, φ)` are
/// equivalent and the region reaches every direction outside the polar
/// caps.
pub fn conjecture_setup<T: Real>(
    n: usize,
    structure: Structure,
) -> Result<ConjectureSetup<T>, ConjectureError> {
    let ps = structure.generate::<T>(n)?;
    let cert = NorthPoleCertificate::<T>::new(n)?;
    let d = directed_at(ps.points(), &UnitVec::north_pole()).value;
    let region =
        Region::new(T::zero(), cert.phi_max, T::zero(), T::PI()).map_err(CoverError::from)?;
    Ok((ps, cert, CoverParams::new(d, region)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureResult<T> {
    pub structure: Structure,
    pub certificate: NorthPoleCertificate<T>,
    pub outcome: CoverOutcome<T>,
}

/// Runs the covering search for the order-`n` structure with `d` set to
/// the north-pole value. `covered` certifies that no direction in the
/// region beats the pole by more than `1/t`.
pub fn conjecture_check<T: Real>(
    n: usize,
    structure: Structure,
) -> Result<ConjectureResult<T>, ConjectureError> {
    let (ps, certificate, params) = conjecture_setup::<T>(n, structure)?;
    let outcome = cover_region(&ps, &params)?;
    Ok(ConjectureResult {
        structure,
        certificate,
        outcome,
    })
}
