//! Point-set generators (Polar Coordinates, Twisted Polar Coordinates,
//! seeded uniform) and the `x,y,z` CSV format.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::PointSetError;
use crate::geometry::{UnitVec, NORM_ACCEPT_TOLERANCE};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Generator {
    Polar,
    TwistedPolar,
    Random,
    File,
}

impl Generator {
    pub fn as_str(&self) -> &'static str {
        match self {
            Generator::Polar => "polar",
            Generator::TwistedPolar => "twisted_polar",
            Generator::Random => "random",
            Generator::File => "file",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSetMeta {
    pub generator: Generator,
    pub n: Option<usize>,
    pub seed: Option<u64>,
}

/// Ordered points on S² plus where they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<T> {
    points: Vec<UnitVec<T>>,
    pub meta: PointSetMeta,
}

impl<T: Real> PointSet<T> {
    /// `None` when `points` is empty.
    pub fn new(points: Vec<UnitVec<T>>, meta: PointSetMeta) -> Option<Self> {
        if points.is_empty() {
            None
        } else {
            Some(Self { points, meta })
        }
    }

    pub fn from_points(points: Vec<UnitVec<T>>) -> Option<Self> {
        Self::new(
            points,
            PointSetMeta {
                generator: Generator::File,
                n: None,
                seed: None,
            },
        )
    }

    pub fn points(&self) -> &[UnitVec<T>] {
        &self.points
    }

    /// Number of points, `t`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, UnitVec<T>> {
        self.points.iter()
    }

    /// Applies `f` to every point, keeping the metadata.
    pub fn map_points(&self, f: impl Fn(&UnitVec<T>) -> UnitVec<T>) -> Self {
        Self {
            points: self.points.iter().map(f).collect(),
            meta: self.meta.clone(),
        }
    }
}

/// One latitude circle of a Polar Coordinates set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitLayout<T> {
    /// Orbit index `j` in `1..n`.
    pub index: usize,
    /// Latitude `πj/n - π/2`.
    pub phi: T,
    pub count: usize,
    /// Longitude of the first point on the orbit.
    pub shift: T,
}

/// Points on orbit `j` of the order-`n` structure: `⌊1/2 + √3·n·cos φ_j⌋`.
///
/// `cos φ_j = sin(πj/n)` is evaluated at `min(j, n - j)` so mirror orbits
/// always agree, and the only arguments that are exact integers (sin = √3/2,
/// i.e. `3j = n` or `3j = 2n`) are resolved in integer arithmetic.
pub fn orbit_point_count(n: usize, j: usize) -> usize {
    debug_assert!(j >= 1 && j < n);
    let js = j.min(n - j);
    if 3 * js == n {
        return (3 * n).div_ceil(2);
    }
    let value = 0.5 + 3f64.sqrt() * n as f64 * (std::f64::consts::PI * js as f64 / n as f64).sin();
    value.floor() as usize
}

/// Orbit layout shared by both generators; `twisted` adds the per-orbit
/// longitude shift `(j/n)·(2π/n_j)` on upper orbits and mirrors it below.
pub fn polar_layout<T: Real>(
    n: usize,
    twisted: bool,
) -> Result<Vec<OrbitLayout<T>>, PointSetError> {
    if n < 2 {
        return Err(PointSetError::OrderTooSmall(n));
    }
    let nn = T::from_count(n);
    let layout = (1..n)
        .map(|j| {
            let count = orbit_point_count(n, j);
            let js = j.min(n - j);
            let m = T::from_count(count);
            let mut shift = if js % 2 == 1 { T::PI() / m } else { T::zero() };
            if twisted && 2 * j != n {
                let upper = j.max(n - j);
                shift = shift + T::from_count(upper) / nn * (T::TAU() / m);
            }
            OrbitLayout {
                index: j,
                phi: T::PI() * T::from_count(j) / nn - T::FRAC_PI_2(),
                count,
                shift,
            }
        })
        .collect();
    Ok(layout)
}

/// Height `z = sin φ_j` and circle radius `cos φ_j` of orbit `j`, computed
/// from the mirror-canonical index so that orbits `j` and `n - j` are exact
/// mirror images.
pub fn orbit_height<T: Real>(n: usize, j: usize) -> (T, T) {
    let js = j.min(n - j);
    let angle = T::PI() * T::from_count(js) / T::from_count(n);
    let (rho, abs_z) = angle.sin_cos();
    let z = match (2 * j).cmp(&n) {
        std::cmp::Ordering::Less => -abs_z,
        std::cmp::Ordering::Equal => T::zero(),
        std::cmp::Ordering::Greater => abs_z,
    };
    (z, rho)
}

fn build_polar<T: Real>(n: usize, twisted: bool) -> Result<PointSet<T>, PointSetError> {
    let layout = polar_layout::<T>(n, twisted)?;
    let total = 2 + layout.iter().map(|o| o.count).sum::<usize>();
    let mut points = Vec::with_capacity(total);
    points.push(UnitVec::south_pole());
    for orbit in &layout {
        let (z, rho) = orbit_height::<T>(n, orbit.index);
        let m = T::from_count(orbit.count);
        for i in 0..orbit.count {
            let theta = orbit.shift + T::TAU() * T::from_count(i) / m;
            let (s, c) = theta.sin_cos();
            points.push(UnitVec::from_raw(rho * c, rho * s, z));
        }
    }
    points.push(UnitVec::north_pole());
    let generator = if twisted {
        Generator::TwistedPolar
    } else {
        Generator::Polar
    };
    Ok(PointSet {
        points,
        meta: PointSetMeta {
            generator,
            n: Some(n),
            seed: None,
        },
    })
}

/// Polar Coordinates of order `n`: both poles plus `n - 1` latitude orbits.
pub fn generate_polar<T: Real>(n: usize) -> Result<PointSet<T>, PointSetError> {
    build_polar(n, false)
}

/// Twisted Polar Coordinates of order `n`.
pub fn generate_twisted_polar<T: Real>(n: usize) -> Result<PointSet<T>, PointSetError> {
    build_polar(n, true)
}

/// `t` i.i.d. uniform points on S² from a seeded ChaCha8 stream.
pub fn generate_random_uniform<T: Real>(t: usize, seed: u64) -> Result<PointSet<T>, PointSetError> {
    if t == 0 {
        return Err(PointSetError::EmptyRequest);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..t).map(|_| random_unit(&mut rng)).collect();
    Ok(PointSet {
        points,
        meta: PointSetMeta {
            generator: Generator::Random,
            n: Some(t),
            seed: Some(seed),
        },
    })
}

/// Uniform point on S² (Archimedes: z uniform on [-1, 1], longitude uniform).
pub fn random_unit<T: Real, R: Rng + ?Sized>(rng: &mut R) -> UnitVec<T> {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let rho = (1.0 - z * z).max(0.0).sqrt();
    let v = UnitVec::normalize(rho * theta.cos(), rho * theta.sin(), z).expect("nonzero");
    v.cast()
}

pub fn write_point_set<T: Real>(ps: &PointSet<T>, path: &Path) -> Result<(), PointSetError> {
    let io_err = |source| PointSetError::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    let mut out = BufWriter::new(file);
    writeln!(out, "x,y,z").map_err(io_err)?;
    for p in ps.iter() {
        // `{}` on f64 prints the shortest string that parses back exactly.
        writeln!(
            out,
            "{},{},{}",
            p.x().as_f64(),
            p.y().as_f64(),
            p.z().as_f64()
        )
        .map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

pub fn read_point_set<T: Real>(path: &Path) -> Result<PointSet<T>, PointSetError> {
    let file = File::open(path).map_err(|source| PointSetError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let csv_err = |source| PointSetError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let headers = reader.headers().map_err(csv_err)?.clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(PointSetError::Empty(path.to_path_buf()));
    }
    if headers.iter().collect::<Vec<_>>() != ["x", "y", "z"] {
        return Err(PointSetError::Malformed {
            path: path.to_path_buf(),
            line: 1,
            reason: format!(
                "expected header `x,y,z`, found `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 3 {
            return Err(PointSetError::Malformed {
                path: path.to_path_buf(),
                line,
                reason: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let mut xyz = [0.0f64; 3];
        for (slot, field) in xyz.iter_mut().zip(record.iter()) {
            *slot = field.parse().map_err(|_| PointSetError::Malformed {
                path: path.to_path_buf(),
                line,
                reason: format!("`{field}` is not a number"),
            })?;
            if !slot.is_finite() {
                return Err(PointSetError::Malformed {
                    path: path.to_path_buf(),
                    line,
                    reason: format!("`{field}` is not finite"),
                });
            }
        }
        let norm = (xyz[0] * xyz[0] + xyz[1] * xyz[1] + xyz[2] * xyz[2]).sqrt();
        if (norm - 1.0).abs() > NORM_ACCEPT_TOLERANCE {
            return Err(PointSetError::NonUnitPoint {
                path: path.to_path_buf(),
                line,
                norm,
            });
        }
        // Input that is unit up to rounding is kept bit-for-bit so written sets
        // read back identically; anything else is renormalized.
        let p = if (norm - 1.0).abs() <= 1e-14 {
            UnitVec::from_raw(T::lit(xyz[0]), T::lit(xyz[1]), T::lit(xyz[2]))
        } else {
            UnitVec::new(T::lit(xyz[0]), T::lit(xyz[1]), T::lit(xyz[2])).map_err(|_| {
                PointSetError::NonUnitPoint {
                    path: path.to_path_buf(),
                    line,
                    norm,
                }
            })?
        };
        points.push(p);
    }
    PointSet::new(
        points,
        PointSetMeta {
            generator: Generator::File,
            n: None,
            seed: None,
        },
    )
    .ok_or_else(|| PointSetError::Empty(path.to_path_buf()))
}
