//! Helpers shared by the integration tests. Everything here is computed
//! directly from coordinates so it can serve as an oracle for the library.
#![allow(dead_code)]

use capdisc::geometry::UnitVec;
use capdisc::points::{generate_random_uniform, random_unit, PointSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Mat3 = [[f64; 3]; 3];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn unit(x: f64, y: f64, z: f64) -> UnitVec<f64> {
    UnitVec::normalize(x, y, z).expect("nonzero")
}

pub fn random_direction(rng: &mut ChaCha8Rng) -> UnitVec<f64> {
    random_unit(rng)
}

pub fn random_set(rng: &mut ChaCha8Rng, t_lo: usize, t_hi: usize) -> PointSet<f64> {
    let t = rng.random_range(t_lo..=t_hi);
    generate_random_uniform(t, rng.random()).unwrap()
}

/// Uniform rotation from a normalized Gaussian quaternion.
pub fn random_rotation(rng: &mut ChaCha8Rng) -> Mat3 {
    let mut q = [0.0f64; 4];
    loop {
        for c in q.iter_mut() {
            *c = rng.random_range(-1.0..1.0);
        }
        let n2: f64 = q.iter().map(|c| c * c).sum();
        if n2 > 1e-6 && n2 <= 1.0 {
            let n = n2.sqrt();
            q.iter_mut().for_each(|c| *c /= n);
            break;
        }
    }
    let [w, x, y, z] = q;
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}

pub fn rotate(m: &Mat3, v: &UnitVec<f64>) -> UnitVec<f64> {
    let a = v.to_array();
    let r: Vec<f64> = (0..3)
        .map(|i| (0..3).map(|j| m[i][j] * a[j]).sum())
        .collect();
    unit(r[0], r[1], r[2])
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Two unit vectors completing `c` to an orthonormal basis.
fn basis(c: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let seed = if c[0].abs() < 0.9 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 1.0, 0.0]
    };
    let k = dot(seed, c);
    let e1 = [seed[0] - k * c[0], seed[1] - k * c[1], seed[2] - k * c[2]];
    let n = dot(e1, e1).sqrt();
    let e1 = [e1[0] / n, e1[1] / n, e1[2] / n];
    let e2 = [
        c[1] * e1[2] - c[2] * e1[1],
        c[2] * e1[0] - c[0] * e1[2],
        c[0] * e1[1] - c[1] * e1[0],
    ];
    (e1, e2)
}

/// Uniform sample of `{u : |u - c| < r}` (a cap of height `1 - r²/2`).
pub fn sample_in_ball(rng: &mut ChaCha8Rng, c: &UnitVec<f64>, r: f64) -> UnitVec<f64> {
    let h = (1.0 - r * r / 2.0).max(-1.0);
    loop {
        let z: f64 = rng.random_range(h..=1.0);
        let a: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let u = at_offset(c, z, a);
        if u.chord_distance(c) < r {
            return u;
        }
    }
}

/// Direction with `<u, c> = z` at azimuth `a` around `c`.
pub fn at_offset(c: &UnitVec<f64>, z: f64, a: f64) -> UnitVec<f64> {
    let ca = c.to_array();
    let (e1, e2) = basis(ca);
    let rho = (1.0 - z * z).max(0.0).sqrt();
    let (s, co) = a.sin_cos();
    unit(
        z * ca[0] + rho * (co * e1[0] + s * e2[0]),
        z * ca[1] + rho * (co * e1[1] + s * e2[1]),
        z * ca[2] + rho * (co * e1[2] + s * e2[2]),
    )
}

/// Directed discrepancy by evaluating every projection height with the
/// boundary counted in and out, `O(t²)`.
pub fn brute_directed(points: &[UnitVec<f64>], v: &UnitVec<f64>) -> f64 {
    let s: Vec<f64> = points.iter().map(|p| p.dot(v).clamp(-1.0, 1.0)).collect();
    let t = s.len() as f64;
    let mut best: f64 = 0.0;
    for &h in &s {
        let area = (1.0 - h) / 2.0;
        let incl = s.iter().filter(|&&x| x >= h).count() as f64;
        let excl = s.iter().filter(|&&x| x > h).count() as f64;
        best = best
            .max((incl / t - area).abs())
            .max((excl / t - area).abs());
    }
    // Between projections the count is constant and the area linear, so
    // the supremum is approached at the projections themselves.
    best
}

/// Latitude `ψ` on the meridian at longitude `theta` where the chord
/// distance to `c` equals `r`, searched by bisection on `[lo, hi]` where
/// the distance minus `r` changes sign.
pub fn meridian_crossing(c: &UnitVec<f64>, theta: f64, r: f64, mut lo: f64, mut hi: f64) -> f64 {
    let f = |psi: f64| {
        let u = unit(psi.cos() * theta.cos(), psi.cos() * theta.sin(), psi.sin());
        u.chord_distance(c) - r
    };
    let flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
