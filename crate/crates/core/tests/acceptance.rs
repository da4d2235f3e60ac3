//! The ten acceptance criteria. Each test writes one `PASS`/`FAIL` line to
//! stderr (uncaptured) and then asserts.

mod common;

use std::io::Write;
use std::time::Instant;

use capdisc::covering::cover_region;
use capdisc::discrepancy::{
    confidence_radius, directed_at, evaluate_direction_with, max_directed, naive_discrepancy,
    project, RadiusRule,
};
use capdisc::geometry::{cover_cap_centers, polar_to_cartesian, Polar, UnitVec};
use capdisc::points::{generate_polar, random_unit, PointSet};
use capdisc::polar::{
    conjecture_check, conjecture_setup, north_pole_directed, orbit_sums, Structure,
};
use common::*;
use rand::Rng;
use rayon::prelude::*;

fn report(id: u32, pass: bool, detail: impl AsRef<str>) {
    let line = format!(
        "acceptance {id:>2}: {} {}\n",
        if pass { "PASS" } else { "FAIL" },
        detail.as_ref()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[test]
fn criterion_01_point_counts() {
    let start = Instant::now();
    let expected = [
        (15, 250),
        (20, 441),
        (25, 690),
        (30, 994),
        (36, 1428),
        (108, 12861),
        (125, 17234),
    ];
    let wrong: Vec<_> = expected
        .iter()
        .filter_map(|&(n, t)| {
            let got = generate_polar::<f64>(n).unwrap().len();
            (got != t).then_some((n, got, t))
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    let pass = wrong.is_empty() && secs < 1.0;
    report(
        1,
        pass,
        format!("point counts, mismatches {wrong:?}, {secs:.3}s"),
    );
    assert!(pass);
}

#[test]
fn criterion_02_north_value_bound() {
    let start = Instant::now();
    let mut over = Vec::new();
    for n in 2..=200 {
        let t = orbit_sums(n).unwrap().t as f64;
        let v = north_pole_directed::<f64>(n).unwrap();
        if v > (3f64.sqrt() / 2.0 + 4.0) * n as f64 / t {
            over.push(n);
        }
    }
    let (lt, lv): (Vec<f64>, Vec<f64>) = (20..=200)
        .step_by(20)
        .map(|n| {
            let t = orbit_sums(n).unwrap().t as f64;
            (t.ln(), north_pole_directed::<f64>(n).unwrap().ln())
        })
        .unzip();
    let s = slope(&lt, &lv);
    let secs = start.elapsed().as_secs_f64();
    let pass = over.is_empty() && (-0.65..=-0.35).contains(&s) && secs < 10.0;
    report(
        2,
        pass,
        format!("bound violations {over:?}, log-log slope {s:.4}, {secs:.2}s"),
    );
    assert!(pass);
}

#[test]
fn criterion_03_conjecture_15_to_25() {
    let mut lines = Vec::new();
    let mut pass = true;
    for n in 15..=25 {
        let start = Instant::now();
        let r = conjecture_check::<f64>(n, Structure::Twisted).unwrap();
        let secs = start.elapsed().as_secs_f64();
        let ok = r.outcome.status == capdisc::CoverStatus::Covered && secs < 300.0;
        pass &= ok;
        lines.push(format!("n={n}:{}({secs:.1}s)", r.outcome.status.as_str()));
    }
    report(3, pass, format!("conjecture twisted {}", lines.join(" ")));
    assert!(pass);
}

#[test]
fn criterion_04_direction_count_n15() {
    let r = conjecture_check::<f64>(15, Structure::Twisted).unwrap();
    let c = r.outcome.counters;
    let rel = (c.n_dd as f64 - 3968.0) / 3968.0;
    let ratio = c.n_cc as f64 / c.n_dd as f64;
    let pass = rel.abs() <= 0.35 && ratio < 0.25;
    report(
        4,
        pass,
        format!(
            "n=15 n_DD={} ({:+.1}% vs 3968), n_CC={} ratio {ratio:.3}, evaluations {}",
            c.n_dd,
            rel * 100.0,
            c.n_cc,
            c.evaluations
        ),
    );
    assert!(pass);
}

#[test]
#[ignore = "long: order 125 has 17234 points"]
fn criterion_04_direction_count_n125() {
    let r = conjecture_check::<f64>(125, Structure::Twisted).unwrap();
    let c = r.outcome.counters;
    let rel = (c.n_dd as f64 - 30001.0) / 30001.0;
    let pass = r.outcome.status == capdisc::CoverStatus::Covered && rel.abs() <= 0.20;
    report(
        4,
        pass,
        format!(
            "n=125 {} n_DD={} ({:+.1}% vs 30001), n_CC={}",
            r.outcome.status.as_str(),
            c.n_dd,
            rel * 100.0,
            c.n_cc
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_05_confidence_ball_soundness() {
    let start = Instant::now();
    let mut master = rng(5);
    let seeds: Vec<u64> = (0..50).map(|_| master.random()).collect();
    let (violations, probes) = seeds
        .par_iter()
        .map(|&seed| {
            let mut r = rng(seed);
            let ps = random_set(&mut r, 10, 200);
            let t = ps.len() as f64;
            let mut bad = 0usize;
            let mut count = 0usize;
            for _ in 0..20 {
                let v = random_direction(&mut r);
                let d = directed_at(ps.points(), &v).value + 1.0 / t + 0.05;
                for rule in [RadiusRule::Window, RadiusRule::WindowOrLipschitz] {
                    let ball = evaluate_direction_with(ps.points(), &v, d, rule).unwrap();
                    for _ in 0..1000 {
                        let u = sample_in_ball(&mut r, &v, ball.radius.min(2.0));
                        count += 1;
                        if directed_at(ps.points(), &u).value > d {
                            bad += 1;
                        }
                    }
                }
            }
            (bad, count)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let secs = start.elapsed().as_secs_f64();
    let pass = violations == 0 && secs < 60.0;
    report(
        5,
        pass,
        format!("{violations} violations in {probes} probes (window and window-or-lipschitz balls), {secs:.1}s"),
    );
    assert!(pass);
}

#[test]
fn criterion_06_eight_cap_coverage() {
    let start = Instant::now();
    let mut r = rng(6);
    let mut failures = 0usize;
    for radius in [0.05, 0.5, 1.0, 1.4, std::f64::consts::SQRT_2] {
        let c = random_direction(&mut r);
        let centers = cover_cap_centers(&c, radius).unwrap();
        for _ in 0..100_000 {
            let u = sample_in_ball(&mut r, &c, radius);
            if !centers.iter().any(|x| u.chord_distance(x) <= radius / 2.0) {
                failures += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = failures == 0 && secs < 10.0;
    report(
        6,
        pass,
        format!("{failures} uncovered of 500000 cap samples, {secs:.2}s"),
    );
    assert!(pass);
}

#[test]
fn criterion_07_oracle_agreement() {
    let start = Instant::now();
    let mut r = rng(7);
    let mut sets: Vec<PointSet<f64>> = (0..20).map(|_| random_set(&mut r, 2, 30)).collect();
    sets.extend((2..=8).map(|n| generate_polar::<f64>(n).unwrap()));
    let grid: Vec<UnitVec<f64>> = (0..100_000).map(|_| random_unit(&mut r)).collect();
    let mut pass = true;
    let mut worst_final: f64 = 0.0;
    for ps in &sets {
        let exact = naive_discrepancy(ps, 1000).unwrap().value;
        let gaps: Vec<f64> = [1_000, 10_000, 100_000]
            .iter()
            .map(|&m| exact - max_directed(ps.points(), &grid[..m]).unwrap().value)
            .collect();
        pass &= gaps.iter().all(|g| *g >= -1e-12);
        pass &= gaps.windows(2).all(|w| w[1] <= w[0]);
        worst_final = worst_final.max(gaps[2]);
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 120.0;
    report(
        7,
        pass,
        format!("{} sets, exhaustive >= grid maxima, gaps nonincreasing, largest gap at 1e5 {worst_final:.2e}, {secs:.1}s", sets.len()),
    );
    assert!(pass);
}

#[test]
fn criterion_08_radius_at_most_2k_over_t() {
    let mut r = rng(8);
    let mut violations = 0usize;
    let mut worst: f64 = 0.0;
    for _ in 0..10_000 {
        let ps = random_set(&mut r, 10, 200);
        let t = ps.len() as f64;
        let v = random_direction(&mut r);
        let prof = project(&ps, &v);
        let dis = capdisc::discrepancy::directed_discrepancy(&prof).value;
        let d = dis + (1.0 + r.random_range(0.0..4.0)) / t;
        let ball = confidence_radius(&prof, d).unwrap();
        let limit = 2.0 * ball.k as f64 / t;
        if ball.radius != 2.0 && ball.radius > limit {
            violations += 1;
            worst = worst.max(ball.radius / limit);
        }
    }
    let pass = violations == 0;
    report(
        8,
        pass,
        format!("{violations} of 10000 radii above 2k/t (worst ratio {worst:.3})"),
    );
    assert!(pass);
}

#[test]
fn criterion_09_certificate_audit() {
    let start = Instant::now();
    let (ps, cert, params) = conjecture_setup::<f64>(30, Structure::Polar).unwrap();
    let out = cover_region(&ps, &params).unwrap();
    let region = params.region;
    let mut r = rng(9);
    let probes: Vec<UnitVec<f64>> = (0..100_000)
        .map(|_| {
            let theta = r.random_range(region.theta_min..=region.theta_max);
            let z: f64 = r.random_range(region.phi_min.sin()..=region.phi_max.sin());
            polar_to_cartesian(Polar {
                theta,
                phi: z.asin(),
            })
        })
        .collect();
    let (outside, above) = probes
        .par_iter()
        .map(|u| {
            let covered = out
                .records
                .iter()
                .any(|rec| u.chord_distance(&rec.center) < rec.radius);
            let high = directed_at(ps.points(), u).value > params.d;
            (usize::from(!covered), usize::from(high))
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let secs = start.elapsed().as_secs_f64();
    let pass =
        out.status == capdisc::CoverStatus::Covered && outside == 0 && above == 0 && secs < 300.0;
    report(
        9,
        pass,
        format!(
            "polar(30) {} with {} balls, d={:.6}; uncovered probes {outside}, probes above d {above}, {secs:.1}s",
            out.status.as_str(),
            out.records.len(),
            cert.north_value
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_10_directions_scale_with_inverse_square_radius() {
    let mut n_dd = Vec::new();
    let mut med = Vec::new();
    let mut min = Vec::new();
    for n in [20, 40, 60, 80] {
        let o = conjecture_check::<f64>(n, Structure::Twisted)
            .unwrap()
            .outcome;
        n_dd.push((o.counters.n_dd as f64).ln());
        med.push((1.0 / o.median_orbit_r_min().unwrap().powi(2)).ln());
        min.push((1.0 / o.r_min.unwrap().powi(2)).ln());
    }
    let s = slope(&med, &n_dd);
    let s_min = slope(&min, &n_dd);
    let pass = (0.8..=1.2).contains(&s);
    report(
        10,
        pass,
        format!("slope of log n_DD vs log 1/r_min^2 = {s:.3} (median orbit r_min; {s_min:.3} with the smallest)"),
    );
    assert!(pass);
}
