mod common;

use capdisc::covering::{cover_cap_recurse, CapOutcome};
use capdisc::discrepancy::{
    confidence_radius, directed_at, directed_discrepancy, evaluate_cap, evaluate_direction,
    evaluate_direction_with, lipschitz_radius, project, ProjectionProfile, RadiusRule,
};
use capdisc::geometry::{cover_cap_centers, UnitVec};
use capdisc::points::{generate_polar, generate_twisted_polar, PointSet};
use common::*;
use proptest::prelude::*;
use rand::Rng;

fn mirror_permutes(ps: &PointSet<f64>) -> bool {
    let key = |p: &UnitVec<f64>| {
        let a = p.to_array();
        (
            (a[0] * 1e9).round() as i64,
            (a[1] * 1e9).round() as i64,
            (a[2] * 1e9).round() as i64,
        )
    };
    let mut a: Vec<_> = ps.iter().map(key).collect();
    let mut b: Vec<_> = ps.iter().map(|p| key(&p.mirror_z())).collect();
    a.sort();
    b.sort();
    a == b
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn antipodal_directions_agree(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ps = random_set(&mut r, 1, 120);
        let v = random_direction(&mut r);
        let a = directed_at(ps.points(), &v).value;
        let b = directed_at(ps.points(), &-v).value;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn negated_direction_reverses_profile(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ps = random_set(&mut r, 1, 60);
        let v = random_direction(&mut r);
        let fwd = project(&ps, &v);
        let back = project(&ps, &-v);
        for (a, b) in fwd.sorted().iter().zip(back.sorted().iter().rev()) {
            prop_assert!((a + b).abs() < 1e-15);
        }
    }

    #[test]
    fn rotation_equivariance(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ps = random_set(&mut r, 2, 150);
        let v = random_direction(&mut r);
        let m = random_rotation(&mut r);
        let rotated = ps.map_points(|p| rotate(&m, p));
        let a = directed_at(ps.points(), &v).value;
        let b = directed_at(rotated.points(), &rotate(&m, &v)).value;
        prop_assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn directed_value_bounds_and_witness(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ps = random_set(&mut r, 1, 150);
        let v = random_direction(&mut r);
        let res = directed_at(ps.points(), &v);
        let t = ps.len() as f64;
        prop_assert!(res.value >= 1.0 / (2.0 * t) - 1e-15);
        prop_assert!(res.value <= 1.0);
        let again = evaluate_cap(ps.points(), &res.witness_cap(), res.witness_inclusive);
        prop_assert!((again - res.value).abs() < 1e-12);
        prop_assert!((brute_directed(ps.points(), &v) - res.value).abs() < 1e-12);
    }

    #[test]
    fn profile_is_sorted_and_clamped(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ps = random_set(&mut r, 1, 80);
        let prof = project(&ps, &random_direction(&mut r));
        prop_assert_eq!(prof.len(), ps.len());
        prop_assert!(prof.sorted().windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(prof.sorted().iter().all(|s| (-1.0..=1.0).contains(s)));
    }

    #[test]
    fn window_radius_over_gap_count_bound(values in prop::collection::vec(-1.0f64..=1.0, 2..60), extra in 0.0f64..0.5) {
        // r <= 2k/(t-k): the t-k windows of k gaps tile [-1, 1] at most k times.
        let t = values.len();
        let prof = ProjectionProfile::from_projections(UnitVec::north_pole(), values);
        let dis = directed_discrepancy(&prof).value;
        let d = (dis + 1.0 / t as f64 + extra).min(1.0);
        if let Ok(ball) = confidence_radius(&prof, d) {
            prop_assert!(ball.k >= 1);
            if ball.k < t {
                prop_assert!(ball.radius <= 2.0 * ball.k as f64 / (t - ball.k) as f64 + 1e-12);
            } else {
                prop_assert_eq!(ball.radius, 2.0);
            }
        }
    }

    #[test]
    fn cover_cap_centers_commute_with_rotation(seed in any::<u64>(), radius in 0.01f64..=std::f64::consts::SQRT_2) {
        let mut r = rng(seed);
        let c = random_direction(&mut r);
        let m = random_rotation(&mut r);
        let a = cover_cap_centers(&c, radius).unwrap();
        let b = cover_cap_centers(&rotate(&m, &c), radius).unwrap();
        let dists = |s: &[UnitVec<f64>; 8]| {
            let mut out: Vec<f64> = (0..8)
                .flat_map(|i| (i + 1..8).map(move |j| (i, j)))
                .map(|(i, j)| s[i].chord_distance(&s[j]))
                .collect();
            out.sort_by(f64::total_cmp);
            out
        };
        for (x, y) in dists(&a).iter().zip(dists(&b)) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        prop_assert!(a[0].chord_distance(&c) < 1e-15);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn window_ball_is_sound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ps = random_set(&mut r, 10, 200);
        let v = random_direction(&mut r);
        let t = ps.len() as f64;
        let dis = directed_at(ps.points(), &v).value;
        let d = dis + 1.0 / t + 0.05;
        let ball = evaluate_direction(ps.points(), &v, d).unwrap();
        for _ in 0..300 {
            let u = sample_in_ball(&mut r, &v, ball.radius.min(2.0));
            let du = directed_at(ps.points(), &u).value;
            prop_assert!(du <= d, "Dis_u = {du} > d = {d} at |u-v| = {}", u.chord_distance(&v));
        }
    }

    #[test]
    fn lipschitz_ball_is_sound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ps = random_set(&mut r, 2, 200);
        let v = random_direction(&mut r);
        let dis = directed_at(ps.points(), &v).value;
        let d = dis + r.random_range(0.0..0.2);
        let radius = lipschitz_radius(dis, d);
        for _ in 0..300 {
            let u = sample_in_ball(&mut r, &v, radius.max(1e-12));
            let du = directed_at(ps.points(), &u).value;
            prop_assert!(du <= dis + u.chord_distance(&v) / 2.0 + 1e-12);
            prop_assert!(du <= d + 1e-12);
        }
    }

    #[test]
    fn either_rule_dominates_window(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ps = random_set(&mut r, 5, 100);
        let v = random_direction(&mut r);
        let d = directed_at(ps.points(), &v).value + 2.0 / ps.len() as f64;
        let w = evaluate_direction_with(ps.points(), &v, d, RadiusRule::Window).unwrap();
        let l = evaluate_direction_with(ps.points(), &v, d, RadiusRule::WindowOrLipschitz).unwrap();
        prop_assert!(l.radius >= w.radius);
        prop_assert_eq!(l.k, w.k);
    }

    #[test]
    fn polar_sets_are_mirror_symmetric(n in 2usize..80) {
        prop_assert!(mirror_permutes(&generate_polar(n).unwrap()));
        prop_assert!(mirror_permutes(&generate_twisted_polar(n).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn accepted_cover_cap_covers_its_ball(seed in any::<u64>()) {
        let mut r = rng(seed);
        let ps = random_set(&mut r, 30, 150);
        let v = random_direction(&mut r);
        let t = ps.len() as f64;
        let d = directed_at(ps.points(), &v).value + 6.0 / t;
        let at_v = evaluate_direction(ps.points(), &v, d).unwrap();
        let required = at_v.radius * 1.7;
        let mut eval = |dirs: &[UnitVec<f64>]| {
            dirs.iter().map(|c| evaluate_direction(ps.points(), c, d)).collect()
        };
        let balls = match cover_cap_recurse(v, at_v, required, 4, &mut eval).unwrap() {
            CapOutcome::Covered(balls) => balls,
            _ => return Ok(()),
        };
        for _ in 0..10_000 {
            let u = sample_in_ball(&mut r, &v, required);
            prop_assert!(balls.iter().any(|b| u.chord_distance(&b.center) < b.radius));
        }
    }
}

#[test]
fn point_count_close_to_continuous_sum() {
    use std::f64::consts::PI;
    for n in 2..=200usize {
        let t = generate_polar::<f64>(n).unwrap().len() as f64;
        let h = PI / (2.0 * n as f64);
        let approx = 3f64.sqrt() * n as f64 * h.cos() / h.sin();
        assert!((t - approx).abs() <= 2.0 * n as f64, "n={n}");
    }
}
