//! One line per order n: status, t, n_DD, n_CC, r_min and seconds.
//!
//! `cargo run --release --example conjecture_scan -- 15 25`
//! Set `POLAR=1` for the untwisted structure, `LIP=1` to use the larger
//! radius during orbit placement as well.
use capdisc::covering::cover_region;
use capdisc::polar::{conjecture_setup, Structure};
use capdisc::RadiusRule;

fn main() {
    let mut args = std::env::args()
        .skip(1)
        .map(|a| a.parse::<usize>().expect("integer"));
    let lo = args.next().unwrap_or(15);
    let hi = args.next().unwrap_or(lo);
    let structure = if std::env::var("POLAR").is_ok() {
        Structure::Polar
    } else {
        Structure::Twisted
    };
    for n in lo..=hi {
        let (ps, cert, mut params) = conjecture_setup::<f64>(n, structure).unwrap();
        if std::env::var("LIP").is_ok() {
            params.radius_rule = RadiusRule::WindowOrLipschitz;
        }
        let o = cover_region(&ps, &params).unwrap();
        println!(
            "n={n} t={} status={} n_dd={} n_cc={} orbits={} r_min={:?} d={:.6} {:.2}s",
            cert.t,
            o.status.as_str(),
            o.counters.n_dd,
            o.counters.n_cc,
            o.counters.orbits,
            o.r_min,
            cert.north_value,
            o.timings.total
        );
    }
}
