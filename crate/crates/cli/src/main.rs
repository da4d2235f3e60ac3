//! `capdisc`: generate point sets, evaluate directed and exhaustive cap
//! discrepancy, and run covering certifications.

mod report;
mod summary;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use capdisc::covering::{cover_region, CoverParams};
use capdisc::discrepancy::{directed_at, naive_discrepancy, RadiusRule, NAIVE_DEFAULT_LIMIT};
use capdisc::geometry::{Polar, Region, UnitVec};
use capdisc::points::{
    generate_polar, generate_random_uniform, generate_twisted_polar, read_point_set,
    write_point_set,
};
use capdisc::polar::{conjecture_check, Structure};
use capdisc::{CoverStatus, DiscrepancyError, GeometryError, PointSetError};
use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::report::{CoverReport, DirectedJson};
use crate::summary::SummaryRow;

const EXIT_IO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_COUNTEREXAMPLE: u8 = 3;
const EXIT_RESIDUAL: u8 = 4;
const EXIT_TOO_LARGE: u8 = 5;

#[derive(Parser)]
#[command(name = "capdisc", version, about = "Spherical cap discrepancy tools")]
struct Cli {
    /// Worker threads for parallel evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a point set as `x,y,z` CSV and print its size.
    Generate {
        #[arg(long, value_enum)]
        structure: GenStructure,
        /// Order for polar/twisted, point count for random.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Directed discrepancy of a point file at one direction.
    Directed {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long, allow_hyphen_values = true)]
        phi: f64,
        #[arg(long)]
        json: bool,
    },
    /// Certify `Dis_v <= d` over a polar rectangle of directions.
    Cover {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        d: f64,
        #[arg(long, allow_hyphen_values = true)]
        phi_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        phi_max: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        theta_max: f64,
        #[arg(long)]
        report: PathBuf,
        #[command(flatten)]
        tuning: Tuning,
        /// Include wall-clock timings in the report.
        #[arg(long)]
        timings: bool,
    },
    /// Check that the north pole is the worst direction for each order.
    Conjecture {
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = ConjStructure::Twisted)]
        structure: ConjStructure,
        #[arg(long)]
        summary: PathBuf,
    },
    /// Exact cap discrepancy by exhaustive search (small sets only).
    Naive {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, default_value_t = NAIVE_DEFAULT_LIMIT)]
        limit: usize,
    },
}

#[derive(clap::Args)]
struct Tuning {
    #[arg(long)]
    orbit_samples: Option<usize>,
    #[arg(long)]
    r_min_factor: Option<f64>,
    #[arg(long)]
    cover_cap_depth: Option<usize>,
    #[arg(long)]
    binary_search_tol: Option<f64>,
    /// Radius rule while walking the orbits.
    #[arg(long, value_enum)]
    radius_rule: Option<Rule>,
    /// Radius rule inside Cover Cap.
    #[arg(long, value_enum)]
    cover_cap_radius_rule: Option<Rule>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenStructure {
    Polar,
    Twisted,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConjStructure {
    Polar,
    Twisted,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Window,
    WindowOrLipschitz,
}

impl From<Rule> for RadiusRule {
    fn from(r: Rule) -> Self {
        match r {
            Rule::Window => RadiusRule::Window,
            Rule::WindowOrLipschitz => RadiusRule::WindowOrLipschitz,
        }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Points(#[from] PointSetError),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{0}")]
    TooLarge(DiscrepancyError),
    #[error("{0}")]
    Engine(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Points(PointSetError::OrderTooSmall(_) | PointSetError::EmptyRequest) => {
                EXIT_USAGE
            }
            CliError::TooLarge(_) => EXIT_TOO_LARGE,
            _ => EXIT_IO,
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if k == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_IO);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Generate {
            structure,
            n,
            seed,
            out,
        } => {
            let ps = match structure {
                GenStructure::Polar => generate_polar::<f64>(n)?,
                GenStructure::Twisted => generate_twisted_polar::<f64>(n)?,
                GenStructure::Random => generate_random_uniform::<f64>(n, seed)?,
            };
            write_point_set(&ps, &out)?;
            println!("{}", ps.len());
            Ok(0)
        }
        Command::Directed {
            points,
            theta,
            phi,
            json,
        } => {
            let ps = read_point_set::<f64>(&points)?;
            let v = Polar::new(theta, phi)?.to_unit();
            let r = directed_at(ps.points(), &v);
            if json {
                let out =
                    serde_json::to_string_pretty(&DirectedJson::new(&r)).expect("serializable");
                println!("{out}");
            } else {
                println!("directed {}", r.value);
                println!("witness_height {}", r.witness_height);
                println!("witness_inclusive {}", r.witness_inclusive);
            }
            Ok(0)
        }
        Command::Cover {
            points,
            d,
            phi_min,
            phi_max,
            theta_min,
            theta_max,
            report,
            tuning,
            timings,
        } => {
            let ps = read_point_set::<f64>(&points)?;
            let region = Region::new(phi_min, phi_max, theta_min, theta_max)?;
            let mut params = CoverParams::new(d, region);
            if let Some(v) = tuning.orbit_samples {
                params.orbit_sample_count = v;
            }
            if let Some(v) = tuning.r_min_factor {
                params.r_min_factor = v;
            }
            if let Some(v) = tuning.cover_cap_depth {
                params.cover_cap_max_depth = v;
            }
            if let Some(v) = tuning.binary_search_tol {
                params.binary_search_tol = v;
            }
            if let Some(v) = tuning.radius_rule {
                params.radius_rule = v.into();
            }
            if let Some(v) = tuning.cover_cap_radius_rule {
                params.cover_cap_radius_rule = v.into();
            }
            params
                .validate()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let outcome =
                cover_region(&ps, &params).map_err(|e| CliError::Engine(e.to_string()))?;
            let doc = CoverReport::new(&ps, &params, &outcome, timings);
            let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
            std::fs::write(&report, text).map_err(io_error(&report))?;
            println!(
                "{} n_DD={} n_CC={} records={}",
                outcome.status.as_str(),
                outcome.counters.n_dd,
                outcome.counters.n_cc,
                outcome.records.len()
            );
            Ok(status_code(outcome.status))
        }
        Command::Conjecture {
            n_min,
            n_max,
            structure,
            summary,
        } => {
            if n_min < 2 {
                return Err(CliError::Usage(format!("--n-min {n_min} is below 2")));
            }
            if n_min > n_max {
                return Err(CliError::Usage(format!(
                    "--n-min {n_min} exceeds --n-max {n_max}"
                )));
            }
            let structure = match structure {
                ConjStructure::Polar => Structure::Polar,
                ConjStructure::Twisted => Structure::Twisted,
            };
            let mut code = 0;
            for n in n_min..=n_max {
                let row = match conjecture_check::<f64>(n, structure) {
                    Ok(res) => {
                        code = code.max(status_code(res.outcome.status));
                        SummaryRow::from_result(&res)
                    }
                    Err(e) => {
                        eprintln!("n={n}: {e}");
                        code = code.max(EXIT_RESIDUAL);
                        SummaryRow::failed(n, &e.to_string())
                    }
                };
                println!(
                    "n={} t={} n_DD={} n_CC={} status={}",
                    row.n, row.t, row.n_dd, row.n_cc, row.status
                );
                summary::upsert(&summary, &row)?;
            }
            Ok(code)
        }
        Command::Naive { points, limit } => {
            let ps = read_point_set::<f64>(&points)?;
            let r = naive_discrepancy(&ps, limit).map_err(|e| match e {
                DiscrepancyError::TooLarge { .. } => CliError::TooLarge(e),
                other => CliError::Engine(other.to_string()),
            })?;
            let axis: UnitVec<f64> = r.witness.axis;
            println!("discrepancy {}", r.value);
            println!("witness_axis {} {} {}", axis.x(), axis.y(), axis.z());
            println!("witness_height {}", r.witness.height);
            println!("witness_inclusive {}", r.witness_inclusive);
            Ok(0)
        }
    }
}

fn status_code(status: CoverStatus) -> u8 {
    match status {
        CoverStatus::Covered => 0,
        CoverStatus::Counterexample => EXIT_COUNTEREXAMPLE,
        CoverStatus::Residual => EXIT_RESIDUAL,
    }
}
