//! Per-n summary CSV. Rows are keyed by `n`; writing a row for an `n` that
//! is already present replaces it.

use std::path::Path;

use capdisc::ConjectureResult;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub n: usize,
    pub t: usize,
    #[serde(rename = "n_DD")]
    pub n_dd: usize,
    #[serde(rename = "n_CC")]
    pub n_cc: usize,
    pub phase1_s: f64,
    pub cover_cap_s: f64,
    pub total_s: f64,
    pub d: f64,
    pub status: String,
}

impl SummaryRow {
    pub fn from_result(r: &ConjectureResult) -> Self {
        let o = &r.outcome;
        Self {
            n: r.certificate.n,
            t: r.certificate.t,
            n_dd: o.counters.n_dd,
            n_cc: o.counters.n_cc,
            phase1_s: o.timings.phase1,
            cover_cap_s: o.timings.cover_cap,
            total_s: o.timings.total.max(o.timings.phase1),
            d: r.certificate.north_value,
            status: o.status.as_str().to_string(),
        }
    }

    pub fn failed(n: usize, reason: &str) -> Self {
        Self {
            n,
            t: capdisc::polar::orbit_sums(n).map_or(0, |s| s.t),
            n_dd: 0,
            n_cc: 0,
            phase1_s: 0.0,
            cover_cap_s: 0.0,
            total_s: 0.0,
            d: capdisc::polar::north_pole_directed(n).unwrap_or(f64::NAN),
            status: format!("error: {reason}"),
        }
    }
}

fn csv_error(path: &Path) -> impl Fn(csv::Error) -> CliError + '_ {
    move |source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

pub fn read(path: &Path) -> Result<Vec<SummaryRow>, CliError> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let mut rdr = csv::Reader::from_path(path).map_err(csv_error(path))?;
    rdr.deserialize()
        .collect::<Result<_, _>>()
        .map_err(csv_error(path))
}

/// Inserts or replaces the row for `row.n`, keeping rows sorted by `n`.
pub fn upsert(path: &Path, row: &SummaryRow) -> Result<(), CliError> {
    let mut rows = read(path)?;
    rows.retain(|r| r.n != row.n);
    rows.push(row.clone());
    rows.sort_by_key(|r| r.n);
    let tmp = path.with_extension("csv.tmp");
    {
        let mut w = csv::Writer::from_path(&tmp).map_err(csv_error(&tmp))?;
        for r in &rows {
            w.serialize(r).map_err(csv_error(&tmp))?;
        }
        w.flush().map_err(|source| CliError::Io {
            path: tmp.clone(),
            source,
        })?;
    }
    std::fs::rename(&tmp, path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
