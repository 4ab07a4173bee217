//! Output formats: a versioned JSON document per run, and a flat CSV per
//! sweep with one row per grid cell.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{io_err, Error, Result};
use crate::opinion::{InitSpec, ModelParams, RunResult, TraceSample};
use crate::sweep::AggregateTable;

pub const RUN_FORMAT_VERSION: u32 = 1;

/// Serialised form of a single run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub format: u32,
    pub topology: String,
    pub params: ModelParams,
    pub init: InitSpec,
    pub seed: u64,
    pub converged: bool,
    pub iterations_used: u64,
    pub final_participation: f64,
    pub final_clusters: usize,
    pub final_distance: f64,
    pub final_opinions: Vec<f64>,
    pub trace: Vec<TraceSample>,
}

impl RunRecord {
    pub fn new(topology: impl Into<String>, params: &ModelParams, init: &InitSpec, seed: u64, result: &RunResult) -> Self {
        let last = result.final_sample();
        Self {
            format: RUN_FORMAT_VERSION,
            topology: topology.into(),
            params: params.clone(),
            init: init.clone(),
            seed,
            converged: result.converged,
            iterations_used: result.iterations_used,
            final_participation: last.participation,
            final_clusters: last.clusters,
            final_distance: last.distance,
            final_opinions: result.final_opinions.clone(),
            trace: result.trace.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("run record serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: Self = serde_json::from_str(text)?;
        if rec.format != RUN_FORMAT_VERSION {
            return Err(Error::Config(format!(
                "unsupported run format {}, expected {RUN_FORMAT_VERSION}",
                rec.format
            )));
        }
        Ok(rec)
    }
}

/// One CSV row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRowRecord {
    pub topology: String,
    pub epsilon: f64,
    pub gamma: f64,
    pub mu: f64,
    pub mu_lfr: Option<f64>,
    pub init: String,
    #[serde(rename = "mean_C")]
    pub mean_c: f64,
    #[serde(rename = "std_C")]
    pub std_c: f64,
    pub mean_clusters: f64,
    pub mean_dist: f64,
    pub std_dist: f64,
    pub mean_iters: f64,
    pub converged_frac: f64,
    pub replicates: usize,
    pub failures: usize,
}

pub const SWEEP_CSV_HEADER: &[&str] = &[
    "topology",
    "epsilon",
    "gamma",
    "mu",
    "mu_lfr",
    "init",
    "mean_C",
    "std_C",
    "mean_clusters",
    "mean_dist",
    "std_dist",
    "mean_iters",
    "converged_frac",
    "replicates",
    "failures",
];

/// Flattens a table into CSV rows. Cells where every replicate failed carry
/// NaN metrics.
pub fn sweep_records(table: &AggregateTable) -> Vec<SweepRowRecord> {
    table
        .rows
        .iter()
        .map(|row| {
            let s = row.stats;
            let get = |f: fn(&crate::sweep::RowStats) -> f64| s.as_ref().map_or(f64::NAN, f);
            SweepRowRecord {
                topology: table.topology.clone(),
                epsilon: row.point.epsilon,
                gamma: row.point.gamma,
                mu: table.mu,
                mu_lfr: row.point.mu_lfr,
                init: table.init.clone(),
                mean_c: get(|s| s.mean_c),
                std_c: get(|s| s.std_c),
                mean_clusters: get(|s| s.mean_clusters),
                mean_dist: get(|s| s.mean_dist),
                std_dist: get(|s| s.std_dist),
                mean_iters: get(|s| s.mean_iters),
                converged_frac: get(|s| s.converged_frac),
                replicates: table.replicates,
                failures: row.failures,
            }
        })
        .collect()
}

/// Formats `x` with 6 significant digits, like C's `%.6g`.
pub fn format_sig6(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // Round first so that the exponent reflects carries such as 999999.5.
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    } else {
        let m = if mantissa.contains('.') {
            mantissa.trim_end_matches('0').trim_end_matches('.')
        } else {
            mantissa
        };
        format!("{m}e{exp}")
    }
}

fn record_fields(r: &SweepRowRecord) -> Vec<String> {
    vec![
        r.topology.clone(),
        format_sig6(r.epsilon),
        format_sig6(r.gamma),
        format_sig6(r.mu),
        r.mu_lfr.map(format_sig6).unwrap_or_default(),
        r.init.clone(),
        format_sig6(r.mean_c),
        format_sig6(r.std_c),
        format_sig6(r.mean_clusters),
        format_sig6(r.mean_dist),
        format_sig6(r.std_dist),
        format_sig6(r.mean_iters),
        format_sig6(r.converged_frac),
        r.replicates.to_string(),
        r.failures.to_string(),
    ]
}

/// Renders the sweep CSV: header, then one row per cell in grid order, LF
/// line endings.
pub fn sweep_csv_bytes(table: &AggregateTable) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(SWEEP_CSV_HEADER).expect("in-memory write");
    for r in sweep_records(table) {
        w.write_record(record_fields(&r)).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn write_sweep_csv(table: &AggregateTable, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path).map_err(io_err(path))?;
    f.write_all(&sweep_csv_bytes(table)).map_err(io_err(path))
}

pub fn read_sweep_csv(path: &Path) -> Result<Vec<SweepRowRecord>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    let headers = rdr.headers().map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })?;
    if headers.iter().ne(SWEEP_CSV_HEADER.iter().copied()) {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!("unexpected header {headers:?}"),
        });
    }
    rdr.deserialize()
        .map(|r| {
            r.map_err(|source| Error::Csv {
                path: path.to_path_buf(),
                source,
            })
        })
        .collect()
}

pub fn write_run_json(record: &RunRecord, path: &Path) -> Result<()> {
    fs::write(path, record.to_json() + "\n").map_err(io_err(path))
}

pub fn read_run_json(path: &Path) -> Result<RunRecord> {
    RunRecord::from_json(&fs::read_to_string(path).map_err(io_err(path))?)
}

/// Reads an opinion vector: whitespace- or comma-separated reals, `#`
/// comments allowed. A run JSON document is accepted too, in which case its
/// final opinions are used.
pub fn read_opinions(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    if text.trim_start().starts_with('{') {
        return Ok(RunRecord::from_json(&text)?.final_opinions);
    }
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            out.push(tok.parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: format!("bad number {tok:?}"),
            })?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{AggregateRow, GridPoint, RowStats};

    fn table(rows: usize) -> AggregateTable {
        AggregateTable {
            topology: "complete".into(),
            init: "uniform".into(),
            mu: 0.5,
            replicates: 2,
            rows: (0..rows)
                .map(|k| AggregateRow {
                    point: GridPoint {
                        mu_lfr: None,
                        epsilon: 0.2,
                        gamma: k as f64 / 5.0,
                    },
                    stats: Some(RowStats {
                        runs: 2,
                        mean_c: 12.345678912 + k as f64,
                        std_c: 0.1234567,
                        mean_clusters: 13.5,
                        mean_dist: 0.1638429,
                        std_dist: 1.2345e-7,
                        mean_iters: 100000.0,
                        converged_frac: 0.5,
                    }),
                    runs: vec![],
                    failures: 0,
                })
                .collect(),
        }
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(1.0), "1");
        assert_eq!(format_sig6(0.2), "0.2");
        assert_eq!(format_sig6(12.345678), "12.3457");
        assert_eq!(format_sig6(100000.0), "100000");
        assert_eq!(format_sig6(999999.7), "1e6");
        assert_eq!(format_sig6(1234567.0), "1.23457e6");
        assert_eq!(format_sig6(1.2345e-7), "1.2345e-7");
        assert_eq!(format_sig6(0.000123456789), "0.000123457");
        assert_eq!(format_sig6(-0.5), "-0.5");
        assert_eq!(format_sig6(f64::NAN), "NaN");
    }

    #[test]
    fn csv_shape_and_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let t = table(2);
        write_sweep_csv(&t, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().next().unwrap(), SWEEP_CSV_HEADER.join(","));

        let back = read_sweep_csv(&path).unwrap();
        for (a, b) in back.iter().zip(sweep_records(&t)) {
            for (x, y) in [(a.mean_c, b.mean_c), (a.mean_dist, b.mean_dist), (a.std_dist, b.std_dist), (a.gamma, b.gamma)] {
                assert!((x - y).abs() <= 5e-6 * y.abs(), "{x} vs {y}");
            }
            assert_eq!(a.mu_lfr, None);
            assert_eq!(a.mean_iters, 100000.0);
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        let bytes = sweep_csv_bytes(&table(0));
        assert_eq!(String::from_utf8(bytes).unwrap(), SWEEP_CSV_HEADER.join(",") + "\n");
    }

    #[test]
    fn unwritable_path_reports_path() {
        let err = write_sweep_csv(&table(1), Path::new("/nonexistent-dir/x.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/x.csv"));
    }

    #[test]
    fn opinions_file_parsing() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("o.txt");
        fs::write(&p, "# header\n0.1 0.2,0.3\n\n0.4\n").unwrap();
        assert_eq!(read_opinions(&p).unwrap(), vec![0.1, 0.2, 0.3, 0.4]);
        fs::write(&p, "0.1 abc\n").unwrap();
        assert!(matches!(read_opinions(&p), Err(Error::Parse { line: 1, .. })));
    }
}
