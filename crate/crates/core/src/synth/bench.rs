use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::suite::BenchCase;
use crate::engine::{compute_csa, CsaConfig};
use crate::error::SynthError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub id: String,
    pub shape: String,
    pub truth: f64,
    /// Missing when the pipeline failed on this pair.
    pub computed: Option<f64>,
    /// `100 · (computed − truth) / truth`.
    pub percent_error: Option<f64>,
    pub insufficient_contact: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchAggregate {
    pub pairs: usize,
    pub failed: usize,
    pub median: Option<f64>,
    pub q1: Option<f64>,
    pub q3: Option<f64>,
    pub iqr: Option<f64>,
    /// Whisker limits at 1.5 · IQR beyond the quartiles.
    pub lower_fence: Option<f64>,
    pub upper_fence: Option<f64>,
    /// Pairs outside the fences.
    pub outliers: Vec<String>,
    pub within_5_percent: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub aggregate: BenchAggregate,
}

/// Linear-interpolation quantile of ascending `sorted`, `p` in `[0, 1]`.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

impl BenchAggregate {
    pub fn from_rows(rows: &[BenchRow]) -> Self {
        let mut errs: Vec<f64> = rows.iter().filter_map(|r| r.percent_error).collect();
        errs.sort_by(f64::total_cmp);
        let failed = rows.len() - errs.len();
        let within_5_percent = errs.iter().filter(|e| e.abs() <= 5.0).count();
        if errs.is_empty() {
            return BenchAggregate {
                pairs: rows.len(),
                failed,
                median: None,
                q1: None,
                q3: None,
                iqr: None,
                lower_fence: None,
                upper_fence: None,
                outliers: Vec::new(),
                within_5_percent,
            };
        }
        let (q1, median, q3) = (quantile(&errs, 0.25), quantile(&errs, 0.5), quantile(&errs, 0.75));
        let iqr = q3 - q1;
        let (lo, hi) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
        let outliers = rows
            .iter()
            .filter(|r| r.percent_error.is_some_and(|e| e < lo || e > hi))
            .map(|r| r.id.clone())
            .collect();
        BenchAggregate {
            pairs: rows.len(),
            failed,
            median: Some(median),
            q1: Some(q1),
            q3: Some(q3),
            iqr: Some(iqr),
            lower_fence: Some(lo),
            upper_fence: Some(hi),
            outliers,
            within_5_percent,
        }
    }
}

/// Scores the pipeline on every case. Pairs run in parallel; rows come back
/// in input order and a failing pair does not stop the others.
pub fn run_benchmark(cases: &[BenchCase], config: &CsaConfig) -> BenchReport {
    let rows: Vec<BenchRow> = cases
        .par_iter()
        .map(|c| match compute_csa(&c.organ, &c.tumor, config) {
            Ok(r) => BenchRow {
                id: c.id.clone(),
                shape: c.shape.clone(),
                truth: c.ground_truth,
                computed: Some(r.csa_area),
                percent_error: Some(100.0 * (r.csa_area - c.ground_truth) / c.ground_truth),
                insufficient_contact: r.insufficient_contact,
                error: None,
            },
            Err(e) => BenchRow {
                id: c.id.clone(),
                shape: c.shape.clone(),
                truth: c.ground_truth,
                computed: None,
                percent_error: None,
                insufficient_contact: false,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let aggregate = BenchAggregate::from_rows(&rows);
    BenchReport { rows, aggregate }
}

impl BenchReport {
    pub const CSV_HEADER: &'static str = "id,truth,computed,percent_error";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(s, "{},{},{},{}", r.id, r.truth, opt(r.computed), opt(r.percent_error));
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Writes `report.csv` and `report.json` into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<(PathBuf, PathBuf), SynthError> {
        let dir = dir.as_ref();
        let io = |p: &Path, e: std::io::Error| SynthError::Manifest(format!("{}: {e}", p.display()));
        fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let csv = dir.join("report.csv");
        let json = dir.join("report.json");
        fs::write(&csv, self.to_csv()).map_err(|e| io(&csv, e))?;
        fs::write(&json, self.to_json() + "\n").map_err(|e| io(&json, e))?;
        Ok((csv, json))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(id: &str, err: Option<f64>) -> BenchRow {
        BenchRow {
            id: id.into(),
            shape: "sphere".into(),
            truth: 100.0,
            computed: err.map(|e| 100.0 + e),
            percent_error: err,
            insufficient_contact: false,
            error: err.is_none().then(|| "boom".into()),
        }
    }

    #[test]
    fn quantiles_interpolate() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.5), 2.5);
        assert_eq!(quantile(&v, 0.25), 1.75);
        assert_eq!(quantile(&v, 1.0), 4.0);
        assert_eq!(quantile(&[7.0], 0.3), 7.0);
    }

    #[test]
    fn aggregate_marks_outliers_and_failures() {
        let mut rows: Vec<BenchRow> = (0..8).map(|k| row(&format!("p{k}"), Some(k as f64 * 0.1))).collect();
        rows.push(row("far", Some(20.0)));
        rows.push(row("dead", None));
        let a = BenchAggregate::from_rows(&rows);
        assert_eq!(a.pairs, 10);
        assert_eq!(a.failed, 1);
        assert_eq!(a.outliers, vec!["far".to_string()]);
        assert_eq!(a.within_5_percent, 8);
        assert!((a.median.unwrap() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn all_failed_has_no_statistics() {
        let a = BenchAggregate::from_rows(&[row("x", None)]);
        assert_eq!(a.median, None);
        assert_eq!(a.failed, 1);
    }
}
