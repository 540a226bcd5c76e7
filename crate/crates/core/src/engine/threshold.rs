//! Adaptive contact threshold from the knee of the sorted distance curve.
//!
//! Distances below the cap are sorted and split into a lower and an upper
//! run. Each run gets its own least-squares line over the sample rank, and
//! the split with the smallest total absolute deviation wins. The threshold
//! is the last distance of the lower run.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CsaError;

/// Default cap on distances considered for the split: 1 cm.
pub const DEFAULT_CAP_MM: f64 = 10.0;

/// Fewest capped samples that leave a non-empty split range.
pub const MIN_CAPPED_SAMPLES: usize = 4;

/// A least-squares line `value = slope * rank + intercept`, ranks 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
}

impl LineFit {
    pub fn at(&self, rank: f64) -> f64 {
        self.slope * rank + self.intercept
    }

    /// Fits `values[k]` against rank `first_rank + k`.
    pub fn fit(values: &[f64], first_rank: usize) -> LineFit {
        let n = values.len();
        assert!(n > 0, "cannot fit an empty run");
        let mean_y = values.iter().sum::<f64>() / n as f64;
        if n == 1 {
            return LineFit {
                slope: 0.0,
                intercept: mean_y,
            };
        }
        // Ranks are consecutive integers: centered sum of squares is n(n²-1)/12.
        let nf = n as f64;
        let mean_x = first_rank as f64 + (nf - 1.0) / 2.0;
        let sxx = nf * (nf * nf - 1.0) / 12.0;
        let sxy: f64 = values
            .iter()
            .enumerate()
            .map(|(k, &y)| (k as f64 - (nf - 1.0) / 2.0) * (y - mean_y))
            .sum();
        let slope = sxy / sxx;
        LineFit {
            slope,
            intercept: mean_y - slope * mean_x,
        }
    }
}

/// Outcome of the knee search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    /// Contact threshold in millimeters: the last sample of the lower run.
    pub tau: f64,
    /// Number of samples in the lower run (1-based index of `tau` in `sorted`).
    pub split_index: usize,
    /// Samples strictly below the cap.
    pub capped_count: usize,
    /// Total absolute deviation for each candidate split `2..=capped_count-1`;
    /// entry `k` belongs to split `k + 2`.
    pub cumulative_errors: Vec<f64>,
    /// Lower-run and upper-run lines for the chosen split.
    pub fit_lines: [LineFit; 2],
    /// Ascending distances below the cap.
    pub sorted: Vec<f64>,
}

/// Total absolute deviation of both runs from their own fitted lines.
pub fn split_error(sorted: &[f64], split: usize) -> (f64, [LineFit; 2]) {
    let (lower, upper) = sorted.split_at(split);
    let f1 = LineFit::fit(lower, 1);
    let f2 = LineFit::fit(upper, split + 1);
    let mut err = 0.0;
    for (k, &y) in lower.iter().enumerate() {
        err += (y - f1.at((k + 1) as f64)).abs();
    }
    for (k, &y) in upper.iter().enumerate() {
        err += (y - f2.at((split + k + 1) as f64)).abs();
    }
    (err, [f1, f2])
}

/// Finds the knee of the sorted distances below `cap_mm`.
///
/// Fails with [`CsaError::InsufficientContact`] when fewer than four
/// distances fall below the cap.
pub fn find_threshold(distances: &[f64], cap_mm: f64) -> Result<ThresholdResult, CsaError> {
    if !(cap_mm > 0.0) {
        return Err(CsaError::InvalidParameter(format!(
            "cap must be positive, got {cap_mm}"
        )));
    }
    let mut sorted = distances.to_vec();
    sorted.sort_by(f64::total_cmp);
    let capped = sorted.partition_point(|&d| d < cap_mm);
    sorted.truncate(capped);
    if capped < MIN_CAPPED_SAMPLES {
        return Err(CsaError::InsufficientContact {
            below_cap: capped,
            cap_mm,
        });
    }

    let cumulative_errors: Vec<f64> = (2..capped)
        .into_par_iter()
        .map(|split| split_error(&sorted, split).0)
        .collect();
    // Lowest split wins ties.
    let mut best = 0;
    for (k, &e) in cumulative_errors.iter().enumerate() {
        if e < cumulative_errors[best] {
            best = k;
        }
    }
    let split_index = best + 2;
    let (_, fit_lines) = split_error(&sorted, split_index);
    Ok(ThresholdResult {
        tau: sorted[split_index - 1],
        split_index,
        capped_count: capped,
        cumulative_errors,
        fit_lines,
        sorted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn flat_then_ramp() {
        // Splits 3 and 4 both fit two exact lines ([0,5,..,20] is itself a
        // line); the lowest split wins and the threshold is 0 either way.
        let d = [0.0, 0.0, 0.0, 0.0, 5.0, 10.0, 15.0, 20.0];
        let t = find_threshold(&d, 100.0).unwrap();
        assert_eq!(t.tau, 0.0);
        assert_eq!(t.capped_count, 8);
        assert_eq!(t.cumulative_errors.len(), 6);
        assert!(t.cumulative_errors[1] < 1e-12 && t.cumulative_errors[2] < 1e-12);
        assert!(t.split_index == 3 || t.split_index == 4);
        for (k, &e) in t.cumulative_errors.iter().enumerate() {
            if k != 1 && k != 2 {
                assert!(e > 1.0, "split {} error {e}", k + 2);
            }
        }
        let (_, lines) = split_error(&t.sorted, 4);
        assert_relative_eq!(lines[1].slope, 5.0, max_relative = 1e-12);
        assert_relative_eq!(lines[1].at(5.0), 5.0, max_relative = 1e-12);
    }

    #[test]
    fn single_perfect_split() {
        // only split 4 gives two exact lines here
        let d = [1.0, 1.0, 1.0, 1.0, 8.0, 13.0, 18.0, 23.0];
        let t = find_threshold(&d, 100.0).unwrap();
        assert_eq!(t.split_index, 4);
        assert_eq!(t.tau, 1.0);
    }

    #[test]
    fn unsorted_input_is_sorted_first() {
        let d = [18.0, 1.0, 8.0, 1.0, 23.0, 1.0, 13.0, 1.0];
        assert_eq!(find_threshold(&d, 100.0).unwrap().split_index, 4);
    }

    #[test]
    fn everything_beyond_cap() {
        let d = [10.0, 11.0, 12.0, 13.0, 14.0];
        assert!(matches!(
            find_threshold(&d, 10.0),
            Err(CsaError::InsufficientContact { below_cap: 0, .. })
        ));
        // three below the cap is still not enough
        assert!(matches!(
            find_threshold(&[1.0, 2.0, 3.0, 10.0], 10.0),
            Err(CsaError::InsufficientContact { below_cap: 3, .. })
        ));
    }

    #[test]
    fn cap_is_strict() {
        let t = find_threshold(&[0.0, 0.0, 1.0, 2.0, 3.0, 3.0], 3.0).unwrap();
        assert_eq!(t.capped_count, 4);
    }

    #[test]
    fn fit_of_single_point_is_constant() {
        let f = LineFit::fit(&[4.0], 9);
        assert_eq!(f.at(9.0), 4.0);
    }

    #[test]
    fn rejects_bad_cap() {
        assert!(matches!(
            find_threshold(&[0.0; 8], 0.0),
            Err(CsaError::InvalidParameter(_))
        ));
    }
}
