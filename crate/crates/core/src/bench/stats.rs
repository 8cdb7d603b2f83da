//! Outlier trimming and bootstrap bands for timing samples.
//!
//! Quantiles use linear interpolation between order statistics at position
//! `q·(m−1)` of the sorted sample (the "type 7" convention).

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng;

/// Quantile `q ∈ [0, 1]` of an ascending-sorted, non-empty slice.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

fn sorted_copy(samples: &[f64]) -> Vec<f64> {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn check_finite(samples: &[f64]) -> Result<()> {
    match samples.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite { row: i, col: 0 }),
        None => Ok(()),
    }
}

/// Tukey fences `[Q1 − 1.5·IQR, Q3 + 1.5·IQR]`.
pub fn iqr_fences(samples: &[f64]) -> Result<(f64, f64)> {
    if samples.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: samples.len(),
        });
    }
    check_finite(samples)?;
    let sorted = sorted_copy(samples);
    let q1 = quantile_sorted(&sorted, 0.25);
    let q3 = quantile_sorted(&sorted, 0.75);
    let iqr = q3 - q1;
    Ok((q1 - 1.5 * iqr, q3 + 1.5 * iqr))
}

/// Splits `samples` into values inside the Tukey fences (inclusive) and
/// values outside. Both parts keep the input order.
pub fn iqr_trim(samples: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let (lo, hi) = iqr_fences(samples)?;
    Ok(samples.iter().partition(|&&v| v >= lo && v <= hi))
}

pub fn mean(samples: &[f64]) -> f64 {
    let mut acc = 0.0;
    for v in samples {
        acc += v;
    }
    acc / samples.len() as f64
}

/// Percentile bootstrap band for the mean: `reps` resamples with
/// replacement, then the `(1−level)/2` and `1−(1−level)/2` quantiles of the
/// resample means.
pub fn bootstrap_band(samples: &[f64], reps: usize, level: f64, seed: u64) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "confidence level must lie in (0, 1), got {level}"
        )));
    }
    if reps == 0 {
        return Err(Error::InvalidConfig(
            "bootstrap needs at least one resample".into(),
        ));
    }
    check_finite(samples)?;
    let m = samples.len();
    let mut rng = rng::seeded(seed);
    let mut means = Vec::with_capacity(reps);
    for _ in 0..reps {
        let mut acc = 0.0;
        for _ in 0..m {
            acc += samples[rng.random_range(0..m)];
        }
        means.push(acc / m as f64);
    }
    means.sort_by(f64::total_cmp);
    let tail = (1.0 - level) / 2.0;
    Ok((
        quantile_sorted(&means, tail),
        quantile_sorted(&means, 1.0 - tail),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn quantile_interpolates() {
        let s = [10.0, 11.0, 12.0, 13.0, 100.0];
        assert_eq!(quantile_sorted(&s, 0.25), 11.0);
        assert_eq!(quantile_sorted(&s, 0.75), 13.0);
        assert_eq!(quantile_sorted(&[1.0, 2.0, 3.0], 0.25), 1.5);
        assert_eq!(quantile_sorted(&[1.0, 2.0, 3.0], 0.75), 2.5);
        assert_eq!(quantile_sorted(&[4.0], 0.9), 4.0);
    }

    #[test]
    fn trim_examples() {
        let (kept, removed) = iqr_trim(&[10.0, 11.0, 12.0, 13.0, 100.0]).unwrap();
        assert_eq!(kept, vec![10.0, 11.0, 12.0, 13.0]);
        assert_eq!(removed, vec![100.0]);
        assert_eq!(
            iqr_fences(&[10.0, 11.0, 12.0, 13.0, 100.0]).unwrap(),
            (8.0, 16.0)
        );

        let (kept, removed) = iqr_trim(&[5.0; 5]).unwrap();
        assert_eq!((kept.len(), removed.len()), (5, 0));

        assert_eq!(iqr_fences(&[1.0, 2.0, 3.0]).unwrap(), (0.0, 4.0));
        assert_eq!(iqr_trim(&[1.0, 2.0, 3.0]).unwrap().0, vec![1.0, 2.0, 3.0]);

        assert!(matches!(
            iqr_trim(&[1.0, 2.0]),
            Err(Error::TooFewSamples { needed: 3, got: 2 })
        ));
    }

    #[test]
    fn trim_keeps_order() {
        let (kept, removed) = iqr_trim(&[3.0, -50.0, 1.0, 2.0, 4.0, 2.5, 90.0]).unwrap();
        assert_eq!(kept, vec![3.0, 1.0, 2.0, 4.0, 2.5]);
        assert_eq!(removed, vec![-50.0, 90.0]);
    }

    #[test]
    fn band_examples() {
        assert_eq!(
            bootstrap_band(&[5.0; 4], 1000, 0.95, 1).unwrap(),
            (5.0, 5.0)
        );
        let s = [1.0, 4.0, 2.0, 8.0, 5.0, 7.0];
        assert_eq!(
            bootstrap_band(&s, 1000, 0.95, 11).unwrap(),
            bootstrap_band(&s, 1000, 0.95, 11).unwrap()
        );
        assert!(bootstrap_band(&[], 10, 0.95, 0).is_err());
        assert!(bootstrap_band(&s, 10, 1.0, 0).is_err());
        assert!(bootstrap_band(&s, 0, 0.5, 0).is_err());
    }

    #[test]
    fn band_brackets_mean_in_nearly_all_seeds() {
        let s = [0.91, 1.07, 1.2, 0.98, 1.02, 1.4, 0.95, 1.01, 1.1, 0.99];
        let m = mean(&s);
        let hits = (0..100)
            .filter(|&seed| {
                let (lo, hi) = bootstrap_band(&s, 1000, 0.95, seed).unwrap();
                lo <= m && m <= hi
            })
            .count();
        assert!(hits >= 99, "{hits}/100");
    }

    proptest! {
        #[test]
        fn trim_keeps_median_and_at_least_three(
            samples in prop::collection::vec(1e-6f64..10.0, 3..80)
        ) {
            let (kept, removed) = iqr_trim(&samples).unwrap();
            prop_assert_eq!(kept.len() + removed.len(), samples.len());
            prop_assert!(kept.len() >= 3);
            let mut sorted = samples.clone();
            sorted.sort_by(f64::total_cmp);
            let median = quantile_sorted(&sorted, 0.5);
            let (lo, hi) = iqr_fences(&samples).unwrap();
            prop_assert!(lo <= median && median <= hi);
        }
    }
}
