//! Covariance of a bootstrap resample described by integer multiplicities.
//!
//! A resample that draws row `i` exactly `w_i` times has covariance
//!
//! ```text
//! Σ* = (Xᵀ W X − (Xᵀw)(Xᵀw)ᵀ / n*) / (n* − 1),   n* = Σ w_i,  W = diag(w)
//! ```
//!
//! which needs only the weighted Gram pair and never expands the resample.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::estimators::{self, CovMatrix};
use crate::matrix::{self, DenseMatrix, SymmetricMatrix};
use crate::rng;

/// Nonnegative integer multiplicities with their cached total `n*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    w: Vec<u64>,
    n_star: u64,
}

impl WeightVector {
    pub fn new(w: Vec<u64>) -> Self {
        let n_star = w.iter().sum();
        WeightVector { w, n_star }
    }

    /// All-ones weights: the original sample.
    pub fn ones(n: usize) -> Self {
        WeightVector::new(vec![1; n])
    }

    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn n_star(&self) -> u64 {
        self.n_star
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.w
    }

    /// The resample written out row by row, each row repeated `w_i` times.
    pub fn expand(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_len(x)?;
        let mut out = DenseMatrix::with_cols(x.cols());
        for (row, &wi) in x.row_iter().zip(&self.w) {
            for _ in 0..wi {
                out.push_row(row)?;
            }
        }
        Ok(out)
    }

    fn check_len(&self, x: &DenseMatrix) -> Result<()> {
        if self.w.len() != x.rows() {
            return Err(Error::DimensionMismatch {
                what: "weights",
                expected: x.rows(),
                got: self.w.len(),
            });
        }
        Ok(())
    }
}

/// Covariance of the resample encoded by `w`.
///
/// Rows with zero weight are skipped. The final combination is evaluated as
/// `(n*·XᵀWX − (Xᵀw)(Xᵀw)ᵀ) / (n*(n*−1))`, the same expression
/// [`estimators::cov_bariance`] uses, so unit weights reproduce it exactly.
pub fn cov_weighted(x: &DenseMatrix, w: &WeightVector) -> Result<CovMatrix> {
    w.check_len(x)?;
    if w.n_star < 2 {
        return Err(Error::TooFewObservations { got: w.n_star });
    }
    let p = x.cols();
    let mut g = SymmetricMatrix::zeros(p);
    let mut s = vec![0.0; p];
    for (row, &wi) in x.row_iter().zip(&w.w) {
        if wi == 0 {
            continue;
        }
        let wf = wi as f64;
        matrix::accumulate_upper_outer(g.data_mut(), row, wf);
        for (acc, &v) in s.iter_mut().zip(row) {
            *acc += wf * v;
        }
    }
    g.remirror();
    Ok(estimators::combine_gram_and_sums(w.n_star as f64, &g, &s))
}

/// One standard bootstrap resample of `n` rows as multiplicities:
/// `Multinomial(n; 1/n, …, 1/n)`, deterministic in `seed`.
pub fn multinomial_weights(n: usize, seed: u64) -> Result<WeightVector> {
    draw_multinomial(n, &mut rng::seeded(seed))
}

/// Weights for bootstrap replicate `replicate`, drawn from an independent
/// stream derived from `(seed, replicate)`.
pub fn replicate_weights(n: usize, seed: u64, replicate: u64) -> Result<WeightVector> {
    multinomial_weights(n, rng::derive_seed(seed, &[replicate]))
}

fn draw_multinomial(n: usize, rng: &mut rng::Rng) -> Result<WeightVector> {
    if n == 0 {
        return Err(Error::ZeroDimension("number of rows"));
    }
    let mut w = vec![0u64; n];
    for _ in 0..n {
        w[rng.random_range(0..n)] += 1;
    }
    Ok(WeightVector {
        w,
        n_star: n as u64,
    })
}

/// Covariances of `reps` bootstrap resamples of `x`. Resamples whose
/// multiplicities land on a single row (possible only for tiny `n`) have no
/// covariance and are reported as errors in place.
pub fn bootstrap_covariances(x: &DenseMatrix, reps: usize, seed: u64) -> Vec<Result<CovMatrix>> {
    (0..reps as u64)
        .map(|r| {
            let w = replicate_weights(x.rows(), seed, r)?;
            cov_weighted(x, &w)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> DenseMatrix {
        DenseMatrix::from_rows(&[[1.0, 3.0], [2.0, 2.0], [3.0, 1.0]]).unwrap()
    }

    #[test]
    fn unit_weights_reduce_to_unweighted() {
        let c = cov_weighted(&example(), &WeightVector::ones(3)).unwrap();
        assert_eq!(c.as_slice(), &[1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn multiplicities_match_expanded_resample() {
        let w = WeightVector::new(vec![2, 0, 1]);
        let c = cov_weighted(&example(), &w).unwrap();
        let four_thirds = 4.0 / 3.0;
        for (got, want) in
            c.as_slice()
                .iter()
                .zip([four_thirds, -four_thirds, -four_thirds, four_thirds])
        {
            assert!((got - want).abs() < 1e-15);
        }
        let expanded = w.expand(&example()).unwrap();
        assert_eq!(expanded.rows(), 3);
        assert_eq!(expanded.row(1), &[1.0, 3.0]);
    }

    #[test]
    fn rejects_degenerate_weights() {
        let w = WeightVector::new(vec![1, 0, 0]);
        assert!(matches!(
            cov_weighted(&example(), &w),
            Err(Error::TooFewObservations { got: 1 })
        ));
        let short = WeightVector::new(vec![1, 1]);
        assert!(matches!(
            cov_weighted(&example(), &short),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn multinomial_contract() {
        assert_eq!(multinomial_weights(1, 99).unwrap().as_slice(), &[1]);
        let a = multinomial_weights(5, 2024).unwrap();
        assert_eq!(a, multinomial_weights(5, 2024).unwrap());
        assert_eq!(a.n_star(), 5);
        assert!(multinomial_weights(0, 1).is_err());
        assert_ne!(
            replicate_weights(50, 1, 0).unwrap(),
            replicate_weights(50, 1, 1).unwrap()
        );
    }

    #[test]
    fn multinomial_mean_is_one() {
        let n = 8;
        let draws = 10_000;
        let mut totals = vec![0u64; n];
        for r in 0..draws {
            let w = replicate_weights(n, 5, r).unwrap();
            assert_eq!(w.as_slice().iter().sum::<u64>(), n as u64);
            for (t, v) in totals.iter_mut().zip(w.as_slice()) {
                *t += v;
            }
        }
        for t in totals {
            let mean = t as f64 / draws as f64;
            assert!((mean - 1.0).abs() <= 0.05, "mean {mean}");
        }
    }

    #[test]
    fn bootstrap_covariances_are_seeded() {
        let a = bootstrap_covariances(&example(), 4, 3);
        let b = bootstrap_covariances(&example(), 4, 3);
        assert_eq!(a.len(), 4);
        for (x, y) in a.iter().zip(&b) {
            match (x, y) {
                (Ok(x), Ok(y)) => assert_eq!(x, y),
                (Err(_), Err(_)) => {}
                _ => panic!("replicates disagree"),
            }
        }
    }
}
