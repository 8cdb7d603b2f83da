//! Scalar and matrix covariance estimators.
//!
//! The fast path is [`cov_bariance`]: one Gram product, one column-sum vector
//! and a rank-one correction, `Σ = (n·XᵀX − s·sᵀ) / (n(n−1))`. The remaining
//! estimators are independent routes to the same value: [`cov_centered`]
//! demeans explicitly, [`cov_pairwise_bruteforce`] sums over all pairs of
//! observations, and [`cov_via_centering_matrix`] multiplies through
//! `H = I − 11ᵀ/n`. [`delta_max`] measures how far two routes disagree.
//!
//! All estimators use denominator `n − 1` and reject `n < 2`.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{self, DenseMatrix, SymmetricMatrix};

/// Sufficient statistics `(n, S_x, S_y, S_xx, S_yy, S_xy)` of a pair of
/// sequences.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScalarSums {
    pub n: u64,
    pub sx: f64,
    pub sy: f64,
    pub sxx: f64,
    pub syy: f64,
    pub sxy: f64,
}

impl ScalarSums {
    /// Accumulates both sequences left to right.
    pub fn from_pair(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                what: "second sequence",
                expected: x.len(),
                got: y.len(),
            });
        }
        let mut s = ScalarSums {
            n: x.len() as u64,
            ..Default::default()
        };
        for (&xi, &yi) in x.iter().zip(y) {
            s.sx += xi;
            s.sy += yi;
            s.sxx += xi * xi;
            s.syy += yi * yi;
            s.sxy += xi * yi;
        }
        Ok(s)
    }

    pub fn from_single(x: &[f64]) -> Self {
        // lengths agree trivially
        Self::from_pair(x, x).expect("equal lengths")
    }

    pub fn mean_x(&self) -> f64 {
        self.sx / self.n as f64
    }

    pub fn mean_y(&self) -> f64 {
        self.sy / self.n as f64
    }

    /// `(n·S_xx − S_x²) / (n(n−1))`.
    pub fn bariance_x(&self) -> Result<f64> {
        let n = self.checked_n()?;
        Ok((n * self.sxx - self.sx * self.sx) / (n * (n - 1.0)))
    }

    /// `(n·S_xy − S_x·S_y) / (n(n−1))`.
    pub fn covariance(&self) -> Result<f64> {
        let n = self.checked_n()?;
        Ok((n * self.sxy - self.sx * self.sy) / (n * (n - 1.0)))
    }

    fn checked_n(&self) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::TooFewObservations { got: self.n });
        }
        Ok(self.n as f64)
    }
}

/// Unbiased variance from scalar sums: `(n·S_xx − S_x²) / (n(n−1))`.
pub fn bariance_scalar(x: &[f64]) -> Result<f64> {
    ScalarSums::from_single(x).bariance_x()
}

/// `Σ_{i≠j} (x_i − x_j)² / (2n(n−1))`, literally. O(n²) reference.
pub fn bariance_scalar_bruteforce(x: &[f64]) -> Result<f64> {
    pairwise_cov_bruteforce(x, x)
}

/// Unbiased covariance from scalar sums: `(n·S_xy − S_x·S_y) / (n(n−1))`.
pub fn pairwise_cov_scalar(x: &[f64], y: &[f64]) -> Result<f64> {
    ScalarSums::from_pair(x, y)?.covariance()
}

/// `Σ_{i≠j} (x_i − x_j)(y_i − y_j) / (2n(n−1))` over ordered pairs. O(n²)
/// reference.
pub fn pairwise_cov_bruteforce(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            what: "second sequence",
            expected: x.len(),
            got: y.len(),
        });
    }
    let n = require_two(x.len())?;
    let mut acc = 0.0;
    for i in 0..x.len() {
        for j in 0..x.len() {
            if i != j {
                acc += (x[i] - x[j]) * (y[i] - y[j]);
            }
        }
    }
    Ok(acc / (2.0 * n * (n - 1.0)))
}

/// A `p × p` unbiased covariance matrix. Symmetric bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix(SymmetricMatrix);

impl CovMatrix {
    /// Builds from a row-major buffer, mirroring the upper triangle.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self> {
        SymmetricMatrix::from_upper(dim, data).map(CovMatrix)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.0.get(k, l)
    }

    pub fn row(&self, k: usize) -> &[f64] {
        self.0.row(k)
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    pub fn as_symmetric(&self) -> &SymmetricMatrix {
        &self.0
    }
}

impl From<SymmetricMatrix> for CovMatrix {
    fn from(s: SymmetricMatrix) -> Self {
        CovMatrix(s)
    }
}

/// Identifies a covariance route in an [`EquivalenceReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    Bariance,
    Centered,
    PairwiseBruteforce,
    CenteringMatrix,
}

impl Estimator {
    pub fn as_str(self) -> &'static str {
        match self {
            Estimator::Bariance => "bariance",
            Estimator::Centered => "centered",
            Estimator::PairwiseBruteforce => "bruteforce",
            Estimator::CenteringMatrix => "centering-matrix",
        }
    }

    pub fn compute(self, x: &DenseMatrix) -> Result<CovMatrix> {
        match self {
            Estimator::Bariance => cov_bariance(x),
            Estimator::Centered => cov_centered(x),
            Estimator::PairwiseBruteforce => cov_pairwise_bruteforce(x),
            Estimator::CenteringMatrix => cov_via_centering_matrix(x),
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

/// Largest entrywise disagreement between two estimators on one `(n, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub n: usize,
    pub p: usize,
    pub delta_max: f64,
    pub method_a: Estimator,
    pub method_b: Estimator,
}

/// `Σ = (n·G − s·sᵀ) / (n(n−1))` with `G = XᵀX` and `s = Xᵀ1`.
///
/// Only `p`-sized intermediates are allocated; the data is read twice and
/// never copied.
pub fn cov_bariance(x: &DenseMatrix) -> Result<CovMatrix> {
    let n = require_two(x.rows())?;
    let g = matrix::gram(x);
    let s = matrix::column_sums(x);
    Ok(combine_gram_and_sums(n, &g, &s))
}

/// `(n·G − s·sᵀ) / (n(n−1))` for a known count `n`. Shared by the batch,
/// streaming and weighted estimators so they round identically.
pub(crate) fn combine_gram_and_sums(n: f64, g: &SymmetricMatrix, s: &[f64]) -> CovMatrix {
    let denom = n * (n - 1.0);
    CovMatrix(SymmetricMatrix::from_upper_fn(g.dim(), |k, l| {
        (n * g.get(k, l) - s[k] * s[l]) / denom
    }))
}

/// Textbook route: subtract column means into a fresh `n × p` buffer, then
/// one Gram product over the centered data, divided by `n − 1`.
pub fn cov_centered(x: &DenseMatrix) -> Result<CovMatrix> {
    let n = require_two(x.rows())?;
    let means: Vec<f64> = matrix::column_sums(x).iter().map(|s| s / n).collect();
    let mut centered = Vec::with_capacity(x.rows() * x.cols());
    for row in x.row_iter() {
        centered.extend(row.iter().zip(&means).map(|(v, m)| v - m));
    }
    let centered = DenseMatrix::new(x.rows(), x.cols(), centered)?;
    let g = matrix::gram(&centered);
    Ok(CovMatrix(SymmetricMatrix::from_upper_fn(
        g.dim(),
        |k, l| g.get(k, l) / (n - 1.0),
    )))
}

/// `Σ_{kl} = Σ_{i<j} (x_ik − x_jk)(x_il − x_jl) / (n(n−1))`. O(n²p²); meant
/// as an oracle for `n` in the low hundreds.
pub fn cov_pairwise_bruteforce(x: &DenseMatrix) -> Result<CovMatrix> {
    let n = require_two(x.rows())?;
    let p = x.cols();
    let mut acc = vec![0.0; p * p];
    let mut diff = vec![0.0; p];
    for i in 0..x.rows() {
        let ri = x.row(i);
        for j in (i + 1)..x.rows() {
            for (d, (a, b)) in diff.iter_mut().zip(ri.iter().zip(x.row(j))) {
                *d = a - b;
            }
            matrix::accumulate_upper_outer(&mut acc, &diff, 1.0);
        }
    }
    let denom = n * (n - 1.0);
    Ok(CovMatrix(SymmetricMatrix::from_upper_fn(p, |k, l| {
        acc[k * p + l] / denom
    })))
}

/// `Xᵀ H X / (n − 1)` with `H` materialized as a dense `n × n` matrix.
/// Memory is O(n²); intended for `n` up to a few hundred.
pub fn cov_via_centering_matrix(x: &DenseMatrix) -> Result<CovMatrix> {
    let n = require_two(x.rows())?;
    let h = matrix::centering_matrix(x.rows())?;
    let h = DenseMatrix::new(x.rows(), x.rows(), h.as_slice().to_vec())?;
    // H is symmetric, so Hᵀ X = H X
    let hx = h.transpose_mul(x);
    let xthx = x.transpose_mul(&hx);
    let p = x.cols();
    Ok(CovMatrix(SymmetricMatrix::from_upper_fn(p, |k, l| {
        xthx.get(k, l) / (n - 1.0)
    })))
}

/// `‖A − B‖_max`.
pub fn delta_max(a: &CovMatrix, b: &CovMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            what: "covariance dimension",
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(a.as_slice()
        .iter()
        .zip(b.as_slice())
        .fold(0.0, |m, (x, y)| m.max((x - y).abs())))
}

/// Runs two estimators on `x` and reports their disagreement.
pub fn compare(x: &DenseMatrix, a: Estimator, b: Estimator) -> Result<EquivalenceReport> {
    let delta = delta_max(&a.compute(x)?, &b.compute(x)?)?;
    Ok(EquivalenceReport {
        n: x.rows(),
        p: x.cols(),
        delta_max: delta,
        method_a: a,
        method_b: b,
    })
}

fn require_two(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::TooFewObservations { got: n as u64 });
    }
    Ok(n as f64)
}
