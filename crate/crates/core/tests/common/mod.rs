//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the estimator code paths it is used to check.

#![allow(dead_code)]

use gramcov::{CovMatrix, DenseMatrix};
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_matrix(rng: &mut ChaCha8Rng, n: usize, p: usize, lo: f64, hi: f64) -> DenseMatrix {
    let data = (0..n * p).map(|_| rng.random_range(lo..hi)).collect();
    DenseMatrix::new(n, p, data).unwrap()
}

pub fn normal_matrix(rng: &mut ChaCha8Rng, n: usize, p: usize) -> DenseMatrix {
    use rand_distr::{Distribution, StandardNormal};
    let data = (0..n * p).map(|_| StandardNormal.sample(rng)).collect();
    DenseMatrix::new(n, p, data).unwrap()
}

/// Two-pass textbook covariance, entry by entry.
pub fn textbook_cov(x: &DenseMatrix) -> Vec<f64> {
    let (n, p) = (x.rows(), x.cols());
    let means: Vec<f64> = (0..p)
        .map(|k| (0..n).map(|i| x.get(i, k)).sum::<f64>() / n as f64)
        .collect();
    let mut out = vec![0.0; p * p];
    for k in 0..p {
        for l in 0..p {
            let s: f64 = (0..n)
                .map(|i| (x.get(i, k) - means[k]) * (x.get(i, l) - means[l]))
                .sum();
            out[k * p + l] = s / (n as f64 - 1.0);
        }
    }
    out
}

pub fn textbook_var(x: &[f64]) -> f64 {
    textbook_covar(x, x)
}

pub fn textbook_covar(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    x.iter()
        .zip(y)
        .map(|(a, b)| (a - mx) * (b - my))
        .sum::<f64>()
        / (n - 1.0)
}

pub fn to_nalgebra(x: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(x.rows(), x.cols(), x.as_slice())
}

/// `XᵀMX / (T−1)` with `M = I − 11ᵀ/T` built and multiplied by nalgebra.
pub fn explicit_within_cov(x: &DenseMatrix) -> Vec<f64> {
    let t = x.rows();
    let m = DMatrix::<f64>::identity(t, t) - DMatrix::<f64>::from_element(t, t, 1.0 / t as f64);
    let xm = to_nalgebra(x);
    let c = xm.transpose() * m * &xm / (t as f64 - 1.0);
    (0..x.cols())
        .flat_map(|k| (0..x.cols()).map(move |l| (k, l)))
        .map(|(k, l)| c[(k, l)])
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn eigenvalues(c: &CovMatrix) -> Vec<f64> {
    let m = DMatrix::from_row_slice(c.dim(), c.dim(), c.as_slice());
    m.symmetric_eigenvalues().iter().copied().collect()
}

pub fn is_bit_symmetric(c: &CovMatrix) -> bool {
    (0..c.dim()).all(|k| (0..c.dim()).all(|l| c.get(k, l).to_bits() == c.get(l, k).to_bits()))
}
