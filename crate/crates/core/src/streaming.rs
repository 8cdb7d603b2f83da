//! Online covariance from cumulative sums.
//!
//! A [`StreamState`] holds the observation count `t`, the running sum
//! `S_t = Σ x_i` and the running Gram matrix `G_t = Σ x_i x_iᵀ`. Each update
//! is one rank-one accumulation, O(p²), independent of `t`; the covariance at
//! any time is `(t·G_t − S_t S_tᵀ) / (t(t−1))`.
//!
//! For data far from the origin the difference `t·G_t − S_t S_tᵀ` cancels
//! badly. An optional constant `shift` is subtracted from every observation
//! before accumulation; covariance is shift invariant, so the result is
//! unchanged in exact arithmetic while the accumulated magnitudes shrink.
//! A good anchor is the first observation.

use crate::error::{Error, Result};
use crate::estimators::{self, CovMatrix};
use crate::matrix::{self, DenseMatrix, SymmetricMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct StreamState {
    t: u64,
    sum: Vec<f64>,
    gram: SymmetricMatrix,
    shift: Vec<f64>,
}

impl StreamState {
    /// Empty accumulator over `p` variables with a zero shift.
    pub fn new(p: usize) -> Result<Self> {
        Self::with_shift(p, None)
    }

    /// Empty accumulator; `shift`, if given, must have length `p`.
    pub fn with_shift(p: usize, shift: Option<Vec<f64>>) -> Result<Self> {
        if p == 0 {
            return Err(Error::ZeroDimension("stream dimension"));
        }
        let shift = match shift {
            Some(s) if s.len() != p => {
                return Err(Error::DimensionMismatch {
                    what: "shift",
                    expected: p,
                    got: s.len(),
                })
            }
            Some(s) => {
                if let Some(k) = s.iter().position(|v| !v.is_finite()) {
                    return Err(Error::NonFinite { row: 0, col: k });
                }
                s
            }
            None => vec![0.0; p],
        };
        Ok(StreamState {
            t: 0,
            sum: vec![0.0; p],
            gram: SymmetricMatrix::zeros(p),
            shift,
        })
    }

    pub fn dim(&self) -> usize {
        self.sum.len()
    }

    /// Number of observations absorbed so far.
    pub fn count(&self) -> u64 {
        self.t
    }

    /// Running sum of shifted observations.
    pub fn sum(&self) -> &[f64] {
        &self.sum
    }

    /// Running Gram matrix of shifted observations.
    pub fn gram(&self) -> &SymmetricMatrix {
        &self.gram
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    /// Running mean in the original (unshifted) coordinates.
    pub fn mean(&self) -> Option<Vec<f64>> {
        if self.t == 0 {
            return None;
        }
        let t = self.t as f64;
        Some(
            self.sum
                .iter()
                .zip(&self.shift)
                .map(|(s, c)| s / t + c)
                .collect(),
        )
    }

    /// Absorbs one observation.
    pub fn update(&mut self, x: &[f64]) -> Result<()> {
        let p = self.dim();
        if x.len() != p {
            return Err(Error::DimensionMismatch {
                what: "observation",
                expected: p,
                got: x.len(),
            });
        }
        if let Some(k) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: self.t as usize,
                col: k,
            });
        }
        let y: Vec<f64> = x.iter().zip(&self.shift).map(|(v, c)| v - c).collect();
        for (s, v) in self.sum.iter_mut().zip(&y) {
            *s += v;
        }
        matrix::accumulate_upper_outer(self.gram.data_mut(), &y, 1.0);
        self.gram.remirror();
        self.t += 1;
        Ok(())
    }

    /// Absorbs every row of `x` in order.
    pub fn extend(&mut self, x: &DenseMatrix) -> Result<()> {
        x.row_iter().try_for_each(|r| self.update(r))
    }

    /// `(t·G_t − S_t S_tᵀ) / (t(t−1))`.
    pub fn covariance(&self) -> Result<CovMatrix> {
        if self.t < 2 {
            return Err(Error::TooFewObservations { got: self.t });
        }
        Ok(estimators::combine_gram_and_sums(
            self.t as f64,
            &self.gram,
            &self.sum,
        ))
    }

    /// Combines two accumulators over disjoint observation sets. The shifts
    /// must match bit for bit.
    pub fn merge(&self, other: &StreamState) -> Result<StreamState> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                what: "stream dimension",
                expected: self.dim(),
                got: other.dim(),
            });
        }
        let same_shift = self
            .shift
            .iter()
            .zip(&other.shift)
            .all(|(a, b)| a.to_bits() == b.to_bits());
        if !same_shift {
            return Err(Error::ShiftMismatch);
        }
        let sum = self
            .sum
            .iter()
            .zip(&other.sum)
            .map(|(a, b)| a + b)
            .collect();
        let gram = self
            .gram
            .as_slice()
            .iter()
            .zip(other.gram.as_slice())
            .map(|(a, b)| a + b)
            .collect();
        Ok(StreamState {
            t: self.t + other.t,
            sum,
            gram: SymmetricMatrix::from_upper(self.dim(), gram)?,
            shift: self.shift.clone(),
        })
    }

    /// Packs the state into a `(p + 3) × p` matrix for the CSV/binary matrix
    /// formats: row 0 holds `t` in column 0, then the shift row, the sum row
    /// and the `p` rows of the Gram matrix.
    pub fn to_snapshot(&self) -> DenseMatrix {
        let p = self.dim();
        let mut data = vec![0.0; (p + 3) * p];
        data[0] = self.t as f64;
        data[p..2 * p].copy_from_slice(&self.shift);
        data[2 * p..3 * p].copy_from_slice(&self.sum);
        data[3 * p..].copy_from_slice(self.gram.as_slice());
        DenseMatrix::new(p + 3, p, data).expect("state entries are finite")
    }

    /// Inverse of [`StreamState::to_snapshot`].
    pub fn from_snapshot(m: &DenseMatrix) -> Result<Self> {
        let p = m.cols();
        if p == 0 {
            return Err(Error::ZeroDimension("stream dimension"));
        }
        if m.rows() != p + 3 {
            return Err(Error::DimensionMismatch {
                what: "snapshot rows",
                expected: p + 3,
                got: m.rows(),
            });
        }
        let t = m.get(0, 0);
        if t < 0.0 || t.fract() != 0.0 || m.row(0)[1..].iter().any(|&v| v != 0.0) {
            return Err(Error::Parse("snapshot header row is malformed".into()));
        }
        let data = m.as_slice();
        Ok(StreamState {
            t: t as u64,
            shift: data[p..2 * p].to_vec(),
            sum: data[2 * p..3 * p].to_vec(),
            gram: SymmetricMatrix::from_upper(p, data[3 * p..].to_vec())?,
        })
    }
}
