//! Estimators built on the same Gram-plus-rank-one identity: the score
//! covariance at the centre of sandwich variance formulas, and per-unit
//! within covariance for panel data.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::estimators::{self, CovMatrix};
use crate::matrix::{self, DenseMatrix, SymmetricMatrix};

/// Empirical covariance of per-observation score vectors (rows of `scores`),
/// `(n·GᵀG − (Gᵀ1)(Gᵀ1)ᵀ) / (n(n−1))`.
///
/// This is [`estimators::cov_bariance`] under another name and returns the
/// same bits.
pub fn sandwich_score_cov(scores: &DenseMatrix) -> Result<CovMatrix> {
    estimators::cov_bariance(scores)
}

/// One panel unit observed over `T` periods.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelBlock {
    pub unit_id: String,
    pub data: DenseMatrix,
}

impl PanelBlock {
    pub fn new(unit_id: impl Into<String>, data: DenseMatrix) -> Self {
        PanelBlock {
            unit_id: unit_id.into(),
            data,
        }
    }

    pub fn periods(&self) -> usize {
        self.data.rows()
    }
}

/// Covariance after the within transformation,
/// `(X_iᵀX_i − s_i s_iᵀ / T) / (T − 1)`.
pub fn panel_within_cov(block: &PanelBlock) -> Result<CovMatrix> {
    let t = block.periods();
    if t < 2 {
        return Err(Error::TooFewPeriods {
            unit_id: block.unit_id.clone(),
            got: t,
        });
    }
    let t = t as f64;
    let g = matrix::gram(&block.data);
    let s = matrix::column_sums(&block.data);
    Ok(
        SymmetricMatrix::from_upper_fn(g.dim(), |k, l| (g.get(k, l) - s[k] * s[l] / t) / (t - 1.0))
            .into(),
    )
}

/// [`panel_within_cov`] for every block, keyed by unit. Blocks may have
/// different period counts. Fails on the first block with fewer than two
/// periods, or on a repeated unit id.
pub fn panel_within_cov_all(blocks: &[PanelBlock]) -> Result<BTreeMap<String, CovMatrix>> {
    let mut out = BTreeMap::new();
    for b in blocks {
        if out.contains_key(&b.unit_id) {
            return Err(Error::DuplicateUnit(b.unit_id.clone()));
        }
        out.insert(b.unit_id.clone(), panel_within_cov(b)?);
    }
    Ok(out)
}

/// Groups long-format rows (one row per unit-period) into blocks, in order
/// of each unit's first appearance. Rows keep their relative order.
pub fn group_panel<S: AsRef<str>>(unit_ids: &[S], x: &DenseMatrix) -> Result<Vec<PanelBlock>> {
    if unit_ids.len() != x.rows() {
        return Err(Error::DimensionMismatch {
            what: "unit ids",
            expected: x.rows(),
            got: unit_ids.len(),
        });
    }
    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    let mut blocks: Vec<PanelBlock> = Vec::new();
    for (id, row) in unit_ids.iter().zip(x.row_iter()) {
        let id = id.as_ref();
        let slot = *index.entry(id).or_insert_with(|| {
            blocks.push(PanelBlock::new(id, DenseMatrix::with_cols(x.cols())));
            blocks.len() - 1
        });
        blocks[slot].data.push_row(row)?;
    }
    Ok(blocks)
}
