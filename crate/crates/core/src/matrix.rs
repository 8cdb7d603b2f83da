//! Dense row-major storage and the three kernels every estimator reduces to:
//! column sums, the Gram product `XᵀX`, and the rank-one outer product.
//!
//! All accumulations run left to right over observations, one accumulator per
//! output entry, with no compensated or pairwise summation. Two routes that
//! feed the same values through these kernels therefore produce bit-identical
//! sums.

use crate::error::{Error, Result};

/// An `n × p` matrix of observations: rows are observations, columns are
/// variables. Entries are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Wraps row-major `data`, rejecting a length mismatch or any NaN/Inf.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "matrix data",
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(idx) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: idx / cols.max(1),
                col: idx % cols.max(1),
            });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    /// Builds a matrix from row slices; all rows must share one length.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    what: "row",
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        DenseMatrix::new(rows.len(), cols, data)
    }

    /// An `rows × cols` matrix of zeros.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    /// Empty matrix with a fixed column count, for appending rows.
    pub fn with_cols(cols: usize) -> Self {
        DenseMatrix::zeros(0, cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.data[i * self.cols + k]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        // chunks_exact(0) panics, so a zero-column matrix yields its empty rows explicitly
        (0..self.rows).map(move |i| self.row(i))
    }

    /// Copy of column `k`.
    pub fn column(&self, k: usize) -> Vec<f64> {
        self.row_iter().map(|r| r[k]).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Appends one observation, validating its length and finiteness.
    pub fn push_row(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch {
                what: "row",
                expected: self.cols,
                got: row.len(),
            });
        }
        if let Some(k) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: self.rows,
                col: k,
            });
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    /// Rows `start..end` as a new matrix.
    pub fn slice_rows(&self, start: usize, end: usize) -> DenseMatrix {
        DenseMatrix {
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
        }
    }

    /// Naive `AᵀB`, left-to-right over rows. Test-witness paths only.
    pub(crate) fn transpose_mul(&self, other: &DenseMatrix) -> DenseMatrix {
        debug_assert_eq!(self.rows, other.rows);
        let (p, q) = (self.cols, other.cols);
        let mut out = vec![0.0; p * q];
        for (a, b) in self.row_iter().zip(other.row_iter()) {
            for (k, &ak) in a.iter().enumerate() {
                let dst = &mut out[k * q..(k + 1) * q];
                for (o, &bl) in dst.iter_mut().zip(b) {
                    *o += ak * bl;
                }
            }
        }
        DenseMatrix {
            rows: p,
            cols: q,
            data: out,
        }
    }
}

/// A `p × p` matrix whose lower triangle is a bit-exact mirror of its upper
/// triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Takes a row-major `dim × dim` buffer and overwrites the strict lower
    /// triangle with the upper one.
    pub fn from_upper(dim: usize, mut data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                what: "symmetric matrix data",
                expected: dim * dim,
                got: data.len(),
            });
        }
        mirror_upper(dim, &mut data);
        Ok(SymmetricMatrix { dim, data })
    }

    /// Evaluates `f(k, l)` for `k <= l` and mirrors.
    pub fn from_upper_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; dim * dim];
        for k in 0..dim {
            for l in k..dim {
                data[k * dim + l] = f(k, l);
            }
        }
        mirror_upper(dim, &mut data);
        SymmetricMatrix { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        SymmetricMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.data[k * self.dim + l]
    }

    pub fn row(&self, k: usize) -> &[f64] {
        &self.data[k * self.dim..(k + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Largest absolute entry, `‖A‖_max`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Mutable row-major buffer for in-place accumulation. Callers restore
    /// symmetry with [`SymmetricMatrix::remirror`].
    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub(crate) fn remirror(&mut self) {
        mirror_upper(self.dim, &mut self.data);
    }
}

fn mirror_upper(dim: usize, data: &mut [f64]) {
    for k in 0..dim {
        for l in (k + 1)..dim {
            data[l * dim + k] = data[k * dim + l];
        }
    }
}

/// `s = Xᵀ1`: one left-to-right sum per column.
pub fn column_sums(x: &DenseMatrix) -> Vec<f64> {
    let mut s = vec![0.0; x.cols()];
    for row in x.row_iter() {
        for (acc, &v) in s.iter_mut().zip(row) {
            *acc += v;
        }
    }
    s
}

/// `G = XᵀX`, computed on the upper triangle and mirrored.
///
/// The loop runs row-outer so the innermost pass is contiguous, but every
/// entry `G[k][l]` still accumulates `x[0][k]·x[0][l] + x[1][k]·x[1][l] + …`
/// in row order, exactly as an `i`-innermost triple loop would.
pub fn gram(x: &DenseMatrix) -> SymmetricMatrix {
    let p = x.cols();
    let mut g = SymmetricMatrix::zeros(p);
    let acc = g.data_mut();
    for row in x.row_iter() {
        accumulate_upper_outer(acc, row, 1.0);
    }
    g.remirror();
    g
}

/// `acc[k][l] += (scale · y[k]) · y[l]` for `k <= l`.
///
/// With `scale == 1.0` the product `1.0 · y[k]` is exact, so unit scaling
/// reproduces the unweighted accumulation bit for bit.
pub(crate) fn accumulate_upper_outer(acc: &mut [f64], y: &[f64], scale: f64) {
    let p = y.len();
    for (k, &yk) in y.iter().enumerate() {
        let a = scale * yk;
        let dst = &mut acc[k * p + k..(k + 1) * p];
        for (o, &yl) in dst.iter_mut().zip(&y[k..]) {
            *o += a * yl;
        }
    }
}

/// `u vᵀ`, a `len(u) × len(v)` matrix.
pub fn outer(u: &[f64], v: &[f64]) -> DenseMatrix {
    let mut data = Vec::with_capacity(u.len() * v.len());
    for &uk in u {
        data.extend(v.iter().map(|&vl| uk * vl));
    }
    DenseMatrix {
        rows: u.len(),
        cols: v.len(),
        data,
    }
}

/// `H = I_n − (1/n)·11ᵀ`. Only the test-witness covariance path builds this.
pub fn centering_matrix(n: usize) -> Result<SymmetricMatrix> {
    if n == 0 {
        return Err(Error::EmptyCenteringMatrix);
    }
    let inv = 1.0 / n as f64;
    Ok(SymmetricMatrix::from_upper_fn(n, |i, j| {
        if i == j {
            1.0 - inv
        } else {
            -inv
        }
    }))
}
