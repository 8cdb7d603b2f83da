//! File formats.
//!
//! **Matrix files** come in two encodings, told apart by their first bytes:
//!
//! * CSV: comma separated, one observation per line, an optional single
//!   header line (recognised by containing a non-numeric field). Ragged rows
//!   and non-finite values are rejected.
//! * Binary: the 5-byte magic `GCOV1`, then `n` and `p` as little-endian
//!   `u64`, then `n·p` little-endian IEEE 754 binary64 values, row-major.
//!
//! **Results files** hold one benchmark summary per line under the header
//! [`RESULTS_HEADER`]. **Verification files** hold one `Δ_max` per grid point
//! under [`VERIFY_HEADER`].
//!
//! Every float written by this module uses 17 significant digits
//! ([`format_f64`]), which round-trips binary64 exactly.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::bench::{BenchSummary, Method};
use crate::error::{Error, Result};
use crate::estimators::{CovMatrix, EquivalenceReport};
use crate::matrix::DenseMatrix;
use crate::weighted::WeightVector;

pub const BINARY_MAGIC: &[u8; 5] = b"GCOV1";
pub const RESULTS_HEADER: &str =
    "method,n,p,repetitions,kept,removed,trimmed_mean_s,band_lo_s,band_hi_s,seed";
pub const VERIFY_HEADER: &str = "n,p,draws,delta_max,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Csv,
    Binary,
}

impl MatrixFormat {
    /// `.bin` and `.gcov` paths are binary, everything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("bin") | Some("gcov") => MatrixFormat::Binary,
            _ => MatrixFormat::Csv,
        }
    }
}

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros removed,
/// scientific notation when the decimal exponent is below −4 or above 16.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let fixed = format!("{x:.prec$}", prec = (16 - exp) as usize);
        strip_zeros(&fixed).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Reads a matrix file, detecting the encoding from its magic bytes.
pub fn read_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let bytes = fs::read(path)?;
    parse_matrix(&bytes)
}

pub fn parse_matrix(bytes: &[u8]) -> Result<DenseMatrix> {
    if bytes.starts_with(BINARY_MAGIC) {
        parse_binary(bytes)
    } else {
        parse_csv_matrix(bytes)
    }
}

fn parse_binary(bytes: &[u8]) -> Result<DenseMatrix> {
    let header = BINARY_MAGIC.len() + 16;
    if bytes.len() < header {
        return Err(Error::Parse("binary matrix header is truncated".into()));
    }
    let word = |at: usize| u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"));
    let (n, p) = (word(5), word(13));
    let count = n
        .checked_mul(p)
        .and_then(|c| c.checked_mul(8))
        .and_then(|b| usize::try_from(b).ok())
        .ok_or_else(|| Error::Parse("binary matrix dimensions overflow".into()))?;
    if bytes.len() - header != count {
        return Err(Error::Parse(format!(
            "binary matrix declares {n}x{p} but carries {} payload bytes",
            bytes.len() - header
        )));
    }
    let data = bytes[header..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    DenseMatrix::new(n as usize, p as usize, data).map_err(non_finite_to_parse)
}

fn non_finite_to_parse(e: Error) -> Error {
    match e {
        Error::NonFinite { row, col } => Error::Parse(format!(
            "non-finite value at data row {}, column {}",
            row + 1,
            col + 1
        )),
        other => other,
    }
}

fn csv_reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(r)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

fn parse_record(rec: &csv::StringRecord) -> Option<Vec<f64>> {
    rec.iter().map(|f| f.parse::<f64>().ok()).collect()
}

pub fn parse_csv_matrix(bytes: &[u8]) -> Result<DenseMatrix> {
    let mut rdr = csv_reader(bytes);
    let mut out: Option<DenseMatrix> = None;
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map_or(idx as u64 + 1, |p| p.line());
        match parse_record(&rec) {
            Some(values) => {
                let m = out.get_or_insert_with(|| DenseMatrix::with_cols(values.len()));
                m.push_row(&values).map_err(|e| match e {
                    Error::NonFinite { .. } => {
                        Error::Parse(format!("line {line}: non-finite value"))
                    }
                    other => other,
                })?;
            }
            None if idx == 0 => out = Some(DenseMatrix::with_cols(rec.len())),
            None => {
                return Err(Error::Parse(format!("line {line}: non-numeric field")));
            }
        }
    }
    Ok(out.unwrap_or_else(|| DenseMatrix::with_cols(0)))
}

pub fn write_matrix(path: impl AsRef<Path>, m: &DenseMatrix, format: MatrixFormat) -> Result<()> {
    let mut buf = Vec::new();
    match format {
        MatrixFormat::Csv => write_csv_rows(&mut buf, m.row_iter())?,
        MatrixFormat::Binary => write_binary(&mut buf, m)?,
    }
    fs::write(path, buf)?;
    Ok(())
}

pub fn write_binary<W: Write>(mut w: W, m: &DenseMatrix) -> Result<()> {
    w.write_all(BINARY_MAGIC)?;
    w.write_all(&(m.rows() as u64).to_le_bytes())?;
    w.write_all(&(m.cols() as u64).to_le_bytes())?;
    for v in m.as_slice() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Writes rows as comma-separated 17-digit reals, one row per line.
pub fn write_csv_rows<'a, W: Write>(
    mut w: W,
    rows: impl IntoIterator<Item = &'a [f64]>,
) -> Result<()> {
    for row in rows {
        let line: Vec<String> = row.iter().map(|&v| format_f64(v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn write_cov_csv<W: Write>(w: W, c: &CovMatrix) -> Result<()> {
    write_csv_rows(w, (0..c.dim()).map(|k| c.row(k)))
}

/// One-column file of nonnegative integer multiplicities, optional header.
pub fn read_weights(path: impl AsRef<Path>) -> Result<WeightVector> {
    parse_weights(&fs::read(path)?)
}

pub fn parse_weights(bytes: &[u8]) -> Result<WeightVector> {
    let mut rdr = csv_reader(bytes);
    let mut w = Vec::new();
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != 1 {
            return Err(Error::Parse(format!(
                "weights line {}: expected one column, found {}",
                idx + 1,
                rec.len()
            )));
        }
        match rec[0].parse::<u64>() {
            Ok(v) => w.push(v),
            Err(_) if idx == 0 && rec[0].parse::<f64>().is_err() => {}
            Err(_) => {
                return Err(Error::Parse(format!(
                    "weights line {}: `{}` is not a nonnegative integer",
                    idx + 1,
                    &rec[0]
                )))
            }
        }
    }
    Ok(WeightVector::new(w))
}

/// One line of a results file.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub method: String,
    pub n: usize,
    pub p: usize,
    pub repetitions: usize,
    pub kept: usize,
    pub removed: usize,
    /// `None` for skipped methods.
    pub trimmed_mean_s: Option<f64>,
    pub band_lo_s: Option<f64>,
    pub band_hi_s: Option<f64>,
    pub seed: u64,
}

impl From<&BenchSummary> for ResultRow {
    fn from(s: &BenchSummary) -> Self {
        let timed = |v: f64| s.is_timed().then_some(v);
        ResultRow {
            method: s.method.to_string(),
            n: s.n,
            p: s.p,
            repetitions: s.repetitions,
            kept: s.kept_count,
            removed: s.removed_count,
            trimmed_mean_s: timed(s.trimmed_mean_s),
            band_lo_s: timed(s.band_lo_s),
            band_hi_s: timed(s.band_hi_s),
            seed: s.seed,
        }
    }
}

impl ResultRow {
    pub fn method(&self) -> Option<Method> {
        self.method.parse().ok()
    }
}

/// Writes summaries under [`RESULTS_HEADER`]. Skipped methods keep their row
/// with empty timing fields.
pub fn write_results<W: Write>(mut w: W, summaries: &[BenchSummary]) -> Result<()> {
    writeln!(w, "{RESULTS_HEADER}")?;
    let opt = |v: Option<f64>| v.map(format_f64).unwrap_or_default();
    for s in summaries {
        let r = ResultRow::from(s);
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            r.method,
            r.n,
            r.p,
            r.repetitions,
            r.kept,
            r.removed,
            opt(r.trimmed_mean_s),
            opt(r.band_lo_s),
            opt(r.band_hi_s),
            r.seed
        )?;
    }
    Ok(())
}

fn expect_header(rdr: &mut csv::Reader<&[u8]>, header: &str) -> Result<()> {
    let mut first = csv::StringRecord::new();
    if !rdr.read_record(&mut first).map_err(csv_err)? {
        return Err(Error::Parse("file is empty".into()));
    }
    let got: Vec<&str> = first.iter().collect();
    if got.join(",") != header {
        return Err(Error::Parse(format!(
            "unexpected header `{}`, expected `{header}`",
            got.join(",")
        )));
    }
    Ok(())
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, name: &str) -> Result<T> {
    rec[i]
        .parse()
        .map_err(|_| Error::Parse(format!("bad {name} `{}`", &rec[i])))
}

fn opt_field(rec: &csv::StringRecord, i: usize, name: &str) -> Result<Option<f64>> {
    if rec[i].is_empty() {
        Ok(None)
    } else {
        field(rec, i, name).map(Some)
    }
}

pub fn parse_results(bytes: &[u8]) -> Result<Vec<ResultRow>> {
    let mut rdr = csv_reader(bytes);
    expect_header(&mut rdr, RESULTS_HEADER)?;
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        rows.push(ResultRow {
            method: rec[0].to_string(),
            n: field(&rec, 1, "n")?,
            p: field(&rec, 2, "p")?,
            repetitions: field(&rec, 3, "repetitions")?,
            kept: field(&rec, 4, "kept")?,
            removed: field(&rec, 5, "removed")?,
            trimmed_mean_s: opt_field(&rec, 6, "trimmed_mean_s")?,
            band_lo_s: opt_field(&rec, 7, "band_lo_s")?,
            band_hi_s: opt_field(&rec, 8, "band_hi_s")?,
            seed: field(&rec, 9, "seed")?,
        });
    }
    Ok(rows)
}

pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    parse_results(&fs::read(path)?)
}

/// One line of a verification file.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyRow {
    pub n: usize,
    pub p: usize,
    pub draws: usize,
    pub delta_max: f64,
    pub seed: u64,
}

pub fn write_verify<W: Write>(
    mut w: W,
    reports: &[EquivalenceReport],
    draws: usize,
    seed: u64,
) -> Result<()> {
    writeln!(w, "{VERIFY_HEADER}")?;
    for r in reports {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.n,
            r.p,
            draws,
            format_f64(r.delta_max),
            seed
        )?;
    }
    Ok(())
}

pub fn parse_verify(bytes: &[u8]) -> Result<Vec<VerifyRow>> {
    let mut rdr = csv_reader(bytes);
    expect_header(&mut rdr, VERIFY_HEADER)?;
    rdr.records()
        .map(|rec| {
            let rec = rec.map_err(csv_err)?;
            Ok(VerifyRow {
                n: field(&rec, 0, "n")?,
                p: field(&rec, 1, "p")?,
                draws: field(&rec, 2, "draws")?,
                delta_max: field(&rec, 3, "delta_max")?,
                seed: field(&rec, 4, "seed")?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn seventeen_digit_formatting() {
        assert_eq!(format_f64(1.0), "1");
        assert_eq!(format_f64(-1.0), "-1");
        assert_eq!(format_f64(0.0), "0");
        assert_eq!(format_f64(0.5), "0.5");
        assert_eq!(format_f64(0.1), "0.10000000000000001");
        assert_eq!(format_f64(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(format_f64(1e-5), "1.0000000000000001e-05");
        assert_eq!(format_f64(1.5e20), "1.5e+20");
        assert_eq!(format_f64(123456.0), "123456");
    }

    proptest! {
        #[test]
        fn formatting_round_trips(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(x.is_finite());
            let back: f64 = format_f64(x).parse().unwrap();
            prop_assert_eq!(back.to_bits(), x.to_bits());
        }

        #[test]
        fn csv_binary_csv_preserves_bits(
            rows in 1usize..6,
            cols in 1usize..5,
            seed in prop::collection::vec(-1e12f64..1e12, 30),
        ) {
            let data: Vec<f64> = (0..rows * cols).map(|i| seed[i % seed.len()] / (i as f64 + 0.7)).collect();
            let m = DenseMatrix::new(rows, cols, data).unwrap();
            let mut csv = Vec::new();
            write_csv_rows(&mut csv, m.row_iter()).unwrap();
            let from_csv = parse_matrix(&csv).unwrap();
            let mut bin = Vec::new();
            write_binary(&mut bin, &from_csv).unwrap();
            let from_bin = parse_matrix(&bin).unwrap();
            let mut csv2 = Vec::new();
            write_csv_rows(&mut csv2, from_bin.row_iter()).unwrap();
            prop_assert_eq!(&csv, &csv2);
            let same = m.as_slice().iter().zip(parse_matrix(&csv2).unwrap().as_slice())
                .all(|(a, b)| a.to_bits() == b.to_bits());
            prop_assert!(same);
        }
    }

    #[test]
    fn csv_matrix_parsing() {
        let m = parse_matrix(b"a,b\n1,3\n2,2\n3,1\n").unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 2));
        assert_eq!(m.as_slice(), &[1.0, 3.0, 2.0, 2.0, 3.0, 1.0]);
        let m = parse_matrix(b" 1.5 , -2e3\n").unwrap();
        assert_eq!(m.as_slice(), &[1.5, -2000.0]);
        assert!(matches!(parse_matrix(b"1,2\n3\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix(b"1,2\nx,3\n"), Err(Error::Parse(_))));
        assert!(matches!(parse_matrix(b"1,NaN\n"), Err(Error::Parse(_))));
        assert_eq!(parse_matrix(b"").unwrap().rows(), 0);
        assert_eq!(parse_matrix(b"x,y\n").unwrap().cols(), 2);
    }

    #[test]
    fn binary_layout_is_exact() {
        let m = DenseMatrix::from_rows(&[[1.0, 2.0]]).unwrap();
        let mut buf = Vec::new();
        write_binary(&mut buf, &m).unwrap();
        assert_eq!(&buf[..5], b"GCOV1");
        assert_eq!(&buf[5..13], &1u64.to_le_bytes());
        assert_eq!(&buf[13..21], &2u64.to_le_bytes());
        assert_eq!(&buf[21..29], &1.0f64.to_le_bytes());
        assert_eq!(buf.len(), 37);
        assert!(parse_matrix(&buf[..30]).is_err());
        assert!(parse_matrix(&buf[..10]).is_err());
        let mut nan = buf.clone();
        nan[29..37].copy_from_slice(&f64::NAN.to_le_bytes());
        assert!(matches!(parse_matrix(&nan), Err(Error::Parse(_))));
    }

    #[test]
    fn weights_parsing() {
        assert_eq!(
            parse_weights(b"w\n2\n0\n1\n").unwrap().as_slice(),
            &[2, 0, 1]
        );
        assert_eq!(parse_weights(b"1\n1\n").unwrap().n_star(), 2);
        assert!(parse_weights(b"1\n-1\n").is_err());
        assert!(parse_weights(b"1\n1.5\n").is_err());
        assert!(parse_weights(b"1,2\n").is_err());
    }

    #[test]
    fn results_round_trip() {
        let s = BenchSummary {
            method: Method::Bariance,
            n: 100,
            p: 10,
            repetitions: 5,
            kept_count: 4,
            removed_count: 1,
            trimmed_mean_s: 1.25e-4,
            band_lo_s: 1.2e-4,
            band_hi_s: 1.3e-4,
            seed: 7,
            data_checksum: 0,
            skipped: None,
        };
        let skipped = BenchSummary {
            method: Method::ExternalBaseline,
            skipped: Some("none".into()),
            trimmed_mean_s: f64::NAN,
            ..s.clone()
        };
        let mut buf = Vec::new();
        write_results(&mut buf, &[s.clone(), skipped]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), RESULTS_HEADER);
        let rows = parse_results(&buf).unwrap();
        assert_eq!(rows[0], ResultRow::from(&s));
        assert_eq!(rows[1].trimmed_mean_s, None);
        assert!(parse_results(b"").is_err());
        assert!(parse_results(b"method,n\n").is_err());
    }

    #[test]
    fn verify_round_trip() {
        let r = EquivalenceReport {
            n: 10,
            p: 2,
            delta_max: 3.3e-16,
            method_a: crate::estimators::Estimator::Bariance,
            method_b: crate::estimators::Estimator::Centered,
        };
        let mut buf = Vec::new();
        write_verify(&mut buf, &[r], 5, 1).unwrap();
        let rows = parse_verify(&buf).unwrap();
        assert_eq!(rows[0].delta_max, 3.3e-16);
        assert_eq!((rows[0].n, rows[0].draws), (10, 5));
    }
}
