//! Tidy `x,series,y,y_lo,y_hi` tables for plotting benchmark and
//! verification results with any external tool.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::io::{format_f64, ResultRow, VerifyRow};

pub const PLOT_HEADER: &str = "x,series,y,y_lo,y_hi";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Runtime against `n`, one series per method and `p`.
    RuntimeVsN,
    /// Runtime against `p`, one series per method and `n`.
    RuntimeVsP,
    /// Runtime ratio of each method to bariance against `n`.
    Ratio,
    /// Largest `Δ_max` against `n`, one series per `p`. Reads a
    /// verification file rather than a results file.
    Error,
}

impl PlotKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PlotKind::RuntimeVsN => "runtime-vs-n",
            PlotKind::RuntimeVsP => "runtime-vs-p",
            PlotKind::Ratio => "ratio",
            PlotKind::Error => "error",
        }
    }
}

impl fmt::Display for PlotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            PlotKind::RuntimeVsN,
            PlotKind::RuntimeVsP,
            PlotKind::Ratio,
            PlotKind::Error,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown plot kind `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotPoint {
    pub x: usize,
    pub series: String,
    pub y: f64,
    pub y_lo: Option<f64>,
    pub y_hi: Option<f64>,
}

/// Builds a runtime or ratio table from benchmark rows. Skipped rows are
/// ignored; points are ordered by `x`, then series.
pub fn from_results(rows: &[ResultRow], kind: PlotKind) -> Result<Vec<PlotPoint>> {
    if rows.is_empty() {
        return Err(Error::Parse("results file has no rows".into()));
    }
    let timed = rows
        .iter()
        .filter_map(|r| Some((r, r.trimmed_mean_s?, r.band_lo_s?, r.band_hi_s?)));
    let mut points: Vec<PlotPoint> = match kind {
        PlotKind::RuntimeVsN | PlotKind::RuntimeVsP => timed
            .map(|(r, y, lo, hi)| {
                let (x, series) = if kind == PlotKind::RuntimeVsN {
                    (r.n, format!("{} p={}", r.method, r.p))
                } else {
                    (r.p, format!("{} n={}", r.method, r.n))
                };
                PlotPoint {
                    x,
                    series,
                    y,
                    y_lo: Some(lo),
                    y_hi: Some(hi),
                }
            })
            .collect(),
        PlotKind::Ratio => {
            let timed: Vec<_> = timed.collect();
            let several_p = rows.iter().map(|r| r.p).collect::<BTreeSet<_>>().len() > 1;
            let mut out = Vec::new();
            for &(base, by, blo, bhi) in timed.iter().filter(|t| t.0.method == "bariance") {
                for &(other, oy, olo, ohi) in timed
                    .iter()
                    .filter(|t| t.0.method != "bariance" && t.0.n == base.n && t.0.p == base.p)
                {
                    let mut series = format!("{}/bariance", other.method);
                    if several_p {
                        series.push_str(&format!(" p={}", base.p));
                    }
                    out.push(PlotPoint {
                        x: base.n,
                        series,
                        y: oy / by,
                        y_lo: Some(olo / bhi),
                        y_hi: Some(ohi / blo),
                    });
                }
            }
            out
        }
        PlotKind::Error => {
            return Err(Error::InvalidConfig(
                "the error plot reads a verification file".into(),
            ))
        }
    };
    points.sort_by(|a, b| a.x.cmp(&b.x).then_with(|| a.series.cmp(&b.series)));
    Ok(points)
}

/// `Δ_max` against `n`, one series per `p`.
pub fn from_verify(rows: &[VerifyRow]) -> Result<Vec<PlotPoint>> {
    if rows.is_empty() {
        return Err(Error::Parse("verification file has no rows".into()));
    }
    let mut points: Vec<PlotPoint> = rows
        .iter()
        .map(|r| PlotPoint {
            x: r.n,
            series: format!("p={}", r.p),
            y: r.delta_max,
            y_lo: None,
            y_hi: None,
        })
        .collect();
    points.sort_by(|a, b| a.x.cmp(&b.x).then_with(|| a.series.cmp(&b.series)));
    Ok(points)
}

pub fn write_plot<W: Write>(mut w: W, points: &[PlotPoint]) -> Result<()> {
    writeln!(w, "{PLOT_HEADER}")?;
    let opt = |v: Option<f64>| v.map(format_f64).unwrap_or_default();
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{}",
            p.x,
            p.series,
            format_f64(p.y),
            opt(p.y_lo),
            opt(p.y_hi)
        )?;
    }
    Ok(())
}
