//! Timing protocol for comparing covariance routes.
//!
//! For every `(n, p)` in the grid the runner generates one standard-normal
//! matrix from the configured seed, then for each method performs the
//! warm-up calls, times `repetitions` calls with a monotonic clock, drops
//! Tukey outliers, and reports the trimmed mean with a 95% percentile
//! bootstrap band. Every method at a grid point sees the same matrix.
//!
//! Timing covers only the estimator call. Input generation happens before
//! the clock starts and the returned matrix is dropped after it stops; any
//! intermediate the estimator allocates is inside the measurement.

pub mod stats;
mod sweep;

use std::fmt;
use std::hint::black_box;
use std::str::FromStr;
use std::time::Instant;

use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::estimators::{self, CovMatrix};
use crate::matrix::DenseMatrix;
use crate::rng;

pub use sweep::equivalence_sweep;

/// Smallest reportable duration; a zero reading means the call finished
/// within one clock tick.
const CLOCK_FLOOR_S: f64 = 1e-9;

/// A timed covariance route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Bariance,
    Centered,
    /// A caller-supplied covariance routine, e.g. a linked numerics library.
    ExternalBaseline,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Bariance, Method::Centered, Method::ExternalBaseline];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Bariance => "bariance",
            Method::Centered => "centered",
            Method::ExternalBaseline => "external-baseline",
        }
    }

    fn index(self) -> u64 {
        self as u64
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s.trim())
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method `{s}`")))
    }
}

/// Grid and protocol parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub n_values: Vec<usize>,
    pub p_values: Vec<usize>,
    pub repetitions: usize,
    pub warmup_calls: usize,
    pub bootstrap_reps: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            n_values: vec![1000],
            p_values: vec![10],
            repetitions: 50,
            warmup_calls: 1,
            bootstrap_reps: 1000,
            seed: 42,
            methods: vec![Method::Bariance, Method::Centered],
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.repetitions < 3 {
            return bad(format!(
                "repetitions must be at least 3, got {}",
                self.repetitions
            ));
        }
        if self.bootstrap_reps < 100 {
            return bad(format!(
                "bootstrap resamples must be at least 100, got {}",
                self.bootstrap_reps
            ));
        }
        if self.n_values.is_empty() || self.p_values.is_empty() || self.methods.is_empty() {
            return bad("n values, p values and methods must be non-empty".into());
        }
        if let Some(n) = self.n_values.iter().find(|&&n| n < 2) {
            return bad(format!("every n must be at least 2, got {n}"));
        }
        if self.p_values.contains(&0) {
            return bad("every p must be at least 1".into());
        }
        Ok(())
    }
}

/// Raw per-repetition runtimes for one `(method, n, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchSample {
    pub method: Method,
    pub n: usize,
    pub p: usize,
    pub runtimes: Vec<f64>,
}

impl BenchSample {
    pub fn new(method: Method, n: usize, p: usize, runtimes: Vec<f64>) -> Result<Self> {
        if let Some(i) = runtimes.iter().position(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::InvalidConfig(format!(
                "runtime #{i} is not a positive finite duration"
            )));
        }
        Ok(BenchSample {
            method,
            n,
            p,
            runtimes,
        })
    }
}

/// Trimmed-mean runtime of one `(method, n, p)` with its bootstrap band.
///
/// For timed rows `kept_count + removed_count == repetitions` and
/// `band_lo_s <= trimmed_mean_s <= band_hi_s`. Skipped rows carry a reason,
/// zero counts and NaN timings.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchSummary {
    pub method: Method,
    pub n: usize,
    pub p: usize,
    pub repetitions: usize,
    pub kept_count: usize,
    pub removed_count: usize,
    pub trimmed_mean_s: f64,
    pub band_lo_s: f64,
    pub band_hi_s: f64,
    pub seed: u64,
    /// Fingerprint of the input matrix the method was timed on.
    pub data_checksum: u64,
    pub skipped: Option<String>,
}

impl BenchSummary {
    pub fn is_timed(&self) -> bool {
        self.skipped.is_none()
    }

    /// Trims and bands a raw sample. The band is widened to include the
    /// trimmed mean if resampling noise leaves it outside.
    pub fn from_sample(sample: &BenchSample, bootstrap_reps: usize, seed: u64) -> Result<Self> {
        let (kept, removed) = stats::iqr_trim(&sample.runtimes)?;
        let mean = stats::mean(&kept);
        let band_seed = rng::derive_seed(
            seed,
            &[sample.method.index(), sample.n as u64, sample.p as u64],
        );
        let (lo, hi) = stats::bootstrap_band(&kept, bootstrap_reps, 0.95, band_seed)?;
        Ok(BenchSummary {
            method: sample.method,
            n: sample.n,
            p: sample.p,
            repetitions: sample.runtimes.len(),
            kept_count: kept.len(),
            removed_count: removed.len(),
            trimmed_mean_s: mean,
            band_lo_s: lo.min(mean),
            band_hi_s: hi.max(mean),
            seed,
            data_checksum: 0,
            skipped: None,
        })
    }

    fn skipped(method: Method, n: usize, p: usize, cfg: &BenchConfig, reason: &str) -> Self {
        BenchSummary {
            method,
            n,
            p,
            repetitions: cfg.repetitions,
            kept_count: 0,
            removed_count: 0,
            trimmed_mean_s: f64::NAN,
            band_lo_s: f64::NAN,
            band_hi_s: f64::NAN,
            seed: cfg.seed,
            data_checksum: 0,
            skipped: Some(reason.to_string()),
        }
    }
}

/// `trimmed_mean(method) / trimmed_mean(bariance)` at one grid point.
/// Values above 1 favour the bariance route.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedupRatio {
    pub method: Method,
    pub n: usize,
    pub p: usize,
    pub ratio: f64,
    /// Conservative band from the two runtime bands.
    pub ratio_lo: f64,
    pub ratio_hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub summaries: Vec<BenchSummary>,
    pub ratios: Vec<SpeedupRatio>,
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<18} {:>7} {:>5} {:>6} {:>14} {:>14} {:>14}",
            "method", "n", "p", "kept", "mean [s]", "lo [s]", "hi [s]"
        )?;
        for s in &self.summaries {
            match &s.skipped {
                Some(reason) => writeln!(
                    f,
                    "{:<18} {:>7} {:>5}  skipped: {reason}",
                    s.method, s.n, s.p
                )?,
                None => writeln!(
                    f,
                    "{:<18} {:>7} {:>5} {:>3}/{:<2} {:>14.6e} {:>14.6e} {:>14.6e}",
                    s.method,
                    s.n,
                    s.p,
                    s.kept_count,
                    s.repetitions,
                    s.trimmed_mean_s,
                    s.band_lo_s,
                    s.band_hi_s
                )?,
            }
        }
        if !self.ratios.is_empty() {
            writeln!(f)?;
            writeln!(f, "speedup ratios (>1 favours bariance):")?;
            for r in &self.ratios {
                writeln!(
                    f,
                    "  {:<28} n={:<7} p={:<5} {:.3}  [{:.3}, {:.3}]",
                    format!("{}/bariance", r.method),
                    r.n,
                    r.p,
                    r.ratio,
                    r.ratio_lo,
                    r.ratio_hi
                )?;
            }
        }
        Ok(())
    }
}

/// A caller-supplied covariance routine timed under [`Method::ExternalBaseline`].
pub type Baseline<'a> = &'a dyn Fn(&DenseMatrix) -> Result<CovMatrix>;

/// `n × p` matrix of i.i.d. standard normal draws from the seeded ChaCha8
/// stream, filled row by row.
pub fn generate_data(n: usize, p: usize, seed: u64) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::ZeroDimension("n"));
    }
    if p == 0 {
        return Err(Error::ZeroDimension("p"));
    }
    let mut rng = rng::seeded(seed);
    let data: Vec<f64> = StandardNormal.sample_iter(&mut rng).take(n * p).collect();
    DenseMatrix::new(n, p, data)
}

/// Runs the protocol without an external baseline; rows requesting one are
/// reported as skipped.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<BenchReport> {
    run_benchmark_with(cfg, None)
}

pub fn run_benchmark_with(
    cfg: &BenchConfig,
    baseline: Option<Baseline<'_>>,
) -> Result<BenchReport> {
    cfg.validate()?;
    let mut summaries = Vec::new();
    for &n in &cfg.n_values {
        for &p in &cfg.p_values {
            let x = generate_data(n, p, cfg.seed)?;
            let checksum = fingerprint(&x);
            for &method in &cfg.methods {
                let routine: Baseline<'_> = match method {
                    Method::Bariance => &estimators::cov_bariance,
                    Method::Centered => &estimators::cov_centered,
                    Method::ExternalBaseline => match baseline {
                        Some(b) => b,
                        None => {
                            summaries.push(BenchSummary::skipped(
                                method,
                                n,
                                p,
                                cfg,
                                "no external baseline available",
                            ));
                            continue;
                        }
                    },
                };
                let runtimes = time_routine(routine, &x, cfg.warmup_calls, cfg.repetitions)?;
                let sample = BenchSample::new(method, n, p, runtimes)?;
                let mut summary = BenchSummary::from_sample(&sample, cfg.bootstrap_reps, cfg.seed)?;
                summary.data_checksum = checksum;
                summaries.push(summary);
            }
        }
    }
    let ratios = speedup_ratios(&summaries);
    Ok(BenchReport { summaries, ratios })
}

fn time_routine(
    routine: Baseline<'_>,
    x: &DenseMatrix,
    warmup: usize,
    reps: usize,
) -> Result<Vec<f64>> {
    for _ in 0..warmup {
        black_box(routine(black_box(x))?);
    }
    let mut runtimes = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        let out = routine(black_box(x));
        let elapsed = start.elapsed().as_secs_f64();
        black_box(out?);
        runtimes.push(elapsed.max(CLOCK_FLOOR_S));
    }
    Ok(runtimes)
}

/// Ratios of every timed non-bariance method to bariance at each grid point
/// where both ran.
pub fn speedup_ratios(summaries: &[BenchSummary]) -> Vec<SpeedupRatio> {
    let timed = |m: Method, n: usize, p: usize| {
        summaries
            .iter()
            .find(|s| s.method == m && s.n == n && s.p == p && s.is_timed())
    };
    let mut out = Vec::new();
    for base in summaries
        .iter()
        .filter(|s| s.method == Method::Bariance && s.is_timed())
    {
        for method in [Method::Centered, Method::ExternalBaseline] {
            if let Some(other) = timed(method, base.n, base.p) {
                out.push(SpeedupRatio {
                    method,
                    n: base.n,
                    p: base.p,
                    ratio: other.trimmed_mean_s / base.trimmed_mean_s,
                    ratio_lo: other.band_lo_s / base.band_hi_s,
                    ratio_hi: other.band_hi_s / base.band_lo_s,
                });
            }
        }
    }
    out
}

/// FNV-1a over the matrix shape and entry bits.
pub fn fingerprint(x: &DenseMatrix) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let shape = [x.rows() as u64, x.cols() as u64];
    for word in shape
        .iter()
        .copied()
        .chain(x.as_slice().iter().map(|v| v.to_bits()))
    {
        for b in word.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}
