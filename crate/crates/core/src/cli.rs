//! The `gramcov` command line.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 domain violation (for
//! example fewer than two observations), 3 failed equivalence verification.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchConfig, Method};
use crate::error::{Error, Result};
use crate::estimators::{self, CovMatrix};
use crate::io::{self as fileio, MatrixFormat};
use crate::plot::{self, PlotKind};
use crate::streaming::StreamState;
use crate::weighted;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

/// Largest `Δ_max` that `verify` accepts.
pub const EQUIVALENCE_BOUND: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(
    name = "gramcov",
    version,
    about = "Covariance via one Gram product and a rank-one correction"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the covariance matrix of a matrix file
    Cov(CovArgs),
    /// Check that the bariance and centered estimators agree on random data
    Verify(VerifyArgs),
    /// Time the estimators on generated data
    Bench(BenchArgs),
    /// Feed a matrix file through the streaming accumulator row by row
    Stream(StreamArgs),
    /// Turn a results or verification file into a tidy plotting table
    Plotdata(PlotArgs),
    /// Convert a matrix file between CSV and binary
    Convert(ConvertArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CovMethod {
    Bariance,
    Centered,
    Bruteforce,
}

#[derive(Debug, clap::Args)]
struct CovArgs {
    /// Input matrix (CSV or GCOV1 binary)
    input: PathBuf,
    #[arg(long, value_enum, default_value = "bariance")]
    method: CovMethod,
    /// One-column CSV of integer multiplicities, one per input row
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Output CSV (stdout if omitted)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    #[arg(long = "n", value_delimiter = ',', default_values_t = [100usize, 1000, 4000])]
    n_values: Vec<usize>,
    #[arg(long = "p", value_delimiter = ',', default_values_t = [10usize, 50])]
    p_values: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    draws: usize,
    #[arg(long, env = "GRAMCOV_SEED", default_value_t = 42)]
    seed: u64,
    /// Also write the table as CSV
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct BenchArgs {
    #[arg(long = "n", value_delimiter = ',', default_values_t = [1000usize])]
    n_values: Vec<usize>,
    #[arg(long = "p", value_delimiter = ',', default_values_t = [10usize])]
    p_values: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    warmup: usize,
    #[arg(long, default_value_t = 1000)]
    boot: usize,
    #[arg(long, env = "GRAMCOV_SEED", default_value_t = 42)]
    seed: u64,
    /// Comma-separated subset of bariance, centered, external-baseline
    #[arg(long, value_delimiter = ',', default_value = "bariance,centered")]
    methods: Vec<String>,
    /// Results CSV path
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShiftMode {
    None,
    FirstRow,
}

#[derive(Debug, clap::Args)]
struct StreamArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value = "none", conflicts_with = "resume")]
    shift: ShiftMode,
    /// Print the covariance after every k-th observation
    #[arg(long)]
    emit_every: Option<usize>,
    /// Continue from a saved accumulator snapshot
    #[arg(long)]
    resume: Option<PathBuf>,
    /// Save the final accumulator as a matrix snapshot
    #[arg(long)]
    save_state: Option<PathBuf>,
    /// Write the final covariance here instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct PlotArgs {
    /// Results CSV from `bench`, or verification CSV from `verify --out` for `--kind error`
    input: PathBuf,
    /// runtime-vs-n, runtime-vs-p, ratio or error
    #[arg(long)]
    kind: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct ConvertArgs {
    input: PathBuf,
    /// Destination; `.bin`/`.gcov` is written as binary, anything else as CSV
    output: PathBuf,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let sink: &mut dyn Write = if informational { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return if informational { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let result = match cli.command {
        Command::Cov(a) => cmd_cov(&a, stdout),
        Command::Verify(a) => cmd_verify(&a, stdout),
        Command::Bench(a) => cmd_bench(&a, stdout),
        Command::Stream(a) => cmd_stream(&a, stdout),
        Command::Plotdata(a) => cmd_plotdata(&a, stdout),
        Command::Convert(a) => cmd_convert(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if e.is_domain_violation() {
                EXIT_DOMAIN
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn with_output(
    path: Option<&Path>,
    stdout: &mut dyn Write,
    f: impl FnOnce(&mut dyn Write) -> Result<()>,
) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => f(stdout),
    }
}

fn cmd_cov(a: &CovArgs, stdout: &mut dyn Write) -> Result<i32> {
    let x = fileio::read_matrix(&a.input)?;
    let cov = match (&a.weights, a.method) {
        (Some(w), CovMethod::Bariance) => weighted::cov_weighted(&x, &fileio::read_weights(w)?)?,
        (Some(w), method) => {
            let expanded = fileio::read_weights(w)?.expand(&x)?;
            unweighted(&expanded, method)?
        }
        (None, method) => unweighted(&x, method)?,
    };
    with_output(a.output.as_deref(), stdout, |w| {
        fileio::write_cov_csv(w, &cov)
    })?;
    Ok(EXIT_OK)
}

fn unweighted(x: &crate::matrix::DenseMatrix, method: CovMethod) -> Result<CovMatrix> {
    match method {
        CovMethod::Bariance => estimators::cov_bariance(x),
        CovMethod::Centered => estimators::cov_centered(x),
        CovMethod::Bruteforce => estimators::cov_pairwise_bruteforce(x),
    }
}

fn cmd_verify(a: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32> {
    let reports = bench::equivalence_sweep(&a.n_values, &a.p_values, a.draws, a.seed)?;
    writeln!(
        stdout,
        "{:>8} {:>6} {:>6} {:>14}  status",
        "n", "p", "draws", "max delta"
    )?;
    let mut all_ok = true;
    for r in &reports {
        let ok = r.delta_max < EQUIVALENCE_BOUND;
        all_ok &= ok;
        writeln!(
            stdout,
            "{:>8} {:>6} {:>6} {:>14.3e}  {}",
            r.n,
            r.p,
            a.draws,
            r.delta_max,
            if ok { "ok" } else { "FAIL" }
        )?;
    }
    if let Some(path) = &a.out {
        let mut w = BufWriter::new(File::create(path)?);
        fileio::write_verify(&mut w, &reports, a.draws, a.seed)?;
        w.flush()?;
    }
    if all_ok {
        writeln!(stdout, "all max deltas below {EQUIVALENCE_BOUND:e}")?;
        Ok(EXIT_OK)
    } else {
        writeln!(stdout, "equivalence bound {EQUIVALENCE_BOUND:e} exceeded")?;
        Ok(EXIT_VERIFY_FAILED)
    }
}

fn cmd_bench(a: &BenchArgs, stdout: &mut dyn Write) -> Result<i32> {
    let methods = a
        .methods
        .iter()
        .map(|m| m.parse::<Method>())
        .collect::<Result<Vec<_>>>()?;
    let cfg = BenchConfig {
        n_values: a.n_values.clone(),
        p_values: a.p_values.clone(),
        repetitions: a.reps,
        warmup_calls: a.warmup,
        bootstrap_reps: a.boot,
        seed: a.seed,
        methods,
    };
    // config problems are usage errors here, not domain violations
    cfg.validate()?;
    let report = bench::run_benchmark(&cfg)?;
    write!(stdout, "{report}")?;
    if let Some(path) = &a.out {
        let mut w = BufWriter::new(File::create(path)?);
        fileio::write_results(&mut w, &report.summaries)?;
        w.flush()?;
    }
    Ok(EXIT_OK)
}

fn cmd_stream(a: &StreamArgs, stdout: &mut dyn Write) -> Result<i32> {
    let x = fileio::read_matrix(&a.input)?;
    if a.emit_every == Some(0) {
        return Err(Error::InvalidConfig(
            "--emit-every must be at least 1".into(),
        ));
    }
    let mut state = match &a.resume {
        Some(path) => StreamState::from_snapshot(&fileio::read_matrix(path)?)?,
        None => {
            let shift = match a.shift {
                ShiftMode::None => None,
                ShiftMode::FirstRow if x.rows() > 0 => Some(x.row(0).to_vec()),
                ShiftMode::FirstRow => None,
            };
            StreamState::with_shift(x.cols().max(1), shift)?
        }
    };
    let mut last_emitted = None;
    for row in x.row_iter() {
        state.update(row)?;
        let t = state.count();
        if let Some(k) = a.emit_every {
            if t >= 2 && t % k as u64 == 0 {
                writeln!(stdout, "# t={t}")?;
                fileio::write_cov_csv(&mut *stdout, &state.covariance()?)?;
                last_emitted = Some(t);
            }
        }
    }
    let final_cov = state.covariance()?;
    if let Some(path) = &a.output {
        let mut w = BufWriter::new(File::create(path)?);
        fileio::write_cov_csv(&mut w, &final_cov)?;
        w.flush()?;
    } else if last_emitted != Some(state.count()) {
        if a.emit_every.is_some() {
            writeln!(stdout, "# t={}", state.count())?;
        }
        fileio::write_cov_csv(&mut *stdout, &final_cov)?;
    }
    if let Some(path) = &a.save_state {
        fileio::write_matrix(path, &state.to_snapshot(), MatrixFormat::from_path(path))?;
    }
    Ok(EXIT_OK)
}

fn cmd_plotdata(a: &PlotArgs, stdout: &mut dyn Write) -> Result<i32> {
    let kind: PlotKind = a.kind.parse()?;
    let bytes = std::fs::read(&a.input)?;
    let points = match kind {
        PlotKind::Error => plot::from_verify(&fileio::parse_verify(&bytes)?)?,
        _ => plot::from_results(&fileio::parse_results(&bytes)?, kind)?,
    };
    with_output(a.output.as_deref(), stdout, |w| {
        plot::write_plot(w, &points)
    })?;
    Ok(EXIT_OK)
}

fn cmd_convert(a: &ConvertArgs) -> Result<i32> {
    let x = fileio::read_matrix(&a.input)?;
    fileio::write_matrix(&a.output, &x, MatrixFormat::from_path(&a.output))?;
    Ok(EXIT_OK)
}
