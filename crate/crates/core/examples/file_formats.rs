//! Reading and writing matrices, results and plotting tables.

use gramcov::bench::{run_benchmark, BenchConfig};
use gramcov::io::{self, MatrixFormat};
use gramcov::plot::{self, PlotKind};
use gramcov::{estimators, DenseMatrix};

fn main() -> gramcov::Result<()> {
    let dir = std::env::temp_dir().join("gramcov-file-formats");
    std::fs::create_dir_all(&dir)?;

    let x = io::parse_csv_matrix(b"height,weight\n# a comment\n170,65\n182,80\n165,58\n")?;
    println!(
        "parsed {} x {} matrix with a header row",
        x.rows(),
        x.cols()
    );

    let bin = dir.join("x.bin");
    io::write_matrix(&bin, &x, MatrixFormat::Binary)?;
    let back: DenseMatrix = io::read_matrix(&bin)?;
    println!("binary round trip exact: {}", back == x);

    let mut out = Vec::new();
    io::write_cov_csv(&mut out, &estimators::cov_bariance(&x)?)?;
    print!("covariance CSV:\n{}", String::from_utf8_lossy(&out));

    let cfg = BenchConfig {
        n_values: vec![100, 400],
        p_values: vec![5],
        repetitions: 5,
        bootstrap_reps: 200,
        ..Default::default()
    };
    let mut results = Vec::new();
    io::write_results(&mut results, &run_benchmark(&cfg)?.summaries)?;
    let rows = io::parse_results(&results)?;
    println!(
        "\nresults file has {} rows; header:\n{}",
        rows.len(),
        io::RESULTS_HEADER
    );

    let mut table = Vec::new();
    plot::write_plot(&mut table, &plot::from_results(&rows, PlotKind::Ratio)?)?;
    print!("\nratio plot table:\n{}", String::from_utf8_lossy(&table));
    Ok(())
}
