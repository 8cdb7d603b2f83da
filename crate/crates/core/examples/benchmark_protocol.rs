//! Timing protocol with an extra caller-supplied routine. Run in release mode.

use gramcov::bench::{run_benchmark_with, stats, BenchConfig, Method};
use gramcov::estimators::CovMatrix;
use gramcov::{DenseMatrix, SymmetricMatrix};

/// Two passes per entry: column means, then centered products.
fn two_pass(x: &DenseMatrix) -> gramcov::Result<CovMatrix> {
    let (n, p) = (x.rows(), x.cols());
    let means: Vec<f64> = (0..p)
        .map(|k| x.column(k).iter().sum::<f64>() / n as f64)
        .collect();
    let cov = SymmetricMatrix::from_upper_fn(p, |k, l| {
        let s: f64 = x
            .row_iter()
            .map(|r| (r[k] - means[k]) * (r[l] - means[l]))
            .sum();
        s / (n - 1) as f64
    });
    Ok(cov.into())
}

fn main() -> gramcov::Result<()> {
    let (kept, removed) = stats::iqr_trim(&[10.0, 11.0, 12.0, 13.0, 100.0])?;
    println!("trimming [10, 11, 12, 13, 100]: kept {kept:?}, removed {removed:?}\n");

    let cfg = BenchConfig {
        n_values: vec![200, 2000],
        p_values: vec![8, 32],
        repetitions: 30,
        methods: vec![Method::Bariance, Method::Centered, Method::ExternalBaseline],
        ..Default::default()
    };
    let report = run_benchmark_with(&cfg, Some(&two_pass))?;
    print!("{report}");
    Ok(())
}
