//! Bootstrap covariances from multiplicity weights, without copying rows.

use gramcov::bench::generate_data;
use gramcov::estimators::{cov_bariance, delta_max};
use gramcov::weighted::{bootstrap_covariances, cov_weighted, replicate_weights};

fn main() -> gramcov::Result<()> {
    let x = generate_data(50, 2, 3)?;

    let w = replicate_weights(x.rows(), 99, 0)?;
    println!("first replicate weights: {:?}", &w.as_slice()[..12]);
    let direct = cov_weighted(&x, &w)?;
    let expanded = cov_bariance(&w.expand(&x)?)?;
    println!(
        "weighted vs expanded resample: {:.1e}",
        delta_max(&direct, &expanded)?
    );

    let reps = 2000;
    let mut corr: Vec<f64> = bootstrap_covariances(&x, reps, 99)
        .into_iter()
        .filter_map(|c| c.ok())
        .map(|c| c.get(0, 1) / (c.get(0, 0) * c.get(1, 1)).sqrt())
        .collect();
    corr.sort_by(f64::total_cmp);
    let full = cov_bariance(&x)?;
    println!(
        "\ncorrelation {:.3}, bootstrap 95% interval [{:.3}, {:.3}] from {} replicates",
        full.get(0, 1) / (full.get(0, 0) * full.get(1, 1)).sqrt(),
        corr[corr.len() * 25 / 1000],
        corr[corr.len() * 975 / 1000],
        corr.len()
    );
    Ok(())
}
