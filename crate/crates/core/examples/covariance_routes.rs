//! Four ways to the same covariance matrix and how far apart they land.

use gramcov::bench::generate_data;
use gramcov::estimators::{compare, Estimator};

fn main() -> gramcov::Result<()> {
    let x = generate_data(200, 4, 7)?;
    let cov = Estimator::Bariance.compute(&x)?;
    println!("bariance covariance of a 200 x 4 standard normal sample:");
    for k in 0..cov.dim() {
        let row: Vec<String> = cov.row(k).iter().map(|v| format!("{v:>9.5}")).collect();
        println!("  {}", row.join(" "));
    }

    println!("\nmax entrywise difference from bariance:");
    for other in [
        Estimator::Centered,
        Estimator::PairwiseBruteforce,
        Estimator::CenteringMatrix,
    ] {
        let r = compare(&x, Estimator::Bariance, other)?;
        println!("  {:<20} {:.3e}", other.as_str(), r.delta_max);
    }
    Ok(())
}
