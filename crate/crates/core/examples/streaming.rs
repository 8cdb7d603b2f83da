//! Online covariance: row updates, merging partial streams, shift anchors
//! and saving the accumulator.

use gramcov::bench::generate_data;
use gramcov::estimators::{cov_bariance, cov_centered, delta_max};
use gramcov::{DenseMatrix, StreamState};

fn main() -> gramcov::Result<()> {
    let x = generate_data(1000, 3, 11)?;

    let mut s = StreamState::new(3)?;
    for (t, row) in x.row_iter().enumerate() {
        s.update(row)?;
        if [2, 10, 100, 1000].contains(&(t + 1)) {
            let c = s.covariance()?;
            println!(
                "t={:<5} var = [{:.4}, {:.4}, {:.4}]",
                s.count(),
                c.get(0, 0),
                c.get(1, 1),
                c.get(2, 2)
            );
        }
    }
    let batch = cov_bariance(&x)?;
    println!(
        "stream vs batch: {:.1e}",
        delta_max(&s.covariance()?, &batch)?
    );

    let mut left = StreamState::new(3)?;
    let mut right = StreamState::new(3)?;
    left.extend(&x.slice_rows(0, 400))?;
    right.extend(&x.slice_rows(400, 1000))?;
    let merged = left.merge(&right)?;
    println!(
        "merged vs batch: {:.1e}",
        delta_max(&merged.covariance()?, &batch)?
    );

    // far from the origin the plain sums cancel; anchor on the first row
    let rows: Vec<Vec<f64>> = x
        .row_iter()
        .map(|r| r.iter().map(|v| v + 1e8).collect())
        .collect();
    let far = DenseMatrix::from_rows(&rows)?;
    let reference = cov_centered(&far)?;
    let mut plain = StreamState::new(3)?;
    plain.extend(&far)?;
    let mut anchored = StreamState::with_shift(3, Some(far.row(0).to_vec()))?;
    anchored.extend(&far)?;
    println!("\ndata offset by 1e8:");
    println!(
        "  no shift        {:.1e}",
        delta_max(&plain.covariance()?, &reference)?
    );
    println!(
        "  first-row shift {:.1e}",
        delta_max(&anchored.covariance()?, &reference)?
    );

    let snapshot = anchored.to_snapshot();
    let restored = StreamState::from_snapshot(&snapshot)?;
    println!(
        "\nsnapshot is a {} x {} matrix, restores t={}",
        snapshot.rows(),
        snapshot.cols(),
        restored.count()
    );
    Ok(())
}
