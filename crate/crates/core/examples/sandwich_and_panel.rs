//! Score covariance for a robust variance estimate, and per-unit within
//! covariances for a long-format panel.

use gramcov::applications::{group_panel, panel_within_cov_all, sandwich_score_cov};
use gramcov::DenseMatrix;

fn main() -> gramcov::Result<()> {
    // least-squares scores x_i * residual_i for y = 1 + 2x + noise
    let xs = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0];
    let resid = [0.3, -0.5, 0.1, 0.8, -0.9, 0.2, -0.4, 0.4];
    let scores: Vec<[f64; 2]> = xs.iter().zip(&resid).map(|(x, e)| [*e, x * e]).collect();
    let meat = sandwich_score_cov(&DenseMatrix::from_rows(&scores)?)?;
    println!("score covariance:");
    for k in 0..2 {
        println!("  {:>9.5} {:>9.5}", meat.get(k, 0), meat.get(k, 1));
    }

    let ids = [
        "firm-a", "firm-b", "firm-a", "firm-b", "firm-a", "firm-b", "firm-a",
    ];
    let panel = DenseMatrix::from_rows(&[
        [10.0, 1.0],
        [50.0, 3.0],
        [12.0, 1.5],
        [49.0, 2.0],
        [15.0, 2.5],
        [53.0, 4.5],
        [14.0, 2.0],
    ])?;
    let blocks = group_panel(&ids, &panel)?;
    println!("\nwithin covariances:");
    for (unit, c) in panel_within_cov_all(&blocks)? {
        println!(
            "  {unit}: var0={:.3} var1={:.3} cov={:.3}",
            c.get(0, 0),
            c.get(1, 1),
            c.get(0, 1)
        );
    }
    Ok(())
}
