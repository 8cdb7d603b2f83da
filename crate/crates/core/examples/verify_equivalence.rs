//! Sweep sizes and report the largest disagreement between the bariance and
//! centered estimators on standard normal data.

use gramcov::bench::equivalence_sweep;

fn main() -> gramcov::Result<()> {
    let reports = equivalence_sweep(&[100, 500, 1000], &[10, 50], 3, 42)?;
    println!("{:>6} {:>4} {:>12}", "n", "p", "max delta");
    for r in &reports {
        println!("{:>6} {:>4} {:>12.3e}", r.n, r.p, r.delta_max);
    }
    let worst = reports.iter().map(|r| r.delta_max).fold(0.0, f64::max);
    println!(
        "worst {worst:.3e} ({})",
        if worst < 1e-12 {
            "below 1e-12"
        } else {
            "above 1e-12"
        }
    );
    Ok(())
}
