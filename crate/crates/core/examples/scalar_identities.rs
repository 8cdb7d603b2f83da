//! Variance and covariance of single vectors from their running sums.

use gramcov::estimators::{
    bariance_scalar, bariance_scalar_bruteforce, pairwise_cov_bruteforce, pairwise_cov_scalar,
    ScalarSums,
};

fn main() -> gramcov::Result<()> {
    let x = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
    let y = [1.0, 3.0, 2.0, 5.0, 4.0, 6.0, 8.0, 9.0];

    let sums = ScalarSums::from_pair(&x, &y)?;
    println!(
        "n={} Sx={} Sy={} Sxx={} Sxy={}",
        sums.n, sums.sx, sums.sy, sums.sxx, sums.sxy
    );
    println!("variance from sums    {}", bariance_scalar(&x)?);
    println!("variance from pairs   {}", bariance_scalar_bruteforce(&x)?);
    println!("covariance from sums  {}", pairwise_cov_scalar(&x, &y)?);
    println!("covariance from pairs {}", pairwise_cov_bruteforce(&x, &y)?);

    let shifted: Vec<f64> = x.iter().map(|v| v + 1000.0).collect();
    let doubled: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
    println!("\nshifted by 1000       {}", bariance_scalar(&shifted)?);
    println!(
        "scaled by 2           {} (= 4 x {})",
        bariance_scalar(&doubled)?,
        bariance_scalar(&x)?
    );

    match bariance_scalar(&[3.0]) {
        Err(e) => println!("\none observation: {e}"),
        Ok(v) => println!("\nunexpected value {v}"),
    }
    Ok(())
}
