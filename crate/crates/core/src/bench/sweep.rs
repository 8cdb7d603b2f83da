use crate::error::{Error, Result};
use crate::estimators::{self, EquivalenceReport, Estimator};
use crate::rng;

use super::generate_data;

/// For every `(n, p)` on the grid, draws `draws_per_size` standard-normal
/// matrices and records the largest `Δ_max` between the bariance and
/// centered estimators. Draw `d` at `(n, p)` uses the seed
/// `derive_seed(seed, [n, p, d])`.
pub fn equivalence_sweep(
    n_values: &[usize],
    p_values: &[usize],
    draws_per_size: usize,
    seed: u64,
) -> Result<Vec<EquivalenceReport>> {
    if let Some(&n) = n_values.iter().find(|&&n| n < 2) {
        return Err(Error::TooFewObservations { got: n as u64 });
    }
    if p_values.contains(&0) {
        return Err(Error::ZeroDimension("p"));
    }
    if draws_per_size == 0 {
        return Err(Error::ZeroDimension("draws per size"));
    }
    let mut out = Vec::with_capacity(n_values.len() * p_values.len());
    for &n in n_values {
        for &p in p_values {
            let mut worst = 0.0f64;
            for d in 0..draws_per_size {
                let x = generate_data(
                    n,
                    p,
                    rng::derive_seed(seed, &[n as u64, p as u64, d as u64]),
                )?;
                let delta = estimators::delta_max(
                    &estimators::cov_bariance(&x)?,
                    &estimators::cov_centered(&x)?,
                )?;
                worst = worst.max(delta);
            }
            out.push(EquivalenceReport {
                n,
                p,
                delta_max: worst,
                method_a: Estimator::Bariance,
                method_b: Estimator::Centered,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_is_deterministic_and_tight() {
        let a = equivalence_sweep(&[10, 200], &[1, 4], 3, 99).unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(a, equivalence_sweep(&[10, 200], &[1, 4], 3, 99).unwrap());
        assert!(a.iter().all(|r| r.delta_max < 1e-12));
        assert_eq!((a[3].n, a[3].p), (200, 4));
    }

    #[test]
    fn sweep_rejects_bad_grid() {
        assert!(equivalence_sweep(&[1, 10], &[2], 1, 0).is_err());
        assert!(equivalence_sweep(&[10], &[0], 1, 0).is_err());
        assert!(equivalence_sweep(&[10], &[2], 0, 0).is_err());
    }
}
