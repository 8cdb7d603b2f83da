//! Covariance matrices from one Gram product and a rank-one correction.
//!
//! The unbiased covariance of the columns of an `n × p` matrix `X` is
//!
//! ```text
//! Σ = (n·XᵀX − s·sᵀ) / (n(n−1)),    s = Xᵀ1
//! ```
//!
//! which is algebraically the mean of all pairwise outer differences and the
//! textbook center-then-multiply estimator, but never materializes a centered
//! copy of the data. This crate provides that estimator alongside the routes
//! it is checked against, streaming/weighted/panel/sandwich variants built on
//! the same identity, and a timing harness.
//!
//! ## Modules
//!
//! - [`matrix`]: dense storage, column sums, Gram product, outer product.
//! - [`estimators`]: scalar and matrix estimators, reference routes, `Δ_max`.
//! - [`streaming`]: O(p²) online accumulator with merge and snapshots.
//! - [`weighted`]: bootstrap resamples as integer multiplicities.
//! - [`applications`]: score (sandwich) covariance and panel within covariance.
//! - [`bench`]: seeded data, warm-up/trim/bootstrap timing, equivalence sweeps.
//! - [`io`] and [`plot`]: matrix, results and plotting file formats.
//! - [`cli`]: the `gramcov` command line.
//!
//! ## Examples
//!
//! Each capability has a runnable example:
//!
//! ```bash
//! cargo run -p gramcov --example covariance_routes
//! cargo run -p gramcov --example scalar_identities
//! cargo run -p gramcov --example streaming
//! cargo run -p gramcov --example bootstrap_weights
//! cargo run -p gramcov --example sandwich_and_panel
//! cargo run -p gramcov --example verify_equivalence
//! cargo run --release -p gramcov --example benchmark_protocol
//! cargo run -p gramcov --example file_formats
//! ```
//!
//! ## Quick start
//!
//! ```
//! use gramcov::{estimators, DenseMatrix};
//!
//! let x = DenseMatrix::from_rows(&[[1.0, 3.0], [2.0, 2.0], [3.0, 1.0]]).unwrap();
//! let cov = estimators::cov_bariance(&x).unwrap();
//! assert_eq!(cov.as_slice(), &[1.0, -1.0, -1.0, 1.0]);
//! ```

pub mod applications;
pub mod bench;
pub mod cli;
pub mod error;
pub mod estimators;
pub mod io;
pub mod matrix;
pub mod plot;
pub mod rng;
pub mod streaming;
pub mod weighted;

pub use error::{Error, Result};
pub use estimators::{CovMatrix, EquivalenceReport, Estimator};
pub use matrix::{DenseMatrix, SymmetricMatrix};
pub use streaming::StreamState;
pub use weighted::WeightVector;
