//! Logistic regression for rare-events data.
//!
//! The crate fits the full-data maximum likelihood estimator and four
//! estimators built on randomized sub- or over-samples of the data:
//!
//! * control under-sampling with inverse-probability weights ([`estimators::under_weighted`]),
//! * control under-sampling without weights plus an intercept shift of `log(pi0)`
//!   ([`estimators::under_bias_corrected`]),
//! * case over-sampling with weights ([`estimators::over_weighted`]),
//! * case over-sampling without weights plus an intercept shift of `−log(1 + lambda)`
//!   ([`estimators::over_bias_corrected`]).
//!
//! [`asymptotics`] evaluates the asymptotic covariance of `√n1·(θ̂ − θ_t)` for each
//! estimator, and [`simulation`] runs seeded, reproducible Monte Carlo studies.
//! The `rarelogit` binary exposes the same functionality on the command line
//! (see [`cli`]).
//!
//! ```
//! use rarelogit::{estimators, model::SolverSettings, rng, simulation};
//! use rarelogit::model::Coefficients;
//!
//! let theta_t = Coefficients::new(-3.0, vec![1.0]);
//! let law = simulation::CovariateLaw::standard_normal(1);
//! let data = simulation::generate_marginal(5_000, &theta_t, &law, &mut rng::stream(1, &[])).unwrap();
//! let fit = estimators::full_mle(&data, &SolverSettings::default()).unwrap();
//! assert!(fit.converged);
//! ```

pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod estimators;
pub mod model;
pub mod rng;
pub mod sampling;
pub mod simulation;

pub use error::{Error, Result};
pub use estimators::{EstimatorFamily, EstimatorKind};
pub use model::{Coefficients, Covariates, Dataset, FitResult, SolverSettings};
pub use sampling::{SampleDesign, SamplingScheme};
