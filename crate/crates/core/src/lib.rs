//! Rounded integer-valued autoregression, RINAR(p):
//!
//! ```text
//! X_t = < alpha_1 X_{t-1} + ... + alpha_p X_{t-p} + lambda > + eps_t
//! ```
//!
//! where `<.>` rounds to the nearest integer (ties away from zero) and
//! `eps_t` is centered integer noise. The crate covers simulation,
//! least-squares fitting by coordinate-wise dichotomous search, exact
//! identifiability of the intercept for rational coefficients, one-step
//! forecasting and seeded Monte Carlo studies. The runnable programs in
//! `examples/` walk through each of these.

pub mod cli;
pub mod error;
pub mod estimator;
pub mod experiments;
pub mod forecast;
pub mod fraction;
pub mod identifiability;
pub mod io;
pub mod model;
pub mod rounding;
pub mod stats;

pub use error::{Result, RinarError};
pub use estimator::{contrast, dichotomous_scalar_search, fit, FitOptions, FitResult};
pub use experiments::{monte_carlo, run_replication, McConfig, McSummary, Parallelism};
pub use forecast::{mae, one_step, rolling_forecast, ForecastReport};
pub use fraction::Fraction;
pub use identifiability::{
    classify_case, compute_i0, compute_nu0, identify, IdentifiabilityReport, RationalParams,
};
pub use model::{
    check_stationarity, regression_value, sample_innovation, simulate, InnovationSpec, LagWindow,
    RinarParams, SimulateOptions,
};
pub use stats::{sample_acf, sample_mean, sample_pacf, yule_walker, CountSeries};
