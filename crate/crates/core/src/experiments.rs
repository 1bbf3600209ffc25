//! Seeded Monte Carlo replications: simulate, fit, aggregate.
//!
//! Replication `i` draws from a ChaCha8 stream seeded with
//! [`stream_seed`]`(master_seed, i)`, so results do not depend on how
//! many replications run, in what order, or on how many threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, RinarError};
use crate::estimator::{fit, FitOptions, FitResult};
use crate::model::{simulate_with_rng, InnovationSpec, LagWindow, RinarParams, SimulateOptions};

const STREAM_KEY: u64 = 0x5249_4e41_5230_0001;

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-replication seed: `mix64(mix64(master ^ KEY) ^ rep)`.
pub fn stream_seed(master_seed: u64, rep_index: u64) -> u64 {
    mix64(mix64(master_seed ^ STREAM_KEY) ^ rep_index)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub theta0: RinarParams,
    pub innovation: InnovationSpec,
    pub n: usize,
    pub reps: usize,
    pub burn_in: usize,
    pub master_seed: u64,
    pub initial: Option<LagWindow>,
    pub fit_options: FitOptions,
}

impl McConfig {
    /// RINAR(4) with `theta0 = (3/25, 3/8, 1/5, -1/4, 5/2)`, `n = 500`,
    /// 500 replications, Poisson-difference noise of rate 1.
    pub fn reference_rinar4() -> Self {
        McConfig {
            theta0: RinarParams::new(vec![0.12, 0.375, 0.2, -0.25], 2.5)
                .expect("valid reference parameters"),
            innovation: InnovationSpec::PoissonDifference { rate: 1.0 },
            n: 500,
            reps: 500,
            burn_in: crate::model::DEFAULT_BURN_IN,
            master_seed: 0,
            initial: None,
            fit_options: FitOptions::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(invalid("reps must be at least 1"));
        }
        if self.n <= self.theta0.order() + 1 {
            return Err(invalid(format!(
                "n = {} must exceed p + 1 = {}",
                self.n,
                self.theta0.order() + 1
            )));
        }
        self.fit_options.validate()
    }

    fn simulate_options(&self, rep_index: usize) -> SimulateOptions {
        SimulateOptions {
            n: self.n,
            burn_in: self.burn_in,
            seed: stream_seed(self.master_seed, rep_index as u64),
            initial: self.initial.clone(),
            allow_nonstationary: false,
        }
    }
}

/// How replications are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    Serial,
    Threads(usize),
    #[default]
    Max,
}

/// One simulate-and-fit cycle.
pub fn run_replication_detailed(config: &McConfig, rep_index: usize) -> Result<FitResult> {
    if rep_index >= config.reps {
        return Err(invalid(format!(
            "rep_index {rep_index} out of range for {} replications",
            config.reps
        )));
    }
    let opts = config.simulate_options(rep_index);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let series = simulate_with_rng(&config.theta0, &config.innovation, &opts, &mut rng)?;
    fit(&series, config.theta0.order(), &config.fit_options)
}

pub fn run_replication(config: &McConfig, rep_index: usize) -> Result<RinarParams> {
    run_replication_detailed(config, rep_index).map(|r| r.theta_hat)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParameterSummary {
    pub name: String,
    pub truth: f64,
    pub mean: f64,
    /// Sample standard deviation (divisor `reps - 1`); absent for one replication.
    pub sd: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationEstimate {
    pub rep: usize,
    /// `(alpha_1, ..., alpha_p, lambda)`.
    pub values: Vec<f64>,
    pub objective: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McSummary {
    pub per_parameter: Vec<ParameterSummary>,
    pub reps_completed: usize,
    pub failures: usize,
    pub non_converged: usize,
    /// Successful replications in index order.
    pub estimates: Vec<ReplicationEstimate>,
    /// `(rep, error)` for failed replications.
    pub failed: Vec<(usize, String)>,
}

impl McSummary {
    /// Rows of `(alpha_1, ..., alpha_p, lambda)`, one per successful replication.
    pub fn estimates_matrix(&self) -> Vec<Vec<f64>> {
        self.estimates.iter().map(|e| e.values.clone()).collect()
    }
}

pub fn parameter_names(p: usize) -> Vec<String> {
    (1..=p)
        .map(|j| format!("alpha_{j}"))
        .chain(std::iter::once("lambda".to_string()))
        .collect()
}

fn run_all(config: &McConfig, parallelism: Parallelism) -> Result<Vec<Result<FitResult>>> {
    let one = |i: usize| run_replication_detailed(config, i);
    match parallelism {
        Parallelism::Serial => Ok((0..config.reps).map(one).collect()),
        Parallelism::Max => Ok((0..config.reps).into_par_iter().map(one).collect()),
        Parallelism::Threads(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| invalid(format!("thread pool: {e}")))?;
            Ok(pool.install(|| (0..config.reps).into_par_iter().map(one).collect()))
        }
    }
}

pub fn monte_carlo(config: &McConfig, parallelism: Parallelism) -> Result<McSummary> {
    config.validate()?;
    let outcomes = run_all(config, parallelism)?;
    let mut estimates = Vec::new();
    let mut failed = Vec::new();
    for (rep, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(r) => estimates.push(ReplicationEstimate {
                rep,
                values: r.theta_hat.to_vec(),
                objective: r.objective,
                converged: r.converged,
            }),
            Err(e) => failed.push((rep, e.to_string())),
        }
    }
    if estimates.is_empty() {
        return Err(RinarError::AllReplicationsFailed {
            reps: config.reps,
            first: failed.first().map(|f| f.1.clone()).unwrap_or_default(),
        });
    }
    let truth = config.theta0.to_vec();
    let m = estimates.len();
    let per_parameter = parameter_names(config.theta0.order())
        .into_iter()
        .enumerate()
        .map(|(k, name)| {
            // Shifted by the first value so identical replications give sd = 0 exactly.
            let shift = estimates[0].values[k];
            let dev: Vec<f64> = estimates.iter().map(|e| e.values[k] - shift).collect();
            let dev_mean = dev.iter().sum::<f64>() / m as f64;
            let mean = shift + dev_mean;
            let sd = (m > 1).then(|| {
                let ss: f64 = dev.iter().map(|d| (d - dev_mean).powi(2)).sum();
                (ss / (m - 1) as f64).sqrt()
            });
            ParameterSummary {
                name,
                truth: truth[k],
                mean,
                sd,
            }
        })
        .collect();
    Ok(McSummary {
        per_parameter,
        reps_completed: m,
        failures: failed.len(),
        non_converged: estimates.iter().filter(|e| !e.converged).count(),
        estimates,
        failed,
    })
}
