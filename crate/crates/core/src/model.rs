//! The RINAR(p) process `X_t = <sum_j alpha_j X_{t-j} + lambda> + eps_t`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, RinarError};
use crate::rounding::nearest;
use crate::stats::CountSeries;

/// Poisson rate used when none is given.
pub const DEFAULT_RATE: f64 = 1.0;
/// Burn-in steps discarded by default before recording output.
pub const DEFAULT_BURN_IN: usize = 500;

/// Largest rate drawn in a single inversion pass; larger rates are split.
const MAX_INVERSION_RATE: f64 = 10.0;
/// Magnitude past which a trajectory is considered divergent.
const DIVERGENCE_LIMIT: f64 = 9.0e15;

/// `theta = (alpha_1, ..., alpha_p, lambda)`; the order is `alphas.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RinarParams {
    alphas: Vec<f64>,
    lambda: f64,
}

impl RinarParams {
    pub fn new(alphas: Vec<f64>, lambda: f64) -> Result<Self> {
        if alphas.is_empty() {
            return Err(invalid("order p must be at least 1"));
        }
        if let Some(a) = alphas.iter().find(|a| !a.is_finite()) {
            return Err(invalid(format!("non-finite coefficient {a}")));
        }
        if !lambda.is_finite() {
            return Err(invalid(format!("non-finite intercept {lambda}")));
        }
        Ok(RinarParams { alphas, lambda })
    }

    pub fn order(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub(crate) fn set_alpha(&mut self, j: usize, value: f64) {
        self.alphas[j] = value;
    }

    pub(crate) fn set_lambda(&mut self, value: f64) {
        self.lambda = value;
    }

    /// `sum_j |alpha_j|`.
    pub fn abs_sum(&self) -> f64 {
        self.alphas.iter().map(|a| a.abs()).sum()
    }

    pub fn is_stationary(&self) -> bool {
        check_stationarity(self)
    }

    /// `(alpha_1, ..., alpha_p, lambda)` as one vector.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = self.alphas.clone();
        v.push(self.lambda);
        v
    }

    /// Affine part `sum_j alpha_j x_{t-j} + lambda` at position `t` of a
    /// chronological history, using `history[t-1], ..., history[t-p]`.
    ///
    /// Every caller (simulation, contrast, forecasting) goes through this so
    /// the summation order, and hence the rounding, is identical everywhere.
    #[inline]
    pub(crate) fn affine_at(&self, history: &[i64], t: usize) -> f64 {
        let mut acc = 0.0;
        for (j, a) in self.alphas.iter().enumerate() {
            acc += a * history[t - 1 - j] as f64;
        }
        acc + self.lambda
    }
}

/// Distribution of the centered integer noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InnovationSpec {
    /// `Z1 - Z2` with `Z1, Z2` i.i.d. Poisson(rate).
    PoissonDifference { rate: f64 },
    /// `eps_t = 0`.
    DegenerateZero,
}

impl InnovationSpec {
    pub fn poisson_difference(rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(invalid(format!("Poisson rate must be positive, got {rate}")));
        }
        Ok(InnovationSpec::PoissonDifference { rate })
    }

    pub fn variance(&self) -> f64 {
        match *self {
            InnovationSpec::PoissonDifference { rate } => 2.0 * rate,
            InnovationSpec::DegenerateZero => 0.0,
        }
    }
}

impl Default for InnovationSpec {
    fn default() -> Self {
        InnovationSpec::PoissonDifference { rate: DEFAULT_RATE }
    }
}

/// The last `p` values, most recent first: `(X_t, X_{t-1}, ..., X_{t-p+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LagWindow(Vec<i64>);

impl LagWindow {
    pub fn new(most_recent_first: Vec<i64>) -> Self {
        LagWindow(most_recent_first)
    }

    pub fn zeros(p: usize) -> Self {
        LagWindow(vec![0; p])
    }

    /// Window ending at the last element of a chronological slice.
    pub fn from_chronological(values: &[i64], p: usize) -> Result<Self> {
        if values.len() < p {
            return Err(RinarError::InsufficientData {
                needed: p,
                got: values.len(),
            });
        }
        Ok(LagWindow(values.iter().rev().take(p).copied().collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    fn chronological(&self) -> Vec<i64> {
        self.0.iter().rev().copied().collect()
    }
}

/// `f(x; theta) = <sum_j alpha_j x_j + lambda>`.
pub fn regression_value(params: &RinarParams, window: &LagWindow) -> Result<i64> {
    let p = params.order();
    if window.len() != p {
        return Err(invalid(format!(
            "window has {} values but the model order is {p}",
            window.len()
        )));
    }
    let history = window.chronological();
    Ok(nearest(params.affine_at(&history, p)))
}

/// `sum_j |alpha_j| < 1`.
pub fn check_stationarity(params: &RinarParams) -> bool {
    params.abs_sum() < 1.0
}

/// Poisson draw by sequential-search inversion.
fn poisson_inversion<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> i64 {
    let u: f64 = rng.random();
    let mut k = 0i64;
    let mut prob = (-rate).exp();
    let mut cdf = prob;
    while u > cdf {
        k += 1;
        prob *= rate / k as f64;
        let next = cdf + prob;
        if next == cdf {
            // Remaining tail mass is below double precision.
            break;
        }
        cdf = next;
    }
    k
}

/// Poisson(rate); rates above 10 are drawn as a sum of smaller pieces.
pub fn sample_poisson<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> i64 {
    let pieces = (rate / MAX_INVERSION_RATE).ceil().max(1.0) as usize;
    let piece = rate / pieces as f64;
    (0..pieces).map(|_| poisson_inversion(piece, rng)).sum()
}

pub fn sample_innovation<R: Rng + ?Sized>(spec: &InnovationSpec, rng: &mut R) -> i64 {
    match *spec {
        InnovationSpec::PoissonDifference { rate } => {
            let z1 = sample_poisson(rate, rng);
            let z2 = sample_poisson(rate, rng);
            z1 - z2
        }
        InnovationSpec::DegenerateZero => 0,
    }
}

/// Options for [`simulate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateOptions {
    pub n: usize,
    pub burn_in: usize,
    pub seed: u64,
    /// Starting window, most recent first. Defaults to zeros.
    pub initial: Option<LagWindow>,
    /// Simulate even when `sum |alpha_j| >= 1`.
    pub allow_nonstationary: bool,
}

impl SimulateOptions {
    pub fn new(n: usize, seed: u64) -> Self {
        SimulateOptions {
            n,
            burn_in: DEFAULT_BURN_IN,
            seed,
            initial: None,
            allow_nonstationary: false,
        }
    }

    pub fn burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn initial(mut self, window: LagWindow) -> Self {
        self.initial = Some(window);
        self
    }

    pub fn allow_nonstationary(mut self, allow: bool) -> Self {
        self.allow_nonstationary = allow;
        self
    }
}

/// Simulates `burn_in + n` steps from a stream seeded with `options.seed`
/// and returns the last `n` values.
pub fn simulate(
    params: &RinarParams,
    innovation: &InnovationSpec,
    options: &SimulateOptions,
) -> Result<CountSeries> {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    simulate_with_rng(params, innovation, options, &mut rng)
}

/// As [`simulate`], drawing from a caller-owned stream (`options.seed` is ignored).
pub fn simulate_with_rng<R: Rng + ?Sized>(
    params: &RinarParams,
    innovation: &InnovationSpec,
    options: &SimulateOptions,
    rng: &mut R,
) -> Result<CountSeries> {
    if options.n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    if !options.allow_nonstationary && !check_stationarity(params) {
        return Err(RinarError::NonStationary {
            abs_sum: params.abs_sum(),
        });
    }
    let p = params.order();
    let start = match &options.initial {
        Some(w) if w.len() != p => {
            return Err(invalid(format!(
                "initial window has {} values but the model order is {p}",
                w.len()
            )))
        }
        Some(w) => w.chronological(),
        None => vec![0; p],
    };
    let steps = options.burn_in + options.n;
    let mut history = Vec::with_capacity(p + steps);
    history.extend_from_slice(&start);
    for t in p..p + steps {
        let w = params.affine_at(&history, t);
        if !w.is_finite() || w.abs() >= DIVERGENCE_LIMIT {
            return Err(invalid(format!("trajectory diverged at step {}", t - p + 1)));
        }
        history.push(nearest(w) + sample_innovation(innovation, rng));
    }
    CountSeries::new(history.split_off(p + options.burn_in))
}
