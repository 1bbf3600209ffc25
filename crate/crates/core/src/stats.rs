//! Sample statistics for integer series: mean, autocorrelation, partial
//! autocorrelation and the Yule-Walker solver.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, RinarError};

/// Smallest admissible Durbin-Levinson pivot.
pub const MIN_PIVOT: f64 = 1e-12;

/// An observed or simulated integer-valued series. Never empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct CountSeries(Vec<i64>);

impl CountSeries {
    pub fn new(values: Vec<i64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("series must contain at least one value"));
        }
        Ok(CountSeries(values))
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The first `n` observations as a new series.
    pub fn head(&self, n: usize) -> Result<CountSeries> {
        if n == 0 || n > self.len() {
            return Err(invalid(format!(
                "head({n}) out of range for a series of length {}",
                self.len()
            )));
        }
        Ok(CountSeries(self.0[..n].to_vec()))
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }
}

impl TryFrom<Vec<i64>> for CountSeries {
    type Error = RinarError;

    fn try_from(values: Vec<i64>) -> Result<Self> {
        CountSeries::new(values)
    }
}

impl From<CountSeries> for Vec<i64> {
    fn from(s: CountSeries) -> Self {
        s.0
    }
}

/// Sample autocorrelations `rho[0..=max_lag]`, with `rho[0] = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcfVector {
    pub rho: Vec<f64>,
}

impl AcfVector {
    pub fn max_lag(&self) -> usize {
        self.rho.len() - 1
    }

    pub fn at(&self, lag: usize) -> f64 {
        self.rho[lag]
    }
}

/// Yule-Walker autoregressive coefficients and intercept
/// `lambda0 = mean * (1 - sum(alphas))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YuleWalker {
    pub alphas: Vec<f64>,
    pub lambda0: f64,
}

pub fn sample_mean(series: &CountSeries) -> f64 {
    let v = series.values();
    v.iter().map(|&x| x as f64).sum::<f64>() / v.len() as f64
}

/// Biased sample variance (divisor `n`).
pub fn sample_variance(series: &CountSeries) -> f64 {
    let mean = sample_mean(series);
    let v = series.values();
    v.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / v.len() as f64
}

/// `rho(k) = sum_{t<n-k} (X_t - m)(X_{t+k} - m) / sum_t (X_t - m)^2`.
pub fn sample_acf(series: &CountSeries, max_lag: usize) -> Result<AcfVector> {
    let n = series.len();
    if max_lag == 0 || max_lag >= n {
        return Err(invalid(format!(
            "max_lag must be in 1..{n} for a series of length {n}, got {max_lag}"
        )));
    }
    let mean = sample_mean(series);
    let centered: Vec<f64> = series.values().iter().map(|&x| x as f64 - mean).collect();
    let denom: f64 = centered.iter().map(|c| c * c).sum();
    if denom <= 0.0 {
        return Err(RinarError::DegenerateVariance(
            "series is constant".to_string(),
        ));
    }
    let rho = (0..=max_lag)
        .map(|k| {
            let num: f64 = centered[..n - k]
                .iter()
                .zip(&centered[k..])
                .map(|(a, b)| a * b)
                .sum();
            num / denom
        })
        .collect();
    Ok(AcfVector { rho })
}

#[derive(Debug)]
struct Levinson {
    /// Coefficients of the order-`p` solution.
    coefs: Vec<f64>,
    /// `phi_kk` for `k = 1..=p`.
    partial: Vec<f64>,
}

/// Durbin-Levinson recursion on `rho[0..=p]`.
fn durbin_levinson(rho: &[f64], p: usize) -> Result<Levinson> {
    let mut coefs: Vec<f64> = Vec::with_capacity(p);
    let mut partial = Vec::with_capacity(p);
    let mut v = rho[0];
    for k in 1..=p {
        if v < MIN_PIVOT {
            return Err(RinarError::SingularSystem {
                matrix: "sample autocorrelation matrix R_p",
                step: k,
                pivot: v,
            });
        }
        let acc: f64 = (1..k).map(|j| coefs[j - 1] * rho[k - j]).sum();
        let phi = (rho[k] - acc) / v;
        let prev = coefs.clone();
        for j in 1..k {
            coefs[j - 1] = prev[j - 1] - phi * prev[k - j - 1];
        }
        coefs.push(phi);
        partial.push(phi);
        v *= 1.0 - phi * phi;
    }
    Ok(Levinson { coefs, partial })
}

/// Partial autocorrelations `phi_kk`, `k = 1..=max_lag`.
pub fn sample_pacf(series: &CountSeries, max_lag: usize) -> Result<Vec<f64>> {
    let acf = sample_acf(series, max_lag)?;
    match durbin_levinson(&acf.rho, max_lag) {
        Ok(sol) => Ok(sol.partial),
        Err(RinarError::SingularSystem { step, pivot, .. }) => Err(RinarError::DegenerateVariance(
            format!("Durbin-Levinson pivot {pivot:e} at lag {step}"),
        )),
        Err(e) => Err(e),
    }
}

/// Solves `R_p alpha = rho_p` with `R_p = [rho(i - j)]` and returns
/// `lambda0 = mean * (1 - sum(alpha))`.
pub fn yule_walker(series: &CountSeries, p: usize) -> Result<YuleWalker> {
    if p == 0 {
        return Err(invalid("order p must be at least 1"));
    }
    if series.len() <= p {
        return Err(RinarError::InsufficientData {
            needed: p + 1,
            got: series.len(),
        });
    }
    let acf = sample_acf(series, p)?;
    let sol = durbin_levinson(&acf.rho, p)?;
    debug_assert_eq!(sol.partial.len(), p);
    let lambda0 = sample_mean(series) * (1.0 - sol.coefs.iter().sum::<f64>());
    Ok(YuleWalker {
        alphas: sol.coefs,
        lambda0,
    })
}
