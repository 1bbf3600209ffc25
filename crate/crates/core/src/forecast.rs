//! One-step-ahead integer forecasts and out-of-sample evaluation.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::model::{regression_value, LagWindow, RinarParams};
use crate::rounding::nearest;
use crate::stats::CountSeries;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForecastReport {
    /// Number of leading observations used only as conditioning history.
    pub split_index: usize,
    /// 0-based indices of the forecast targets.
    pub targets: Vec<usize>,
    pub actuals: Vec<i64>,
    pub predictions: Vec<i64>,
    /// `X_{T+1} - Xhat_{T+1}`.
    pub errors: Vec<i64>,
    pub mae: f64,
}

/// `Xhat_{T+1} = <sum_j alpha_j X_{T+1-j} + lambda>`.
pub fn one_step(theta: &RinarParams, window: &LagWindow) -> Result<i64> {
    regression_value(theta, window)
}

/// Mean absolute value of a non-empty error vector.
pub fn mae(errors: &[i64]) -> Result<f64> {
    if errors.is_empty() {
        return Err(invalid("MAE of an empty error vector"));
    }
    Ok(errors.iter().map(|e| e.unsigned_abs() as f64).sum::<f64>() / errors.len() as f64)
}

/// Forecasts every observation from index `split_index` (0-based) to the
/// end, each from the observed values before it.
///
/// With 505 observations and `split_index = 400`, the targets are the
/// 401st through 505th observations (105 forecasts).
pub fn rolling_forecast(
    theta: &RinarParams,
    series: &CountSeries,
    split_index: usize,
) -> Result<ForecastReport> {
    let p = theta.order();
    let n = series.len();
    if split_index < p || split_index >= n {
        return Err(invalid(format!(
            "split index {split_index} must be in {p}..{n} for order {p} and {n} observations"
        )));
    }
    let x = series.values();
    let targets: Vec<usize> = (split_index..n).collect();
    let predictions: Vec<i64> = targets
        .iter()
        .map(|&t| nearest(theta.affine_at(x, t)))
        .collect();
    let actuals: Vec<i64> = targets.iter().map(|&t| x[t]).collect();
    let errors: Vec<i64> = actuals.iter().zip(&predictions).map(|(a, p)| a - p).collect();
    let mae = mae(&errors)?;
    Ok(ForecastReport {
        split_index,
        targets,
        actuals,
        predictions,
        errors,
        mae,
    })
}
