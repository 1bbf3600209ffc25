//! Least-squares fitting of RINAR(p).
//!
//! The contrast `phi_n(theta)` is piecewise constant in `theta`, so the
//! minimizer is a derivative-free coordinate search: Yule-Walker start,
//! then repeated sweeps of `p + 1` scalar dichotomous searches (one per
//! `alpha_j` on `(-1, 1)`, then `lambda` on a bracket around the start
//! value) until two consecutive sweeps move every coordinate by at most
//! `outer_tol`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, RinarError};
use crate::model::RinarParams;
use crate::rounding::nearest;
use crate::stats::{yule_walker, CountSeries, YuleWalker};

/// Yule-Walker coefficients at or beyond this magnitude are clamped to it.
pub const ALPHA_CLAMP: f64 = 0.999;
/// Below this `|lambda0|`, the `lambda0 ± factor·|lambda0|` bracket is
/// replaced by `lambda0 ± lambda_fallback_halfwidth`.
pub const LAMBDA_FALLBACK_THRESHOLD: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Bracket width at which a scalar search stops.
    pub scalar_range_tol: f64,
    /// Sweep-to-sweep sup-distance at which the fit stops.
    pub outer_tol: f64,
    pub max_outer_iterations: usize,
    pub lambda_interval_halfwidth_factor: f64,
    pub lambda_fallback_halfwidth: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            scalar_range_tol: 0.001,
            outer_tol: 0.001,
            max_outer_iterations: 100,
            lambda_interval_halfwidth_factor: 5.0,
            lambda_fallback_halfwidth: 1.0,
        }
    }
}

impl FitOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("scalar_range_tol", self.scalar_range_tol),
            ("outer_tol", self.outer_tol),
            ("lambda_interval_halfwidth_factor", self.lambda_interval_halfwidth_factor),
            ("lambda_fallback_halfwidth", self.lambda_fallback_halfwidth),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_outer_iterations == 0 {
            return Err(invalid("max_outer_iterations must be at least 1"));
        }
        Ok(())
    }

    /// Search bracket for `lambda` given the Yule-Walker start value.
    pub fn lambda_bracket(&self, lambda0: f64) -> (f64, f64) {
        let half = if lambda0.abs() < LAMBDA_FALLBACK_THRESHOLD {
            self.lambda_fallback_halfwidth
        } else {
            self.lambda_interval_halfwidth_factor * lambda0.abs()
        };
        (lambda0 - half, lambda0 + half)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub theta_hat: RinarParams,
    /// `phi_n(theta_hat)`.
    pub objective: f64,
    /// Raw Yule-Walker solution.
    pub yule_walker: YuleWalker,
    /// Search start: Yule-Walker with coefficients clamped into `(-1, 1)`.
    pub yw_init: RinarParams,
    /// `phi_n(yw_init)`.
    pub initial_objective: f64,
    pub lambda_bracket: (f64, f64),
    pub outer_iterations: usize,
    pub converged: bool,
    /// `phi_n` after each sweep.
    pub objective_trace: Vec<f64>,
}

/// Result of one scalar search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarSearch {
    pub argmin: f64,
    pub value: f64,
    /// Number of bracket-shrinking passes.
    pub passes: usize,
}

/// Contrast without argument checks; `series.len() > p` is assumed.
#[inline]
fn contrast_unchecked(theta: &RinarParams, x: &[i64]) -> f64 {
    let p = theta.order();
    let mut sum = 0.0;
    for t in p..x.len() {
        let e = (x[t] - nearest(theta.affine_at(x, t))) as f64;
        sum += e * e;
    }
    sum / (x.len() - p) as f64
}

/// Mean squared one-step error. The first `p` observations serve as the
/// starting lag window, so the mean runs over `N - p` terms.
pub fn contrast(theta: &RinarParams, series: &CountSeries) -> Result<f64> {
    let p = theta.order();
    if series.len() < p + 1 {
        return Err(RinarError::InsufficientData {
            needed: p + 1,
            got: series.len(),
        });
    }
    Ok(contrast_unchecked(theta, series.values()))
}

/// Dichotomous search of a scalar objective on `[left, right]`, returning
/// the final point. See [`dichotomous_search`].
pub fn dichotomous_scalar_search<F: FnMut(f64) -> f64>(
    objective: F,
    left: f64,
    right: f64,
    theta_init: f64,
    range_tol: f64,
) -> Result<f64> {
    dichotomous_search(objective, left, right, theta_init, range_tol).map(|s| s.argmin)
}

/// Each pass compares the objective at the current point and at the two
/// midpoints toward each bracket end:
///
/// 1. current point best: both ends move to the midpoints;
/// 2. left midpoint best: `right <- theta`, `theta <- mid_left`;
/// 3. right midpoint best: `left <- theta`, `theta <- mid_right`.
///
/// Ties go to the lowest case number, so flat stretches keep the current
/// point. Stops once `right - left <= range_tol`.
pub fn dichotomous_search<F: FnMut(f64) -> f64>(
    mut objective: F,
    left: f64,
    right: f64,
    theta_init: f64,
    range_tol: f64,
) -> Result<ScalarSearch> {
    if !(left.is_finite() && right.is_finite() && left < right) {
        return Err(invalid(format!("invalid bracket [{left}, {right}]")));
    }
    if !(range_tol.is_finite() && range_tol > 0.0) {
        return Err(invalid(format!("range tolerance must be positive, got {range_tol}")));
    }
    if !theta_init.is_finite() {
        return Err(invalid("non-finite starting point"));
    }
    let (mut left, mut right) = (left, right);
    let mut theta = theta_init.clamp(left, right);
    let mut current = objective(theta);
    let mut passes = 0;
    while (right - left).abs() > range_tol {
        let mid_left = (left + theta) / 2.0;
        let mid_right = (right + theta) / 2.0;
        let v_left = objective(mid_left);
        let v_right = objective(mid_right);
        if current <= v_left && current <= v_right {
            left = mid_left;
            right = mid_right;
        } else if v_left <= v_right {
            right = theta;
            theta = mid_left;
            current = v_left;
        } else {
            left = theta;
            theta = mid_right;
            current = v_right;
        }
        passes += 1;
    }
    Ok(ScalarSearch {
        argmin: theta,
        value: current,
        passes,
    })
}

/// `max_j |a_j - b_j|` over all coordinates including `lambda`.
pub fn sup_distance(a: &RinarParams, b: &RinarParams) -> f64 {
    a.alphas()
        .iter()
        .zip(b.alphas())
        .map(|(x, y)| (x - y).abs())
        .fold((a.lambda() - b.lambda()).abs(), f64::max)
}

/// Yule-Walker start with every `|alpha_j| >= 1` pulled back to `±ALPHA_CLAMP`.
pub fn clamped_initializer(yw: &YuleWalker) -> Result<RinarParams> {
    let alphas = yw
        .alphas
        .iter()
        .map(|&a| if a.abs() >= 1.0 { ALPHA_CLAMP.copysign(a) } else { a })
        .collect();
    RinarParams::new(alphas, yw.lambda0)
}

pub fn fit(series: &CountSeries, p: usize, options: &FitOptions) -> Result<FitResult> {
    options.validate()?;
    if p == 0 {
        return Err(invalid("order p must be at least 1"));
    }
    if series.len() <= p + 1 {
        return Err(RinarError::InsufficientData {
            needed: p + 2,
            got: series.len(),
        });
    }
    let yw = yule_walker(series, p)?;
    let init = clamped_initializer(&yw)?;
    let x = series.values();
    let initial_objective = contrast_unchecked(&init, x);
    let lambda_bracket = options.lambda_bracket(init.lambda());
    let tol = options.scalar_range_tol;

    let mut theta = init.clone();
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < options.max_outer_iterations {
        iterations += 1;
        let previous = theta.clone();
        let mut scratch = theta.clone();
        for j in 0..p {
            let start = theta.alphas()[j];
            let found = dichotomous_search(
                |a| {
                    scratch.set_alpha(j, a);
                    contrast_unchecked(&scratch, x)
                },
                -1.0,
                1.0,
                start,
                tol,
            )?;
            theta.set_alpha(j, found.argmin);
            scratch.set_alpha(j, found.argmin);
        }
        let found = dichotomous_search(
            |l| {
                scratch.set_lambda(l);
                contrast_unchecked(&scratch, x)
            },
            lambda_bracket.0,
            lambda_bracket.1,
            theta.lambda(),
            tol,
        )?;
        theta.set_lambda(found.argmin);
        trace.push(contrast_unchecked(&theta, x));
        if sup_distance(&previous, &theta) <= options.outer_tol {
            converged = true;
            break;
        }
    }
    let objective = *trace.last().expect("at least one sweep runs");
    Ok(FitResult {
        theta_hat: theta,
        objective,
        yule_walker: yw,
        yw_init: init,
        initial_objective,
        lambda_bracket,
        outer_iterations: iterations,
        converged,
        objective_trace: trace,
    })
}
