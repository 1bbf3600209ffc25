//! Nearest-integer rounding, fractional part, integer part and sign.
//!
//! Conventions:
//!
//! * `<k + 1/2> = k + 1` for `k >= 0` and `<k - 1/2> = k - 1` for `k <= 0`,
//!   i.e. exact half-integers round away from zero, so `<.>` is odd.
//! * `{a} = {|a|}`: the fractional part of a negative number is positive,
//!   `{-1.23} = 0.23`.
//! * `[a]` truncates toward zero, `[-6.3] = -6`.
//! * `s(a) = 1` for `a >= 0` and `-1` otherwise.
//!
//! With these, `a = <a> + s(a){a} - s(a)·1[{a} >= 1/2]` and
//! `a = [a] + s(a){a}` hold for every finite `a`.
//!
//! Half-integers are detected bit-exactly; there is no epsilon band.

use crate::error::{invalid, Result};

/// Largest magnitude whose rounded value is representable as `i64`.
const I64_LIMIT: f64 = 9.223_372_036_854_775e18;

fn check(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(invalid(format!("non-finite value {x}")));
    }
    if x.abs() >= I64_LIMIT {
        return Err(invalid(format!("value {x} exceeds the i64 range")));
    }
    Ok(x)
}

/// A finite real number.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RealScalar(f64);

impl RealScalar {
    pub fn new(value: f64) -> Result<Self> {
        check(value).map(RealScalar)
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for RealScalar {
    type Error = crate::error::RinarError;

    fn try_from(value: f64) -> Result<Self> {
        RealScalar::new(value)
    }
}

/// Rounding without validation, for hot loops whose inputs are known finite.
///
/// `f64::round` rounds half-way cases away from zero, which is exactly the
/// required convention.
#[inline]
pub(crate) fn nearest(x: f64) -> i64 {
    x.round() as i64
}

/// `<x>`: nearest integer, ties away from zero.
pub fn round_nearest(x: f64) -> Result<i64> {
    check(x).map(nearest)
}

/// `{x} = |x| - floor(|x|)`, always in `[0, 1)`.
pub fn frac_part(x: f64) -> Result<f64> {
    let a = check(x)?.abs();
    Ok(a - a.floor())
}

/// `[x]`: truncation toward zero.
pub fn int_part(x: f64) -> Result<i64> {
    check(x).map(|v| v.trunc() as i64)
}

/// `s(x)`: `+1` for `x >= 0`, `-1` for `x < 0`.
pub fn sign(x: f64) -> Result<i64> {
    check(x).map(|v| if v >= 0.0 { 1 } else { -1 })
}
