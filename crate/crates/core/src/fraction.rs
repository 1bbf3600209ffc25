//! Exact reduced fractions over `i64`, with `i128` intermediates.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{invalid, Result, RinarError};

/// Euclidean gcd, non-negative. `gcd(0, 0)` is rejected.
pub fn gcd(a: i128, b: i128) -> Result<i128> {
    if a == 0 && b == 0 {
        return Err(invalid("gcd(0, 0) is undefined"));
    }
    Ok(gcd_raw(a, b))
}

pub(crate) fn gcd_raw(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a as i128
}

/// gcd of a list, folded pairwise. Fails if every entry is zero.
pub fn gcd_all(values: &[i128]) -> Result<i128> {
    let g = values.iter().fold(0, |acc, &v| gcd_raw(acc, v));
    if g == 0 {
        return Err(invalid("gcd of an all-zero list is undefined"));
    }
    Ok(g)
}

/// `num / den` in lowest terms with `den >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: i64,
    den: i64,
}

fn narrow(v: i128, what: &str) -> Result<i64> {
    i64::try_from(v).map_err(|_| RinarError::Overflow(format!("{what} {v} does not fit in i64")))
}

/// Divides out the gcd and moves the sign into the numerator.
pub fn reduce(num: i128, den: i128) -> Result<Fraction> {
    if den == 0 {
        return Err(invalid("zero denominator"));
    }
    let g = gcd_raw(num, den);
    let (mut n, mut d) = (num / g, den / g);
    if d < 0 {
        n = -n;
        d = -d;
    }
    Ok(Fraction {
        num: narrow(n, "numerator")?,
        den: narrow(d, "denominator")?,
    })
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Self> {
        reduce(num as i128, den as i128)
    }

    pub fn integer(n: i64) -> Self {
        Fraction { num: n, den: 1 }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_negative(&self) -> bool {
        self.num < 0
    }

    pub fn abs(&self) -> Fraction {
        Fraction {
            num: self.num.abs(),
            den: self.den,
        }
    }

    pub fn neg(&self) -> Fraction {
        Fraction {
            num: -self.num,
            den: self.den,
        }
    }

    pub fn add(&self, other: &Fraction) -> Result<Fraction> {
        let n = self.num as i128 * other.den as i128 + other.num as i128 * self.den as i128;
        reduce(n, self.den as i128 * other.den as i128)
    }

    pub fn sub(&self, other: &Fraction) -> Result<Fraction> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Fraction) -> Result<Fraction> {
        reduce(
            self.num as i128 * other.num as i128,
            self.den as i128 * other.den as i128,
        )
    }

    /// Largest integer `<= self`.
    pub fn floor(&self) -> i64 {
        self.num.div_euclid(self.den)
    }

    /// `{x} = {|x|}`, in `[0, 1)`.
    pub fn frac_part(&self) -> Fraction {
        let a = self.num.abs();
        Fraction {
            num: a % self.den,
            den: self.den,
        }
        .normalized()
    }

    /// `<x>`: nearest integer, ties away from zero.
    pub fn round_nearest(&self) -> i64 {
        round_ratio(self.num as i128, self.den as i128) as i64
    }

    fn normalized(self) -> Fraction {
        reduce(self.num as i128, self.den as i128).expect("denominator is positive")
    }
}

/// `<n / d>` for `d > 0`, ties away from zero.
#[inline]
pub(crate) fn round_ratio(n: i128, d: i128) -> i128 {
    debug_assert!(d > 0);
    if n >= 0 {
        (2 * n + d).div_euclid(2 * d)
    } else {
        -(-2 * n + d).div_euclid(2 * d)
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn parse_int(text: &str) -> Option<i64> {
    let t = text.trim();
    // Accept the typographic minus sign as well as '-'.
    let (neg, digits) = if let Some(rest) = t.strip_prefix('-').or_else(|| t.strip_prefix('\u{2212}')) {
        (true, rest)
    } else {
        (false, t.strip_prefix('+').unwrap_or(t))
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let v: i64 = digits.parse().ok()?;
    Some(if neg { -v } else { v })
}

impl FromStr for Fraction {
    type Err = RinarError;

    /// Accepts `int` or `int/posint`.
    fn from_str(text: &str) -> Result<Self> {
        let bad = || RinarError::Parse {
            line: 1,
            message: format!("malformed fraction literal {text:?}"),
        };
        match text.split_once('/') {
            None => parse_int(text).map(Fraction::integer).ok_or_else(bad),
            Some((n, d)) => {
                let num = parse_int(n).ok_or_else(bad)?;
                let d = d.trim();
                if d.starts_with(['-', '+', '\u{2212}']) {
                    return Err(bad());
                }
                let den = parse_int(d).ok_or_else(bad)?;
                if den == 0 {
                    return Err(RinarError::Parse {
                        line: 1,
                        message: format!("zero denominator in {text:?}"),
                    });
                }
                Fraction::new(num, den)
            }
        }
    }
}
