//! Identifiability of the intercept when every coefficient is rational.
//!
//! For `alpha_j = a_j / b_j`, the values `sum_j alpha_j x_j` over integer
//! states form the lattice `nu0 · Z` with
//!
//! ```text
//! A_l = a_l · prod_{j != l} b_j,   d = gcd(A_1, ..., A_p),   nu0 = d / prod_j b_j = a / b,
//! ```
//!
//! so two parameter vectors sharing the coefficients are indistinguishable
//! exactly when `<nu0 x + lambda> = <nu0 x + lambda*>` for every integer `x`.
//! The set `I0` of such `lambda` is found here by exact enumeration over a
//! finite window of `x`, and compared with the closed-form length rule
//! (`1/b` for even `b`; for odd `b`, `1/(2b)` when `{lambda*}` lies within
//! `1/(2b)` of an integer and `1/b` otherwise).
//!
//! Everything in this module is exact integer or rational arithmetic.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Result, RinarError};
use crate::fraction::{gcd_all, reduce, round_ratio, Fraction};

/// Largest admissible `prod_j b_j`.
pub const MAX_DENOMINATOR_PRODUCT: i128 = 1 << 63;
/// Largest enumeration window `X` accepted by [`compute_i0`].
pub const MAX_WINDOW: i128 = 50_000_000;

/// Rational coefficients and intercept of a RINAR(p) model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalParams {
    alphas: Vec<Fraction>,
    lambda_star: Fraction,
}

impl RationalParams {
    pub fn new(alphas: Vec<Fraction>, lambda_star: Fraction) -> Result<Self> {
        if alphas.is_empty() {
            return Err(invalid("order p must be at least 1"));
        }
        let one = Fraction::integer(1);
        let mut total = Fraction::ZERO;
        for a in &alphas {
            if a.abs() >= one {
                return Err(invalid(format!("|{a}| is not < 1")));
            }
            total = total.add(&a.abs())?;
        }
        if total >= one {
            return Err(RinarError::NonStationary {
                abs_sum: total.to_f64(),
            });
        }
        Ok(RationalParams { alphas, lambda_star })
    }

    pub fn alphas(&self) -> &[Fraction] {
        &self.alphas
    }

    pub fn lambda_star(&self) -> Fraction {
        self.lambda_star
    }
}

/// Output of [`compute_nu0`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Nu0 {
    /// `A_l = a_l · prod_{j != l} b_j`.
    pub a_coeffs: Vec<i128>,
    /// `prod_j b_j`.
    pub denominator_product: i128,
    /// `gcd(A_1, ..., A_p)`, positive; zero only if every coefficient is zero.
    pub d: i128,
    /// `d / prod_j b_j` in lowest terms.
    pub nu0: Fraction,
}

pub fn compute_nu0(alphas: &[Fraction]) -> Result<Nu0> {
    if alphas.is_empty() {
        return Err(invalid("at least one coefficient is required"));
    }
    let mut product: i128 = 1;
    for a in alphas {
        product = product
            .checked_mul(a.den() as i128)
            .filter(|&v| v <= MAX_DENOMINATOR_PRODUCT)
            .ok_or_else(|| {
                RinarError::Overflow("product of coefficient denominators exceeds 2^63".into())
            })?;
    }
    let a_coeffs: Vec<i128> = alphas
        .iter()
        .map(|a| a.num() as i128 * (product / a.den() as i128))
        .collect();
    let (d, nu0) = match gcd_all(&a_coeffs) {
        Ok(d) => (d, reduce(d, product)?),
        Err(_) => (0, Fraction::ZERO),
    };
    Ok(Nu0 {
        a_coeffs,
        denominator_product: product,
        d,
        nu0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseLabel {
    Even,
    OddShort,
    OddLong,
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseLabel::Even => "even",
            CaseLabel::OddShort => "odd-short",
            CaseLabel::OddLong => "odd-long",
        })
    }
}

/// Closed-form classification of `(nu0, lambda*)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaseClass {
    pub label: CaseLabel,
    /// `{lambda*} ∈ [k0/b, (k0+1)/b)`.
    pub k0: i64,
    /// `1/b`, or `1/(2b)` in the odd-short case.
    pub predicted_length: Fraction,
}

pub fn classify_case(nu0: Fraction, lambda_star: Fraction) -> Result<CaseClass> {
    let b = nu0.den();
    let frac = lambda_star.frac_part();
    let k0 = (frac.num() as i128 * b as i128 / frac.den() as i128) as i64;
    let label = if b % 2 == 0 {
        CaseLabel::Even
    } else {
        let near_low = Fraction::new(1, 2 * b)?;
        let near_high = Fraction::new(2 * b - 1, 2 * b)?;
        if frac < near_low || frac >= near_high {
            CaseLabel::OddShort
        } else {
            CaseLabel::OddLong
        }
    };
    let predicted_length = match label {
        CaseLabel::OddShort => Fraction::new(1, 2 * b)?,
        _ => Fraction::new(1, b)?,
    };
    Ok(CaseClass {
        label,
        k0,
        predicted_length,
    })
}

/// An interval with rational endpoints and explicit end inclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RationalInterval {
    pub lo: Fraction,
    pub hi: Fraction,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl RationalInterval {
    pub fn half_open(lo: Fraction, hi: Fraction) -> Self {
        RationalInterval {
            lo,
            hi,
            lo_closed: true,
            hi_closed: false,
        }
    }

    pub fn length(&self) -> Result<Fraction> {
        self.hi.sub(&self.lo)
    }

    pub fn contains(&self, x: &Fraction) -> bool {
        let above = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        let below = match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        };
        above && below
    }

    fn reflect(&self) -> Self {
        RationalInterval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
            lo_closed: self.hi_closed,
            hi_closed: self.lo_closed,
        }
    }
}

impl fmt::Display for RationalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Enumeration window `X = b · (ceil|lambda*| + 2)`.
pub fn enumeration_window(nu0: Fraction, lambda_star: Fraction) -> i128 {
    let ceil_abs = -(lambda_star.abs().neg().floor()) as i128;
    nu0.den() as i128 * (ceil_abs + 2)
}

/// Checks `<nu0 x + lambda> = <nu0 x + lambda*>` on a one-signed window.
///
/// The window is `x = 0..=X` when `lambda* >= 0` and `x = -X..=0`
/// otherwise, so that `nu0 x + lambda*` never changes sign against
/// `lambda*` and the tie rule stays on one side of zero.
pub fn satisfies_identity(nu0: Fraction, lambda: Fraction, lambda_star: Fraction, window: i128) -> bool {
    let (a, b) = (nu0.num() as i128, nu0.den() as i128);
    let sgn: i128 = if lambda_star.is_negative() { -1 } else { 1 };
    let (ln, ld) = (lambda.num() as i128, lambda.den() as i128);
    let (sn, sd) = (lambda_star.num() as i128, lambda_star.den() as i128);
    (0..=window).all(|k| {
        let ax = a * sgn * k;
        round_ratio(ax * ld + ln * b, b * ld) == round_ratio(ax * sd + sn * b, b * sd)
    })
}

/// Maximal interval of `lambda` values indistinguishable from `lambda*`.
///
/// Every boundary `lambda = k + 1/2 - nu0 x` of the identity lies on the
/// grid `m / (2b)`, so the real line splits into atoms: grid points and
/// the open cells between them, with membership constant on each atom.
/// Atom `i` is represented by `i / (4b)` (even `i`: a grid point; odd `i`:
/// a cell). Starting from the atom holding `lambda*`, the walk extends
/// outward while atoms satisfy the identity.
pub fn compute_i0(nu0: Fraction, lambda_star: Fraction) -> Result<RationalInterval> {
    if lambda_star.is_negative() {
        // <nu0 x + l> = -<nu0 (-x) - l>: the set for -lambda* mirrors.
        return compute_i0(nu0, lambda_star.neg()).map(|i| i.reflect());
    }
    let b = nu0.den();
    let window = enumeration_window(nu0, lambda_star);
    if window > MAX_WINDOW {
        return Err(invalid(format!(
            "enumeration window {window} exceeds the limit {MAX_WINDOW}"
        )));
    }
    let quarter = 4 * b;
    let atom_value = |i: i64| Fraction::new(i, quarter);
    // Position of lambda* among the atoms.
    let scaled_num = lambda_star.num() as i128 * 2 * b as i128;
    let sd = lambda_star.den() as i128;
    let start = if scaled_num % sd == 0 {
        2 * (scaled_num / sd) as i64
    } else {
        2 * scaled_num.div_euclid(sd) as i64 + 1
    };
    let member = |i: i64| -> Result<bool> {
        Ok(satisfies_identity(nu0, atom_value(i)?, lambda_star, window))
    };
    if !satisfies_identity(nu0, lambda_star, lambda_star, window) {
        return Err(RinarError::InternalConsistency(
            "lambda* does not satisfy its own identity".into(),
        ));
    }
    // x = 0 alone pins <lambda> = <lambda*>, so the set spans at most one
    // unit: no more than 4b + 1 atoms on either side.
    let limit = quarter + 2;
    let mut hi_atom = start;
    while member(hi_atom + 1)? {
        hi_atom += 1;
        if hi_atom - start > limit {
            return Err(RinarError::InternalConsistency("I0 walk did not terminate".into()));
        }
    }
    let mut lo_atom = start;
    while member(lo_atom - 1)? {
        lo_atom -= 1;
        if start - lo_atom > limit {
            return Err(RinarError::InternalConsistency("I0 walk did not terminate".into()));
        }
    }
    let (lo, lo_closed) = if lo_atom % 2 == 0 {
        (atom_value(lo_atom)?, true)
    } else {
        (atom_value(lo_atom - 1)?, false)
    };
    let (hi, hi_closed) = if hi_atom % 2 == 0 {
        (atom_value(hi_atom)?, true)
    } else {
        (atom_value(hi_atom + 1)?, false)
    };
    let interval = RationalInterval {
        lo,
        hi,
        lo_closed,
        hi_closed,
    };
    if !interval.contains(&lambda_star) {
        return Err(RinarError::InternalConsistency(format!(
            "computed I0 {interval} does not contain lambda* = {lambda_star}"
        )));
    }
    Ok(interval)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

/// Full identifiability analysis for rational parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentifiabilityReport {
    pub alphas: Vec<Fraction>,
    pub lambda_star: Fraction,
    pub a_coeffs: Vec<i128>,
    pub denominator_product: i128,
    pub d: i128,
    pub nu0: Fraction,
    pub b_parity: Parity,
    /// Absent when `b = 1`, where the odd sub-cases degenerate.
    pub case_label: Option<CaseLabel>,
    pub k0: i64,
    pub i0: RationalInterval,
    pub i0_length: Fraction,
    pub predicted_length: Fraction,
    /// Whether the enumerated length equals the closed-form rule.
    pub length_matches_rule: bool,
}

impl IdentifiabilityReport {
    /// `E0 = {alpha*} x I0` in readable form.
    pub fn e0_description(&self) -> String {
        let alphas: Vec<String> = self.alphas.iter().map(|a| a.to_string()).collect();
        format!("{{({})}} x {}", alphas.join(", "), self.i0)
    }
}

pub fn identify(params: &RationalParams) -> Result<IdentifiabilityReport> {
    let nu = compute_nu0(params.alphas())?;
    let lambda_star = params.lambda_star();
    let class = classify_case(nu.nu0, lambda_star)?;
    let i0 = compute_i0(nu.nu0, lambda_star)?;
    let i0_length = i0.length()?;
    let b = nu.nu0.den();
    Ok(IdentifiabilityReport {
        alphas: params.alphas().to_vec(),
        lambda_star,
        a_coeffs: nu.a_coeffs,
        denominator_product: nu.denominator_product,
        d: nu.d,
        nu0: nu.nu0,
        b_parity: if b % 2 == 0 { Parity::Even } else { Parity::Odd },
        case_label: (b != 1).then_some(class.label),
        k0: class.k0,
        i0,
        i0_length,
        predicted_length: class.predicted_length,
        length_matches_rule: i0_length == class.predicted_length,
    })
}
