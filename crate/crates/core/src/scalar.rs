//! Numeric backends.
//!
//! Every computation in this crate is generic over [`Scalar`]. Two backends
//! are provided: `f64` for everyday analysis, where threshold comparisons go
//! through a [`Tolerance`], and [`Rational`] (arbitrary precision), where
//! every comparison is exact and the tolerance is ignored.

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::traits::{One, ToPrimitive, Zero};
use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::FdhError;

/// Exact rational number.
pub type Rational = BigRational;

/// Threshold used whenever a floating-point value is compared against 1 or
/// against another score.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    eps: f64,
}

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;

    pub fn new(eps: f64) -> Result<Self, FdhError> {
        if eps > 0.0 && eps < 1e-3 {
            Ok(Tolerance { eps })
        } else {
            Err(FdhError::InvalidTolerance(eps))
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps: Self::DEFAULT_EPS,
        }
    }
}

/// Ordered field used by the analysis.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + 'static
{
    /// `true` when comparisons on this type are exact.
    const EXACT: bool;

    fn to_f64(&self) -> f64;

    fn from_rational(r: &Rational) -> Self;

    /// The exact value, for backends that hold one.
    fn to_exact(&self) -> Option<Rational>;

    /// Equality up to `tol`, relative to `max(1, |a|, |b|)`. Exact backends
    /// ignore `tol`.
    fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool;

    fn from_u32(v: u32) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    /// Three-way comparison where values within `tol` compare equal.
    fn cmp_tol(&self, other: &Self, tol: Tolerance) -> Ordering {
        if self.approx_eq(other, tol) {
            Ordering::Equal
        } else if self < other {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    fn gt_tol(&self, other: &Self, tol: Tolerance) -> bool {
        self.cmp_tol(other, tol) == Ordering::Greater
    }

    fn lt_tol(&self, other: &Self, tol: Tolerance) -> bool {
        self.cmp_tol(other, tol) == Ordering::Less
    }

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn to_exact(&self) -> Option<Rational> {
        None
    }

    fn approx_eq(&self, other: &Self, tol: Tolerance) -> bool {
        let scale = 1f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= tol.eps() * scale
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn to_exact(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn approx_eq(&self, other: &Self, _tol: Tolerance) -> bool {
        self == other
    }
}

pub(crate) fn max_of<S: Scalar>(a: S, b: S) -> S {
    if b > a {
        b
    } else {
        a
    }
}

pub(crate) fn min_of<S: Scalar>(a: S, b: S) -> S {
    if b < a {
        b
    } else {
        a
    }
}

/// A value that may be the symbolic `+inf`.
///
/// Infinity here is categorical. It never enters arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub enum Extended<S> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> Extended<S> {
    pub fn finite(&self) -> Option<&S> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    /// Comparison against a finite value, `+inf` being above everything.
    pub fn cmp_tol(&self, other: &S, tol: Tolerance) -> Ordering {
        match self {
            Extended::Finite(v) => v.cmp_tol(other, tol),
            Extended::Infinite => Ordering::Greater,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Extended::Finite(v) => v.to_f64(),
            Extended::Infinite => f64::INFINITY,
        }
    }

    pub fn map<T, F: FnOnce(&S) -> T>(&self, f: F) -> Extended<T> {
        match self {
            Extended::Finite(v) => Extended::Finite(f(v)),
            Extended::Infinite => Extended::Infinite,
        }
    }
}

impl<S: Display> Display for Extended<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => v.fmt(f),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

/// Parse a decimal (`3.25`, `1e-2`) or fraction (`13/4`) literal exactly.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty value".into());
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_decimal(num.trim())?;
        let den = parse_decimal(den.trim())?;
        if den.is_zero() {
            return Err(format!("zero denominator in `{text}`"));
        }
        return Ok(num / den);
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Result<Rational, String> {
    let bad = || format!("invalid number `{text}`");
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = text[pos + 1..].parse().map_err(|_| bad())?;
            (&text[..pos], exp)
        }
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(&all_digits).map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Canonical text for an exact value: `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn is_positive<S: Scalar>(v: &S) -> bool {
    *v > S::zero()
}
