//! Scalar backends: arbitrary-precision rationals and binary64 floats.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{PolyError, Polynomial, RootBracket};

pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalarError {
    #[error("cannot parse {0:?} as a rational literal (expected an integer or \"num/den\")")]
    BadRational(String),
    #[error("cannot parse {0:?} as a number")]
    BadFloat(String),
    #[error("non-finite value {0}")]
    NonFinite(f64),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Field element used for coefficients, energies and polynomial entries.
///
/// Implemented for [`Rational`] (exact) and `f64` (float). Equality through
/// [`Scalar::same`] is exact on rationals and bitwise on floats.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + Send + Sync + 'static
{
    const BACKEND: Backend;

    fn from_int(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn as_f64(&self) -> f64;
    fn is_finite(&self) -> bool;
    fn same(&self, other: &Self) -> bool;
    /// Square root when it is representable in this backend.
    fn sqrt_checked(&self) -> Option<Self>;
    /// Lossless for floats; on the exact backend only rational literals are accepted.
    fn parse_literal(s: &str) -> Result<Self, ScalarError>;
    fn to_json(&self) -> serde_json::Value;
    fn from_json(v: &serde_json::Value) -> Result<Self, ScalarError>;
    /// Exact conversion of a finite float; rational backend represents it exactly.
    fn from_f64_checked(v: f64) -> Result<Self, ScalarError>;

    /// Backend-specific real root isolation (Sturm on rationals, derivative
    /// interleaving on floats).
    fn isolate_roots(p: &Polynomial<Self>) -> Result<Vec<RootBracket<Self>>, PolyError>;
    fn refine_root_in(p: &Polynomial<Self>, b: &RootBracket<Self>, tol: f64)
        -> Result<Self, PolyError>;
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn as_f64(&self) -> f64 {
        *self
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn same(&self, other: &Self) -> bool {
        self.to_bits() == other.to_bits()
    }
    fn sqrt_checked(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
    fn parse_literal(s: &str) -> Result<Self, ScalarError> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: f64 = n.trim().parse().map_err(|_| ScalarError::BadFloat(s.into()))?;
            let d: f64 = d.trim().parse().map_err(|_| ScalarError::BadFloat(s.into()))?;
            if d == 0.0 {
                return Err(ScalarError::ZeroDenominator(s.into()));
            }
            return Self::from_f64_checked(n / d);
        }
        let v: f64 = s.parse().map_err(|_| ScalarError::BadFloat(s.into()))?;
        Self::from_f64_checked(v)
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::json!(*self)
    }
    fn from_json(v: &serde_json::Value) -> Result<Self, ScalarError> {
        match v {
            serde_json::Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| ScalarError::BadFloat(n.to_string()))
                .and_then(Self::from_f64_checked),
            serde_json::Value::String(s) => Self::parse_literal(s),
            other => Err(ScalarError::BadFloat(other.to_string())),
        }
    }
    fn from_f64_checked(v: f64) -> Result<Self, ScalarError> {
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ScalarError::NonFinite(v))
        }
    }
    fn isolate_roots(p: &Polynomial<Self>) -> Result<Vec<RootBracket<Self>>, PolyError> {
        crate::poly::float::isolate(p)
    }
    fn refine_root_in(p: &Polynomial<Self>, b: &RootBracket<Self>, tol: f64) -> Result<Self, PolyError> {
        crate::poly::float::refine(p, b, tol)
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Exact;

    fn from_int(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }
    fn is_finite(&self) -> bool {
        true
    }
    fn same(&self, other: &Self) -> bool {
        self == other
    }
    fn sqrt_checked(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        (&n * &n == *self.numer() && &d * &d == *self.denom()).then(|| Rational::new(n, d))
    }
    fn parse_literal(s: &str) -> Result<Self, ScalarError> {
        parse_rational(s)
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }
    fn from_json(v: &serde_json::Value) -> Result<Self, ScalarError> {
        match v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Number(n) if n.is_i64() => Ok(Self::from_int(n.as_i64().unwrap())),
            other => Err(ScalarError::BadRational(other.to_string())),
        }
    }
    fn from_f64_checked(v: f64) -> Result<Self, ScalarError> {
        <Rational as FromPrimitive>::from_f64(v).ok_or(ScalarError::NonFinite(v))
    }
    fn isolate_roots(p: &Polynomial<Self>) -> Result<Vec<RootBracket<Self>>, PolyError> {
        p.isolate_exact()
    }
    fn refine_root_in(p: &Polynomial<Self>, b: &RootBracket<Self>, tol: f64) -> Result<Self, PolyError> {
        p.refine_exact(b, tol)
    }
}

/// Parses `"n"` or `"n/d"` with integer `n`, `d`. Decimal points are rejected.
pub fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let t = s.trim();
    let bad = || ScalarError::BadRational(s.to_string());
    let int = |x: &str| -> Result<BigInt, ScalarError> {
        let x = x.trim();
        let x = x.strip_prefix('+').unwrap_or(x);
        if x.is_empty() || !x.trim_start_matches('-').chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        BigInt::from_str(x).map_err(|_| bad())
    };
    match t.split_once('/') {
        Some((n, d)) => {
            let d = int(d)?;
            if d.is_zero() {
                return Err(ScalarError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(int(n)?, d))
        }
        None => Ok(Rational::from_integer(int(t)?)),
    }
}

/// `"n"` for integers, `"n/d"` otherwise (lowest terms, positive denominator).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True when `s` looks like a rational literal (no decimal point or exponent).
pub fn is_rational_literal(s: &str) -> bool {
    parse_rational(s).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literals() {
        assert_eq!(parse_rational("3/5").unwrap(), Rational::from_ratio(3, 5));
        assert_eq!(parse_rational("-4").unwrap(), Rational::from_int(-4));
        assert_eq!(parse_rational(" 6/-4 ").unwrap(), Rational::from_ratio(-3, 2));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1e3").is_err());
        assert!(matches!(parse_rational("1/0"), Err(ScalarError::ZeroDenominator(_))));
        assert_eq!(format_rational(&Rational::from_ratio(6, -4)), "-3/2");
        assert_eq!(format_rational(&Rational::from_int(0)), "0");
    }

    #[test]
    fn float_literals() {
        assert_eq!(f64::parse_literal("0.25").unwrap(), 0.25);
        assert_eq!(f64::parse_literal("3/4").unwrap(), 0.75);
        assert!(f64::parse_literal("nan").is_err());
        assert!(f64::parse_literal("inf").is_err());
    }

    #[test]
    fn exact_sqrt_only_for_squares() {
        assert_eq!(Rational::from_ratio(9, 4).sqrt_checked(), Some(Rational::from_ratio(3, 2)));
        assert_eq!(Rational::from_int(2).sqrt_checked(), None);
        assert_eq!(4.0f64.sqrt_checked(), Some(2.0));
        assert_eq!((-1.0f64).sqrt_checked(), None);
    }

    #[test]
    fn float_equality_is_bitwise() {
        assert!(!0.0f64.same(&-0.0));
        assert!(1.5f64.same(&1.5));
    }
}
