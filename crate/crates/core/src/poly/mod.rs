//! Dense univariate polynomials over the exact and float backends.
//!
//! Coefficients are stored low degree first. The zero polynomial has an
//! empty coefficient list; every other polynomial has a nonzero leading
//! coefficient. On the float backend a coefficient is only stripped when it
//! is exactly `0.0`.

pub(crate) mod exact;
pub(crate) mod float;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::{Backend, Scalar};

pub use exact::{integer_primitive_part, subresultant_gcd};
pub(crate) use float::{bisect_monotone, cauchy_bound_f64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("operation requires the exact backend (got {0})")]
    UnsupportedBackend(Backend),
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("operation on the zero polynomial")]
    ZeroPolynomial,
    #[error("interval endpoint {0} is a root")]
    EndpointRoot(String),
    #[error("empty interval: lo must be < hi")]
    EmptyInterval,
    #[error("bracket must isolate exactly one root (count = {0})")]
    NotIsolating(usize),
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("non-finite coefficient {0}")]
    NonFinite(f64),
    #[error("division by the zero polynomial")]
    DivisionByZero,
}

/// Half-open interval `(lo, hi]` holding `count` distinct real roots.
#[derive(Clone, Debug, PartialEq)]
pub struct RootBracket<S> {
    pub lo: S,
    pub hi: S,
    pub count: usize,
}

impl<S: Scalar> RootBracket<S> {
    pub fn contains(&self, x: &S) -> bool {
        *x > self.lo && *x <= self.hi
    }

    pub fn width(&self) -> f64 {
        (self.hi.clone() - self.lo.clone()).as_f64()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::from_vec(vec![c])
    }

    /// The monomial `E`.
    pub fn x() -> Self {
        Self::from_vec(vec![S::zero(), S::one()])
    }

    /// `E - r`.
    pub fn linear_root(r: S) -> Self {
        Self::from_vec(vec![-r, S::one()])
    }

    /// Builds from coefficients (low degree first), rejecting non-finite floats.
    pub fn new(coeffs: Vec<S>) -> Result<Self, PolyError> {
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(PolyError::NonFinite(c.as_f64()));
        }
        Ok(Self::from_vec(coeffs))
    }

    pub(crate) fn from_vec(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::from_vec(cs.iter().map(|&c| S::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    /// Coefficient of `E^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::from_vec(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * S::from_int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_vec(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// `p(-E)`.
    pub fn reflect(&self) -> Self {
        Self::from_vec(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// `p(c·E + d)`, used for shift/scale covariance checks.
    pub fn compose_affine(&self, c: &S, d: &S) -> Self {
        let lin = Self::from_vec(vec![d.clone(), c.clone()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, k| &(&acc * &lin) + &Self::constant(k.clone()))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = S::one() / l.clone();
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division, `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), PolyError> {
        let dl = d.leading().ok_or(PolyError::DivisionByZero)?.clone();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() < d.coeffs.len() {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![S::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() / dl.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] = r[k + j].clone() - c.clone() * dc.clone();
                }
            }
            // exact cancellation of the leading term
            r[k + dd] = S::zero();
            q[k] = c;
        }
        Ok((Self::from_vec(q), Self::from_vec(r)))
    }

    /// Isolating brackets for the distinct real roots, ordered left to right.
    pub fn isolate_real_roots(&self) -> Result<Vec<RootBracket<S>>, PolyError> {
        S::isolate_roots(self)
    }

    /// Approximates the single root in `bracket` to within `tol`.
    pub fn refine_root(&self, bracket: &RootBracket<S>, tol: f64) -> Result<S, PolyError> {
        if !(tol > 0.0) {
            return Err(PolyError::BadTolerance);
        }
        S::refine_root_in(self, bracket, tol)
    }

    pub fn to_f64(&self) -> Polynomial<f64> {
        Polynomial::from_vec(self.coeffs.iter().map(|c| c.as_f64()).collect())
    }
}

impl<S: Scalar> Add for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn add(self, rhs: Self) -> Polynomial<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_vec((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<S: Scalar> Sub for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn sub(self, rhs: Self) -> Polynomial<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::from_vec((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<S: Scalar> Mul for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn mul(self, rhs: Self) -> Polynomial<S> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::from_vec(out)
    }
}

impl<S: Scalar> Neg for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn neg(self) -> Polynomial<S> {
        Polynomial::from_vec(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<S: Scalar> $tr for Polynomial<S> {
            type Output = Polynomial<S>;
            fn $m(self, rhs: Self) -> Polynomial<S> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<S: Scalar> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = if c.is_negative() { (true, -c.clone()) } else { (false, c.clone()) };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag.is_one();
            match k {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("E")?,
                1 => write!(f, "{mag}·E")?,
                _ if unit => write!(f, "E^{k}")?,
                _ => write!(f, "{mag}·E^{k}")?,
            }
        }
        Ok(())
    }
}
