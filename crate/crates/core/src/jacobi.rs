//! Coefficient vectors, transfer matrices, monodromy and discriminant.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::Polynomial;
use crate::scalar::{Backend, Rational, Scalar, ScalarError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// General Jacobi matrix.
    Jac,
    /// Discrete Schrödinger operator: all off-diagonals equal to one.
    Dso,
    /// Off-diagonal Jacobi matrix: zero diagonal.
    Odjm,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Jac => "jac",
            Model::Dso => "dso",
            Model::Odjm => "odjm",
        })
    }
}

impl std::str::FromStr for Model {
    type Err = JacobiError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "jac" => Ok(Model::Jac),
            "dso" => Ok(Model::Dso),
            "odjm" => Ok(Model::Odjm),
            _ => Err(JacobiError::UnknownModel(s.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JacobiError {
    #[error("period must be at least 1")]
    Empty,
    #[error("length mismatch: a has {a} entries, v has {v}")]
    LengthMismatch { a: usize, v: usize },
    #[error("off-diagonal a[{index}] = {value} is not strictly positive")]
    NonPositive { index: usize, value: String },
    #[error("non-finite coefficient at index {0}")]
    NonFinite(usize),
    #[error("model constraint violated: {0}")]
    ModelConstraint(String),
    #[error("unknown model {0:?} (expected dso, odjm or jac)")]
    UnknownModel(String),
    #[error("scale factor {0} is not strictly positive")]
    BadScale(String),
    #[error("transfer matrix needs s > 0, got {0}")]
    BadTransfer(String),
    #[error("invalid vector JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Periodic coefficients `(a, v)` of a Jacobi matrix, with `a_n > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientVector<S> {
    model: Model,
    a: Vec<S>,
    v: Vec<S>,
}

impl<S: Scalar> CoefficientVector<S> {
    /// Validating constructor. For `Dso` an empty `a` means all ones; for
    /// `Odjm` an empty `v` means all zeros.
    pub fn new(model: Model, a: Vec<S>, v: Vec<S>) -> Result<Self, JacobiError> {
        let (a, v) = match model {
            Model::Dso if a.is_empty() => (vec![S::one(); v.len()], v),
            Model::Odjm if v.is_empty() => (a.clone(), vec![S::zero(); a.len()]),
            _ => (a, v),
        };
        if a.len() != v.len() {
            return Err(JacobiError::LengthMismatch { a: a.len(), v: v.len() });
        }
        if a.is_empty() {
            return Err(JacobiError::Empty);
        }
        for (i, x) in a.iter().chain(v.iter()).enumerate() {
            if !x.is_finite() {
                return Err(JacobiError::NonFinite(i % a.len()));
            }
        }
        for (i, x) in a.iter().enumerate() {
            if !x.is_positive() {
                return Err(JacobiError::NonPositive { index: i, value: x.to_string() });
            }
        }
        match model {
            Model::Dso if a.iter().any(|x| !x.is_one()) => {
                return Err(JacobiError::ModelConstraint("dso requires a = (1, ..., 1)".into()))
            }
            Model::Odjm if v.iter().any(|x| !x.is_zero()) => {
                return Err(JacobiError::ModelConstraint("odjm requires v = (0, ..., 0)".into()))
            }
            _ => {}
        }
        Ok(Self { model, a, v })
    }

    pub fn dso(v: Vec<S>) -> Result<Self, JacobiError> {
        Self::new(Model::Dso, Vec::new(), v)
    }

    pub fn odjm(a: Vec<S>) -> Result<Self, JacobiError> {
        Self::new(Model::Odjm, a, Vec::new())
    }

    pub fn jacobi(a: Vec<S>, v: Vec<S>) -> Result<Self, JacobiError> {
        Self::new(Model::Jac, a, v)
    }

    pub fn model(&self) -> Model {
        self.model
    }
    pub fn period(&self) -> usize {
        self.a.len()
    }
    pub fn a(&self) -> &[S] {
        &self.a
    }
    pub fn v(&self) -> &[S] {
        &self.v
    }
    pub fn backend(&self) -> Backend {
        S::BACKEND
    }

    /// Keeps the current model when still valid, otherwise the most specific one.
    fn rederive(prev: Model, a: Vec<S>, v: Vec<S>) -> Self {
        let ones = a.iter().all(|x| x.is_one());
        let zeros = v.iter().all(|x| x.is_zero());
        let model = match prev {
            Model::Dso if ones => Model::Dso,
            Model::Odjm if zeros => Model::Odjm,
            _ if ones => Model::Dso,
            _ if zeros => Model::Odjm,
            _ => Model::Jac,
        };
        Self { model, a, v }
    }

    /// Rotates both sequences left by `k` (mod p); `k = 1` is `cyc`.
    pub fn cyclic_shift(&self, k: i64) -> Self {
        let p = self.period() as i64;
        let k = k.rem_euclid(p) as usize;
        let mut a = self.a.clone();
        let mut v = self.v.clone();
        a.rotate_left(k);
        v.rotate_left(k);
        Self { model: self.model, a, v }
    }

    /// True iff the p cyclic shifts of `(a, v)` are pairwise distinct.
    /// Equality is exact (bitwise on floats).
    pub fn is_irreducible(&self) -> bool {
        let p = self.period();
        // shifts are distinct iff no proper rotation fixes the vector
        (1..p).filter(|k| p.is_multiple_of(*k)).all(|k| {
            !(0..p).all(|i| self.a[i].same(&self.a[(i + k) % p]) && self.v[i].same(&self.v[(i + k) % p]))
        })
    }

    /// `v -> v + c`.
    pub fn shift_potential(&self, c: &S) -> Self {
        let v = self.v.iter().map(|x| x.clone() + c.clone()).collect();
        Self::rederive(self.model, self.a.clone(), v)
    }

    /// `a -> c a` for `c > 0`.
    pub fn scale_offdiag(&self, c: &S) -> Result<Self, JacobiError> {
        if !c.is_positive() || !c.is_finite() {
            return Err(JacobiError::BadScale(c.to_string()));
        }
        let a = self.a.iter().map(|x| x.clone() * c.clone()).collect();
        Ok(Self::rederive(self.model, a, self.v.clone()))
    }

    /// Concatenation `(self, other)` as one period of length `p + q`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut a = self.a.clone();
        a.extend(other.a.iter().cloned());
        let mut v = self.v.clone();
        v.extend(other.v.iter().cloned());
        let model = if self.model == other.model { self.model } else { Model::Jac };
        Self::rederive(model, a, v)
    }

    /// Repeats the period `k` times (a reducible vector for `k >= 2`).
    pub fn repeat(&self, k: usize) -> Self {
        let a = (0..k).flat_map(|_| self.a.iter().cloned()).collect();
        let v = (0..k).flat_map(|_| self.v.iter().cloned()).collect();
        Self { model: self.model, a, v }
    }

    pub fn to_float(&self) -> CoefficientVector<f64> {
        CoefficientVector {
            model: self.model,
            a: self.a.iter().map(Scalar::as_f64).collect(),
            v: self.v.iter().map(Scalar::as_f64).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "model": self.model,
            "a": self.a.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "v": self.v.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "backend": S::BACKEND,
        })
    }
}

impl<S: Scalar> fmt::Display for CoefficientVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: &[S]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        match self.model {
            Model::Dso => write!(f, "dso v=({})", join(&self.v)),
            Model::Odjm => write!(f, "odjm a=({})", join(&self.a)),
            Model::Jac => write!(f, "jac a=({}) v=({})", join(&self.a), join(&self.v)),
        }
    }
}

/// A vector on either backend, as read from JSON or the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyVector {
    Exact(CoefficientVector<Rational>),
    Float(CoefficientVector<f64>),
}

impl AnyVector {
    pub fn backend(&self) -> Backend {
        match self {
            AnyVector::Exact(_) => Backend::Exact,
            AnyVector::Float(_) => Backend::Float,
        }
    }

    pub fn period(&self) -> usize {
        match self {
            AnyVector::Exact(c) => c.period(),
            AnyVector::Float(c) => c.period(),
        }
    }

    pub fn to_float(&self) -> CoefficientVector<f64> {
        match self {
            AnyVector::Exact(c) => c.to_float(),
            AnyVector::Float(c) => c.clone(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            AnyVector::Exact(c) => c.to_json(),
            AnyVector::Float(c) => c.to_json(),
        }
    }

    /// `{"model": "dso|odjm|jac", "a": [...], "v": [...], "backend": "exact|float"}`.
    /// `a` may be omitted for dso and `v` for odjm; backend defaults to exact
    /// when every entry is a rational literal.
    pub fn from_json(value: &serde_json::Value) -> Result<Self, JacobiError> {
        let obj = value.as_object().ok_or_else(|| JacobiError::Json("expected an object".into()))?;
        let model: Model = obj
            .get("model")
            .and_then(|m| m.as_str())
            .ok_or_else(|| JacobiError::Json("missing \"model\"".into()))?
            .parse()?;
        let list = |key: &str| -> Result<Vec<serde_json::Value>, JacobiError> {
            match obj.get(key) {
                None | Some(serde_json::Value::Null) => Ok(Vec::new()),
                Some(serde_json::Value::Array(xs)) => Ok(xs.clone()),
                Some(_) => Err(JacobiError::Json(format!("\"{key}\" must be an array"))),
            }
        };
        let (a, v) = (list("a")?, list("v")?);
        let backend = match obj.get("backend") {
            None | Some(serde_json::Value::Null) => {
                let all_rational = a.iter().chain(v.iter()).all(|x| Rational::from_json(x).is_ok());
                if all_rational {
                    Backend::Exact
                } else {
                    Backend::Float
                }
            }
            Some(b) => serde_json::from_value(b.clone())
                .map_err(|_| JacobiError::Json(format!("bad backend {b}")))?,
        };
        fn parse<S: Scalar>(xs: &[serde_json::Value]) -> Result<Vec<S>, JacobiError> {
            xs.iter().map(|x| S::from_json(x).map_err(JacobiError::from)).collect()
        }
        Ok(match backend {
            Backend::Exact => AnyVector::Exact(CoefficientVector::new(model, parse(&a)?, parse(&v)?)?),
            Backend::Float => AnyVector::Float(CoefficientVector::new(model, parse(&a)?, parse(&v)?)?),
        })
    }

    /// Builds a vector from textual literals on the requested backend.
    pub fn from_literals(model: Model, a: &[String], v: &[String], backend: Backend) -> Result<Self, JacobiError> {
        fn parse<S: Scalar>(xs: &[String]) -> Result<Vec<S>, JacobiError> {
            xs.iter().map(|x| S::parse_literal(x).map_err(JacobiError::from)).collect()
        }
        Ok(match backend {
            Backend::Exact => AnyVector::Exact(CoefficientVector::new(model, parse(a)?, parse(v)?)?),
            Backend::Float => AnyVector::Float(CoefficientVector::new(model, parse(a)?, parse(v)?)?),
        })
    }
}

/// A 2x2 matrix `[[m11, m12], [m21, m22]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix<S> {
    pub m11: S,
    pub m12: S,
    pub m21: S,
    pub m22: S,
}

impl<S: Scalar> TransferMatrix<S> {
    pub fn new(m11: S, m12: S, m21: S, m22: S) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub fn identity() -> Self {
        Self::new(S::one(), S::zero(), S::zero(), S::one())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let dot = |a: &S, b: &S, c: &S, d: &S| a.clone() * b.clone() + c.clone() * d.clone();
        Self {
            m11: dot(&self.m11, &o.m11, &self.m12, &o.m21),
            m12: dot(&self.m11, &o.m12, &self.m12, &o.m22),
            m21: dot(&self.m21, &o.m11, &self.m22, &o.m21),
            m22: dot(&self.m21, &o.m12, &self.m22, &o.m22),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            self.m11.clone() + o.m11.clone(),
            self.m12.clone() + o.m12.clone(),
            self.m21.clone() + o.m21.clone(),
            self.m22.clone() + o.m22.clone(),
        )
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(
            self.m11.clone() * c.clone(),
            self.m12.clone() * c.clone(),
            self.m21.clone() * c.clone(),
            self.m22.clone() * c.clone(),
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| acc.mul(self))
    }

    pub fn det(&self) -> S {
        self.m11.clone() * self.m22.clone() - self.m12.clone() * self.m21.clone()
    }

    pub fn trace(&self) -> S {
        self.m11.clone() + self.m22.clone()
    }

    /// `max |M - sigma 1|` over the four entries.
    pub fn deviation_from(&self, sigma: i8) -> f64 {
        let s = f64::from(sigma);
        [
            (self.m11.as_f64() - s).abs(),
            self.m12.as_f64().abs(),
            self.m21.as_f64().abs(),
            (self.m22.as_f64() - s).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Exact (or bitwise) equality with `sigma 1`.
    pub fn is_scalar(&self, sigma: i8) -> bool {
        let s = S::from_int(sigma.into());
        self.m11.same(&s) && self.m22.same(&s) && self.m12.is_zero() && self.m21.is_zero()
    }

    pub fn entries(&self) -> [&S; 4] {
        [&self.m11, &self.m12, &self.m21, &self.m22]
    }
}

/// `B(s, t) = (1/s) [[t, -1], [s^2, 0]]`.
pub fn transfer_matrix<S: Scalar>(s: &S, t: &S) -> Result<TransferMatrix<S>, JacobiError> {
    if !s.is_positive() {
        return Err(JacobiError::BadTransfer(s.to_string()));
    }
    let inv = S::one() / s.clone();
    Ok(TransferMatrix::new(
        t.clone() * inv.clone(),
        -inv,
        s.clone(),
        S::zero(),
    ))
}

/// `Phi(E) = B(a_p, E - v_p) ... B(a_1, E - v_1)`.
pub fn monodromy_numeric<S: Scalar>(c: &CoefficientVector<S>, e: &S) -> TransferMatrix<S> {
    c.a.iter().zip(&c.v).fold(TransferMatrix::identity(), |acc, (a, v)| {
        let b = transfer_matrix(a, &(e.clone() - v.clone())).expect("validated a > 0");
        b.mul(&acc)
    })
}

/// `Phi(E)` together with its first two derivatives in `E`.
pub fn monodromy_with_derivatives<S: Scalar>(
    c: &CoefficientVector<S>,
    e: &S,
) -> (TransferMatrix<S>, TransferMatrix<S>, TransferMatrix<S>) {
    let zero = TransferMatrix::new(S::zero(), S::zero(), S::zero(), S::zero());
    let mut x = TransferMatrix::identity();
    let mut dx = zero.clone();
    let mut ddx = zero.clone();
    for (a, v) in c.a.iter().zip(&c.v) {
        let b = transfer_matrix(a, &(e.clone() - v.clone())).expect("validated a > 0");
        let db = TransferMatrix::new(S::one() / a.clone(), S::zero(), S::zero(), S::zero());
        let two = S::from_int(2);
        ddx = db.mul(&dx).scale(&two).add(&b.mul(&ddx));
        dx = db.mul(&x).add(&b.mul(&dx));
        x = b.mul(&x);
    }
    (x, dx, ddx)
}

/// Polynomial lift `P(E) = s Phi(E)` with `s = a_1 ... a_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyPoly<S> {
    pub p11: Polynomial<S>,
    pub p12: Polynomial<S>,
    pub p21: Polynomial<S>,
    pub p22: Polynomial<S>,
    pub s: S,
}

impl<S: Scalar> MonodromyPoly<S> {
    pub fn eval(&self, e: &S) -> TransferMatrix<S> {
        TransferMatrix::new(self.p11.eval(e), self.p12.eval(e), self.p21.eval(e), self.p22.eval(e))
    }

    pub fn det(&self) -> Polynomial<S> {
        &(&self.p11 * &self.p22) - &(&self.p12 * &self.p21)
    }

    pub fn trace(&self) -> Polynomial<S> {
        &self.p11 + &self.p22
    }
}

/// Products of `s_j B(a_j, E - v_j) = [[E - v_j, -1], [a_j^2, 0]]`.
pub fn monodromy_poly<S: Scalar>(c: &CoefficientVector<S>) -> MonodromyPoly<S> {
    let one = Polynomial::constant(S::one());
    let zero = Polynomial::zero();
    let (mut p11, mut p12, mut p21, mut p22) = (one.clone(), zero.clone(), zero, one);
    let mut s = S::one();
    for (a, v) in c.a.iter().zip(&c.v) {
        let t = Polynomial::linear_root(v.clone());
        let a2 = a.clone() * a.clone();
        // [[t, -1], [a2, 0]] * [[p11, p12], [p21, p22]]
        let n11 = &(&t * &p11) - &p21;
        let n12 = &(&t * &p12) - &p22;
        let n21 = p11.scale(&a2);
        let n22 = p12.scale(&a2);
        (p11, p12, p21, p22) = (n11, n12, n21, n22);
        s = s * a.clone();
    }
    MonodromyPoly { p11, p12, p21, p22, s }
}

/// `D(E) = Tr Phi(E) = Tr P(E) / s`.
#[derive(Clone, Debug, PartialEq)]
pub struct Discriminant<S> {
    pub poly: Polynomial<S>,
    pub s: S,
}

impl<S: Scalar> Discriminant<S> {
    pub fn eval(&self, e: &S) -> S {
        self.poly.eval(e)
    }
}

pub fn discriminant<S: Scalar>(c: &CoefficientVector<S>) -> Discriminant<S> {
    let m = monodromy_poly(c);
    let inv = S::one() / m.s.clone();
    Discriminant { poly: m.trace().scale(&inv), s: m.s }
}
