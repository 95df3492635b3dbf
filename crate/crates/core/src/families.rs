//! Explicit closed-gap families and the doubling construction.
//!
//! Each constructor returns the coefficient vector together with the
//! energies and signs where the monodromy is predicted to equal `sign * 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jacobi::{monodromy_numeric, CoefficientVector, JacobiError};
use crate::scalar::{format_rational, Rational, Scalar, ScalarError};
use crate::spectrum::{self, band_function, SpectrumError, SpectrumReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("unknown family {0:?}; known: {known}", known = FamilyId::ALL.iter().map(|f| f.name()).collect::<Vec<_>>().join(", "))]
    Unknown(String),
    #[error("family {family} needs parameter {param:?}")]
    MissingParam { family: FamilyId, param: String },
    #[error("family {family} has no parameter {param:?}")]
    ExtraParam { family: FamilyId, param: String },
    #[error("bad parameter {0:?}; expected name=value")]
    Syntax(String),
    #[error("parameter {param} = {value:?}: {reason}")]
    BadParam { param: String, value: String, reason: String },
    #[error("parameters out of domain for {family}: {reason}")]
    Domain { family: FamilyId, reason: String },
    #[error("the constructed vector {0} is reducible")]
    Reducible(String),
    #[error("{0} has irrational entries for these parameters; use the float backend")]
    Irrational(FamilyId),
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyId {
    DsoP4,
    OdjmP4,
    DsoP5Plus,
    DsoP5Minus,
    OdjmP5,
    DsoP6,
    OdjmP6,
    DsoOddSpike,
    DsoEvenSpike,
    OdjmEvenBalanced,
    #[serde(rename = "odjm-3mod4")]
    Odjm3Mod4,
    #[serde(rename = "odjm-1mod4")]
    Odjm1Mod4,
    DsoP8,
}

impl FamilyId {
    pub const ALL: [FamilyId; 13] = [
        FamilyId::DsoP4,
        FamilyId::OdjmP4,
        FamilyId::DsoP5Plus,
        FamilyId::DsoP5Minus,
        FamilyId::OdjmP5,
        FamilyId::DsoP6,
        FamilyId::OdjmP6,
        FamilyId::DsoOddSpike,
        FamilyId::DsoEvenSpike,
        FamilyId::OdjmEvenBalanced,
        FamilyId::Odjm3Mod4,
        FamilyId::Odjm1Mod4,
        FamilyId::DsoP8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::DsoP4 => "dso-p4",
            FamilyId::OdjmP4 => "odjm-p4",
            FamilyId::DsoP5Plus => "dso-p5-plus",
            FamilyId::DsoP5Minus => "dso-p5-minus",
            FamilyId::OdjmP5 => "odjm-p5",
            FamilyId::DsoP6 => "dso-p6",
            FamilyId::OdjmP6 => "odjm-p6",
            FamilyId::DsoOddSpike => "dso-odd-spike",
            FamilyId::DsoEvenSpike => "dso-even-spike",
            FamilyId::OdjmEvenBalanced => "odjm-even-balanced",
            FamilyId::Odjm3Mod4 => "odjm-3mod4",
            FamilyId::Odjm1Mod4 => "odjm-1mod4",
            FamilyId::DsoP8 => "dso-p8",
        }
    }

    /// Required parameter names. `odjm-even-balanced` also accepts
    /// optional `a1 .. a{p-1}`.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            FamilyId::DsoP4 | FamilyId::DsoP8 => &["lambda"],
            FamilyId::OdjmP4 => &["a1", "a2", "a3"],
            FamilyId::DsoP5Plus | FamilyId::DsoP5Minus => &["lambda", "eta"],
            FamilyId::OdjmP5 | FamilyId::OdjmP6 => &["alpha", "beta"],
            FamilyId::DsoP6 => &["a"],
            FamilyId::DsoOddSpike
            | FamilyId::DsoEvenSpike
            | FamilyId::OdjmEvenBalanced
            | FamilyId::Odjm3Mod4
            | FamilyId::Odjm1Mod4 => &["p"],
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            FamilyId::DsoP4 => "v = (0, lambda, 0, -lambda), lambda != 0; closed gap at 0 (+)",
            FamilyId::OdjmP4 => "a = (a1, a2, a3, a1 a3 / a2); closed gap at 0 (+)",
            FamilyId::DsoP5Plus => {
                "v = (l, e, (l+1)/(le-1), le-1, (e+1)/(le-1)), le != 1; closed gap at 0 (+)"
            }
            FamilyId::DsoP5Minus => {
                "v = (l, e, (l-1)/(le-1), 1-le, (e-1)/(le-1)), le != 1; closed gap at 0 (-)"
            }
            FamilyId::OdjmP5 => {
                "a = (al, be, sqrt((al^2+be^2-1)/(al^2-1)), al be/sqrt((al^2-1)(be^2-1)), sqrt((al^2+be^2-1)/(be^2-1))), \
                 al, be > 1 or al^2 + be^2 < 1; closed gaps at +1 and -1"
            }
            FamilyId::DsoP6 => "v = (a, 0, 0, -a, 0, 0), a != 0; closed gaps at +1 and -1 (+)",
            FamilyId::OdjmP6 => {
                "a = (al, be, sqrt((al^2+be^2-1)/(2al^2-1)), al/sqrt(2al^2-1), be/sqrt(2be^2-1), \
                 sqrt((al^2+be^2-1)/(2be^2-1))), al, be > 1/sqrt(2); closed gaps at 0, +1, -1"
            }
            FamilyId::DsoOddSpike => "v = (1, 1, 1, 0, ..., 0), odd p >= 7; closed gap at 0",
            FamilyId::DsoEvenSpike => "v = (1, 1, 1, -1, -1, -1, 0, ..., 0), even p >= 8; closed gap at 0",
            FamilyId::OdjmEvenBalanced => {
                "even p >= 4, a1 a3 ... a(p-1) = a2 a4 ... ap; closed gap at 0 with sign (-1)^(p/2)"
            }
            FamilyId::Odjm3Mod4 => "a = (1, 1, 1, 1/sqrt2, ..., 1/sqrt2), p = 3 mod 4, p >= 7; closed gaps at +1 and -1",
            FamilyId::Odjm1Mod4 => {
                "a = (2, 3, 2, sqrt(3/2), sqrt(3/2), 1/sqrt2, ..., 1/sqrt2), p = 1 mod 4, p >= 9; closed gaps at +1 and -1"
            }
            FamilyId::DsoP8 => "v = (0, 0, 0, lambda, 0, 0, 0, -lambda), lambda != 0; closed gaps at 0, +-sqrt2",
        }
    }

    /// Parameters used when none are given.
    pub fn default_params(self) -> &'static str {
        match self {
            FamilyId::DsoP4 => "lambda=5",
            FamilyId::OdjmP4 => "a1=1,a2=2,a3=2",
            FamilyId::DsoP5Plus => "lambda=2,eta=3",
            FamilyId::DsoP5Minus => "lambda=0,eta=0",
            FamilyId::OdjmP5 => "alpha=2,beta=2",
            FamilyId::DsoP6 => "a=1",
            FamilyId::OdjmP6 => "alpha=1,beta=2",
            FamilyId::DsoOddSpike => "p=7",
            FamilyId::DsoEvenSpike => "p=8",
            FamilyId::OdjmEvenBalanced => "p=8",
            FamilyId::Odjm3Mod4 => "p=7",
            FamilyId::Odjm1Mod4 => "p=9",
            FamilyId::DsoP8 => "lambda=1",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = FamilyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyId::ALL
            .into_iter()
            .find(|f| f.name() == s.trim())
            .ok_or_else(|| FamilyError::Unknown(s.to_string()))
    }
}

/// A family id with named parameter literals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub id: FamilyId,
    pub params: BTreeMap<String, String>,
}

impl FamilySpec {
    /// Parses `"name=value,name=value"`; an empty string selects the defaults.
    pub fn parse(id: FamilyId, params: &str) -> Result<Self, FamilyError> {
        let src = if params.trim().is_empty() { id.default_params() } else { params };
        let mut map = BTreeMap::new();
        for item in src.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| FamilyError::Syntax(item.to_string()))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Self { id, params: map })
    }

    pub fn new(id: FamilyId, params: &[(&str, String)]) -> Self {
        Self { id, params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect() }
    }

    fn get<S: Scalar>(&self, name: &str) -> Result<S, FamilyError> {
        let raw = self.params.get(name).ok_or_else(|| FamilyError::MissingParam {
            family: self.id,
            param: name.to_string(),
        })?;
        S::parse_literal(raw).map_err(|e| FamilyError::BadParam {
            param: name.to_string(),
            value: raw.clone(),
            reason: e.to_string(),
        })
    }

    fn period(&self) -> Result<usize, FamilyError> {
        let raw = self.params.get("p").ok_or_else(|| FamilyError::MissingParam {
            family: self.id,
            param: "p".into(),
        })?;
        raw.parse().map_err(|_| FamilyError::BadParam {
            param: "p".into(),
            value: raw.clone(),
            reason: "expected a positive integer".into(),
        })
    }

    fn check_names(&self, extra_ok: impl Fn(&str) -> bool) -> Result<(), FamilyError> {
        for k in self.params.keys() {
            if !self.id.params().contains(&k.as_str()) && !extra_ok(k) {
                return Err(FamilyError::ExtraParam { family: self.id, param: k.clone() });
            }
        }
        Ok(())
    }

    fn domain(&self, reason: impl Into<String>) -> FamilyError {
        FamilyError::Domain { family: self.id, reason: reason.into() }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}({})", self.id, ps.join(","))
    }
}

/// A predicted closed gap: `Phi(energy) = sign * 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub energy: f64,
    pub sign: i8,
    /// Exact literal when the energy is rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

impl Prediction {
    fn rational(n: i64, sign: i8) -> Self {
        Self { energy: n as f64, sign, exact: Some(n.to_string()) }
    }
    fn real(energy: f64, sign: i8) -> Self {
        Self { energy, sign, exact: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyInstance<S> {
    /// `None` for the doubling construction.
    pub spec: Option<FamilySpec>,
    pub vector: CoefficientVector<S>,
    pub predicted: Vec<Prediction>,
}

/// Outcome of matching predictions against a spectrum report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictionCheck {
    pub certified: Vec<bool>,
    pub all_certified: bool,
    pub certified_count: usize,
}

impl<S: Scalar> FamilyInstance<S> {
    /// Each prediction must have a certificate with the same sign within `tol`.
    pub fn check(&self, report: &SpectrumReport, tol: f64) -> PredictionCheck {
        let certified: Vec<bool> = self
            .predicted
            .iter()
            .map(|p| {
                report
                    .closed_gaps
                    .iter()
                    .any(|c| c.sign == p.sign && (c.energy - p.energy).abs() <= tol)
            })
            .collect();
        let certified_count = certified.iter().filter(|&&b| b).count();
        PredictionCheck { all_certified: certified_count == certified.len(), certified, certified_count }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "family": self.spec.as_ref().map(|s| s.id.name()),
            "params": self.spec.as_ref().map(|s| &s.params),
            "vector": self.vector.to_json(),
            "predicted": self.predicted,
        })
    }
}

fn sqrt_of<S: Scalar>(x: S, id: FamilyId) -> Result<S, FamilyError> {
    if !x.is_positive() {
        return Err(FamilyError::Domain { family: id, reason: format!("square root of {x}") });
    }
    x.sqrt_checked().ok_or(FamilyError::Irrational(id))
}

/// `1/sqrt(2)`, irrational on the exact backend.
fn inv_sqrt2<S: Scalar>(id: FamilyId) -> Result<S, FamilyError> {
    sqrt_of(S::from_ratio(1, 2), id)
}

/// Sign `s` with `Phi(0) = s 1` for an integer potential, from the exact product.
fn exact_sign_at_zero(v: &[i64]) -> i8 {
    let c = CoefficientVector::dso(v.iter().map(|&x| Rational::from_int(x)).collect()).expect("valid");
    let m = monodromy_numeric(&c, &Rational::from_int(0));
    if m.is_scalar(1) {
        1
    } else if m.is_scalar(-1) {
        -1
    } else {
        0
    }
}

fn pm(p: usize) -> i8 {
    if p.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Builds a family instance on backend `S`.
pub fn make_family<S: Scalar>(spec: &FamilySpec) -> Result<FamilyInstance<S>, FamilyError> {
    use FamilyId::*;
    let id = spec.id;
    let int = S::from_int;
    let (vector, predicted) = match id {
        DsoP4 | DsoP8 => {
            spec.check_names(|_| false)?;
            let l: S = spec.get("lambda")?;
            if l.is_zero() {
                return Err(spec.domain("lambda must be nonzero"));
            }
            if id == DsoP4 {
                let v = vec![int(0), l.clone(), int(0), -l];
                (CoefficientVector::dso(v)?, vec![Prediction::rational(0, 1)])
            } else {
                let mut v = vec![int(0); 8];
                v[3] = l.clone();
                v[7] = -l;
                let s2 = 2f64.sqrt();
                let pred = vec![Prediction::real(-s2, 1), Prediction::rational(0, 1), Prediction::real(s2, 1)];
                (CoefficientVector::dso(v)?, pred)
            }
        }
        OdjmP4 => {
            spec.check_names(|_| false)?;
            let (a1, a2, a3): (S, S, S) = (spec.get("a1")?, spec.get("a2")?, spec.get("a3")?);
            if !(a1.is_positive() && a2.is_positive() && a3.is_positive()) {
                return Err(spec.domain("a1, a2, a3 must be positive"));
            }
            let a4 = a1.clone() * a3.clone() / a2.clone();
            (CoefficientVector::odjm(vec![a1, a2, a3, a4])?, vec![Prediction::rational(0, 1)])
        }
        DsoP5Plus | DsoP5Minus => {
            spec.check_names(|_| false)?;
            let (l, e): (S, S) = (spec.get("lambda")?, spec.get("eta")?);
            let den = l.clone() * e.clone() - int(1);
            if den.is_zero() {
                return Err(spec.domain("lambda * eta = 1 is excluded"));
            }
            let (sgn, s) = if id == DsoP5Plus { (1, int(1)) } else { (-1, int(-1)) };
            let v = vec![
                l.clone(),
                e.clone(),
                (l + s.clone()) / den.clone(),
                den.clone() * s.clone(),
                (e + s) / den,
            ];
            (CoefficientVector::dso(v)?, vec![Prediction::rational(0, sgn)])
        }
        OdjmP5 => {
            spec.check_names(|_| false)?;
            let (al, be): (S, S) = (spec.get("alpha")?, spec.get("beta")?);
            let (a2, b2) = (al.clone() * al.clone(), be.clone() * be.clone());
            let one = int(1);
            let inner = a2 > one && b2 > one;
            let outer = a2.clone() + b2.clone() < one;
            if !(al.is_positive() && be.is_positive() && (inner || outer)) {
                return Err(spec.domain("need alpha, beta > 1 or alpha^2 + beta^2 < 1 (both positive)"));
            }
            let num = a2.clone() + b2.clone() - one.clone();
            let a3 = sqrt_of(num.clone() / (a2.clone() - one.clone()), id)?;
            let a4 = al.clone() * be.clone()
                / sqrt_of((a2.clone() - one.clone()) * (b2.clone() - one.clone()), id)?;
            let a5 = sqrt_of(num / (b2 - one), id)?;
            let s = if inner { 1 } else { -1 };
            let pred = vec![Prediction::rational(-1, -s), Prediction::rational(1, s)];
            (CoefficientVector::odjm(vec![al, be, a3, a4, a5])?, pred)
        }
        DsoP6 => {
            spec.check_names(|_| false)?;
            let a: S = spec.get("a")?;
            if a.is_zero() {
                return Err(spec.domain("a must be nonzero"));
            }
            let v = vec![a.clone(), int(0), int(0), -a, int(0), int(0)];
            (CoefficientVector::dso(v)?, vec![Prediction::rational(-1, 1), Prediction::rational(1, 1)])
        }
        OdjmP6 => {
            spec.check_names(|_| false)?;
            let (al, be): (S, S) = (spec.get("alpha")?, spec.get("beta")?);
            let (a2, b2) = (al.clone() * al.clone(), be.clone() * be.clone());
            let (one, two) = (int(1), int(2));
            if !(al.is_positive() && be.is_positive() && two.clone() * a2.clone() > one && two.clone() * b2.clone() > one) {
                return Err(spec.domain("need alpha, beta > 1/sqrt(2)"));
            }
            let num = a2.clone() + b2.clone() - one.clone();
            let da = two.clone() * a2 - one.clone();
            let db = two * b2 - one;
            let a3 = sqrt_of(num.clone() / da.clone(), id)?;
            let a4 = al.clone() / sqrt_of(da, id)?;
            let a5 = be.clone() / sqrt_of(db.clone(), id)?;
            let a6 = sqrt_of(num / db, id)?;
            let pred = vec![Prediction::rational(-1, 1), Prediction::rational(0, pm(3)), Prediction::rational(1, 1)];
            (CoefficientVector::odjm(vec![al, be, a3, a4, a5, a6])?, pred)
        }
        DsoOddSpike | DsoEvenSpike => {
            spec.check_names(|_| false)?;
            let p = spec.period()?;
            let odd = id == DsoOddSpike;
            if p < 7 || (p % 2 == 1) != odd {
                return Err(spec.domain(if odd { "p must be odd and >= 7" } else { "p must be even and >= 8" }));
            }
            let mut v = vec![0i64; p];
            v[..3].fill(1);
            if !odd {
                v[3..6].fill(-1);
            }
            let sign = exact_sign_at_zero(&v);
            let c = CoefficientVector::dso(v.iter().map(|&x| int(x)).collect())?;
            (c, vec![Prediction::rational(0, sign)])
        }
        OdjmEvenBalanced => {
            let p = spec.period()?;
            if p < 4 || p % 2 == 1 {
                return Err(spec.domain("p must be even and >= 4"));
            }
            let free: Vec<String> = (1..p).map(|j| format!("a{j}")).collect();
            spec.check_names(|k| free.iter().any(|f| f == k))?;
            let mut a = Vec::with_capacity(p);
            for (j, name) in free.iter().enumerate() {
                let x: S = if spec.params.contains_key(name) { spec.get(name)? } else { int(j as i64 + 1) };
                if !x.is_positive() {
                    return Err(spec.domain(format!("{name} must be positive")));
                }
                a.push(x);
            }
            let odd: S = a.iter().step_by(2).fold(int(1), |acc, x| acc * x.clone());
            let even: S = a.iter().skip(1).step_by(2).fold(int(1), |acc, x| acc * x.clone());
            a.push(odd / even);
            let sign = pm(p / 2);
            (CoefficientVector::odjm(a)?, vec![Prediction::rational(0, sign)])
        }
        Odjm3Mod4 | Odjm1Mod4 => {
            spec.check_names(|_| false)?;
            let p = spec.period()?;
            let (r, min) = if id == Odjm3Mod4 { (3, 7) } else { (1, 9) };
            if p < min || p % 4 != r {
                return Err(spec.domain(format!("p must be {r} mod 4 and >= {min}")));
            }
            let s: S = inv_sqrt2(id)?;
            let (mut a, sign) = if id == Odjm3Mod4 {
                (vec![int(1), int(1), int(1)], if ((p + 1) / 4) % 2 == 0 { 1 } else { -1 })
            } else {
                let r32 = sqrt_of(S::from_ratio(3, 2), id)?;
                (vec![int(2), int(3), int(2), r32.clone(), r32], if ((p - 5) / 4) % 2 == 0 { 1 } else { -1 })
            };
            while a.len() < p {
                a.push(s.clone());
            }
            // odd period: the sign at -1 is opposite to the sign at +1
            (CoefficientVector::odjm(a)?, vec![Prediction::rational(-1, -sign), Prediction::rational(1, sign)])
        }
    };
    if !vector.is_irreducible() {
        return Err(FamilyError::Reducible(vector.to_string()));
    }
    Ok(FamilyInstance { spec: Some(spec.clone()), vector, predicted })
}

/// Doubling: `w = v ... v cyc(v) ... cyc(v)` with `k` copies of each. The
/// base's closed gaps stay closed and every solution of
/// `D_v(E) = 2 cos(pi j / k)`, `1 <= j < k`, becomes one with `Phi_w(E) = 1`.
pub fn double_construct<S: Scalar>(base: &CoefficientVector<S>, k: usize) -> Result<FamilyInstance<S>, FamilyError> {
    if k < 2 {
        return Err(FamilyError::BadParam {
            param: "k".into(),
            value: k.to_string(),
            reason: "need k >= 2".into(),
        });
    }
    if !base.is_irreducible() {
        return Err(FamilyError::Reducible(base.to_string()));
    }
    let w = base.repeat(k).concat(&base.cyclic_shift(1).repeat(k));
    if !w.is_irreducible() {
        return Err(FamilyError::Reducible(w.to_string()));
    }
    let report = spectrum::band_structure(base)?;
    let mut predicted: Vec<Prediction> = report
        .closed_gaps
        .iter()
        .map(|c| Prediction { energy: c.energy, sign: 1, exact: c.exact_value().map(str::to_string) })
        .collect();
    for j in 1..k {
        for e in band_function(base, j as f64 / (2 * k) as f64)? {
            predicted.push(Prediction::real(e, 1));
        }
    }
    predicted.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    Ok(FamilyInstance { spec: None, vector: w, predicted })
}

/// Random in-domain parameters with small-denominator rational values, so
/// rational families stay exact.
pub fn sample_spec<R: Rng + ?Sized>(id: FamilyId, rng: &mut R) -> FamilySpec {
    use FamilyId::*;
    fn q<R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Rational {
        Rational::from_ratio(rng.random_range(lo * den..=hi * den), den)
    }
    let lit = |r: &Rational| format_rational(r);
    let nonzero = |rng: &mut R| loop {
        let x = q(rng, -4, 4, 4);
        if x != Rational::from_int(0) {
            break x;
        }
    };
    match id {
        DsoP4 | DsoP8 => FamilySpec::new(id, &[("lambda", lit(&nonzero(rng)))]),
        DsoP6 => FamilySpec::new(id, &[("a", lit(&nonzero(rng)))]),
        OdjmP4 => loop {
            let (a1, a2, a3) = (q(rng, 1, 4, 3), q(rng, 1, 4, 3), q(rng, 1, 4, 3));
            if a1 != a3 || a2 != &a1 * &a3 / &a2 {
                break FamilySpec::new(id, &[("a1", lit(&a1)), ("a2", lit(&a2)), ("a3", lit(&a3))]);
            }
        },
        DsoP5Plus | DsoP5Minus => loop {
            let (l, e) = (q(rng, -3, 3, 3), q(rng, -3, 3, 3));
            // lambda = eta gives reducible or constant vectors in some cases
            if &l * &e != Rational::from_int(1) && l != e {
                break FamilySpec::new(id, &[("lambda", lit(&l)), ("eta", lit(&e))]);
            }
        },
        OdjmP5 => {
            let inner = rng.random_bool(0.5);
            loop {
                let (al, be) = if inner {
                    (q(rng, 1, 3, 4), q(rng, 1, 3, 4))
                } else {
                    (q(rng, 0, 1, 5), q(rng, 0, 1, 5))
                };
                let one = Rational::from_int(1);
                let ok = if inner {
                    al > one && be > one
                } else {
                    al > Rational::from_int(0) && be > Rational::from_int(0) && &al * &al + &be * &be < one
                };
                if ok && al != be {
                    break FamilySpec::new(id, &[("alpha", lit(&al)), ("beta", lit(&be))]);
                }
            }
        }
        OdjmP6 => loop {
            let (al, be) = (q(rng, 1, 3, 4), q(rng, 1, 3, 4));
            if al != be {
                break FamilySpec::new(id, &[("alpha", lit(&al)), ("beta", lit(&be))]);
            }
        },
        DsoOddSpike => FamilySpec::new(id, &[("p", (7 + 2 * rng.random_range(0..4usize)).to_string())]),
        DsoEvenSpike => FamilySpec::new(id, &[("p", (8 + 2 * rng.random_range(0..3usize)).to_string())]),
        Odjm3Mod4 => FamilySpec::new(id, &[("p", (7 + 4 * rng.random_range(0..3usize)).to_string())]),
        Odjm1Mod4 => FamilySpec::new(id, &[("p", (9 + 4 * rng.random_range(0..2usize)).to_string())]),
        OdjmEvenBalanced => {
            let p = 4 + 2 * rng.random_range(0..3usize);
            let mut params = vec![("p", p.to_string())];
            let names: Vec<String> = (1..p).map(|j| format!("a{j}")).collect();
            for name in &names {
                params.push((name.as_str(), lit(&q(rng, 1, 4, 3))));
            }
            FamilySpec::new(id, &params)
        }
    }
}

/// True when the family's entries are rational for every in-domain choice.
pub fn always_rational(id: FamilyId) -> bool {
    !matches!(id, FamilyId::OdjmP5 | FamilyId::OdjmP6 | FamilyId::Odjm3Mod4 | FamilyId::Odjm1Mod4)
}

/// Predictions paired with the spectrum of the instance, certified exactly
/// when the backend is exact.
pub fn analyze<S: Scalar>(inst: &FamilyInstance<S>) -> Result<(SpectrumReport, PredictionCheck), FamilyError> {
    let report = spectrum::band_structure(&inst.vector)?;
    let check = inst.check(&report, 1e-8);
    Ok((report, check))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn exact(id: FamilyId, params: &str) -> Result<FamilyInstance<Rational>, FamilyError> {
        make_family(&FamilySpec::parse(id, params).unwrap())
    }

    fn float(id: FamilyId, params: &str) -> Result<FamilyInstance<f64>, FamilyError> {
        make_family(&FamilySpec::parse(id, params).unwrap())
    }

    #[test]
    fn registry_round_trip() {
        for id in FamilyId::ALL {
            assert_eq!(id.name().parse::<FamilyId>().unwrap(), id);
            let json = serde_json::to_value(id).unwrap();
            assert_eq!(json, id.name());
        }
        assert!("nope".parse::<FamilyId>().is_err());
    }

    #[test]
    fn dso_p4_and_p5_vectors() {
        let f = exact(FamilyId::DsoP4, "lambda=5").unwrap();
        assert_eq!(f.vector.v(), &[q(0, 1), q(5, 1), q(0, 1), q(-5, 1)]);
        assert_eq!(f.predicted, vec![Prediction::rational(0, 1)]);
        let f = exact(FamilyId::DsoP5Plus, "lambda=2,eta=3").unwrap();
        assert_eq!(f.vector.v(), &[q(2, 1), q(3, 1), q(3, 5), q(5, 1), q(4, 5)]);
        let f = exact(FamilyId::DsoP5Minus, "lambda=0,eta=0").unwrap();
        assert_eq!(f.vector.v(), &[q(0, 1), q(0, 1), q(1, 1), q(1, 1), q(1, 1)]);
        assert!(matches!(exact(FamilyId::DsoP5Plus, "lambda=1,eta=1"), Err(FamilyError::Domain { .. })));
        assert!(matches!(exact(FamilyId::DsoP4, "lambda=0"), Err(FamilyError::Domain { .. })));
    }

    #[test]
    fn golden_ratio_gives_constant_potential() {
        let phi = (5f64.sqrt() + 1.0) / 2.0;
        let r = float(FamilyId::DsoP5Plus, &format!("lambda={phi},eta={phi}"));
        assert!(matches!(r, Err(FamilyError::Reducible(_))));
    }

    #[test]
    fn dso_p5_recurrence() {
        // v_{j+1} = f(v_{j-1}, v_j) with f(x, y) = (x + 1)/(xy - 1), cyclically
        let f = exact(FamilyId::DsoP5Plus, "lambda=2/3,eta=-5/2").unwrap();
        let v = f.vector.v();
        for j in 0..5 {
            let (x, y) = (&v[j], &v[(j + 1) % 5]);
            let den = x * y - q(1, 1);
            assert_eq!((x + q(1, 1)) / den, v[(j + 2) % 5]);
        }
    }

    #[test]
    fn odjm_families_need_float_when_irrational() {
        assert!(matches!(exact(FamilyId::OdjmP5, "alpha=2,beta=2"), Err(FamilyError::Irrational(_))));
        let f = float(FamilyId::OdjmP5, "alpha=2,beta=2").unwrap();
        let r73 = (7.0f64 / 3.0).sqrt();
        let want = [2.0, 2.0, r73, 4.0 / 3.0, r73];
        assert!(f.vector.a().iter().zip(want).all(|(x, y)| (x - y).abs() < 1e-15));
        assert!(matches!(float(FamilyId::OdjmP5, "alpha=1/2,beta=2"), Err(FamilyError::Domain { .. })));
        let f = float(FamilyId::OdjmP6, "alpha=1,beta=2").unwrap();
        let s = 2.0 / 7f64.sqrt();
        let want = [1.0, 2.0, 2.0, 1.0, s, s];
        assert!(f.vector.a().iter().zip(want).all(|(x, y)| (x - y).abs() < 1e-15));
    }

    #[test]
    fn spike_signs_match_products() {
        let want = [(7, 1), (9, -1), (11, 1), (13, -1)];
        for (p, s) in want {
            let f = exact(FamilyId::DsoOddSpike, &format!("p={p}")).unwrap();
            assert_eq!(f.predicted[0].sign, s, "p={p}");
        }
        for (p, s) in [(8, 1), (10, -1), (12, 1)] {
            let f = exact(FamilyId::DsoEvenSpike, &format!("p={p}")).unwrap();
            assert_eq!(f.predicted[0].sign, s, "p={p}");
        }
        assert!(exact(FamilyId::DsoOddSpike, "p=8").is_err());
        assert!(exact(FamilyId::DsoEvenSpike, "p=6").is_err());
    }

    #[test]
    fn every_family_default_is_certified() {
        for id in FamilyId::ALL {
            let f = float(id, "").unwrap();
            let (_, check) = analyze(&f).unwrap();
            assert!(check.all_certified, "{id}: {:?}", f.predicted);
            if always_rational(id) {
                let f = exact(id, "").unwrap();
                let (_, check) = analyze(&f).unwrap();
                assert!(check.all_certified, "{id} exact");
            }
        }
    }

    #[test]
    fn random_specs_are_in_domain() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for id in FamilyId::ALL {
            for _ in 0..5 {
                let spec = sample_spec(id, &mut rng);
                let f: FamilyInstance<f64> = make_family(&spec).unwrap();
                assert!(f.vector.is_irreducible(), "{spec}");
            }
        }
    }

    #[test]
    fn doubling_small_base() {
        let base = CoefficientVector::dso(vec![q(0, 1), q(2, 1)]).unwrap();
        let w = double_construct(&base, 2).unwrap();
        let v: Vec<i64> = vec![0, 2, 0, 2, 2, 0, 2, 0];
        assert_eq!(w.vector.v(), v.iter().map(|&x| q(x, 1)).collect::<Vec<_>>().as_slice());
        let e: Vec<f64> = w.predicted.iter().map(|p| p.energy).collect();
        let s3 = 3f64.sqrt();
        assert!((e[0] - (1.0 - s3)).abs() < 1e-12 && (e[1] - (1.0 + s3)).abs() < 1e-12);
        let (report, check) = analyze(&w).unwrap();
        assert!(check.all_certified);
        assert!(report.closed_gap_count >= 2);
        assert!(double_construct(&CoefficientVector::dso(vec![q(1, 1), q(1, 1)]).unwrap(), 2).is_err());
    }
}
