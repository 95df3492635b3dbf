//! Bands, gaps and closed-gap certificates.
//!
//! The spectrum is `{E : -2 <= D(E) <= 2}` where `D` is the discriminant.
//! Band edges are the roots of `D - 2` and `D + 2`; a closed gap is a double
//! root, which happens exactly when the monodromy equals `+1` or `-1`.

mod exact;
mod float;
mod floquet;

use std::any::Any;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jacobi::{discriminant, CoefficientVector, JacobiError, Model};
use crate::poly::PolyError;
use crate::scalar::{Backend, Rational, Scalar};

pub use exact::{closed_gap_count_exact, closed_gap_polynomials};
pub use float::{band_function, critical_points};
pub use floquet::{floquet_crosscheck, floquet_eigenvalues};

/// Tolerances for the float path.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    /// Absolute tolerance on band edges.
    pub edge_tol: f64,
    /// Residual bound `max |Phi(E) - sigma 1| <= closed_tol` for a float certificate.
    pub closed_tol: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { edge_tol: 1e-12, closed_tol: 1e-8 }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error(transparent)]
    Jacobi(#[from] JacobiError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("root count inconsistency: expected {expected} band edges, found {found}")]
    RootCount { expected: usize, found: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("operation needs an off-diagonal (odjm) vector, got {0}")]
    NotOdjm(Model),
    #[error("operation needs the {0} backend")]
    Backend(Backend),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub index: usize,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapStatus {
    Open,
    Closed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapRecord {
    pub index: usize,
    pub lo: f64,
    pub hi: f64,
    pub status: GapStatus,
}

/// Exact description of a closed-gap energy: a square-free rational factor
/// with exactly one root in `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactEnergy {
    /// Coefficients of the factor, low degree first, as `"n"` or `"n/d"`.
    pub factor: Vec<String>,
    pub lo: String,
    pub hi: String,
    /// Present when the energy is rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

/// Evidence that `Phi(energy) = sign * 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedGapCertificate {
    pub energy: f64,
    pub sign: i8,
    /// `max |Phi(E) - sign 1|` on the float path; zero on the exact path.
    pub residual: f64,
    /// The gap lies between bands `gap_index` and `gap_index + 1`.
    pub gap_index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactEnergy>,
}

impl ClosedGapCertificate {
    /// The exact energy literal when rational.
    pub fn exact_value(&self) -> Option<&str> {
        self.exact.as_ref().and_then(|e| e.value.as_deref())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub period: usize,
    pub backend: Backend,
    pub bands: Vec<Band>,
    pub gaps: Vec<GapRecord>,
    pub closed_gaps: Vec<ClosedGapCertificate>,
    #[serde(rename = "g")]
    pub closed_gap_count: usize,
}

impl SpectrumReport {
    pub(crate) fn from_edges(
        backend: Backend,
        edges: &[f64],
        mut closed_gaps: Vec<ClosedGapCertificate>,
    ) -> Self {
        let p = edges.len() / 2;
        let bands = (0..p)
            .map(|j| Band { index: j + 1, lo: edges[2 * j], hi: edges[2 * j + 1] })
            .collect();
        closed_gaps.sort_by(|x, y| x.energy.total_cmp(&y.energy));
        let gaps = (1..p)
            .map(|j| {
                let closed = closed_gaps.iter().any(|c| c.gap_index == j);
                GapRecord {
                    index: j,
                    lo: edges[2 * j - 1],
                    hi: edges[2 * j],
                    status: if closed { GapStatus::Closed } else { GapStatus::Open },
                }
            })
            .collect();
        SpectrumReport {
            period: p,
            backend,
            bands,
            gaps,
            closed_gap_count: closed_gaps.len(),
            closed_gaps,
        }
    }

    pub fn energies(&self) -> Vec<f64> {
        self.closed_gaps.iter().map(|c| c.energy).collect()
    }

    /// All `2p` edges in increasing order.
    pub fn edges(&self) -> Vec<f64> {
        self.bands.iter().flat_map(|b| [b.lo, b.hi]).collect()
    }
}

fn as_exact<S: Scalar>(c: &CoefficientVector<S>) -> Option<&CoefficientVector<Rational>> {
    (c as &dyn Any).downcast_ref::<CoefficientVector<Rational>>()
}

/// Band/gap structure on the vector's own backend.
pub fn band_structure<S: Scalar>(c: &CoefficientVector<S>) -> Result<SpectrumReport, SpectrumError> {
    band_structure_with(c, &SpectrumOptions::default())
}

pub fn band_structure_with<S: Scalar>(
    c: &CoefficientVector<S>,
    opts: &SpectrumOptions,
) -> Result<SpectrumReport, SpectrumError> {
    match as_exact(c) {
        Some(q) => exact::band_structure_exact(q),
        None => float::band_structure_float(&c.to_float(), opts),
    }
}

/// Closed gaps from `gcd(P12, P21, P11 - s, P22 - s)` and its `-` twin.
pub fn closed_gaps_exact(c: &CoefficientVector<Rational>) -> Result<Vec<ClosedGapCertificate>, SpectrumError> {
    Ok(exact::band_structure_exact(c)?.closed_gaps)
}

/// Closed gaps certified by the residual `max |Phi(E) - sigma 1| <= tol`.
pub fn closed_gaps_float<S: Scalar>(
    c: &CoefficientVector<S>,
    tol: f64,
) -> Result<Vec<ClosedGapCertificate>, SpectrumError> {
    let opts = SpectrumOptions { closed_tol: tol, ..SpectrumOptions::default() };
    Ok(float::band_structure_float(&c.to_float(), &opts)?.closed_gaps)
}

/// Number of closed gaps, on the vector's own backend.
pub fn closed_gap_count<S: Scalar>(c: &CoefficientVector<S>, tol: f64) -> Result<usize, SpectrumError> {
    match as_exact(c) {
        Some(q) => closed_gap_count_exact(q),
        None => Ok(closed_gaps_float(c, tol)?.len()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroStatus {
    BandInterior,
    OpenGap,
    ClosedGap,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReflectionReport {
    pub symmetric: bool,
    pub zero_status: ZeroStatus,
}

/// Symmetry of an off-diagonal spectrum under `E -> -E` and the position
/// of `E = 0`.
pub fn reflection_report<S: Scalar>(c: &CoefficientVector<S>) -> Result<ReflectionReport, SpectrumError> {
    if c.model() != Model::Odjm {
        return Err(SpectrumError::NotOdjm(c.model()));
    }
    let report = band_structure(c)?;
    let symmetric = match as_exact(c) {
        Some(q) => {
            let d = discriminant(q).poly;
            let r = d.reflect();
            if q.period() % 2 == 0 {
                r == d
            } else {
                r == -&d
            }
        }
        None => {
            let e = report.edges();
            let scale = 1.0 + e.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            e.iter().zip(e.iter().rev()).all(|(x, y)| (x + y).abs() <= 1e-9 * scale)
        }
    };
    let at_zero = report.closed_gaps.iter().any(|g| match &g.exact {
        Some(x) => x.value.as_deref() == Some("0"),
        None => g.energy.abs() <= 1e-9,
    });
    let zero_status = if at_zero {
        ZeroStatus::ClosedGap
    } else if report.bands.iter().any(|b| b.lo < 0.0 && 0.0 < b.hi) {
        ZeroStatus::BandInterior
    } else {
        ZeroStatus::OpenGap
    };
    Ok(ReflectionReport { symmetric, zero_status })
}

#[cfg(test)]
mod tests;
