use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{ClosedGapCertificate, ExactEnergy, SpectrumError, SpectrumReport};
use crate::jacobi::{discriminant, monodromy_poly, CoefficientVector};
use crate::poly::exact::{dyadic_bisect, integer_primitive_part};
use crate::poly::{Polynomial, RootBracket};
use crate::scalar::{format_rational, Backend, Rational, Scalar};

type Q = Polynomial<Rational>;

/// Bisection stops once brackets are `2^-EDGE_BITS` wide.
const EDGE_BITS: u32 = 64;

/// `(G_+, G_-)`: the real roots of `G_sigma` are exactly the energies with
/// `Phi(E) = sigma 1`. Both are monic.
pub fn closed_gap_polynomials(c: &CoefficientVector<Rational>) -> Result<(Q, Q), SpectrumError> {
    let m = monodromy_poly(c);
    let g = |sigma: i64| -> Result<Q, SpectrumError> {
        let shift = Polynomial::constant(m.s.clone() * Rational::from_int(sigma));
        let mut acc = m.p12.gcd(&m.p21)?;
        for q in [&m.p11 - &shift, &m.p22 - &shift] {
            if acc.degree() == Some(0) {
                break;
            }
            acc = acc.gcd(&q)?;
        }
        Ok(acc)
    };
    Ok((g(1)?, g(-1)?))
}

/// Closed-gap count without band edges: real roots of `G_+` and `G_-`.
pub fn closed_gap_count_exact(c: &CoefficientVector<Rational>) -> Result<usize, SpectrumError> {
    let (gp, gm) = closed_gap_polynomials(c)?;
    let mut n = 0;
    for g in [gp, gm] {
        if g.degree().unwrap_or(0) > 0 {
            n += g.isolate_real_roots()?.len();
        }
    }
    Ok(n)
}

fn sign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Narrows an isolating bracket of the square-free `sq` by bisection.
/// Returns `(lo, hi, exact_hit)`.
fn narrow(sq: &Q, b: &RootBracket<Rational>, bits: u32) -> (Rational, Rational, Option<Rational>) {
    if sq.eval(&b.hi).is_zero() {
        return (b.lo.clone(), b.hi.clone(), Some(b.hi.clone()));
    }
    narrow_dyadic(sq, b, bits).unwrap_or_else(|| {
        let width = Rational::new(One::one(), BigInt::one() << bits);
        narrow_rational(sq, b, &width)
    })
}

fn narrow_dyadic(sq: &Q, b: &RootBracket<Rational>, bits: u32) -> Option<(Rational, Rational, Option<Rational>)> {
    let d = dyadic_bisect(&integer_primitive_part(sq), b, bits)?;
    Some((d.at(&d.lo), d.at(&d.hi), d.hit.as_ref().map(|m| d.at(m))))
}

fn narrow_rational(sq: &Q, b: &RootBracket<Rational>, width: &Rational) -> (Rational, Rational, Option<Rational>) {
    let (mut lo, mut hi) = (b.lo.clone(), b.hi.clone());
    let s_lo = sign(&sq.eval(&lo));
    let two = Rational::from_int(2);
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / &two;
        let s = sign(&sq.eval(&mid));
        if s == 0 {
            return (lo, hi, Some(mid));
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi, None)
}

struct EdgeRoot {
    bracket: RootBracket<Rational>,
    value: f64,
    /// `+1` for a root of `D - 2`, `-1` for `D + 2`.
    sigma: i8,
    closed: bool,
}

pub(super) fn band_structure_exact(c: &CoefficientVector<Rational>) -> Result<SpectrumReport, SpectrumError> {
    let p = c.period();
    let d = discriminant(c).poly;
    let two = Polynomial::constant(Rational::from_int(2));
    let dm = (&d - &two).squarefree_part()?;
    let dp = (&d + &two).squarefree_part()?;
    let all = (&dm * &dp).squarefree_part()?;
    let (gp, gm) = closed_gap_polynomials(c)?;

    let mut roots = Vec::new();
    for b in all.isolate_real_roots()? {
        let on_plus = dm.degree() != Some(0) && dm.sturm_count(&b.lo, &b.hi)? == 1;
        let (sigma, g) = if on_plus { (1, &gp) } else { (-1, &gm) };
        let closed = g.degree().unwrap_or(0) > 0 && g.sturm_count(&b.lo, &b.hi)? == 1;
        let (lo, hi, hit) = match all.rational_root_in(&b)? {
            Some(r) => (r.clone(), r.clone(), Some(r)),
            None => narrow(&all, &b, EDGE_BITS),
        };
        let value = match &hit {
            Some(r) => r.as_f64(),
            None => ((&lo + &hi) / Rational::from_int(2)).as_f64(),
        };
        let bracket = match hit {
            Some(_) => b.clone(),
            None => RootBracket { lo, hi, count: 1 },
        };
        roots.push(EdgeRoot { bracket, value, sigma, closed });
    }

    let found: usize = roots.iter().map(|r| if r.closed { 2 } else { 1 }).sum();
    if found != 2 * p {
        return Err(SpectrumError::RootCount { expected: 2 * p, found });
    }

    let mut edges = Vec::with_capacity(2 * p);
    let mut certs = Vec::new();
    for r in &roots {
        if r.closed {
            // edges 2j and 2j+1 (1-based) meet here
            let j = edges.len().div_ceil(2);
            certs.push(certificate(r, j, if r.sigma > 0 { &gp } else { &gm })?);
            edges.push(r.value);
        }
        edges.push(r.value);
    }
    Ok(SpectrumReport::from_edges(Backend::Exact, &edges, certs))
}

fn certificate(r: &EdgeRoot, gap_index: usize, g: &Q) -> Result<ClosedGapCertificate, SpectrumError> {
    let value = g.rational_root_in(&r.bracket)?;
    let factor = match &value {
        Some(x) => Polynomial::linear_root(x.clone()),
        None => strip_rational_roots(g)?,
    };
    let (lo, hi) = (&r.bracket.lo, &r.bracket.hi);
    Ok(ClosedGapCertificate {
        energy: value.as_ref().map(|x| x.as_f64()).unwrap_or(r.value),
        sign: r.sigma,
        residual: 0.0,
        gap_index,
        exact: Some(ExactEnergy {
            factor: factor.coeffs().iter().map(format_rational).collect(),
            lo: format_rational(lo),
            hi: format_rational(hi),
            value: value.as_ref().map(format_rational),
        }),
    })
}

/// Divides out every rational root of `g`.
fn strip_rational_roots(g: &Q) -> Result<Q, SpectrumError> {
    let mut out = g.squarefree_part()?;
    for b in g.isolate_real_roots()? {
        if let Some(r) = g.rational_root_in(&b)? {
            out = out.div_rem(&Polynomial::linear_root(r))?.0;
        }
    }
    Ok(out.monic())
}
