//! Exact-backend algorithms: subresultant gcd, square-free part, Sturm
//! sequences, real root isolation and bisection refinement over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{PolyError, Polynomial, RootBracket};
use crate::scalar::{Rational, Scalar};

type Q = Polynomial<Rational>;

fn trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Scales a rational polynomial by a positive constant to an integer
/// polynomial with unit content. Signs of values are preserved.
pub fn integer_primitive_part(p: &Q) -> Vec<BigInt> {
    if p.is_zero() {
        return Vec::new();
    }
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &content).collect()
}

fn from_ints(v: &[BigInt]) -> Q {
    Q::from_vec(v.iter().map(|c| Rational::from_integer(c.clone())).collect())
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b`.
fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    let mut e = (a.len() - b.len() + 1) as u32;
    while !r.is_empty() && r.len() > db {
        let lr = r.last().unwrap().clone();
        let k = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[k + j] -= &lr * bc;
        }
        r.pop();
        trim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let f = num_traits::pow(lb.clone(), e as usize);
        for c in r.iter_mut() {
            *c *= &f;
        }
    }
    r
}

/// Gcd of two nonzero integer polynomials via the subresultant PRS.
/// The result is primitive with positive leading coefficient.
pub fn subresultant_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let (mut a, mut b) = if a.len() >= b.len() { (a.to_vec(), b.to_vec()) } else { (b.to_vec(), a.to_vec()) };
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = (a.len() - b.len()) as u32;
        let r = prem(&a, &b);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            return vec![BigInt::one()];
        }
        let div = &g * num_traits::pow(h.clone(), delta as usize);
        a = b;
        b = r.into_iter().map(|c| c / &div).collect();
        g = a.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            num_traits::pow(g.clone(), delta as usize) / num_traits::pow(h.clone(), delta as usize - 1)
        };
    }
    let content = b.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let mut out: Vec<BigInt> = b.into_iter().map(|c| c / &content).collect();
    if out.last().unwrap().is_negative() {
        for c in out.iter_mut() {
            *c = -c.clone();
        }
    }
    out
}

/// Sign of `sum c_i (m / 2^bits)^i`, computed as the sign of
/// `sum c_i m^i 2^(bits (n - i))` in integers.
pub(crate) fn dyadic_sign(c: &[BigInt], m: &BigInt, bits: u32) -> i8 {
    let n = c.len() - 1;
    let mut acc = c[n].clone();
    for i in (0..n).rev() {
        acc = acc * m + (&c[i] << (bits as usize * (n - i)));
    }
    match acc.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    }
}

/// Result of bisecting on the grid `m / 2^bits`.
pub(crate) struct DyadicBracket {
    pub lo: BigInt,
    pub hi: BigInt,
    pub hit: Option<BigInt>,
    pub bits: u32,
}

impl DyadicBracket {
    pub fn at(&self, m: &BigInt) -> Rational {
        Rational::new(m.clone(), BigInt::one() << self.bits)
    }
}

/// Bisects the sign change of the integer polynomial `c` in `b` down to
/// adjacent grid points `m / 2^bits`. `None` if rounding the bracket outward
/// to the grid loses the sign change.
pub(crate) fn dyadic_bisect(c: &[BigInt], b: &RootBracket<Rational>, bits: u32) -> Option<DyadicBracket> {
    let scale = Rational::from_integer(BigInt::one() << bits);
    let mut lo = (&b.lo * &scale).floor().to_integer();
    let mut hi = (&b.hi * &scale).ceil().to_integer();
    let s_lo = dyadic_sign(c, &lo, bits);
    let s_hi = dyadic_sign(c, &hi, bits);
    if s_lo == 0 || s_hi == 0 || s_lo == s_hi {
        return None;
    }
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1u32;
        let s = dyadic_sign(c, &mid, bits);
        if s == 0 {
            return Some(DyadicBracket { lo, hi, hit: Some(mid), bits });
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(DyadicBracket { lo, hi, hit: None, bits })
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

fn half(a: &Rational, b: &Rational) -> Rational {
    (a + b) / Rational::from_int(2)
}

impl Polynomial<Rational> {
    /// Monic greatest common divisor over the rationals.
    pub fn gcd(&self, other: &Self) -> Result<Self, PolyError> {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Err(PolyError::BothZero),
            (true, false) => Ok(other.monic()),
            (false, true) => Ok(self.monic()),
            (false, false) => {
                let g = subresultant_gcd(&integer_primitive_part(self), &integer_primitive_part(other));
                Ok(from_ints(&g).monic())
            }
        }
    }

    /// Monic square-free part `p / gcd(p, p')`.
    pub fn squarefree_part(&self) -> Result<Self, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if self.degree() == Some(0) {
            return Ok(Q::constant(Rational::one()));
        }
        let g = self.gcd(&self.derivative())?;
        let (q, _) = self.div_rem(&g)?;
        Ok(q.monic())
    }

    /// Canonical Sturm sequence of the square-free part. Each member is
    /// rescaled by a positive constant to a primitive integer polynomial.
    pub fn sturm_sequence(&self) -> Result<Vec<Self>, PolyError> {
        let s0 = from_ints(&integer_primitive_part(&self.squarefree_part()?));
        let s1 = from_ints(&integer_primitive_part(&s0.derivative()));
        let mut seq = vec![s0, s1];
        loop {
            let n = seq.len();
            if seq[n - 1].is_zero() {
                seq.pop();
                break;
            }
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1])?;
            if r.is_zero() {
                break;
            }
            seq.push(from_ints(&integer_primitive_part(&-&r)));
        }
        Ok(seq)
    }

    /// Number of distinct real roots in `(lo, hi]`. Endpoints must not be roots.
    pub fn sturm_count(&self, lo: &Rational, hi: &Rational) -> Result<usize, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if lo >= hi {
            return Err(PolyError::EmptyInterval);
        }
        for x in [lo, hi] {
            if self.eval(x).is_zero() {
                return Err(PolyError::EndpointRoot(x.to_string()));
            }
        }
        let seq = self.sturm_sequence()?;
        Ok(count_between(&seq, lo, hi))
    }

    /// Integer bound strictly above the modulus of every root.
    pub fn cauchy_bound(&self) -> Result<Rational, PolyError> {
        let lead = self.leading().ok_or(PolyError::ZeroPolynomial)?;
        let m = self
            .coeffs()
            .iter()
            .take(self.coeffs().len() - 1)
            .map(|c| (c / lead).abs())
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        Ok(Rational::from_integer(m.ceil().to_integer() + BigInt::one()))
    }

    pub(crate) fn isolate_exact(&self) -> Result<Vec<RootBracket<Rational>>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if self.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let seq = self.sturm_sequence()?;
        let sq = &seq[0];
        let b = self.cauchy_bound()?;
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let c = count_between(&seq, &lo, &hi);
            match c {
                0 => {}
                1 => out.push(RootBracket { lo, hi, count: 1 }),
                _ => {
                    let mid = split_point(sq, &lo, &hi);
                    stack.push((lo, mid.clone()));
                    stack.push((mid, hi));
                }
            }
        }
        out.sort_by(|x, y| x.lo.cmp(&y.lo));
        Ok(out)
    }

    pub(crate) fn refine_exact(&self, b: &RootBracket<Rational>, tol: f64) -> Result<Rational, PolyError> {
        if b.count != 1 {
            return Err(PolyError::NotIsolating(b.count));
        }
        let sq = self.squarefree_part()?;
        let (mut lo, mut hi) = (b.lo.clone(), b.hi.clone());
        if sq.eval(&hi).is_zero() {
            return Ok(hi);
        }
        let s_lo = sign(&sq.eval(&lo));
        let tol = Rational::from_f64_checked(tol).map_err(|_| PolyError::BadTolerance)?;
        while &hi - &lo > tol {
            let mid = half(&lo, &hi);
            let s = sign(&sq.eval(&mid));
            if s == 0 {
                return Ok(mid);
            }
            if s == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(half(&lo, &hi))
    }

    /// Shrinks `b` (which isolates one root of `self`) until it also
    /// isolates that root among the roots of `other`, with neither endpoint
    /// a root of either polynomial.
    pub fn tighten_for(&self, b: &RootBracket<Rational>, other: &Self) -> Result<RootBracket<Rational>, PolyError> {
        let seq_self = self.sturm_sequence()?;
        let seq_other = other.sturm_sequence()?;
        let (sq, so) = (&seq_self[0], &seq_other[0]);
        let good = |lo: &Rational, hi: &Rational| {
            !sq.eval(lo).is_zero()
                && !sq.eval(hi).is_zero()
                && !so.eval(lo).is_zero()
                && !so.eval(hi).is_zero()
                && count_between(&seq_self, lo, hi) == 1
                && count_between(&seq_other, lo, hi) <= 1
        };
        if sq.eval(&b.hi).is_zero() {
            let root = b.hi.clone();
            let mut w = (&b.hi - &b.lo) / Rational::from_int(2);
            loop {
                let (lo, hi) = (&root - &w, &root + &w);
                if good(&lo, &hi) {
                    return Ok(RootBracket { lo, hi, count: 1 });
                }
                w /= Rational::from_int(2);
            }
        }
        let (mut lo, mut hi) = (b.lo.clone(), b.hi.clone());
        let s_lo = sign(&sq.eval(&lo));
        loop {
            if good(&lo, &hi) {
                return Ok(RootBracket { lo, hi, count: 1 });
            }
            let mid = split_point(sq, &lo, &hi);
            if sign(&sq.eval(&mid)) == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }

    /// Rational roots lying in the bracket, found by testing candidates
    /// `n/d` with `d` dividing the leading coefficient.
    pub fn rational_root_in(&self, b: &RootBracket<Rational>) -> Result<Option<Rational>, PolyError> {
        let ints = integer_primitive_part(&self.squarefree_part()?);
        let lc = ints.last().unwrap().abs();
        let Some(lc64) = lc.to_u64() else {
            return Ok(None);
        };
        if lc64 > 1_000_000_000_000 {
            return Ok(None);
        }
        let sq = from_ints(&ints);
        if sq.eval(&b.hi).is_zero() {
            return Ok(Some(b.hi.clone()));
        }
        // distinct rationals with denominators dividing lc are at least
        // 1/lc^2 apart
        let bits = 2 * lc.bits() as u32 + 2;
        let bb = match dyadic_bisect(&ints, b, bits) {
            Some(d) => {
                if let Some(m) = &d.hit {
                    let r = d.at(m);
                    return Ok(b.contains(&r).then_some(r));
                }
                RootBracket { lo: d.at(&d.lo), hi: d.at(&d.hi), count: 1 }
            }
            None => {
                let width = Rational::new(BigInt::one(), &lc * &lc * BigInt::from(2));
                let mut bb = b.clone();
                while &bb.hi - &bb.lo > width {
                    let mid = half(&bb.lo, &bb.hi);
                    if sq.eval(&mid).is_zero() {
                        return Ok(Some(mid));
                    }
                    if sign(&sq.eval(&mid)) == sign(&sq.eval(&bb.lo)) {
                        bb.lo = mid;
                    } else {
                        bb.hi = mid;
                    }
                }
                bb
            }
        };
        let mid = half(&bb.lo, &bb.hi);
        for d in divisors(lc64) {
            let dq = Rational::from_integer(BigInt::from(d));
            let n = (&mid * &dq).floor();
            for cand in [n.clone(), n + Rational::one()] {
                let r = cand / &dq;
                if bb.contains(&r) && b.contains(&r) && sign_at(&sq, &r) == 0 {
                    return Ok(Some(r));
                }
            }
        }
        Ok(None)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Sign of `p(n/d)`; integer coefficients are evaluated homogeneously as
/// `sum c_i n^i d^(k - i)` to avoid normalizing intermediate fractions.
fn sign_at(p: &Q, x: &Rational) -> i8 {
    let cs = p.coeffs();
    if cs.is_empty() {
        return 0;
    }
    if !cs.iter().all(|c| c.is_integer()) {
        return sign(&p.eval(x));
    }
    let (n, d) = (x.numer(), x.denom());
    let k = cs.len() - 1;
    let mut acc = cs[k].numer().clone();
    let mut dpow = BigInt::one();
    for c in cs[..k].iter().rev() {
        dpow *= d;
        acc = acc * n + c.numer() * &dpow;
    }
    match acc.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    }
}

fn sign_changes(seq: &[Q], x: &Rational) -> usize {
    let mut last = 0i8;
    let mut n = 0;
    for p in seq {
        let s = sign_at(p, x);
        if s != 0 {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
    }
    n
}

fn count_between(seq: &[Q], lo: &Rational, hi: &Rational) -> usize {
    sign_changes(seq, lo).saturating_sub(sign_changes(seq, hi))
}

/// A point strictly inside `(lo, hi)` that is not a root of `p`.
fn split_point(p: &Q, lo: &Rational, hi: &Rational) -> Rational {
    let mid = half(lo, hi);
    if !p.eval(&mid).is_zero() {
        return mid;
    }
    let w = hi - lo;
    let mut k = 3u32;
    loop {
        let off = &w / Rational::from_integer(BigInt::from(2).pow(k));
        for cand in [&mid + &off, &mid - &off] {
            if !p.eval(&cand).is_zero() {
                return cand;
            }
        }
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(cs: &[i64]) -> Q {
        Q::from_i64s(cs)
    }
    fn r(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(q(&[-1, 0, 1]).gcd(&q(&[-1, 1])).unwrap(), q(&[-1, 1]));
        assert_eq!(q(&[-2, 0, 1]).gcd(&q(&[1, 0, 1])).unwrap(), q(&[1]));
        // E^3 - E = E(E-1)(E+1); gcd with E^2 - 1 is E^2 - 1
        assert_eq!(q(&[0, -1, 0, 1]).gcd(&q(&[-1, 0, 1])).unwrap(), q(&[-1, 0, 1]));
        assert_eq!(Q::zero().gcd(&Q::zero()), Err(PolyError::BothZero));
        assert_eq!(Q::zero().gcd(&q(&[2, 4])).unwrap(), q(&[1, 2]).monic());
    }

    #[test]
    fn gcd_with_rational_coefficients() {
        // (E - 1/2)(E + 3) and (E - 1/2)(2E - 7/3)
        let a = &Q::linear_root(Rational::from_ratio(1, 2)) * &Q::linear_root(r(-3));
        let b = &Q::linear_root(Rational::from_ratio(1, 2))
            * &Q::from_vec(vec![Rational::from_ratio(-7, 3), r(2)]);
        assert_eq!(a.gcd(&b).unwrap(), Q::linear_root(Rational::from_ratio(1, 2)));
    }

    #[test]
    fn sturm_examples() {
        let p = q(&[-2, 0, 1]);
        assert_eq!(p.sturm_count(&r(0), &r(2)).unwrap(), 1);
        assert_eq!(p.sturm_count(&r(-2), &r(2)).unwrap(), 2);
        let sq = q(&[1, -2, 1]);
        assert_eq!(sq.sturm_count(&r(0), &r(2)).unwrap(), 1);
        assert!(matches!(q(&[-1, 1]).sturm_count(&r(1), &r(2)), Err(PolyError::EndpointRoot(_))));
        assert_eq!(Q::zero().sturm_count(&r(0), &r(1)), Err(PolyError::ZeroPolynomial));
        assert_eq!(p.sturm_count(&r(1), &r(1)), Err(PolyError::EmptyInterval));
    }

    #[test]
    fn isolation_examples() {
        let b = q(&[-2, 0, 1]).isolate_real_roots().unwrap();
        assert_eq!(b.len(), 2);
        let s2 = 2f64.sqrt();
        assert!(b[0].lo.as_f64() < -s2 && -s2 < b[0].hi.as_f64());
        assert!(b[1].lo.as_f64() < s2 && s2 < b[1].hi.as_f64());
        // D - 2 for v = (0, 2): E^2 - 2E - 4, roots 1 ± √5
        let b = q(&[-4, -2, 1]).isolate_real_roots().unwrap();
        assert_eq!(b.len(), 2);
        for (br, root) in b.iter().zip([1.0 - 5f64.sqrt(), 1.0 + 5f64.sqrt()]) {
            assert!(br.lo.as_f64() < root && root <= br.hi.as_f64());
        }
        assert!(q(&[3]).isolate_real_roots().unwrap().is_empty());
        assert!(Q::zero().isolate_real_roots().is_err());
    }

    #[test]
    fn isolation_with_rational_roots_on_split_points() {
        // roots at 0, 1/2, -1/2, 3 (midpoints of the Cauchy interval hit roots)
        let p = &(&q(&[0, 1]) * &q(&[-1, 0, 4])) * &q(&[-3, 1]);
        let b = p.isolate_real_roots().unwrap();
        assert_eq!(b.len(), 4);
        let want = [Rational::from_ratio(-1, 2), r(0), Rational::from_ratio(1, 2), r(3)];
        for (br, w) in b.iter().zip(&want) {
            let x = p.refine_root(br, 1e-9).unwrap();
            assert!((x - w).abs() <= Rational::from_ratio(1, 1_000_000_000));
            assert_eq!(p.rational_root_in(br).unwrap().as_ref(), Some(w));
        }
    }

    #[test]
    fn refine_examples() {
        let p = q(&[-2, 0, 1]);
        let br = RootBracket { lo: r(1), hi: r(2), count: 1 };
        let x = p.refine_root(&br, 1e-12).unwrap().as_f64();
        assert!((x - 2f64.sqrt()).abs() <= 1e-12);
        let br = RootBracket { lo: r(2), hi: r(4), count: 1 };
        assert_eq!(q(&[-3, 1]).refine_root(&br, 1e-12).unwrap(), r(3));
        let bad = RootBracket { lo: r(-2), hi: r(2), count: 2 };
        assert_eq!(p.refine_root(&bad, 1e-6), Err(PolyError::NotIsolating(2)));
    }

    #[test]
    fn rational_roots_detected() {
        let p = &Q::linear_root(Rational::from_ratio(-3, 7)) * &q(&[-2, 0, 1]);
        let bs = p.isolate_real_roots().unwrap();
        let found: Vec<Option<Rational>> = bs.iter().map(|b| p.rational_root_in(b).unwrap()).collect();
        assert_eq!(found, vec![None, Some(Rational::from_ratio(-3, 7)), None]);
    }

    #[test]
    fn squarefree() {
        let p = &(&q(&[-1, 1]) * &q(&[-1, 1])) * &q(&[2, 1]);
        assert_eq!(p.squarefree_part().unwrap(), q(&[-2, 1, 1]));
    }
}
