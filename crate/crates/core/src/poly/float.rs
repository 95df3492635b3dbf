//! Float-backend root isolation by recursive derivative interleaving.
//!
//! Every polynomial isolated here (the discriminant shifted by ±2, its
//! derivatives, and factors thereof) has only real roots, so the roots of
//! `p'` split the line into monotone pieces of `p` holding at most one root
//! each. A critical point where `|p|` is below the evaluation error bound is
//! reported as a (tangential) multiple root.

use super::{PolyError, Polynomial, RootBracket};

const MAX_ITER: usize = 400;

/// `1 + max |a_k / a_n|`, strictly above the modulus of every root.
pub(crate) fn cauchy_bound_f64(p: &Polynomial<f64>) -> f64 {
    let c = p.coeffs();
    let lead = *c.last().expect("nonzero polynomial");
    1.0 + c[..c.len() - 1].iter().map(|x| (x / lead).abs()).fold(0.0, f64::max)
}

/// Running-error bound for Horner evaluation at `x`.
fn eval_bound(p: &Polynomial<f64>, x: f64) -> f64 {
    let ax = x.abs();
    let mag = p.coeffs().iter().rev().fold(0.0, |acc, c| acc * ax + c.abs());
    (4.0 * (p.coeffs().len() as f64) + 8.0) * f64::EPSILON * mag
}

/// A real root found by interleaving, with a tangency flag.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct FloatRoot {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub tangent: bool,
}

/// Bisection on a monotone piece for `f(x) = target` inside `[lo, hi]`.
/// Returns the clamped endpoint when the target is not bracketed.
pub(crate) fn bisect_monotone<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, target: f64) -> f64 {
    let (flo, fhi) = (f(lo) - target, f(hi) - target);
    if flo == 0.0 {
        return lo;
    }
    if fhi == 0.0 {
        return hi;
    }
    if flo.signum() == fhi.signum() {
        return if flo.abs() <= fhi.abs() { lo } else { hi };
    }
    let (mut a, mut b) = (lo, hi);
    let sa = flo.signum();
    for _ in 0..MAX_ITER {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m) - target;
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Safeguarded Newton/bisection on `[lo, hi]` where `p` changes sign.
/// With `tol = 0` it runs to full precision.
fn newton_bisect(p: &Polynomial<f64>, dp: &Polynomial<f64>, lo: f64, hi: f64, tol: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    let fa = p.eval(&a);
    if fa == 0.0 {
        return a;
    }
    if p.eval(&b) == 0.0 {
        return b;
    }
    let sa = fa.signum();
    let mut x = 0.5 * (a + b);
    for _ in 0..MAX_ITER {
        let fx = p.eval(&x);
        if fx == 0.0 {
            return x;
        }
        if fx.signum() == sa {
            a = x;
        } else {
            b = x;
        }
        if b - a <= tol {
            break;
        }
        let d = dp.eval(&x);
        let nx = x - fx / d;
        let m = 0.5 * (a + b);
        // Newton only while it stays inside and shrinks the bracket
        let next = if nx.is_finite() && nx > a && nx < b { nx } else { m };
        if next <= a || next >= b || next == x {
            if m <= a || m >= b {
                break;
            }
            x = m;
        } else {
            x = next;
        }
    }
    0.5 * (a + b)
}

/// All distinct real roots of a real-rooted polynomial, left to right.
pub(crate) fn real_roots(p: &Polynomial<f64>) -> Result<Vec<FloatRoot>, PolyError> {
    let deg = p.degree().ok_or(PolyError::ZeroPolynomial)?;
    match deg {
        0 => return Ok(Vec::new()),
        1 => {
            let c = p.coeffs();
            let r = -c[0] / c[1];
            let w = 1e-9 * (1.0 + r.abs());
            return Ok(vec![FloatRoot { value: r, lo: r - w, hi: r + w, tangent: false }]);
        }
        _ => {}
    }
    let dp = p.derivative();
    let crit: Vec<f64> = real_roots(&dp)?.into_iter().map(|r| r.value).collect();
    let bound = cauchy_bound_f64(p);
    let mut pts = Vec::with_capacity(crit.len() + 2);
    pts.push(-bound);
    pts.extend(crit.iter().copied().filter(|c| c.abs() < bound));
    pts.push(bound);
    // sign at each point; zero when below the evaluation error bound
    let signs: Vec<f64> = pts
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let v = p.eval(&x);
            let interior = i > 0 && i + 1 < pts.len();
            if interior && v.abs() <= eval_bound(p, x) {
                0.0
            } else {
                v.signum()
            }
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..pts.len() {
        if i > 0 && i + 1 < pts.len() && signs[i] == 0.0 {
            let x = pts[i];
            let gap = (x - pts[i - 1]).min(pts[i + 1] - x);
            let w = (1e-9 * (1.0 + x.abs())).min(0.25 * gap).max(f64::EPSILON * (1.0 + x.abs()));
            out.push(FloatRoot { value: x, lo: x - w, hi: x + w, tangent: true });
        }
        if i + 1 < pts.len() {
            let (a, b) = (pts[i], pts[i + 1]);
            if signs[i] != 0.0 && signs[i + 1] != 0.0 && signs[i] != signs[i + 1] && a < b {
                let r = newton_bisect(p, &dp, a, b, 0.0);
                out.push(FloatRoot { value: r, lo: a, hi: b, tangent: false });
            }
        }
    }
    Ok(out)
}

pub(crate) fn isolate(p: &Polynomial<f64>) -> Result<Vec<RootBracket<f64>>, PolyError> {
    Ok(real_roots(p)?
        .into_iter()
        .map(|r| RootBracket { lo: r.lo, hi: r.hi, count: 1 })
        .collect())
}

pub(crate) fn refine(p: &Polynomial<f64>, b: &RootBracket<f64>, tol: f64) -> Result<f64, PolyError> {
    if b.count != 1 {
        return Err(PolyError::NotIsolating(b.count));
    }
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !(b.lo < b.hi) {
        return Err(PolyError::EmptyInterval);
    }
    let dp = p.derivative();
    // tangential root: p' changes sign and p is at noise level there
    let (dlo, dhi) = (dp.eval(&b.lo), dp.eval(&b.hi));
    if dlo == 0.0 || dhi == 0.0 || dlo.signum() != dhi.signum() {
        let c = newton_bisect(&dp, &dp.derivative(), b.lo, b.hi, tol);
        if p.eval(&c).abs() <= eval_bound(p, c) {
            return Ok(c);
        }
    }
    let (flo, fhi) = (p.eval(&b.lo), p.eval(&b.hi));
    if flo == 0.0 || fhi == 0.0 || flo.signum() != fhi.signum() {
        return Ok(newton_bisect(p, &dp, b.lo, b.hi, tol));
    }
    Err(PolyError::NotIsolating(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(cs: &[f64]) -> Polynomial<f64> {
        Polynomial::new(cs.to_vec()).unwrap()
    }

    #[test]
    fn isolates_sqrt2_pair() {
        let p = f(&[-2.0, 0.0, 1.0]);
        let b = p.isolate_real_roots().unwrap();
        assert_eq!(b.len(), 2);
        assert!(b[0].lo < -2f64.sqrt() && -2f64.sqrt() < b[0].hi);
        assert!(b[1].lo < 2f64.sqrt() && 2f64.sqrt() < b[1].hi);
        assert!(f(&[4.0]).isolate_real_roots().unwrap().is_empty());
        assert!(Polynomial::<f64>::zero().isolate_real_roots().is_err());
    }

    #[test]
    fn refine_examples() {
        let p = f(&[-2.0, 0.0, 1.0]);
        let x = p.refine_root(&RootBracket { lo: 1.0, hi: 2.0, count: 1 }, 1e-12).unwrap();
        assert!((x - 2f64.sqrt()).abs() <= 1e-12);
        let x = f(&[-3.0, 1.0]).refine_root(&RootBracket { lo: 2.0, hi: 4.0, count: 1 }, 1e-12).unwrap();
        assert_eq!(x, 3.0);
        let p = f(&[-1.0, -1.0, 0.0, 1.0]);
        let x = p.refine_root(&RootBracket { lo: 1.0, hi: 2.0, count: 1 }, 1e-10).unwrap();
        // bisection oracle value for the plastic number
        assert!((x - 1.324_717_957_244_746).abs() <= 1e-10);
        assert!(p.refine_root(&RootBracket { lo: 1.0, hi: 2.0, count: 2 }, 1e-10).is_err());
        assert!(p.refine_root(&RootBracket { lo: 1.0, hi: 2.0, count: 1 }, 0.0).is_err());
    }

    #[test]
    fn tangential_double_root() {
        // (E - 1)^2 (E + 2)
        let p = f(&[2.0, -3.0, 0.0, 1.0]);
        let r = real_roots(&p).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].value + 2.0).abs() < 1e-14 && !r[0].tangent);
        assert!((r[1].value - 1.0).abs() < 1e-12 && r[1].tangent);
        let b = p.isolate_real_roots().unwrap();
        let x = p.refine_root(&b[1], 1e-12).unwrap();
        assert!((x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn all_real_rooted_degree_six() {
        let roots = [-2.5, -1.0, -0.25, 0.5, 1.75, 3.0];
        let p = roots
            .iter()
            .fold(f(&[1.0]), |acc, &r| &acc * &Polynomial::linear_root(r));
        let got: Vec<f64> = real_roots(&p).unwrap().iter().map(|r| r.value).collect();
        assert_eq!(got.len(), 6);
        for (g, r) in got.iter().zip(roots) {
            assert!((g - r).abs() < 1e-12, "{g} vs {r}");
        }
    }
}
