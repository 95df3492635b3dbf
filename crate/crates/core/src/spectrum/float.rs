use super::{ClosedGapCertificate, SpectrumError, SpectrumOptions, SpectrumReport};
use crate::jacobi::{discriminant, monodromy_numeric, monodromy_with_derivatives, CoefficientVector};
use crate::poly::{bisect_monotone, cauchy_bound_f64, float::real_roots, Polynomial};
use crate::scalar::{Backend, Scalar};

const GOLDEN_ITERS: usize = 200;

fn trace_at(c: &CoefficientVector<f64>, e: f64) -> f64 {
    monodromy_numeric(c, &e).trace()
}

/// Safeguarded Newton on `f` with derivative `df`, inside a sign-change bracket.
fn newton_in<F: Fn(f64) -> (f64, f64)>(f: F, lo: f64, hi: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    let fa = f(a).0;
    if fa == 0.0 {
        return a;
    }
    let sa = fa.signum();
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return x;
        }
        if fx.signum() == sa {
            a = x;
        } else {
            b = x;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let nx = x - fx / dfx;
        x = if nx.is_finite() && nx > a && nx < b && nx != x { nx } else { m };
    }
    0.5 * (a + b)
}

/// Energies where `D' = 0`, in increasing order (there are `p - 1`).
pub fn critical_points<S: Scalar>(c: &CoefficientVector<S>) -> Result<Vec<f64>, SpectrumError> {
    let c = c.to_float();
    let d = discriminant(&c).poly;
    let dd = d.derivative();
    if dd.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let rough = real_roots(&dd)?;
    let f = |e: f64| {
        let (_, d1, d2) = monodromy_with_derivatives(&c, &e);
        (d1.trace(), d2.trace())
    };
    let mut out: Vec<f64> = Vec::with_capacity(rough.len());
    for (i, r) in rough.iter().enumerate() {
        // widen the rough bracket up to the neighbouring estimates so that
        // the transfer-product derivative still changes sign in it
        let left = if i == 0 { r.value - (1.0 + r.value.abs()) } else { 0.5 * (rough[i - 1].value + r.value) };
        let right = if i + 1 == rough.len() {
            r.value + (1.0 + r.value.abs())
        } else {
            0.5 * (r.value + rough[i + 1].value)
        };
        let (fl, fr) = (f(left).0, f(right).0);
        let x = if fl.signum() != fr.signum() { newton_in(f, left, right) } else { r.value };
        out.push(x);
    }
    if out.len() + 1 != c.period() {
        return Err(SpectrumError::Numerical(format!(
            "found {} critical points of the discriminant, expected {}",
            out.len(),
            c.period() - 1
        )));
    }
    Ok(out)
}

/// Monotone pieces `[c_{j-1}, c_j]` of `D`, with outer ends at a root bound.
fn pieces(c: &CoefficientVector<f64>, crit: &[f64]) -> Vec<(f64, f64, bool)> {
    let d = discriminant(c).poly;
    let two = Polynomial::constant(2.0);
    let bound = cauchy_bound_f64(&(&d - &two)).max(cauchy_bound_f64(&(&d + &two)));
    let p = c.period();
    let mut pts = vec![-bound];
    pts.extend_from_slice(crit);
    pts.push(bound);
    (0..p)
        .map(|j| (pts[j], pts[j + 1], (p - 1 - j).is_multiple_of(2)))
        .collect()
}

/// Floquet eigenvalues `lambda_1(theta) <= ... <= lambda_p(theta)`, the
/// solutions of `D(E) = 2 cos(2 pi theta)`.
pub fn band_function<S: Scalar>(c: &CoefficientVector<S>, theta: f64) -> Result<Vec<f64>, SpectrumError> {
    let c = c.to_float();
    let crit = critical_points(&c)?;
    let target = 2.0 * (2.0 * std::f64::consts::PI * theta).cos();
    let mut out = Vec::with_capacity(c.period());
    for (lo, hi, _) in pieces(&c, &crit) {
        let x = bisect_monotone(|e| trace_at(&c, e), lo, hi, target);
        let miss = (trace_at(&c, x) - target).abs();
        if miss > 1e-6 * (1.0 + target.abs()) && !is_turning(&c, x, target) {
            return Err(SpectrumError::Numerical(format!(
                "no solution of D(E) = {target} on [{lo}, {hi}]"
            )));
        }
        out.push(x);
    }
    Ok(out)
}

/// A clamped solution at a critical point where `D` only touches the target.
fn is_turning(c: &CoefficientVector<f64>, x: f64, target: f64) -> bool {
    target.abs() >= 2.0 - 1e-12 && (trace_at(c, x).abs() - 2.0).abs() <= 1e-6
}

fn golden_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERS {
        if b - a <= f64::EPSILON * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

pub(super) fn band_structure_float(
    c: &CoefficientVector<f64>,
    opts: &SpectrumOptions,
) -> Result<SpectrumReport, SpectrumError> {
    let p = c.period();
    let crit = critical_points(c)?;
    let ps = pieces(c, &crit);
    let d = |e: f64| trace_at(c, e);

    // every critical value must reach |D| >= 2, up to rounding
    for (j, &x) in crit.iter().enumerate() {
        let v = d(x).abs();
        if v < 2.0 - 1e-6 {
            return Err(SpectrumError::Numerical(format!(
                "|D| = {v} < 2 at critical point {j} (E = {x})"
            )));
        }
    }

    let mut edges = Vec::with_capacity(2 * p);
    for &(lo, hi, increasing) in &ps {
        let (first, second) = if increasing { (-2.0, 2.0) } else { (2.0, -2.0) };
        edges.push(bisect_monotone(d, lo, hi, first));
        edges.push(bisect_monotone(d, lo, hi, second));
    }
    if edges.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(SpectrumError::RootCount { expected: 2 * p, found: edges.len() });
    }

    let radius = edges.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let merge = 1e-9 * (1.0 + radius);
    let mut certs = Vec::new();
    for (i, &x) in crit.iter().enumerate() {
        let j = i + 1;
        let (glo, ghi) = (edges[2 * j - 1], edges[2 * j]);
        let dx = d(x);
        let sigma: i8 = if dx > 0.0 { 1 } else { -1 };
        // candidates: coincident edges or |D| at noise level above 2
        if ghi - glo > merge && dx.abs() - 2.0 > 1e-6 {
            continue;
        }
        let resid = |e: f64| monodromy_numeric(c, &e).deviation_from(sigma);
        let w = (ghi - glo).max(1e-7 * (1.0 + x.abs()));
        let (e_min, r_min) = golden_min(resid, x - w, x + w);
        let (energy, residual) = if resid(x) <= r_min { (x, resid(x)) } else { (e_min, r_min) };
        if residual <= opts.closed_tol {
            edges[2 * j - 1] = energy;
            edges[2 * j] = energy;
            certs.push(ClosedGapCertificate { energy, sign: sigma, residual, gap_index: j, exact: None });
        }
    }
    Ok(SpectrumReport::from_edges(Backend::Float, &edges, certs))
}
