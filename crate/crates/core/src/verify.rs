//! The reproduction suite: every headline claim checked end to end.

use std::fmt::Write as _;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::census::{
    characterization_check, random_rational_vector, run_census, table_witnesses, verify_known_table, CensusConfig,
    KnownTable,
};
use crate::families::{analyze, double_construct, make_family, FamilyError, FamilyId, FamilySpec};
use crate::jacobi::{discriminant, monodromy_numeric, CoefficientVector, Model};
use crate::poly::Polynomial;
use crate::scalar::{parse_rational, Backend, Rational, Scalar};
use crate::spectrum::{
    band_structure, closed_gaps_exact, closed_gaps_float, floquet_crosscheck, reflection_report, ZeroStatus,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub table: KnownTable,
    /// Float samples per (model, p) in the genericity census.
    pub genericity_samples: usize,
    /// Random instances per (model, p) in the characterization round trip.
    pub characterization_samples: usize,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        Self { seed, table: KnownTable::known(), genericity_samples: 10_000, characterization_samples: 40 }
    }
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self::new(1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
    pub passed: bool,
}

impl SuiteReport {
    /// Fixed-width pass/fail table.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "paper suite (seed {})", self.seed);
        for c in &self.criteria {
            let _ = writeln!(
                s,
                "{:>2}  {:<4}  {:<34}  {}",
                c.id,
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        let n = self.criteria.iter().filter(|c| c.passed).count();
        let _ = writeln!(s, "{n}/{} criteria passed", self.criteria.len());
        s
    }
}

pub const CRITERIA: [&str; 9] = [
    "exact small-period table",
    "off-diagonal witnesses",
    "impossibility at p <= 3",
    "doubling construction",
    "lower-bound constructions",
    "dual-path consistency",
    "symmetry properties",
    "genericity",
    "characterization round trip",
];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn q(s: &str) -> Rational {
    parse_rational(s).expect("literal")
}

fn qv(xs: &[&str]) -> Vec<Rational> {
    xs.iter().map(|x| q(x)).collect()
}

pub fn run_criterion(id: usize, cfg: &SuiteConfig) -> CriterionResult {
    let out = match id {
        1 => exact_table(),
        2 => odjm_witnesses(),
        3 => impossibility(cfg),
        4 => doubling(),
        5 => lower_bounds(),
        6 => dual_path(cfg),
        7 => symmetry(cfg),
        8 => genericity(cfg),
        9 => characterization(cfg),
        _ => Err(format!("no criterion {id}")),
    };
    let (passed, detail) = match out {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult { id, name: CRITERIA.get(id.wrapping_sub(1)).unwrap_or(&"?").to_string(), passed, detail }
}

pub fn run_suite(cfg: &SuiteConfig) -> SuiteReport {
    let criteria: Vec<CriterionResult> = (1..=CRITERIA.len()).map(|i| run_criterion(i, cfg)).collect();
    let passed = criteria.iter().all(|c| c.passed);
    SuiteReport { seed: cfg.seed, criteria, passed }
}

/// True when `factor` has a root in the closed certificate bracket.
fn bracket_isolates(factor: &[String], lo: &str, hi: &str) -> bool {
    let coeffs: Vec<Rational> = factor.iter().map(|c| q(c)).collect();
    let Ok(f) = Polynomial::new(coeffs) else { return false };
    let (a, b) = (f.eval(&q(lo)), f.eval(&q(hi)));
    a.is_zero() || b.is_zero() || a * b < Rational::zero()
}

fn exact_table() -> Outcome {
    let s2 = std::f64::consts::SQRT_2;
    let cases: [(&[&str], &[&str], &[f64]); 4] = [
        (&["0", "5", "0", "-5"], &["0"], &[0.0]),
        (&["2", "3", "3/5", "5", "4/5"], &["0"], &[0.0]),
        (&["1", "0", "0", "-1", "0", "0"], &["-1", "1"], &[-1.0, 1.0]),
        (&["0", "0", "0", "1", "0", "0", "0", "-1"], &["0"], &[-s2, 0.0, s2]),
    ];
    let mut summary = Vec::new();
    for (v, rational, energies) in cases {
        let c = CoefficientVector::dso(qv(v)).map_err(err)?;
        let gaps = closed_gaps_exact(&c).map_err(err)?;
        ensure(gaps.len() == energies.len(), || format!("p={}: {} closed gaps, want {}", c.period(), gaps.len(), energies.len()))?;
        for (g, e) in gaps.iter().zip(energies) {
            let ex = g.exact.as_ref().ok_or_else(|| format!("p={}: no exact certificate", c.period()))?;
            ensure(bracket_isolates(&ex.factor, &ex.lo, &ex.hi), || format!("p={}: bracket does not isolate", c.period()))?;
            ensure(q(&ex.lo) <= q(&ex.hi), || "inverted bracket".into())?;
            match &ex.value {
                Some(val) => ensure(rational.contains(&val.as_str()) && q(val).as_f64() == *e, || format!("unexpected exact energy {val}"))?,
                None => {
                    let sq = e * e;
                    ensure(ex.factor == ["-2", "0", "1"] && (sq - 2.0).abs() < 1e-12, || format!("factor {:?} for {e}", ex.factor))?;
                    ensure(q(&ex.lo).as_f64() <= *e && *e <= q(&ex.hi).as_f64(), || format!("bracket misses {e}"))?;
                }
            }
        }
        summary.push(format!("p={}: {}", c.period(), gaps.len()));
    }
    Ok(summary.join(", "))
}

fn odjm_witnesses() -> Outcome {
    let r73 = (7.0f64 / 3.0).sqrt();
    let s = 2.0 / 7f64.sqrt();
    let cases: [(Vec<f64>, &[f64]); 3] = [
        (vec![1.0, 2.0, 2.0, 1.0], &[0.0]),
        (vec![2.0, 2.0, r73, 4.0 / 3.0, r73], &[-1.0, 1.0]),
        (vec![1.0, 2.0, 2.0, 1.0, s, s], &[-1.0, 0.0, 1.0]),
    ];
    let mut worst = 0.0f64;
    for (a, want) in cases {
        let p = a.len();
        let c = CoefficientVector::odjm(a).map_err(err)?;
        let gaps = closed_gaps_float(&c, 1e-8).map_err(err)?;
        let got: Vec<f64> = gaps.iter().map(|g| g.energy).collect();
        ensure(got.len() == want.len(), || format!("p={p}: certified {got:?}, want {want:?}"))?;
        for (x, y) in got.iter().zip(want) {
            worst = worst.max((x - y).abs());
        }
        ensure(worst <= 1e-9, || format!("p={p}: certified {got:?}, want {want:?}"))?;
    }
    Ok(format!("3 witnesses, max energy error {worst:.1e}"))
}

fn impossibility(cfg: &SuiteConfig) -> Outcome {
    let mut results = Vec::new();
    for model in [Model::Dso, Model::Odjm] {
        for p in [2, 3] {
            let r = run_census(&CensusConfig::new(model, p, 1000, cfg.seed, Backend::Exact)).map_err(err)?;
            ensure(r.max_sampled == 0, || format!("{model} p={p}: a sample has {} closed gaps", r.max_sampled))?;
            results.push(r);
        }
    }
    let injected = table_witnesses().map_err(err)?;
    let table = verify_known_table(&results, &injected, &cfg.table);
    if !table.passed {
        let bad: Vec<String> = table.lines.iter().filter(|l| !l.passed).map(|l| format!("{} ({})", l.name, l.detail)).collect();
        return Err(bad.join("; "));
    }
    Ok(format!("4000 exact samples with no closed gap; {} table checks", table.lines.len()))
}

fn doubling() -> Outcome {
    let base = CoefficientVector::dso(qv(&["0", "2"])).map_err(err)?;
    let inst = double_construct(&base, 2).map_err(err)?;
    let s3 = 3f64.sqrt();
    let pred: Vec<f64> = inst.predicted.iter().map(|p| p.energy).collect();
    ensure(
        pred.len() == 2 && (pred[0] - (1.0 - s3)).abs() < 1e-12 && (pred[1] - (1.0 + s3)).abs() < 1e-12,
        || format!("predicted {pred:?}"),
    )?;
    let (r, check) = analyze(&inst).map_err(err)?;
    ensure(check.all_certified && r.closed_gap_count >= 2, || format!("(0,2) doubled: g = {}", r.closed_gap_count))?;
    let g1 = r.closed_gap_count;

    let base = CoefficientVector::dso(qv(&["0", "5", "0", "-5"])).map_err(err)?;
    let inst = double_construct(&base, 2).map_err(err)?;
    let (r, check) = analyze(&inst).map_err(err)?;
    ensure(check.all_certified && r.closed_gap_count >= 5, || format!("(0,5,0,-5) doubled: g = {}", r.closed_gap_count))?;
    Ok(format!("g(w) = {g1} for (0,2), {} for (0,5,0,-5)", r.closed_gap_count))
}

/// Builds a family instance exactly when possible and analyzes it.
fn certify(spec: &FamilySpec) -> Result<(Vec<(f64, i8)>, bool), String> {
    let (report, check) = match make_family::<Rational>(spec) {
        Ok(inst) => analyze(&inst).map_err(err)?,
        Err(FamilyError::Irrational(_)) => analyze(&make_family::<f64>(spec).map_err(err)?).map_err(err)?,
        Err(e) => return Err(e.to_string()),
    };
    Ok((report.closed_gaps.iter().map(|c| (c.energy, c.sign)).collect(), check.all_certified))
}

fn lower_bounds() -> Outcome {
    let has = |gaps: &[(f64, i8)], e: f64, sign: Option<i8>| {
        gaps.iter().any(|&(x, s)| (x - e).abs() <= 1e-8 && sign.is_none_or(|want| want == s))
    };
    let mut n = 0;
    for p in 7..=12usize {
        let id = if p % 2 == 1 { FamilyId::DsoOddSpike } else { FamilyId::DsoEvenSpike };
        let spec = FamilySpec::parse(id, &format!("p={p}")).map_err(err)?;
        let (gaps, ok) = certify(&spec)?;
        ensure(ok && has(&gaps, 0.0, None), || format!("{spec}: certified {gaps:?}"))?;
        n += 1;
    }
    for (id, p) in [(FamilyId::Odjm3Mod4, 7), (FamilyId::Odjm3Mod4, 11), (FamilyId::Odjm1Mod4, 9)] {
        let spec = FamilySpec::parse(id, &format!("p={p}")).map_err(err)?;
        let (gaps, ok) = certify(&spec)?;
        ensure(ok && has(&gaps, 1.0, None) && has(&gaps, -1.0, None), || format!("{spec}: certified {gaps:?}"))?;
        n += 1;
    }
    for p in [8, 10, 12usize] {
        let spec = FamilySpec::parse(FamilyId::OdjmEvenBalanced, &format!("p={p}")).map_err(err)?;
        let (gaps, ok) = certify(&spec)?;
        let sign = if (p / 2) % 2 == 0 { 1 } else { -1 };
        ensure(ok && has(&gaps, 0.0, Some(sign)), || format!("{spec}: certified {gaps:?}"))?;
        n += 1;
    }
    Ok(format!("{n} constructions certified for p = 7..12"))
}

fn dual_path(cfg: &SuiteConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6475_616c);
    let grid: Vec<f64> = (0..17).map(|i| i as f64 / 16.0).collect();
    let (mut edge_dev, mut floquet_dev, mut total) = (0.0f64, 0.0f64, 0usize);
    for model in [Model::Dso, Model::Odjm, Model::Jac] {
        for _ in 0..50 {
            let p = rng.random_range(1..=6usize);
            let c = random_rational_vector(model, p, &mut rng).map_err(err)?;
            let ex = band_structure(&c).map_err(err)?;
            let fl = band_structure(&c.to_float()).map_err(err)?;
            ensure(ex.closed_gap_count == fl.closed_gap_count, || {
                format!("{c}: exact {} vs float {}", ex.closed_gap_count, fl.closed_gap_count)
            })?;
            for (x, y) in ex.edges().iter().zip(fl.edges()) {
                edge_dev = edge_dev.max((x - y).abs());
            }
            ensure(edge_dev <= 1e-8, || format!("{c}: edge deviation {edge_dev:.2e}"))?;
            floquet_dev = floquet_dev.max(floquet_crosscheck(&c, &grid).map_err(err)?);
            ensure(floquet_dev <= 1e-8, || format!("{c}: floquet deviation {floquet_dev:.2e}"))?;
            total += 1;
        }
    }
    Ok(format!("{total} vectors, edge dev {edge_dev:.1e}, floquet dev {floquet_dev:.1e}"))
}

fn symmetry(cfg: &SuiteConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7379_6d6d);
    let mut odd = 0;
    for _ in 0..100 {
        let p = rng.random_range(1..=7usize);
        let c = random_rational_vector(Model::Odjm, p, &mut rng).map_err(err)?;
        let d = discriminant(&c).poly;
        let rhs = if p % 2 == 0 { d.clone() } else { -&d };
        ensure(d.reflect() == rhs, || format!("{c}: reflection identity fails"))?;
        if p % 2 == 1 {
            let r = reflection_report(&c).map_err(err)?;
            ensure(r.zero_status == ZeroStatus::BandInterior, || format!("{c}: zero is {:?}", r.zero_status))?;
            odd += 1;
        }
    }
    // D_{v+c}(E + c) = D_v(E) and Phi_{v+c}(E + c) = Phi_v(E); D_{ca}(cE) = D_a(E)
    let one = Rational::from_int(1);
    for _ in 0..50 {
        let p = rng.random_range(1..=7usize);
        let shift = Rational::from_ratio(rng.random_range(-12..=12), rng.random_range(1..=5));
        let c = random_rational_vector(Model::Dso, p, &mut rng).map_err(err)?;
        let moved = c.shift_potential(&shift);
        ensure(discriminant(&moved).poly.compose_affine(&one, &shift) == discriminant(&c).poly, || {
            format!("{c}: shift covariance fails for c = {shift}")
        })?;
        for k in 0..=p as i64 {
            let e = Rational::from_ratio(k - 3, 2);
            ensure(monodromy_numeric(&moved, &(e.clone() + shift.clone())) == monodromy_numeric(&c, &e), || {
                format!("{c}: shifted monodromy differs at E = {e}")
            })?;
        }

        let scale = Rational::from_ratio(rng.random_range(1..=9), rng.random_range(1..=5));
        let a = random_rational_vector(Model::Odjm, p, &mut rng).map_err(err)?;
        let scaled = a.scale_offdiag(&scale).map_err(err)?;
        let zero = Rational::zero();
        ensure(discriminant(&scaled).poly.compose_affine(&scale, &zero) == discriminant(&a).poly, || {
            format!("{a}: scale covariance fails for c = {scale}")
        })?;
    }
    Ok(format!("100 reflection identities ({odd} odd p band-interior), 50 shift and 50 scale checks"))
}

fn genericity(cfg: &SuiteConfig) -> Outcome {
    let mut total = 0;
    for model in [Model::Dso, Model::Odjm, Model::Jac] {
        for p in 1..=6 {
            let mut c = CensusConfig::new(model, p, cfg.genericity_samples, cfg.seed, Backend::Float);
            c.tol = 1e-8;
            let r = run_census(&c).map_err(err)?;
            let hits: usize = r.histogram.iter().filter(|(k, _)| **k > 0).map(|(_, v)| v).sum();
            ensure(hits == 0, || format!("{model} p={p}: {hits} samples with a certified closed gap"))?;
            total += r.config.samples;
        }
    }
    Ok(format!("{total} float samples, none with a closed gap"))
}

fn characterization(cfg: &SuiteConfig) -> Outcome {
    let mut parts = Vec::new();
    for (model, p) in [(Model::Dso, 4), (Model::Odjm, 4), (Model::Dso, 5), (Model::Odjm, 5)] {
        let r = characterization_check(model, p, cfg.characterization_samples, cfg.seed);
        ensure(r.passed, || format!("{model} p={p}: {}", r.failures.first().cloned().unwrap_or_default()))?;
        parts.push(format!("{model} p={p} {}+{}", r.forward_ok, r.converse_ok));
    }
    Ok(parts.join(", "))
}
