use gapscope::census::{run_census, CensusConfig, InjectedWitness};
use gapscope::families::{analyze, double_construct, make_family, sample_spec, FamilyError, FamilyId, FamilyInstance};
use gapscope::jacobi::{discriminant, monodromy_numeric, monodromy_poly, transfer_matrix, AnyVector};
use gapscope::spectrum::{band_structure, closed_gaps_exact, closed_gaps_float};
use gapscope::{Backend, CoefficientVector, Model, Polynomial, Rational, Scalar};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Q = Polynomial<Rational>;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::from_ratio(n, d))
}

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..=24, 1i64..=6).prop_map(|(n, d)| Rational::from_ratio(n, d))
}

fn poly(max_deg: usize) -> impl Strategy<Value = Q> {
    prop::collection::vec(rational(), 1..=max_deg + 1).prop_map(|c| Q::new(c).unwrap())
}

fn vector(model: Model, max_p: usize) -> impl Strategy<Value = CoefficientVector<Rational>> {
    (1..=max_p)
        .prop_flat_map(move |p| (prop::collection::vec(positive(), p), prop::collection::vec(rational(), p)))
        .prop_map(move |(a, v)| match model {
            Model::Dso => CoefficientVector::dso(v).unwrap(),
            Model::Odjm => CoefficientVector::odjm(a).unwrap(),
            Model::Jac => CoefficientVector::jacobi(a, v).unwrap(),
        })
}

fn any_model() -> impl Strategy<Value = Model> {
    prop_oneof![Just(Model::Dso), Just(Model::Odjm), Just(Model::Jac)]
}

fn any_vector(max_p: usize) -> impl Strategy<Value = CoefficientVector<Rational>> {
    any_model().prop_flat_map(move |m| vector(m, max_p))
}

// polynomials

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(p in poly(4), q in poly(4), r in poly(4)) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn gcd_divides_both(p in poly(5), q in poly(5), common in poly(2)) {
        prop_assume!(!p.is_zero() && !q.is_zero() && !common.is_zero());
        let (a, b) = (&p * &common, &q * &common);
        let g = a.gcd(&b).unwrap();
        prop_assert!(a.div_rem(&g).unwrap().1.is_zero());
        prop_assert!(b.div_rem(&g).unwrap().1.is_zero());
        // the common factor divides the gcd
        prop_assert!(g.div_rem(&common).unwrap().1.is_zero());
    }

    #[test]
    fn sturm_count_matches_known_roots(
        roots in prop::collection::vec(-6i64..=6, 1..=5),
        irreducible_quadratic in any::<bool>(),
        lo in -7i64..=6,
        width in 1i64..=8,
    ) {
        let mut p = Q::from_i64s(&[1]);
        for r in &roots {
            p = &p * &Q::from_i64s(&[-r, 1]);
        }
        if irreducible_quadratic {
            p = &p * &Q::from_i64s(&[1, 0, 1]);
        }
        // half-integer endpoints are never roots
        let (a, b) = (Rational::from_ratio(2 * lo + 1, 2), Rational::from_ratio(2 * (lo + width) + 1, 2));
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        let want = distinct.iter().filter(|&&r| Rational::from_int(r) > a && Rational::from_int(r) <= b).count();
        prop_assert_eq!(p.sturm_count(&a, &b).unwrap(), want);
        prop_assert_eq!(p.isolate_real_roots().unwrap().len(), distinct.len());

        // brute force: sign changes of the square-free part on a fine grid
        let sq = p.squarefree_part().unwrap();
        let mut changes = 0;
        let steps = 64 * width;
        let mut last = sq.eval(&a);
        for k in 1..=steps {
            let x = &a + &(Rational::from_ratio(k, 64));
            let y = sq.eval(&x);
            if (y > Rational::from_int(0)) != (last > Rational::from_int(0)) || y == Rational::from_int(0) {
                changes += 1;
            }
            if y != Rational::from_int(0) {
                last = y;
            }
        }
        prop_assert!(changes >= want);
    }
}

// transfer matrices and the discriminant

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn unimodular_transfer(s in positive(), t in rational()) {
        prop_assert_eq!(transfer_matrix(&s, &t).unwrap().det(), Rational::from_int(1));
        let m = transfer_matrix(&s.as_f64(), &t.as_f64()).unwrap();
        prop_assert!((m.det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monodromy_determinant_and_trace(c in any_vector(8)) {
        let m = monodromy_poly(&c);
        let s2 = Q::constant(m.s.clone() * m.s.clone());
        prop_assert!((&m.det() - &s2).is_zero());
        let tr = m.trace();
        let p = c.period();
        prop_assert_eq!(tr.degree(), Some(p));
        prop_assert_eq!(tr.coeff(p), Rational::from_int(1));
        let sum: Rational = c.v().iter().cloned().fold(Rational::from_int(0), |x, y| x + y);
        prop_assert_eq!(tr.coeff(p - 1), -sum);
    }

    #[test]
    fn cyclic_invariance(c in any_vector(8), k in -9i64..=9) {
        let d = discriminant(&c);
        let e = discriminant(&c.cyclic_shift(k));
        prop_assert_eq!(d.poly, e.poly);
    }

    #[test]
    fn shift_covariance(c in vector(Model::Dso, 8), shift in rational(), pts in prop::collection::vec(rational(), 20)) {
        let moved = c.shift_potential(&shift);
        let (d0, d1) = (discriminant(&c), discriminant(&moved));
        for e in pts {
            prop_assert_eq!(d1.eval(&(e.clone() + shift.clone())), d0.eval(&e));
        }
        let f = c.to_float();
        let fm = f.shift_potential(&shift.as_f64());
        for e in [-2.5, 0.1, 1.7] {
            let (x, y) = (monodromy_numeric(&f, &e).trace(), monodromy_numeric(&fm, &(e + shift.as_f64())).trace());
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn scale_covariance(c in vector(Model::Odjm, 8), scale in positive(), pts in prop::collection::vec(rational(), 20)) {
        let scaled = c.scale_offdiag(&scale).unwrap();
        let (d0, d1) = (discriminant(&c), discriminant(&scaled));
        for e in pts {
            prop_assert_eq!(d1.eval(&(e.clone() * scale.clone())), d0.eval(&e));
        }
    }

    #[test]
    fn reflection_identity(c in vector(Model::Odjm, 8)) {
        let d = discriminant(&c).poly;
        let want = if c.period() % 2 == 0 { d.clone() } else { -&d };
        prop_assert_eq!(d.reflect(), want);
    }

    #[test]
    fn vector_json_round_trip(c in any_vector(8)) {
        let back = AnyVector::from_json(&c.to_json()).unwrap();
        prop_assert_eq!(back, AnyVector::Exact(c.clone()));
        let f = c.to_float();
        prop_assert_eq!(AnyVector::from_json(&f.to_json()).unwrap(), AnyVector::Float(f));
    }
}

// spectrum

fn rational_instances() -> Vec<CoefficientVector<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut out = Vec::new();
    for id in FamilyId::ALL {
        for _ in 0..3 {
            if let Ok(inst) = make_family::<Rational>(&sample_spec(id, &mut rng)) {
                if inst.vector.period() <= 8 {
                    out.push(inst.vector);
                }
            }
        }
    }
    out
}

#[test]
fn exact_and_float_agree_on_family_instances() {
    for c in rational_instances() {
        let ex = closed_gaps_exact(&c).unwrap();
        let fl = closed_gaps_float(&c.to_float(), 1e-8).unwrap();
        assert_eq!(ex.len(), fl.len(), "{c}");
        for (x, y) in ex.iter().zip(&fl) {
            assert_eq!(x.sign, y.sign, "{c}");
            assert!((x.energy - y.energy).abs() <= 1e-8, "{c}: {} vs {}", x.energy, y.energy);
        }
    }
}

#[test]
fn shift_equivariance_of_certificates() {
    let shift = Rational::from_ratio(7, 3);
    for c in rational_instances().into_iter().filter(|c| c.model() == Model::Dso) {
        let a = closed_gaps_exact(&c).unwrap();
        let b = closed_gaps_exact(&c.shift_potential(&shift)).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            match (x.exact_value(), y.exact_value()) {
                (Some(u), Some(w)) => {
                    let (u, w) = (Rational::parse_literal(u).unwrap(), Rational::parse_literal(w).unwrap());
                    assert_eq!(u + shift.clone(), w, "{c}");
                }
                _ => assert!((x.energy + shift.as_f64() - y.energy).abs() < 1e-12),
            }
            assert_eq!(x.sign, y.sign);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn band_edges_are_roots_of_discriminant(c in any_vector(8)) {
        let r = band_structure(&c).unwrap();
        let p = c.period();
        let edges = r.edges();
        prop_assert_eq!(edges.len(), 2 * p);
        prop_assert!(edges.windows(2).all(|w| w[0] <= w[1]));
        let d = discriminant(&c.to_float());
        for e in &edges {
            let x = d.eval(e);
            // edges carry a few ulps of error, which D amplifies by its slope
            let h = 1e-6 * (1.0 + e.abs());
            let slope = (d.eval(&(e + h)) - d.eval(&(e - h))).abs() / (2.0 * h);
            let tol = 1e-6 + slope * 1e-13 * (1.0 + e.abs());
            prop_assert!((x.abs() - 2.0).abs() < tol, "D({e}) = {x}, slope {slope}");
        }
        let fl = band_structure(&c.to_float()).unwrap();
        prop_assert_eq!(fl.closed_gap_count, r.closed_gap_count);
        if c.is_irreducible() && p >= 2 {
            prop_assert!(r.closed_gap_count <= p - 2);
        }
    }

    #[test]
    fn cyclic_shift_keeps_the_report(c in any_vector(6), k in 1i64..=5) {
        prop_assert_eq!(band_structure(&c).unwrap(), band_structure(&c.cyclic_shift(k)).unwrap());
    }

    #[test]
    fn odd_offdiagonal_parity(c in vector(Model::Odjm, 7)) {
        prop_assume!(c.period() % 2 == 1);
        let r = band_structure(&c).unwrap();
        prop_assert_eq!(r.closed_gap_count % 2, 0);
        prop_assert!(r.closed_gaps.iter().all(|g| g.energy != 0.0));
    }
}

// families

fn certify_any(id: FamilyId, inst: Result<FamilyInstance<Rational>, FamilyError>, spec_f: impl FnOnce() -> FamilyInstance<f64>) -> bool {
    match inst {
        Ok(i) => analyze(&i).unwrap().1.all_certified,
        Err(FamilyError::Irrational(_)) => analyze(&spec_f()).unwrap().1.all_certified,
        Err(e) => panic!("{id}: {e}"),
    }
}

#[test]
fn every_family_certified_on_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for id in FamilyId::ALL {
        for _ in 0..25 {
            let spec = sample_spec(id, &mut rng);
            let ok = certify_any(id, make_family::<Rational>(&spec), || make_family::<f64>(&spec).unwrap());
            assert!(ok, "{spec}");
        }
    }
}

#[test]
fn dso_p5_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let one = Rational::from_int(1);
    for (id, s) in [(FamilyId::DsoP5Plus, 1), (FamilyId::DsoP5Minus, -1)] {
        let s = Rational::from_int(s);
        for _ in 0..25 {
            let inst = make_family::<Rational>(&sample_spec(id, &mut rng)).unwrap();
            let v = inst.vector.v();
            let at = |j: usize| v[j % 5].clone();
            for j in 0..5 {
                // -v_j v_{j+1} v_{j+2} + v_j + v_{j+2} + s = 0
                let cubic = -(at(j) * at(j + 1) * at(j + 2)) + at(j) + at(j + 2) + s.clone();
                assert_eq!(cubic, Rational::from_int(0), "{}", inst.vector);
                // v_{j+3} = s (v_j v_{j+1} - 1)
                assert_eq!(at(j + 3), s.clone() * (at(j) * at(j + 1) - one.clone()), "{}", inst.vector);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn doubling_bound(base in vector(Model::Dso, 3), k in 2usize..=3) {
        prop_assume!(base.is_irreducible() && base.period() >= 2);
        let inst = double_construct(&base, k).unwrap();
        prop_assert!(inst.vector.is_irreducible());
        let g_base = band_structure(&base).unwrap().closed_gap_count;
        let (r, check) = analyze(&inst).unwrap();
        prop_assert!(check.all_certified);
        prop_assert!(r.closed_gap_count >= g_base + (k - 1) * base.period());
    }
}

// census

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn census_determinism_and_monotone_evidence(seed in any::<u64>(), model in any_model(), p in 1usize..=6) {
        let cfg = CensusConfig::new(model, p, 40, seed, Backend::Float);
        let a = run_census(&cfg).unwrap();
        prop_assert_eq!(&a, &run_census(&cfg).unwrap());
        let base = a.max_found;
        let mut injected = a.clone();
        let inst: FamilyInstance<f64> = make_family(&gapscope::families::FamilySpec::parse(FamilyId::OdjmP5, "").unwrap()).unwrap();
        let w = InjectedWitness::from_instance("odjm-p5", &inst).unwrap();
        injected.inject(&w.label, w.count, inst.vector.to_json());
        prop_assert!(injected.max_found >= base);
        prop_assert!(a.max_found == a.max_sampled);
        if model == Model::Odjm && p % 2 == 1 {
            prop_assert!(a.histogram.keys().all(|k| k % 2 == 0));
        }
    }
}
