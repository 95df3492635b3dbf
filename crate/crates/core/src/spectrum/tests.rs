use super::*;
use crate::jacobi::CoefficientVector;

fn qs(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| Rational::from_int(x)).collect()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn free_period_two() {
    for c in [
        band_structure(&CoefficientVector::dso(qs(&[0, 0])).unwrap()).unwrap(),
        band_structure(&CoefficientVector::dso(vec![0.0, 0.0]).unwrap()).unwrap(),
    ] {
        assert_eq!(c.edges(), vec![-2.0, 0.0, 0.0, 2.0]);
        assert_eq!(c.closed_gap_count, 1);
        assert_eq!(c.gaps[0].status, GapStatus::Closed);
        assert_eq!(c.closed_gaps[0].sign, -1);
    }
}

#[test]
fn open_gap_period_two() {
    let s5 = 5f64.sqrt();
    let want = [1.0 - s5, 0.0, 2.0, 1.0 + s5];
    let ex = band_structure(&CoefficientVector::dso(qs(&[0, 2])).unwrap()).unwrap();
    let fl = band_structure(&CoefficientVector::dso(vec![0.0, 2.0]).unwrap()).unwrap();
    for r in [ex, fl] {
        assert_eq!(r.closed_gap_count, 0);
        assert_eq!(r.gaps[0].status, GapStatus::Open);
        for (x, y) in r.edges().iter().zip(want) {
            assert!(close(*x, y, 1e-12), "{x} vs {y}");
        }
    }
}

#[test]
fn period_one_single_band() {
    let r = band_structure(&CoefficientVector::jacobi(qs(&[3]), qs(&[1])).unwrap()).unwrap();
    assert_eq!(r.edges(), vec![-5.0, 7.0]);
    assert!(r.gaps.is_empty());
    let r = band_structure(&CoefficientVector::dso(vec![0.0]).unwrap()).unwrap();
    assert_eq!(r.edges(), vec![-2.0, 2.0]);
}

#[test]
fn dso_period_four_exact() {
    let c = CoefficientVector::dso(qs(&[0, 5, 0, -5])).unwrap();
    let r = band_structure(&c).unwrap();
    assert_eq!(r.bands.len(), 4);
    assert_eq!(r.closed_gap_count, 1);
    let g = &r.closed_gaps[0];
    assert_eq!((g.energy, g.sign, g.gap_index), (0.0, 1, 2));
    assert_eq!(g.exact_value(), Some("0"));
    assert_eq!(g.exact.as_ref().unwrap().factor, vec!["0", "1"]);
}

#[test]
fn dso_period_eight_irrational_energies() {
    let c = CoefficientVector::dso(qs(&[0, 0, 0, 1, 0, 0, 0, -1])).unwrap();
    let gaps = closed_gaps_exact(&c).unwrap();
    let s2 = 2f64.sqrt();
    let e: Vec<f64> = gaps.iter().map(|g| g.energy).collect();
    assert_eq!(e.len(), 3);
    assert!(close(e[0], -s2, 1e-12) && e[1] == 0.0 && close(e[2], s2, 1e-12));
    assert_eq!(gaps[0].exact.as_ref().unwrap().factor, vec!["-2", "0", "1"]);
    assert!(gaps.iter().all(|g| g.sign == 1));
}

#[test]
fn dso_period_five_rational() {
    let v = vec![
        Rational::from_int(2),
        Rational::from_int(3),
        Rational::from_ratio(3, 5),
        Rational::from_int(5),
        Rational::from_ratio(4, 5),
    ];
    let gaps = closed_gaps_exact(&CoefficientVector::dso(v).unwrap()).unwrap();
    assert_eq!(gaps.len(), 1);
    assert_eq!((gaps[0].energy, gaps[0].sign), (0.0, 1));
}

#[test]
fn odjm_float_witnesses() {
    let r73 = (7.0f64 / 3.0).sqrt();
    let c = CoefficientVector::odjm(vec![2.0, 2.0, r73, 4.0 / 3.0, r73]).unwrap();
    let g = closed_gaps_float(&c, 1e-8).unwrap();
    assert_eq!(g.len(), 2);
    assert!(close(g[0].energy, -1.0, 1e-9) && g[0].sign == -1);
    assert!(close(g[1].energy, 1.0, 1e-9) && g[1].sign == 1);

    let s = 2.0 / 7f64.sqrt();
    let c = CoefficientVector::odjm(vec![1.0, 2.0, 2.0, 1.0, s, s]).unwrap();
    let g = closed_gaps_float(&c, 1e-8).unwrap();
    let e: Vec<f64> = g.iter().map(|x| x.energy).collect();
    assert_eq!(e.len(), 3, "{e:?}");
    assert!(close(e[0], -1.0, 1e-9) && close(e[1], 0.0, 1e-9) && close(e[2], 1.0, 1e-9));
}

#[test]
fn float_and_exact_agree_on_gaps() {
    let c = CoefficientVector::dso(qs(&[1, 0, 0, -1, 0, 0])).unwrap();
    let ex = band_structure(&c).unwrap();
    let fl = band_structure(&c.to_float()).unwrap();
    assert_eq!(ex.closed_gap_count, 2);
    assert_eq!(fl.closed_gap_count, 2);
    for (x, y) in ex.edges().iter().zip(fl.edges()) {
        assert!(close(*x, y, 1e-10));
    }
    for (x, y) in ex.closed_gaps.iter().zip(&fl.closed_gaps) {
        assert_eq!((x.sign, x.gap_index), (y.sign, y.gap_index));
    }
}

#[test]
fn band_function_examples() {
    let c = CoefficientVector::dso(vec![0.0, 0.0]).unwrap();
    let l = band_function(&c, 0.25).unwrap();
    assert!(close(l[0], -2f64.sqrt(), 1e-12) && close(l[1], 2f64.sqrt(), 1e-12));
    let l = band_function(&c, 0.0).unwrap();
    assert!(close(l[0], -2.0, 1e-12) && close(l[1], 2.0, 1e-12));
    let c = CoefficientVector::dso(vec![0.0, 5.0, 0.0, -5.0]).unwrap();
    let l = band_function(&c, 0.0).unwrap();
    assert_eq!(l.iter().filter(|x| x.abs() < 1e-9).count(), 2);
}

#[test]
fn floquet_agrees_with_discriminant() {
    let grid: Vec<f64> = (0..17).map(|i| i as f64 / 16.0).collect();
    let c = CoefficientVector::dso(vec![0.0, 0.0]).unwrap();
    assert!(floquet_crosscheck(&c, &[0.0, 0.25, 0.5]).unwrap() <= 1e-9);
    let c = CoefficientVector::dso(vec![0.0, 5.0, 0.0, -5.0]).unwrap();
    assert!(floquet_crosscheck(&c, &grid).unwrap() <= 1e-8);
    let c = CoefficientVector::dso(vec![3.0]).unwrap();
    assert!(floquet_crosscheck(&c, &grid).unwrap() <= 1e-12);
    let l = floquet_eigenvalues(&c, 0.125);
    assert!(close(l[0], 3.0 + 2.0 * (std::f64::consts::PI / 4.0).cos(), 1e-12));
}

#[test]
fn reflection_examples() {
    let r = reflection_report(&CoefficientVector::odjm(qs(&[1, 2, 2, 1])).unwrap()).unwrap();
    assert_eq!(r.zero_status, ZeroStatus::ClosedGap);
    assert!(r.symmetric);
    let r = reflection_report(&CoefficientVector::odjm(qs(&[1, 2, 3, 4])).unwrap()).unwrap();
    assert!(r.symmetric);
    assert_eq!(r.zero_status, ZeroStatus::OpenGap);
    let r = reflection_report(&CoefficientVector::odjm(vec![1.0, 2.0, 0.5, 3.0, 1.5]).unwrap()).unwrap();
    assert!(r.symmetric);
    assert_eq!(r.zero_status, ZeroStatus::BandInterior);
    assert!(reflection_report(&CoefficientVector::dso(qs(&[0, 1])).unwrap()).is_err());
}

#[test]
fn generic_vector_has_no_closed_gaps() {
    let c = CoefficientVector::dso(vec![0.31, -1.7, 2.2, 0.05, -0.9]).unwrap();
    assert!(closed_gaps_float(&c, 1e-8).unwrap().is_empty());
}
