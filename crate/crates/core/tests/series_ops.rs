use bohrlab::families::FunctionFamily;
use bohrlab::series::{
    cauchy_product, compose, Poly, Rational, Rigor, SeriesError, SupNorm, TailBound, TruncatedSeries,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn ones(n: usize) -> TruncatedSeries {
    // 1/(1 - z) truncated; every discarded coefficient is 1
    TruncatedSeries::from_real(&vec![1.0; n + 1], 1.0, TailBound::geometric(0.0, n + 1, 1.0)).unwrap()
}

#[test]
fn majorant_of_geometric_series() {
    let s = ones(50);
    let m = s.majorant_sum(1.0 / 3.0, 0).unwrap();
    assert!(m.value <= 1.5 && 1.5 <= m.upper());
    assert!((m.value - 1.5).abs() < 1e-20 + m.band());
}

#[test]
fn majorant_at_zero_radius() {
    let s = ones(10);
    assert_eq!(s.majorant_sum(0.0, 1).unwrap().value, 0.0);
    assert_eq!(s.majorant_sum(0.0, 0).unwrap().value, 1.0);
}

#[test]
fn majorant_of_concave_extremal() {
    let s = FunctionFamily::ConcavePole { p: 0.5 }.extremal_series(200).unwrap();
    let m = s.majorant_sum(0.1, 0).unwrap();
    let exact = 0.05 / (0.4 * 0.95);
    assert!((m.value - exact).abs() <= m.band() + 1e-16, "{} vs {exact}", m.value);
}

#[test]
fn majorant_errors() {
    let s = ones(10);
    assert!(matches!(s.majorant_sum(1.0, 0), Err(SeriesError::Domain { .. })));
    assert!(matches!(s.majorant_sum(-0.1, 0), Err(SeriesError::Domain { .. })));
    assert!(matches!(s.majorant_sum(0.5, 12), Err(SeriesError::Argument(_))));
    assert_eq!(s.majorant_sum(0.5, 11).unwrap().value, 0.0);
}

#[test]
fn compose_with_identity_outer() {
    let w = TruncatedSeries::polynomial(vec![c(0.0), c(0.3), Complex64::new(0.1, 0.2), c(-0.05)]);
    let id = TruncatedSeries::polynomial(vec![c(0.0), c(1.0)]);
    let out = compose(&id, &w, 10).unwrap();
    for n in 0..=3 {
        assert!((out.coeff(n) - w.coeff(n)).norm() < 1e-15);
    }
}

#[test]
fn compose_geometric_substitution() {
    let cval = Complex64::new(0.3, 0.4);
    let outer = ones(40);
    let inner = TruncatedSeries::polynomial(vec![c(0.0), cval]);
    let out = compose(&outer, &inner, 5).unwrap();
    assert_eq!(out.order(), 5);
    for n in 0..=5 {
        assert!((out.coeff(n) - cval.powu(n as u32)).norm() < 1e-15);
    }
}

#[test]
fn compose_concave_against_pointwise() {
    let p = 0.9;
    let outer = FunctionFamily::ConcavePole { p }.extremal_series(2048).unwrap();
    // 0.3 z (z + 0.5)/(1 + 0.5 z), truncated to a polynomial
    let w = Rational::new(
        Poly::new(vec![c(0.0), c(0.15), c(0.3)]),
        Poly::new(vec![c(1.0), c(0.5)]),
    )
    .unwrap();
    let inner = TruncatedSeries::from_rational(w.clone(), 64, 1.0, SupNorm { value: 0.3, exact: true }).unwrap();
    let out = compose(&outer, &inner, 64).unwrap();
    let kp = |z: Complex64| p * z / ((p - z) * (1.0 - p * z));
    for j in 0..12 {
        let z = Complex64::from_polar(0.2, std::f64::consts::TAU * j as f64 / 12.0);
        let direct = kp(w.eval(z));
        assert!((out.eval(z) - direct).norm() <= 1e-9, "point {j}");
    }
}

#[test]
fn compose_preconditions() {
    let outer = ones(10);
    let bad = TruncatedSeries::polynomial(vec![c(0.1), c(0.2)]);
    assert!(matches!(compose(&outer, &bad, 5), Err(SeriesError::Precondition(_))));
    let big = TruncatedSeries::polynomial(vec![c(0.0), c(1.2)]);
    assert!(matches!(compose(&outer, &big, 5), Err(SeriesError::CompositionDomain { .. })));
}

#[test]
fn sampled_sup_is_heuristic() {
    let outer = ones(30);
    let inner = TruncatedSeries::polynomial(vec![c(0.0), c(0.5)]);
    let out = compose(&outer, &inner, 20).unwrap();
    assert_eq!(out.rigor(), Rigor::Heuristic);
    let exact = inner.clone().with_sup_norm(SupNorm { value: 0.5, exact: true });
    assert!(compose(&outer, &exact, 20).unwrap().rigor().is_rigorous());
}

#[test]
fn product_of_ones() {
    let a = ones(20);
    let p = cauchy_product(&a, &a, 10);
    for n in 0..=10 {
        assert_eq!(p.coeff(n), c((n + 1) as f64));
    }
}

#[test]
fn product_with_unit_constant() {
    let a = FunctionFamily::ConcavePole { p: 0.5 }.extremal_series(64).unwrap();
    let one = TruncatedSeries::polynomial(vec![c(1.0)]);
    let p = cauchy_product(&a, &one, 64);
    assert_eq!(p.order(), 64);
    for n in 0..=64 {
        assert!((p.coeff(n) - a.coeff(n)).norm() <= 1e-12 * a.coeff(n).norm());
    }
}

#[test]
fn product_of_two_geometrics() {
    let a = ones(20);
    let half: Vec<f64> = (0..=20).map(|n| 0.5f64.powi(n)).collect();
    let b = TruncatedSeries::from_real(&half, 1.0, TailBound::geometric(0.5f64.powi(21).ln(), 21, 0.5)).unwrap();
    let p = cauchy_product(&a, &b, 10);
    assert_eq!(p.coeff(0), c(1.0));
    assert_eq!(p.coeff(1), c(1.5));
    assert_eq!(p.coeff(2), c(1.75));
    for n in 0..=10 {
        let expect = 2.0 * (1.0 - 0.5f64.powi(n as i32 + 1));
        assert!((p.coeff(n).re - expect).abs() < 1e-14);
    }
    // the tail bound covers the next coefficients of the true product
    let m = p.majorant_sum(0.2, 0).unwrap();
    let truth = 1.0 / ((1.0 - 0.2) * (1.0 - 0.1));
    assert!(m.lower() <= truth && truth <= m.upper());
}

#[test]
fn differentiate_and_integrate_polynomials() {
    let s = TruncatedSeries::polynomial(vec![c(0.0), c(1.0), c(1.0)]);
    let back = s.differentiate().integrate_from_zero();
    for n in 0..=2 {
        assert_eq!(back.coeff(n), s.coeff(n));
    }
    let d = ones(10).differentiate();
    for n in 0..10 {
        assert_eq!(d.coeff(n), c((n + 1) as f64));
    }
}

#[test]
fn scaled_derivative_gives_scaled_series() {
    let h = FunctionFamily::ConcavePole { p: 0.5 }.extremal_series(300).unwrap();
    let gp = h.differentiate().scale(c(0.5));
    let g = gp.integrate_from_zero();
    for n in 1..=299 {
        let expect = 0.5 * h.coeff(n).re;
        assert!((g.coeff(n).re - expect).abs() <= 1e-13 * expect, "n = {n}");
    }
}

#[test]
fn rotation_leaves_majorant_unchanged() {
    let h = FunctionFamily::ConcavePole { p: 0.6 }.extremal_series(256).unwrap();
    let rot = h.scale(Complex64::from_polar(1.0, 1.1));
    let (a, b) = (h.majorant_sum(0.2, 1).unwrap(), rot.majorant_sum(0.2, 1).unwrap());
    assert!((a.value - b.value).abs() <= 1e-15 * a.value);
    assert_eq!(a.tail, b.tail);
}

fn small_series() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..8)
}

fn to_poly(v: &[(f64, f64)]) -> Vec<Complex64> {
    v.iter().map(|&(re, im)| Complex64::new(re, im)).collect()
}

proptest! {
    #[test]
    fn majorant_monotone_in_r_and_n(v in small_series(), r1 in 0.0f64..0.9, dr in 0.0f64..0.09) {
        let coeffs = to_poly(&v);
        let s = TruncatedSeries::polynomial(coeffs.clone());
        let a = s.majorant_sum(r1, 0).unwrap().value;
        let b = s.majorant_sum(r1 + dr, 0).unwrap().value;
        prop_assert!(b >= a);
        let shorter = TruncatedSeries::polynomial(coeffs[..coeffs.len() - 1].to_vec());
        prop_assert!(shorter.majorant_sum(r1, 0).unwrap().value <= a);
    }

    #[test]
    fn composition_coefficients_dominated_by_majorants(
        o in small_series(),
        w in prop::collection::vec((-0.3f64..0.3, -0.3f64..0.3), 1..5),
    ) {
        let outer = TruncatedSeries::polynomial(to_poly(&o));
        let mut wc = vec![Complex64::new(0.0, 0.0)];
        wc.extend(to_poly(&w));
        let inner = TruncatedSeries::polynomial(wc.clone());
        let out = compose(&outer, &inner, 10).unwrap();
        let om = TruncatedSeries::polynomial(outer.coeffs().iter().map(|z| c(z.norm())).collect());
        let im = TruncatedSeries::polynomial(wc.iter().map(|z| c(z.norm())).collect())
            .with_sup_norm(SupNorm { value: wc.iter().map(|z| z.norm()).sum(), exact: true });
        if im.sup_norm().unwrap().value < 1.0 {
            let maj = compose(&om, &im, 10).unwrap();
            for n in 0..=10 {
                prop_assert!(out.coeff(n).norm() <= maj.coeff(n).re + 1e-12);
            }
        }
    }

    #[test]
    fn integrate_then_differentiate_is_identity(v in small_series()) {
        let mut coeffs = to_poly(&v);
        coeffs[0] = Complex64::new(0.0, 0.0);
        let s = TruncatedSeries::polynomial(coeffs.clone());
        let round = s.integrate_from_zero().differentiate();
        for (n, a) in coeffs.iter().enumerate() {
            prop_assert!((round.coeff(n) - a).norm() <= 1e-15);
        }
        let other = s.differentiate().integrate_from_zero();
        for (n, a) in coeffs.iter().enumerate() {
            prop_assert!((other.coeff(n) - a).norm() <= 1e-15);
        }
    }
}

#[test]
fn doubling_truncation_stays_inside_tail() {
    let families = [
        "concave:p=0.3",
        "concave:p=0.8",
        "convex:classical",
        "starlike:classical",
        "convex:alpha=0.25",
        "starlike:alpha=0.75",
        "convex:janowski:A=0.5,B=-0.5",
        "starlike:janowski:A=1,B=0",
        "convex:janowski:A=0.9,B=0.3",
    ];
    for spec in families {
        let fam: FunctionFamily = spec.parse().unwrap();
        let lim = fam.analytic_radius().unwrap();
        for n in [16usize, 64, 256] {
            let s1 = fam.extremal_series(n).unwrap();
            let s2 = fam.extremal_series(2 * n).unwrap();
            for j in 1..10 {
                let r = lim * j as f64 / 10.0 * 0.98;
                let a = s1.majorant_sum(r, 0).unwrap();
                let b = s2.majorant_sum(r, 0).unwrap();
                if !a.tail.is_finite() {
                    continue;
                }
                assert!(
                    (b.value - a.value) <= a.tail + a.rounding + b.rounding,
                    "{spec} N={n} r={r}: {} > {}",
                    b.value - a.value,
                    a.tail
                );
            }
        }
    }
}
