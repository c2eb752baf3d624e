//! End-to-end acceptance checks: each test pins one headline behavior at its
//! stated budget and prints a single PASS line when it holds.

mod common;

use std::time::{Duration, Instant};

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padic_newton::{
    certify_dynamical, certify_exp_composition, certify_irreducible, exp_slopes,
    lower_convex_hull, newton_polygon, predict_composition, predict_product, prime_divisors,
    render::{render_svg, LineStyle, PlotSpec},
    run_trials, taylor_exp, union_lower_bound, BigInt, BigRational, NewtonPolygon, PolygonError,
    Polynomial, Prime, Theorem, Verdict, DEFAULT_DEGREE_CAP,
};

fn poly(text: &str) -> Polynomial {
    Polynomial::parse(text).unwrap()
}

fn prime(p: u64) -> Prime {
    Prime::from_u64(p).unwrap()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn vertices(np: &NewtonPolygon) -> Vec<(i64, i64)> {
    np.vertices().iter().map(|v| v.pair()).collect()
}

fn segments(np: &NewtonPolygon) -> Vec<(BigRational, i64)> {
    np.segments().into_iter().map(|s| (s.slope, s.length)).collect()
}

#[test]
fn c01_degree_six_example_polygon_is_exact_and_fast() {
    let f = poly("5 + x^2 + 125*x^6");
    let p = prime(5);
    let _warm = newton_polygon(&f, &p).unwrap();

    let start = Instant::now();
    let np = newton_polygon(&f, &p).unwrap();
    let elapsed = start.elapsed();

    assert_eq!(vertices(&np), [(0, 1), (2, 0), (6, 3)]);
    assert_eq!(segments(&np), [(rat(-1, 2), 2), (rat(3, 4), 4)]);
    assert!(elapsed < Duration::from_millis(1), "took {elapsed:?}");
    println!("PASS degree-six example: exact vertices and segments in {elapsed:?}");
}

#[test]
fn c02_product_polygon_matches_prediction() {
    let p = prime(2);
    let factors = [poly("x^2 - 2"), poly("x^3 - 2"), poly("x^4 - 2")];
    let polygons: Vec<NewtonPolygon> = factors
        .iter()
        .map(|f| newton_polygon(f, &p).unwrap())
        .collect();
    let predicted = predict_product(
        &predict_product(&polygons[0], &polygons[1]).unwrap(),
        &polygons[2],
    )
    .unwrap();
    let product = &(&factors[0] * &factors[1]) * &factors[2];
    let actual = newton_polygon(&product, &p).unwrap();

    assert_eq!(
        segments(&actual),
        [(rat(-1, 2), 2), (rat(-1, 3), 3), (rat(-1, 4), 4)]
    );
    assert_eq!(actual, predicted);
    println!("PASS product law: three-factor polygon equals the predicted concatenation");
}

#[test]
fn c03_sum_polygon_equals_union_hull() {
    let p = prime(3);
    let f = poly("3 + x^2 + 9*x^3");
    let g = poly("9 + x + 3*x^3");
    let region = union_lower_bound(&[
        newton_polygon(&f, &p).unwrap(),
        newton_polygon(&g, &p).unwrap(),
    ])
    .unwrap();
    let sum_np = newton_polygon(&(&f + &g), &p).unwrap();

    let expected = [(0, 1), (1, 0), (2, 0), (3, 1)];
    assert_eq!(
        region.vertices().iter().map(|v| v.pair()).collect::<Vec<_>>(),
        expected
    );
    assert_eq!(vertices(&sum_np), expected);
    println!("PASS sum law: sum polygon equals the union lower hull exactly");
}

#[test]
fn c04_stretch_fuzz_thousand_trials() {
    let start = Instant::now();
    let summary = run_trials(Theorem::Stretch, 20260814, 1000);
    let elapsed = start.elapsed();

    assert_eq!(summary.trials, 1000);
    assert!(summary.passed(), "{summary}");
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!("PASS stretch fuzz: 1000/1000 exact predictions in {elapsed:?}");
}

#[test]
fn c05_violated_hypotheses_break_the_naive_stretch() {
    let p = prime(5);
    let f = poly("25 + x + 25*x^2");
    let g = poly("5 + x^2");
    let np_f = newton_polygon(&f, &p).unwrap();
    let np_g = newton_polygon(&g, &p).unwrap();

    let err = predict_composition(&np_f, &np_g).unwrap_err();
    assert!(
        matches!(err, PolygonError::HypothesisViolation { .. }),
        "got {err}"
    );

    let actual = newton_polygon(&f.compose(&g), &p).unwrap();
    let naive_stretch =
        NewtonPolygon::from_vertices(p, vec![(0, 2), (2, 0), (4, 2)]).unwrap();
    assert_eq!(vertices(&actual), [(0, 1), (2, 0), (4, 2)]);
    assert_ne!(actual, naive_stretch);
    println!("PASS hypothesis sharpness: violation reported and naive stretch refuted");
}

#[test]
fn c06_iterates_of_eisenstein_quadratic_stay_certified() {
    let report = certify_dynamical(&poly("x^2 + 2"), &prime(2), 6, DEFAULT_DEGREE_CAP).unwrap();

    assert_eq!(report.pr_level, 1);
    assert_eq!(report.steps.len(), 6);
    assert!(report.guaranteed_all_iterates);
    assert!(report.all_verified());
    for (i, step) in report.steps.iter().enumerate() {
        let m = i + 1;
        assert_eq!(step.iterate, m);
        assert_eq!(step.degree, 1 << m);
        assert_eq!(step.expected_slope, rat(-1, 1 << m));
        assert!(step.slope_ok);
        let cert = step.certificate.as_ref().expect("every iterate certified");
        assert!(cert.revalidate(&poly("x^2 + 2").iterate(m, DEFAULT_DEGREE_CAP).unwrap()));
    }
    println!("PASS dynamical irreducibility: iterates 1..=6 pure of slope -1/2^m and certified");
}

#[test]
fn c07_exponential_slope_formula_matches_polygons() {
    let start = Instant::now();
    for p in [2u64, 3, 5, 7] {
        let p = prime(p);
        for n in 1..=200usize {
            let f = taylor_exp(n);
            let np = newton_polygon(&f, &p).unwrap();
            assert_eq!(
                segments(&np),
                exp_slopes(n, &p),
                "slope formula mismatch at n = {n}, p = {p}"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!("PASS exponential slopes: closed form matches all polygons (n <= 200) in {elapsed:?}");
}

#[test]
fn c08_truncated_exponentials_certified_irreducible() {
    for n in 2..=60usize {
        let f = taylor_exp(n);
        let primes: Vec<Prime> = prime_divisors(n).into_iter().map(prime).collect();
        let cert = certify_irreducible(&f, &primes).unwrap();
        assert_eq!(
            cert.verdict,
            Verdict::CertifiedIrreducible,
            "n = {n} fell short: divisor {}",
            cert.combined_divisor
        );
        assert_eq!(cert.combined_divisor, n as u64);
    }
    println!("PASS truncated exponentials: certified irreducible for every degree 2..=60");
}

#[test]
fn c09_exp_composition_certificates_scale_with_iterates() {
    let start = Instant::now();
    let g = poly("x^5 + 8");
    for (m, expected_degree) in [(0usize, 4u64), (1, 20), (2, 100)] {
        let report = certify_exp_composition(4, &g, m, DEFAULT_DEGREE_CAP).unwrap();
        assert_eq!(report.certificate.degree as u64, expected_degree);
        assert_eq!(report.certificate.verdict, Verdict::CertifiedIrreducible);
        assert_eq!(report.certificate.combined_divisor, expected_degree);
        assert!(report.hypotheses.all_satisfied());
        assert!(!report.divisor_degraded);
        assert!(report.slope_checks.iter().all(|c| c.matches));
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!("PASS exp compositions: certified with divisor 4*5^m for m in 0..=2 in {elapsed:?}");
}

#[test]
fn c10_hull_matches_brute_force_on_ten_thousand_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for case in 0..10_000u32 {
        let count = rng.gen_range(1..=40);
        let points: Vec<(i64, i64)> = (0..count)
            .map(|_| (rng.gen_range(-50..=50), rng.gen_range(-50..=50)))
            .collect();
        assert_eq!(
            lower_convex_hull(&points).unwrap(),
            common::naive_lower_hull(&points),
            "disagreement on case {case}: {points:?}"
        );
    }
    println!("PASS hull oracle: 10000/10000 point sets agree with gift-wrapping");
}

#[test]
fn c11_svg_rendering_is_deterministic_and_decodable() {
    let f = poly("5 + x^2 + 125*x^6");
    let np = newton_polygon(&f, &prime(5)).unwrap();
    let mut spec = PlotSpec::new();
    spec.add_polygon(&np, LineStyle::Solid, "f").unwrap();

    let first = render_svg(&spec).unwrap();
    let second = render_svg(&spec).unwrap();
    assert_eq!(first, second, "repeated renders must be byte-identical");

    // fit the affine pixel map from the endpoint vertices and confirm the
    // decoded interior vertex lands where the map predicts, within the
    // three-decimal quantization
    let centers = common::circle_centers(&first);
    assert_eq!(centers.len(), 3);
    let data = [(0i64, 1i64), (2, 0), (6, 3)];
    let scale_x = (&centers[2].0 - &centers[0].0) / rat(data[2].0 - data[0].0, 1);
    let scale_y = (&centers[2].1 - &centers[0].1) / rat(data[2].1 - data[0].1, 1);
    let predicted_x = &centers[0].0 + &scale_x * rat(data[1].0 - data[0].0, 1);
    let predicted_y = &centers[0].1 + &scale_y * rat(data[1].1 - data[0].1, 1);
    let tolerance = rat(1, 100);
    assert!((&predicted_x - &centers[1].0).abs() < tolerance);
    assert!((&predicted_y - &centers[1].1).abs() < tolerance);
    println!("PASS rendering: byte-identical SVG with 3-decimal-faithful vertex coordinates");
}
