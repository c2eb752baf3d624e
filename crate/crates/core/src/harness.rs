//! Seeded randomized verification of the transformation laws.
//!
//! Every trial derives its RNG from `(seed, trial index)` via an independent
//! ChaCha8 stream, so a run's outcome does not depend on scheduling and any
//! failing trial can be replayed in isolation.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactnum::{BigInt, BigRational, Prime};
use crate::poly::Polynomial;
use crate::polygon::{
    newton_polygon, predict_composition, predict_product, region_contains, union_lower_bound,
    NewtonPolygon,
};

/// Statements the harness knows how to spot-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// The polygon of a product is the slope-sorted concatenation of the
    /// factors' polygons.
    Product,
    /// The polygon of a sum lies on or above the pointwise minimum of the
    /// summands' polygons.
    Sum,
    /// Powers of a `p^r`-pure polynomial stay pure with the same slope.
    PowerPurity,
    /// Composition with a `p^r`-pure polynomial of degree `d` stretches the
    /// outer polygon by `d` horizontally when all its slopes are below `r`
    /// in magnitude.
    Stretch,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [
        Theorem::Product,
        Theorem::Sum,
        Theorem::PowerPurity,
        Theorem::Stretch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Product => "product",
            Theorem::Sum => "sum",
            Theorem::PowerPurity => "power-purity",
            Theorem::Stretch => "stretch",
        }
    }

    pub fn from_name(name: &str) -> Option<Theorem> {
        Theorem::ALL.iter().copied().find(|t| t.name() == name)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of one replayable trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialResult {
    pub theorem: Theorem,
    pub seed: u64,
    pub trial: u64,
    pub counterexample: Option<String>,
}

impl TrialResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Aggregate of a batch of trials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationSummary {
    pub theorem: Theorem,
    pub seed: u64,
    pub trials: u64,
    /// Failing `(trial, counterexample)` pairs, capped at the first eight.
    pub failures: Vec<(u64, String)>,
    failure_count: u64,
}

impl VerificationSummary {
    /// Folds per-trial results, taken in trial order, into a summary.
    pub fn from_results<I>(theorem: Theorem, seed: u64, results: I) -> Self
    where
        I: IntoIterator<Item = TrialResult>,
    {
        let mut summary = VerificationSummary {
            theorem,
            seed,
            trials: 0,
            failures: Vec::new(),
            failure_count: 0,
        };
        for result in results {
            summary.trials += 1;
            if let Some(witness) = result.counterexample {
                summary.failure_count += 1;
                if summary.failures.len() < MAX_KEPT_FAILURES {
                    summary.failures.push((result.trial, witness));
                }
            }
        }
        summary
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn passes(&self) -> u64 {
        self.trials - self.failure_count
    }

    pub fn failure_count(&self) -> u64 {
        self.failure_count
    }
}

impl fmt::Display for VerificationSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "theorem {}: {}/{} trials passed (seed {})",
            self.theorem,
            self.passes(),
            self.trials,
            self.seed
        )?;
        if let Some((trial, witness)) = self.failures.first() {
            write!(f, "; first counterexample at trial {trial}: {witness}")?;
        }
        Ok(())
    }
}

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
const MAX_KEPT_FAILURES: usize = 8;

/// Runs a single trial; identical `(theorem, seed, trial)` triples always
/// reproduce the same samples and verdict.
pub fn run_trial(theorem: Theorem, seed: u64, trial: u64) -> TrialResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let counterexample = match theorem {
        Theorem::Product => product_trial(&mut rng),
        Theorem::Sum => sum_trial(&mut rng),
        Theorem::PowerPurity => power_purity_trial(&mut rng),
        Theorem::Stretch => stretch_trial(&mut rng),
    };
    TrialResult {
        theorem,
        seed,
        trial,
        counterexample,
    }
}

/// Runs `trials` consecutive trials serially.
pub fn run_trials(theorem: Theorem, seed: u64, trials: u64) -> VerificationSummary {
    VerificationSummary::from_results(theorem, seed, (0..trials).map(|t| run_trial(theorem, seed, t)))
}

fn random_prime(rng: &mut ChaCha8Rng) -> (u64, Prime) {
    let p = PRIMES[rng.gen_range(0..PRIMES.len())];
    (p, Prime::from_u64(p).expect("fixed prime table"))
}

/// `±u * p^v` with `u` a small integer unit at `p`, so the coefficient's
/// valuation is exactly `v`.
fn coefficient(rng: &mut ChaCha8Rng, p: u64, valuation: i64) -> BigRational {
    let mut unit: u64 = rng.gen_range(1..=9);
    while unit % p == 0 {
        unit = rng.gen_range(1..=9);
    }
    let mut numerator = BigInt::from(unit);
    if rng.gen_bool(0.5) {
        numerator = -numerator;
    }
    let power = BigInt::from(p).pow(valuation.unsigned_abs() as u32);
    if valuation >= 0 {
        BigRational::from_integer(numerator * power)
    } else {
        BigRational::new(numerator, power)
    }
}

/// Dense-ish random polynomial with nonzero constant and leading terms and
/// coefficient valuations drawn from `[val_lo, val_hi]`.
fn random_polynomial(
    rng: &mut ChaCha8Rng,
    p: u64,
    max_degree: usize,
    val_lo: i64,
    val_hi: i64,
) -> Polynomial {
    let degree = rng.gen_range(1..=max_degree);
    let mut coeffs = vec![BigRational::zero(); degree + 1];
    for (i, slot) in coeffs.iter_mut().enumerate() {
        let forced = i == 0 || i == degree;
        if !forced && rng.gen_bool(0.25) {
            continue;
        }
        let valuation = rng.gen_range(val_lo..=val_hi);
        *slot = coefficient(rng, p, valuation);
    }
    Polynomial::from_coefficients(coeffs)
}

/// Monic degree-`d` polynomial that is `p^r`-pure by construction: interior
/// coefficient valuations sit on or above the segment from `(0, r)` to
/// `(d, 0)` and the constant term has valuation exactly `r`.
fn random_pr_pure(rng: &mut ChaCha8Rng, p: u64, r: i64, d: usize) -> Polynomial {
    let mut coeffs = vec![BigRational::zero(); d + 1];
    coeffs[d] = BigRational::one();
    coeffs[0] = coefficient(rng, p, r);
    for (i, slot) in coeffs.iter_mut().enumerate().take(d).skip(1) {
        if rng.gen_bool(0.5) {
            continue;
        }
        let line = r * (d - i) as i64;
        let min_valuation = (line + d as i64 - 1) / d as i64;
        let slack = rng.gen_range(0..=2);
        *slot = coefficient(rng, p, min_valuation + slack);
    }
    Polynomial::from_coefficients(coeffs)
}

fn max_slope_magnitude(np: &NewtonPolygon) -> BigRational {
    np.segments()
        .iter()
        .map(|s| s.slope.abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}

fn describe(np: &NewtonPolygon) -> String {
    np.to_json().to_string()
}

fn product_trial(rng: &mut ChaCha8Rng) -> Option<String> {
    let (p, prime) = random_prime(rng);
    let f = random_polynomial(rng, p, 15, -5, 10);
    let g = random_polynomial(rng, p, 15, -5, 10);
    let np_f = newton_polygon(&f, &prime).expect("nonzero sample");
    let np_g = newton_polygon(&g, &prime).expect("nonzero sample");
    let predicted = predict_product(&np_f, &np_g).expect("same prime");
    let actual = newton_polygon(&(&f * &g), &prime).expect("product of nonzero");
    if actual == predicted {
        None
    } else {
        Some(format!(
            "p = {p}, f = {f}, g = {g}: predicted {}, actual {}",
            describe(&predicted),
            describe(&actual)
        ))
    }
}

fn sum_trial(rng: &mut ChaCha8Rng) -> Option<String> {
    let (p, prime) = random_prime(rng);
    let count = rng.gen_range(2..=4);
    let parts: Vec<Polynomial> = (0..count)
        .map(|_| random_polynomial(rng, p, 20, -5, 10))
        .collect();
    let polygons: Vec<NewtonPolygon> = parts
        .iter()
        .map(|f| newton_polygon(f, &prime).expect("nonzero sample"))
        .collect();
    let region = union_lower_bound(&polygons).expect("same prime, nonempty");
    let mut total = Polynomial::zero();
    for f in &parts {
        total = &total + f;
    }
    if total.is_zero() {
        // full cancellation leaves nothing to bound
        return None;
    }
    let actual = newton_polygon(&total, &prime).expect("nonzero sum");
    match region_contains(&actual, &region) {
        Ok(true) => None,
        Ok(false) => Some(format!(
            "p = {p}, parts = {:?}: sum polygon {} dips below the bound",
            parts.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            describe(&actual)
        )),
        Err(e) => Some(format!(
            "p = {p}, parts = {:?}: containment check failed: {e}",
            parts.iter().map(|f| f.to_string()).collect::<Vec<_>>()
        )),
    }
}

fn power_purity_trial(rng: &mut ChaCha8Rng) -> Option<String> {
    let (p, prime) = random_prime(rng);
    let r = rng.gen_range(1..=4i64);
    let d = rng.gen_range(2..=6usize);
    let g = random_pr_pure(rng, p, r, d);
    let k = rng.gen_range(1..=5usize);
    let power = g.pow(k);
    let actual = newton_polygon(&power, &prime).expect("power of nonzero");
    let expected = NewtonPolygon::from_vertices(
        prime.clone(),
        vec![(0, r * k as i64), ((d * k) as i64, 0)],
    )
    .expect("valid pure polygon");
    if actual == expected {
        None
    } else {
        Some(format!(
            "p = {p}, g = {g}, k = {k}: expected {}, actual {}",
            describe(&expected),
            describe(&actual)
        ))
    }
}

fn stretch_trial(rng: &mut ChaCha8Rng) -> Option<String> {
    let (p, prime) = random_prime(rng);
    let r = rng.gen_range(1..=4i64);
    let d = rng.gen_range(2..=6usize);
    let g = random_pr_pure(rng, p, r, d);
    let bound = BigRational::from_integer(BigInt::from(r));

    // rejection-sample an outer polynomial whose slopes all stay below r
    let mut f = Polynomial::parse("1 + x").expect("fallback outer polynomial");
    for _ in 0..500 {
        let candidate = random_polynomial(rng, p, 12, -3, 6);
        let np = newton_polygon(&candidate, &prime).expect("nonzero sample");
        if max_slope_magnitude(&np) < bound {
            f = candidate;
            break;
        }
    }

    let np_f = newton_polygon(&f, &prime).expect("nonzero outer");
    let np_g = newton_polygon(&g, &prime).expect("nonzero inner");
    let predicted = match predict_composition(&np_f, &np_g) {
        Ok(np) => np,
        Err(e) => {
            return Some(format!(
                "p = {p}, f = {f}, g = {g}: sampler broke the hypotheses: {e}"
            ))
        }
    };
    let actual = newton_polygon(&f.compose(&g), &prime).expect("nonzero composition");
    if actual == predicted {
        None
    } else {
        Some(format!(
            "p = {p}, f = {f}, g = {g}: predicted {}, actual {}",
            describe(&predicted),
            describe(&actual)
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theorem_names_roundtrip() {
        for t in Theorem::ALL {
            assert_eq!(Theorem::from_name(t.name()), Some(t));
        }
        assert_eq!(Theorem::from_name("bogus"), None);
        assert_eq!(Theorem::Stretch.to_string(), "stretch");
    }

    #[test]
    fn trials_replay_identically() {
        for theorem in Theorem::ALL {
            let a = run_trial(theorem, 42, 7);
            let b = run_trial(theorem, 42, 7);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn product_trials_pass() {
        let summary = run_trials(Theorem::Product, 42, 60);
        assert!(summary.passed(), "{summary}");
    }

    #[test]
    fn sum_trials_pass() {
        let summary = run_trials(Theorem::Sum, 1, 60);
        assert!(summary.passed(), "{summary}");
    }

    #[test]
    fn power_purity_trials_pass() {
        let summary = run_trials(Theorem::PowerPurity, 3, 60);
        assert!(summary.passed(), "{summary}");
    }

    #[test]
    fn stretch_trials_pass() {
        let summary = run_trials(Theorem::Stretch, 7, 60);
        assert!(summary.passed(), "{summary}");
    }

    #[test]
    fn pure_sampler_lands_in_the_strict_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for trial in 0..200u64 {
            rng.set_stream(trial);
            let (p, prime) = random_prime(&mut rng);
            let r = rng.gen_range(1..=4i64);
            let d = rng.gen_range(2..=6usize);
            let g = random_pr_pure(&mut rng, p, r, d);
            let np = newton_polygon(&g, &prime).unwrap();
            assert_eq!(np.pr_pure_level(), Some(r), "g = {g}, p = {p}");
            assert_eq!(g.degree(), Some(d));
        }
    }

    #[test]
    fn coefficient_sampler_hits_requested_valuation() {
        use crate::exactnum::ord_rat;
        use crate::exactnum::ExtendedValuation;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let (p, prime) = random_prime(&mut rng);
            let v = rng.gen_range(-6..=6);
            let c = coefficient(&mut rng, p, v);
            assert_eq!(ord_rat(&c, &prime), ExtendedValuation::Finite(v));
        }
    }

    #[test]
    fn summary_reports_failures() {
        let summary = VerificationSummary {
            theorem: Theorem::Product,
            seed: 5,
            trials: 10,
            failures: vec![(3, "witness".to_owned())],
            failure_count: 1,
        };
        assert!(!summary.passed());
        assert_eq!(summary.passes(), 9);
        assert_eq!(
            summary.to_string(),
            "theorem product: 9/10 trials passed (seed 5); first counterexample at trial 3: witness"
        );
        let clean = run_trials(Theorem::Product, 42, 3);
        assert_eq!(clean.to_string(), "theorem product: 3/3 trials passed (seed 42)");
    }
}
