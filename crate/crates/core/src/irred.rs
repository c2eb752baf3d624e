//! Irreducibility certificates read off Newton polygons.
//!
//! Four routes: the Eisenstein-Dumas single-segment criterion, the
//! slope-denominator divisor combined across primes, dynamical
//! irreducibility of iterates, and the exponential Taylor family
//! `f_n = sum x^k / k!` composed with such iterates.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactnum::{is_prime, BigInt, BigRational, Prime};
use crate::poly::{DegreeCapExceeded, Polynomial};
use crate::polygon::{
    classify_purity, json_int, newton_polygon, NewtonPolygon, PolygonError, PurityClass,
};

/// Rejections raised by certificate construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IrredError {
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(transparent)]
    DegreeCap(#[from] DegreeCapExceeded),
    #[error("no primes to certify against")]
    NoPrimes,
    #[error("not Dumas in strict p^r-pure form: {0}")]
    NotDumas(String),
    #[error("composition base must have degree >= 2, got {0}")]
    CompositionDegree(usize),
}

/// Witness that `f` is irreducible over Q: its polygon at `prime` is a
/// single segment of height coprime to the degree.
///
/// Soundness is up to a primitive integer scaling of `f`; the height is
/// invariant under constant scaling, so the certificate is read off the
/// polygon of `f` itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DumasCertificate {
    pub prime: Prime,
    pub height: i64,
    pub degree: usize,
    /// `gcd(height, degree)`, stored so the certificate replays without
    /// recomputation; always 1.
    pub gcd_witness: i64,
    pub polygon: NewtonPolygon,
}

impl DumasCertificate {
    /// Recomputes the polygon and classification from scratch and checks
    /// this certificate still describes them.
    pub fn revalidate(&self, f: &Polynomial) -> bool {
        let Ok(report) = classify_purity(f, &self.prime) else {
            return false;
        };
        report.class == PurityClass::Dumas { height: self.height }
            && report.polygon == self.polygon
            && report.polygon.segments().len() == 1
            && f.degree() == Some(self.degree)
            && self.gcd_witness == 1
            && num_integer::gcd(self.height, self.degree as i64) == 1
    }
}

/// Emits a Dumas certificate when the classification supports one.
pub fn dumas_certificate(f: &Polynomial, p: &Prime) -> Result<Option<DumasCertificate>, PolygonError> {
    let report = classify_purity(f, p)?;
    match report.class {
        PurityClass::Dumas { height } => {
            let degree = f.degree().expect("classified polynomials are nonconstant");
            Ok(Some(DumasCertificate {
                prime: p.clone(),
                height,
                degree,
                gcd_witness: num_integer::gcd(height, degree as i64),
                polygon: report.polygon,
            }))
        }
        _ => Ok(None),
    }
}

/// Per-prime divisibility evidence: every irreducible factor of `f` over Q
/// has degree divisible by `forced_divisor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorDivisorEvidence {
    pub prime: Prime,
    /// Slopes of the polygon at `prime`, lowest terms, increasing.
    pub slopes: Vec<BigRational>,
    /// gcd of the slope denominators.
    pub forced_divisor: u64,
}

/// Computes the forced divisor at one prime.
///
/// Each slope's lowest-terms denominator divides the degree of any
/// irreducible factor whose roots sit on that segment; a factor may mix
/// segments, so only the gcd across segments is forced globally.
pub fn forced_factor_divisor(f: &Polynomial, p: &Prime) -> Result<FactorDivisorEvidence, PolygonError> {
    match f.degree() {
        None | Some(0) => return Err(PolygonError::ConstantPolynomial),
        Some(_) => {}
    }
    if f.constant_term().is_zero() {
        return Err(PolygonError::ZeroConstantTerm);
    }
    let np = newton_polygon(f, p)?;
    let slopes: Vec<BigRational> = np.segments().into_iter().map(|s| s.slope).collect();
    let divisor = slopes
        .iter()
        .fold(BigInt::zero(), |acc, s| acc.gcd(s.denom()));
    let forced_divisor = divisor
        .to_u64()
        .expect("slope denominators divide segment lengths, which fit in u64");
    Ok(FactorDivisorEvidence {
        prime: p.clone(),
        slopes,
        forced_divisor,
    })
}

/// Verdict of the combined-divisor computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    CertifiedIrreducible,
    FactorDegreesMultipleOf(u64),
    Inconclusive,
}

impl Verdict {
    pub fn json_tag(&self) -> &'static str {
        match self {
            Verdict::CertifiedIrreducible => "certified_irreducible",
            Verdict::FactorDegreesMultipleOf(_) => "factor_degrees_multiple_of",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CertifiedIrreducible => write!(f, "certified irreducible"),
            Verdict::FactorDegreesMultipleOf(d) => {
                write!(f, "every irreducible factor has degree divisible by {d}")
            }
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Machine-checkable irreducibility evidence combined across primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrreducibilityCertificate {
    /// Human-readable description of the certified polynomial.
    pub polynomial: String,
    pub degree: usize,
    pub evidence: Vec<FactorDivisorEvidence>,
    /// lcm of the per-prime forced divisors; always divides `degree`.
    pub combined_divisor: u64,
    pub verdict: Verdict,
}

impl IrreducibilityCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::CertifiedIrreducible
    }

    pub fn to_json(&self) -> Value {
        json!({
            "polynomial": self.polynomial,
            "degree": self.degree,
            "primes": self
                .evidence
                .iter()
                .map(|e| {
                    json!({
                        "p": e.prime.to_string(),
                        "slopes": e.slopes.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                        "forced_divisor": e.forced_divisor,
                    })
                })
                .collect::<Vec<_>>(),
            "combined_divisor": self.combined_divisor,
            "verdict": self.verdict.json_tag(),
        })
    }
}

/// Combines forced divisors over a set of primes: D = lcm of the per-prime
/// gcds; `f` is certified irreducible exactly when D equals its degree.
pub fn certify_irreducible(
    f: &Polynomial,
    primes: &[Prime],
) -> Result<IrreducibilityCertificate, IrredError> {
    if primes.is_empty() {
        return Err(IrredError::NoPrimes);
    }
    let evidence: Vec<FactorDivisorEvidence> = primes
        .iter()
        .map(|p| forced_factor_divisor(f, p))
        .collect::<Result<_, _>>()?;
    let degree = f.degree().expect("validated nonconstant") as u64;
    // every D_p divides the degree, so the lcm does too and stays in range
    let combined_divisor = evidence
        .iter()
        .fold(1u64, |acc, e| acc.lcm(&e.forced_divisor));
    let verdict = if combined_divisor == degree {
        Verdict::CertifiedIrreducible
    } else if combined_divisor > 1 {
        Verdict::FactorDegreesMultipleOf(combined_divisor)
    } else {
        Verdict::Inconclusive
    };
    Ok(IrreducibilityCertificate {
        polynomial: f.to_string(),
        degree: degree as usize,
        evidence,
        combined_divisor,
        verdict,
    })
}

/// One verified iterate in a dynamical-irreducibility report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicalStep {
    pub iterate: usize,
    pub degree: usize,
    /// `-r / d^m`, the slope forced by the stretch law.
    pub expected_slope: BigRational,
    /// Polygon of the iterate is one segment of exactly that slope.
    pub slope_ok: bool,
    pub certificate: Option<DumasCertificate>,
}

impl DynamicalStep {
    pub fn verified(&self) -> bool {
        self.slope_ok && self.certificate.is_some()
    }
}

/// Outcome of checking dynamical irreducibility up to a finite iterate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicalReport {
    pub base: DumasCertificate,
    /// The strict purity level r of the base polynomial.
    pub pr_level: i64,
    pub max_iter: usize,
    pub steps: Vec<DynamicalStep>,
    /// The theorem guarantees every iterate, not only the verified ones.
    pub guaranteed_all_iterates: bool,
}

impl DynamicalReport {
    pub fn all_verified(&self) -> bool {
        self.steps.iter().all(DynamicalStep::verified)
    }
}

/// Verifies dynamical irreducibility concretely for `m = 1..=max_iter`.
///
/// `g` must be Dumas in strict p^r-pure form; each explicit iterate is then
/// recomputed, its polygon checked to be the single segment of slope
/// `-r/d^m`, and a fresh Dumas certificate attached.
pub fn certify_dynamical(
    g: &Polynomial,
    p: &Prime,
    max_iter: usize,
    cap: usize,
) -> Result<DynamicalReport, IrredError> {
    let report = classify_purity(g, p)?;
    let degree = g.degree().expect("classified polynomials are nonconstant");
    let Some(level) = report.polygon.pr_pure_level() else {
        return Err(IrredError::NotDumas(format!(
            "polygon of {g} at {p} is not in strict p^r-pure form"
        )));
    };
    if num_integer::gcd(level, degree as i64) != 1 {
        return Err(IrredError::NotDumas(format!(
            "gcd(r, deg) = gcd({level}, {degree}) != 1"
        )));
    }
    let base = dumas_certificate(g, p)?.expect("strict form with coprime height is Dumas");

    let mut steps = Vec::with_capacity(max_iter);
    let mut iterate = Polynomial::x();
    for m in 1..=max_iter {
        iterate = iterate.checked_compose(g, cap)?;
        let np = newton_polygon(&iterate, p)?;
        let d_to_m = BigInt::from(degree).pow(m as u32);
        let expected_slope = BigRational::new(BigInt::from(-level), d_to_m);
        let slope_ok = np.is_pure()
            && np.segments().first().map(|s| s.slope.clone()) == Some(expected_slope.clone());
        let certificate = dumas_certificate(&iterate, p)?;
        steps.push(DynamicalStep {
            iterate: m,
            degree: iterate.degree().expect("iterates of nonconstant g are nonconstant"),
            expected_slope,
            slope_ok,
            certificate,
        });
    }
    Ok(DynamicalReport {
        base,
        pr_level: level,
        max_iter,
        steps,
        guaranteed_all_iterates: true,
    })
}

/// The degree-n Taylor polynomial of the exponential: `sum_{k<=n} x^k / k!`.
pub fn taylor_exp(n: usize) -> Polynomial {
    assert!(n >= 1, "taylor_exp requires n >= 1");
    let mut factorial = BigInt::one();
    let coeffs: Vec<BigRational> = (0..=n)
        .map(|k| {
            if k > 0 {
                factorial *= BigInt::from(k);
            }
            BigRational::new(BigInt::one(), factorial.clone())
        })
        .collect();
    Polynomial::from_coefficients(coeffs)
}

/// Closed-form segment list of `NP_p(taylor_exp(n))`.
///
/// Writing n in base p, each nonzero digit b at position k contributes one
/// segment of slope `-(p^k - 1)/(p^k (p-1))` and length `b * p^k`; sorting
/// by slope puts high digit positions first.
pub fn exp_slopes(n: usize, p: &Prime) -> Vec<(BigRational, i64)> {
    assert!(n >= 1, "exp_slopes requires n >= 1");
    let pb = p.as_bigint();
    let p_minus_1 = pb - BigInt::one();
    let mut rest = BigInt::from(n);
    let mut power = BigInt::one();
    let mut out = Vec::new();
    while !rest.is_zero() {
        let (quotient, digit) = rest.div_rem(pb);
        if !digit.is_zero() {
            let slope = BigRational::new(BigInt::one() - &power, &power * &p_minus_1);
            let length = (&digit * &power)
                .to_i64()
                .expect("digit * p^k is at most n");
            out.push((slope, length));
        }
        rest = quotient;
        power *= pb;
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// The prime factors of `n`, ascending, by trial division.
pub fn prime_divisors(n: usize) -> Vec<u64> {
    let mut n = n as u64;
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Per-prime hypothesis check for the exp-composition criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpHypothesisCheck {
    pub prime: Prime,
    /// `Some(r)` when g is Dumas in strict p^r-pure form at this prime.
    pub strict_dumas_level: Option<i64>,
    /// Whether every slope of `NP_p(f_n)` has magnitude below that r.
    pub slopes_within_bound: Option<bool>,
}

impl ExpHypothesisCheck {
    pub fn satisfied(&self) -> bool {
        self.strict_dumas_level.is_some() && self.slopes_within_bound == Some(true)
    }
}

/// The stated hypotheses of the exp-composition criterion, evaluated but
/// never assumed: the certificate is computed independently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpHypothesisReport {
    pub inner_degree: usize,
    pub inner_degree_is_prime: bool,
    /// deg g strictly exceeds every prime divisor of n.
    pub exceeds_prime_divisors: bool,
    pub checks: Vec<ExpHypothesisCheck>,
}

impl ExpHypothesisReport {
    pub fn all_satisfied(&self) -> bool {
        self.inner_degree_is_prime
            && self.exceeds_prime_divisors
            && self.checks.iter().all(ExpHypothesisCheck::satisfied)
    }
}

/// Predicted-versus-actual slope lists for `f_n ∘ g^∘m` at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeComparison {
    pub prime: Prime,
    /// `exp_slopes(n, p)` stretched by d^m.
    pub predicted: Vec<(BigRational, i64)>,
    /// Segment list of the explicitly computed composition.
    pub actual: Vec<(BigRational, i64)>,
    pub matches: bool,
}

/// Full output of [`certify_exp_composition`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpCompositionReport {
    pub taylor_degree: usize,
    pub iterate: usize,
    pub hypotheses: ExpHypothesisReport,
    pub certificate: IrreducibilityCertificate,
    pub slope_checks: Vec<SlopeComparison>,
    /// True when every stated hypothesis holds yet the computed divisor
    /// still falls short of the degree; see the module notes.
    pub divisor_degraded: bool,
}

/// Certifies `f_n ∘ g^∘m` at the primes dividing n.
///
/// Three independent outputs: the hypothesis report (degree of g prime and
/// larger than the prime divisors of n, g strict Dumas at each p | n), the
/// divisor certificate computed from the actual composed polynomial, and a
/// predicted-versus-actual slope comparison. The verdict is whatever the
/// computed divisors yield; the hypotheses are reported, not trusted.
pub fn certify_exp_composition(
    n: usize,
    g: &Polynomial,
    m: usize,
    cap: usize,
) -> Result<ExpCompositionReport, IrredError> {
    assert!(n >= 1, "certify_exp_composition requires n >= 1");
    let inner_degree = g.degree().unwrap_or(0);
    if inner_degree < 2 {
        return Err(IrredError::CompositionDegree(inner_degree));
    }
    let divisors = prime_divisors(n);
    if divisors.is_empty() {
        // n = 1 admits no prime to certify against
        return Err(IrredError::NoPrimes);
    }
    let primes: Vec<Prime> = divisors
        .iter()
        .map(|&q| Prime::from_u64(q).expect("trial division yields primes"))
        .collect();
    if n > cap {
        // the outer truncation alone already has degree n
        return Err(DegreeCapExceeded {
            required: n as u128,
            cap,
        }
        .into());
    }
    let f = taylor_exp(n);

    let mut checks = Vec::with_capacity(primes.len());
    for p in &primes {
        let strict_dumas_level = match classify_purity(g, p) {
            Ok(report) => report
                .polygon
                .pr_pure_level()
                .filter(|r| num_integer::gcd(*r, inner_degree as i64) == 1),
            Err(_) => None,
        };
        let slopes_within_bound = strict_dumas_level.map(|r| {
            let bound = BigRational::from_integer(r.into());
            newton_polygon(&f, p)
                .expect("taylor_exp(n) is nonzero")
                .segments()
                .iter()
                .all(|s| s.slope.abs() < bound)
        });
        checks.push(ExpHypothesisCheck {
            prime: p.clone(),
            strict_dumas_level,
            slopes_within_bound,
        });
    }
    let hypotheses = ExpHypothesisReport {
        inner_degree,
        inner_degree_is_prime: is_prime(&BigInt::from(inner_degree)),
        exceeds_prime_divisors: divisors.iter().all(|&q| inner_degree as u64 > q),
        checks,
    };

    let g_m = g.iterate(m, cap)?;
    let composed = f.checked_compose(&g_m, cap)?;
    let mut certificate = certify_irreducible(&composed, &primes)?;
    certificate.polynomial = format!("taylor_exp({n}) ∘ ({g})^∘{m}");

    let stretch = BigInt::from(inner_degree).pow(m as u32);
    let stretch_len = stretch.to_i64().expect("degree cap bounds d^m");
    let stretch_rat = BigRational::from_integer(stretch);
    let slope_checks = primes
        .iter()
        .map(|p| {
            let predicted: Vec<(BigRational, i64)> = exp_slopes(n, p)
                .into_iter()
                .map(|(s, len)| (s / &stretch_rat, len * stretch_len))
                .collect();
            let actual: Vec<(BigRational, i64)> = newton_polygon(&composed, p)
                .expect("composition of nonzero polynomials is nonzero")
                .segments()
                .into_iter()
                .map(|s| (s.slope, s.length))
                .collect();
            let matches = predicted == actual;
            SlopeComparison {
                prime: p.clone(),
                predicted,
                actual,
                matches,
            }
        })
        .collect();

    let divisor_degraded = hypotheses.all_satisfied() && !certificate.is_certified();
    Ok(ExpCompositionReport {
        taylor_degree: n,
        iterate: m,
        hypotheses,
        certificate,
        slope_checks,
        divisor_degraded,
    })
}

/// JSON view of an exp-composition report: the certificate plus the
/// hypothesis and slope-check blocks.
impl ExpCompositionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "taylor_degree": self.taylor_degree,
            "iterate": self.iterate,
            "hypotheses": {
                "inner_degree": self.hypotheses.inner_degree,
                "inner_degree_is_prime": self.hypotheses.inner_degree_is_prime,
                "exceeds_prime_divisors": self.hypotheses.exceeds_prime_divisors,
                "per_prime": self
                    .hypotheses
                    .checks
                    .iter()
                    .map(|c| {
                        json!({
                            "p": c.prime.to_string(),
                            "strict_dumas_level": c.strict_dumas_level.map(json_int),
                            "slopes_within_bound": c.slopes_within_bound,
                        })
                    })
                    .collect::<Vec<_>>(),
                "all_satisfied": self.hypotheses.all_satisfied(),
            },
            "certificate": self.certificate.to_json(),
            "slope_checks": self
                .slope_checks
                .iter()
                .map(|c| {
                    json!({
                        "p": c.prime.to_string(),
                        "predicted": c
                            .predicted
                            .iter()
                            .map(|(s, l)| json!({"slope": s.to_string(), "length": json_int(*l)}))
                            .collect::<Vec<_>>(),
                        "actual": c
                            .actual
                            .iter()
                            .map(|(s, l)| json!({"slope": s.to_string(), "length": json_int(*l)}))
                            .collect::<Vec<_>>(),
                        "matches": c.matches,
                    })
                })
                .collect::<Vec<_>>(),
            "divisor_degraded": self.divisor_degraded,
        })
    }
}
