//! Exact p-adic Newton polygons over the rationals.
//!
//! The crate computes Newton polygons of rational polynomials in exact
//! arithmetic, predicts how the polygons transform under products, sums,
//! powers, and composition, and turns favorable slope configurations into
//! machine-checkable irreducibility certificates. A seeded randomized
//! harness spot-checks the transformation laws, and deterministic ASCII and
//! SVG renderers draw the polygons.
//!
//! Everything is computed over `BigRational`; no floating point enters any
//! result, and equal inputs always produce byte-identical outputs.
//!
//! ```
//! use padic_newton::{newton_polygon, Polynomial, Prime};
//!
//! let f = Polynomial::parse("5 + x^2 + 125*x^6").unwrap();
//! let p = Prime::from_u64(5).unwrap();
//! let np = newton_polygon(&f, &p).unwrap();
//! let vertices: Vec<(i64, i64)> = np.vertices().iter().map(|v| v.pair()).collect();
//! assert_eq!(vertices, [(0, 1), (2, 0), (6, 3)]);
//! ```

pub mod exactnum;
pub mod harness;
pub mod irred;
pub mod poly;
pub mod polygon;
pub mod render;

pub use exactnum::{
    is_prime, ord_int, ord_rat, parse_rational, BigInt, BigRational, ExtendedValuation, NotPrime,
    ParseRationalError, Prime,
};
pub use harness::{run_trial, run_trials, Theorem, TrialResult, VerificationSummary};
pub use irred::{
    certify_dynamical, certify_exp_composition, certify_irreducible, dumas_certificate,
    exp_slopes, forced_factor_divisor, prime_divisors, taylor_exp, DumasCertificate,
    DynamicalReport, DynamicalStep, ExpCompositionReport, ExpHypothesisCheck, ExpHypothesisReport,
    FactorDivisorEvidence, IrredError, IrreducibilityCertificate, SlopeComparison, Verdict,
};
pub use poly::{DegreeCapExceeded, ParseError, Polynomial, DEFAULT_DEGREE_CAP};
pub use polygon::{
    classify_purity, lower_convex_hull, newton_polygon, predict_composition, predict_product,
    region_contains, root_valuations, union_lower_bound, verify_composition, CompositionReport,
    LowerBoundRegion, NewtonPolygon, PolygonError, PurityClass, PurityReport, RootValuation,
    Segment, Vertex,
};
