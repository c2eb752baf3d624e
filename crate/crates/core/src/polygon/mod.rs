//! Newton polygons over the p-adics: exact construction, purity
//! classification, and the product / sum / composition transformation laws.

use std::fmt;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactnum::{ord_rat, BigInt, BigRational, Prime};
use crate::poly::{DegreeCapExceeded, Polynomial};

mod hull;

/// A lattice point on a polygon boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub x: i64,
    pub y: i64,
}

impl Vertex {
    pub fn pair(self) -> (i64, i64) {
        (self.x, self.y)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// One edge of a polygon: exact slope plus horizontal length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub start: Vertex,
    pub end: Vertex,
    pub slope: BigRational,
    pub length: i64,
}

impl Segment {
    fn between(start: Vertex, end: Vertex) -> Self {
        Segment {
            start,
            end,
            slope: BigRational::new(BigInt::from(end.y - start.y), BigInt::from(end.x - start.x)),
            length: end.x - start.x,
        }
    }
}

/// The Newton polygon of a nonzero polynomial at a prime: the lower convex
/// hull of the points `(i, ord_p a_i)` over nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    prime: Prime,
    vertices: Vec<Vertex>,
}

/// A prime-agnostic lower hull used as a containment bound for sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBoundRegion {
    vertices: Vec<Vertex>,
}

/// Purity classification, most specific class wins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PurityClass {
    /// Two or more segments.
    NotPure { segments: usize },
    /// A single segment of the given slope, with no integrality claim.
    Pure { slope: BigRational },
    /// Single segment from `(0, r)` down to `(deg, 0)` with `r >= 1`.
    PrPure { level: i64 },
    /// Pure with height `ord_p(a_0) - ord_p(a_n) = h >= 1` and
    /// `gcd(h, deg) = 1`: irreducible over Q by the Dumas criterion.
    Dumas { height: i64 },
}

/// Classification outcome together with the polygon it was read from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PurityReport {
    pub class: PurityClass,
    pub polygon: NewtonPolygon,
}

/// The valuation of a root: finite, or `+infinity` for the root 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootValuation {
    Finite(BigRational),
    Infinite,
}

impl fmt::Display for RootValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootValuation::Finite(v) => write!(f, "{v}"),
            RootValuation::Infinite => write!(f, "inf"),
        }
    }
}

/// Rejections raised by polygon construction and the transformation laws.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("empty input")]
    EmptyInput,
    #[error("the zero polynomial has no Newton polygon")]
    ZeroPolynomial,
    #[error("constant polynomials are not classified")]
    ConstantPolynomial,
    #[error("the constant term vanishes")]
    ZeroConstantTerm,
    #[error("prime mismatch: {left} vs {right}")]
    PrimeMismatch { left: Prime, right: Prime },
    #[error("polygon span [{x0}, {x1}] is not contained in the region span [{r0}, {r1}]")]
    SpanMismatch { x0: i64, x1: i64, r0: i64, r1: i64 },
    #[error("inner polygon is not p^r-pure: {reason}")]
    NotPrPure { reason: String },
    #[error("|slope {slope}| >= r = {bound}")]
    HypothesisViolation { slope: BigRational, bound: i64 },
    #[error("invalid vertex chain: {0}")]
    InvalidVertices(String),
    #[error(transparent)]
    DegreeCap(#[from] DegreeCapExceeded),
}

/// Exact lower convex hull of arbitrary lattice points. Duplicate x values
/// are collapsed to the lowest y before the hull scan.
pub fn lower_convex_hull(points: &[(i64, i64)]) -> Result<Vec<(i64, i64)>, PolygonError> {
    if points.is_empty() {
        return Err(PolygonError::EmptyInput);
    }
    Ok(hull::lower_hull_chain(points))
}

/// Renders `v` as a JSON number when it is exactly representable in an IEEE
/// double, and as a decimal string beyond that.
pub(crate) fn json_int(v: i64) -> Value {
    const SAFE: i64 = 9_007_199_254_740_991; // 2^53 - 1
    if (-SAFE..=SAFE).contains(&v) {
        Value::from(v)
    } else {
        Value::from(v.to_string())
    }
}

impl NewtonPolygon {
    /// Builds a polygon from an explicit vertex chain, validating the
    /// convexity invariants.
    pub fn from_vertices(prime: Prime, vertices: Vec<(i64, i64)>) -> Result<Self, PolygonError> {
        if vertices.is_empty() {
            return Err(PolygonError::EmptyInput);
        }
        if vertices[0].0 < 0 {
            return Err(PolygonError::InvalidVertices(
                "x coordinates must be nonnegative".to_owned(),
            ));
        }
        for w in vertices.windows(2) {
            if w[0].0 >= w[1].0 {
                return Err(PolygonError::InvalidVertices(
                    "x coordinates must strictly increase".to_owned(),
                ));
            }
        }
        for w in vertices.windows(3) {
            if hull::cmp_slopes(w[0], w[1], w[2]) != std::cmp::Ordering::Less {
                return Err(PolygonError::InvalidVertices(
                    "slopes must strictly increase".to_owned(),
                ));
            }
        }
        Ok(NewtonPolygon {
            prime,
            vertices: vertices.into_iter().map(|(x, y)| Vertex { x, y }).collect(),
        })
    }

    pub fn prime(&self) -> &Prime {
        &self.prime
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    /// x of the first vertex: the index of the lowest nonzero coefficient.
    pub fn x_offset(&self) -> i64 {
        self.vertices.first().expect("polygon is nonempty").x
    }

    /// x of the last vertex: the degree of the source polynomial.
    pub fn top_degree(&self) -> i64 {
        self.vertices.last().expect("polygon is nonempty").x
    }

    /// One segment per consecutive vertex pair; empty for a monomial.
    pub fn segments(&self) -> Vec<Segment> {
        self.vertices
            .windows(2)
            .map(|w| Segment::between(w[0], w[1]))
            .collect()
    }

    pub fn is_pure(&self) -> bool {
        self.vertices.len() == 2
    }

    /// `Some(r)` exactly when the polygon is the single segment
    /// `(0, r) -> (deg, 0)` with `r >= 1` (the strict normalized form).
    pub fn pr_pure_level(&self) -> Option<i64> {
        match self.vertices.as_slice() {
            [a, b] if a.x == 0 && a.y >= 1 && b.y == 0 => Some(a.y),
            _ => None,
        }
    }

    /// `(y_last - y_first)/(x_last - x_first)`; `None` for a monomial.
    pub fn end_to_end_slope(&self) -> Option<BigRational> {
        let a = *self.vertices.first()?;
        let b = *self.vertices.last()?;
        if a.x == b.x {
            return None;
        }
        Some(BigRational::new(BigInt::from(b.y - a.y), BigInt::from(b.x - a.x)))
    }

    /// Exact boundary height at integer `x`; `None` outside the span.
    pub fn boundary_at(&self, x: i64) -> Option<BigRational> {
        chain_boundary_at(&self.vertices, x)
    }

    /// Forgets the prime, viewing the polygon as a containment region.
    pub fn as_region(&self) -> LowerBoundRegion {
        LowerBoundRegion {
            vertices: self.vertices.clone(),
        }
    }

    /// JSON form: prime and slopes as strings, coordinates as numbers
    /// (decimal strings once they leave the IEEE-exact range).
    pub fn to_json(&self) -> Value {
        json!({
            "prime": self.prime.to_string(),
            "x_offset": json_int(self.x_offset()),
            "vertices": self
                .vertices
                .iter()
                .map(|v| Value::from(vec![json_int(v.x), json_int(v.y)]))
                .collect::<Vec<_>>(),
            "segments": self
                .segments()
                .iter()
                .map(|s| json!({"slope": s.slope.to_string(), "length": json_int(s.length)}))
                .collect::<Vec<_>>(),
        })
    }
}

impl LowerBoundRegion {
    /// Lower hull of arbitrary points, viewed as a region boundary.
    pub fn from_points(points: &[(i64, i64)]) -> Result<Self, PolygonError> {
        let chain = lower_convex_hull(points)?;
        Ok(LowerBoundRegion {
            vertices: chain.into_iter().map(|(x, y)| Vertex { x, y }).collect(),
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn x_min(&self) -> i64 {
        self.vertices.first().expect("region is nonempty").x
    }

    pub fn x_max(&self) -> i64 {
        self.vertices.last().expect("region is nonempty").x
    }

    /// Exact boundary height at integer `x`; `None` outside the span.
    pub fn boundary_at(&self, x: i64) -> Option<BigRational> {
        chain_boundary_at(&self.vertices, x)
    }
}

/// Piecewise-linear interpolation along a vertex chain at integer `x`.
fn chain_boundary_at(vertices: &[Vertex], x: i64) -> Option<BigRational> {
    let first = vertices.first()?;
    let last = vertices.last()?;
    if x < first.x || x > last.x {
        return None;
    }
    let idx = vertices.partition_point(|v| v.x <= x);
    let a = vertices[idx - 1];
    if a.x == x {
        return Some(BigRational::from_integer(a.y.into()));
    }
    let b = vertices[idx];
    let rise = BigRational::new(BigInt::from(b.y - a.y), BigInt::from(b.x - a.x));
    Some(BigRational::from_integer(a.y.into()) + rise * BigRational::from_integer((x - a.x).into()))
}

/// The Newton polygon of `f` at `p`.
pub fn newton_polygon(f: &Polynomial, p: &Prime) -> Result<NewtonPolygon, PolygonError> {
    if f.is_zero() {
        return Err(PolygonError::ZeroPolynomial);
    }
    let points: Vec<(i64, i64)> = f
        .coefficients()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            let v = ord_rat(c, p).finite().expect("nonzero coefficient");
            (i as i64, v)
        })
        .collect();
    let chain = hull::lower_hull_chain(&points);
    Ok(NewtonPolygon {
        prime: p.clone(),
        vertices: chain.into_iter().map(|(x, y)| Vertex { x, y }).collect(),
    })
}

/// Classifies `f` at `p` by the purity ladder; the most specific class wins.
///
/// `Dumas` is detected from the height `ord_p(a_0) - ord_p(a_n)` alone, so it
/// survives scaling `f` by rationals; `PrPure` keeps the strict normalized
/// reading needed by the composition law.
pub fn classify_purity(f: &Polynomial, p: &Prime) -> Result<PurityReport, PolygonError> {
    let degree = match f.degree() {
        None | Some(0) => return Err(PolygonError::ConstantPolynomial),
        Some(d) => d,
    };
    if f.constant_term().is_zero() {
        return Err(PolygonError::ZeroConstantTerm);
    }
    let polygon = newton_polygon(f, p)?;
    let segments = polygon.segments();
    let class = if segments.len() != 1 {
        PurityClass::NotPure {
            segments: segments.len(),
        }
    } else {
        let first = polygon.vertices.first().expect("nonempty");
        let last = polygon.vertices.last().expect("nonempty");
        let height = first.y - last.y;
        let n = degree as i64;
        if height >= 1 && num_integer::gcd(height, n) == 1 {
            PurityClass::Dumas { height }
        } else if let Some(level) = polygon.pr_pure_level() {
            PurityClass::PrPure { level }
        } else {
            PurityClass::Pure {
                slope: segments[0].slope.clone(),
            }
        }
    };
    Ok(PurityReport { class, polygon })
}

impl PurityReport {
    pub fn is_dumas(&self) -> bool {
        matches!(self.class, PurityClass::Dumas { .. })
    }

    /// JSON form of the classification alone.
    pub fn class_json(&self) -> Value {
        match &self.class {
            PurityClass::NotPure { segments } => {
                json!({"class": "not_pure", "segments": segments})
            }
            PurityClass::Pure { slope } => json!({"class": "pure", "slope": slope.to_string()}),
            PurityClass::PrPure { level } => json!({"class": "pr_pure", "level": level}),
            PurityClass::Dumas { height } => json!({"class": "dumas", "height": height}),
        }
    }
}

impl fmt::Display for PurityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.class {
            PurityClass::NotPure { segments } => write!(f, "not pure ({segments} segments)"),
            PurityClass::Pure { slope } => write!(f, "pure with slope {slope}"),
            PurityClass::PrPure { level } => {
                write!(f, "{}^{}-pure", self.polygon.prime(), level)
            }
            PurityClass::Dumas { height } => write!(
                f,
                "Dumas-irreducible (height {height} coprime to degree {})",
                self.polygon.top_degree()
            ),
        }
    }
}

fn check_same_prime(a: &NewtonPolygon, b: &NewtonPolygon) -> Result<(), PolygonError> {
    if a.prime != b.prime {
        return Err(PolygonError::PrimeMismatch {
            left: a.prime.clone(),
            right: b.prime.clone(),
        });
    }
    Ok(())
}

/// The polygon of a product, straight from the factor polygons: segment
/// lists merge sorted by slope, equal slopes coalesce.
pub fn predict_product(a: &NewtonPolygon, b: &NewtonPolygon) -> Result<NewtonPolygon, PolygonError> {
    check_same_prime(a, b)?;
    let left = a.segments();
    let right = b.segments();
    let (mut i, mut j) = (0usize, 0usize);
    // (slope, dx, dy) runs, coalesced on equal slope
    let mut deltas: Vec<(BigRational, i64, i64)> = Vec::new();
    while i < left.len() || j < right.len() {
        let take_left = match (left.get(i), right.get(j)) {
            (Some(s), Some(t)) => s.slope <= t.slope,
            (Some(_), None) => true,
            _ => false,
        };
        let seg = if take_left {
            i += 1;
            &left[i - 1]
        } else {
            j += 1;
            &right[j - 1]
        };
        let rise = seg.end.y - seg.start.y;
        match deltas.last_mut() {
            Some((slope, dx, dy)) if *slope == seg.slope => {
                *dx += seg.length;
                *dy += rise;
            }
            _ => deltas.push((seg.slope.clone(), seg.length, rise)),
        }
    }
    let mut x = a.x_offset() + b.x_offset();
    let mut y = a.vertices[0].y + b.vertices[0].y;
    let mut vertices = vec![Vertex { x, y }];
    for (_, dx, dy) in deltas {
        x += dx;
        y += dy;
        vertices.push(Vertex { x, y });
    }
    Ok(NewtonPolygon {
        prime: a.prime.clone(),
        vertices,
    })
}

/// Lower convex hull of the union of all vertex sets: every summand polygon,
/// and hence the polygon of the sum, lies on or above it.
pub fn union_lower_bound(polygons: &[NewtonPolygon]) -> Result<LowerBoundRegion, PolygonError> {
    let first = polygons.first().ok_or(PolygonError::EmptyInput)?;
    for other in &polygons[1..] {
        check_same_prime(first, other)?;
    }
    let points: Vec<(i64, i64)> = polygons
        .iter()
        .flat_map(|np| np.vertices.iter().map(|v| v.pair()))
        .collect();
    LowerBoundRegion::from_points(&points)
}

/// Does every vertex of `np` lie on or above the region boundary?
pub fn region_contains(np: &NewtonPolygon, region: &LowerBoundRegion) -> Result<bool, PolygonError> {
    let (x0, x1) = (np.x_offset(), np.top_degree());
    let (r0, r1) = (region.x_min(), region.x_max());
    if x0 < r0 || x1 > r1 {
        return Err(PolygonError::SpanMismatch { x0, x1, r0, r1 });
    }
    // convexity makes vertex containment equivalent to full containment
    Ok(np.vertices.iter().all(|v| {
        let bound = region.boundary_at(v.x).expect("span checked above");
        BigRational::from_integer(v.y.into()) >= bound
    }))
}

fn pr_pure_failure(np: &NewtonPolygon) -> String {
    if np.vertices.len() != 2 {
        return format!("expected 1 segment, found {}", np.vertices.len().saturating_sub(1));
    }
    let a = np.vertices[0];
    let b = np.vertices[1];
    if a.x != 0 {
        return "the constant term vanishes".to_owned();
    }
    if b.y != 0 {
        return format!("leading-coefficient valuation is {}, need 0", b.y);
    }
    format!("constant-term valuation is {}, need >= 1", a.y)
}

/// The stretch law for composition: when `g` is `p^r`-pure of degree `d` and
/// every slope of `f`'s polygon has magnitude below `r`, the polygon of
/// `f(g)` is `f`'s polygon with x stretched by `d`.
pub fn predict_composition(
    np_f: &NewtonPolygon,
    np_g: &NewtonPolygon,
) -> Result<NewtonPolygon, PolygonError> {
    check_same_prime(np_f, np_g)?;
    if np_f.x_offset() != 0 {
        return Err(PolygonError::ZeroConstantTerm);
    }
    let r = np_g
        .pr_pure_level()
        .ok_or_else(|| PolygonError::NotPrPure {
            reason: pr_pure_failure(np_g),
        })?;
    let d = np_g.top_degree();
    let bound = BigRational::from_integer(r.into());
    for segment in np_f.segments() {
        if segment.slope.abs() >= bound {
            return Err(PolygonError::HypothesisViolation {
                slope: segment.slope,
                bound: r,
            });
        }
    }
    let vertices = np_f
        .vertices
        .iter()
        .map(|v| Vertex {
            x: v.x.checked_mul(d).expect("stretched degree fits in i64"),
            y: v.y,
        })
        .collect();
    Ok(NewtonPolygon {
        prime: np_f.prime.clone(),
        vertices,
    })
}

/// Root valuations with multiplicities, largest first: `+infinity` for the
/// root 0 (when the constant term vanishes), then `-slope` per segment.
pub fn root_valuations(np: &NewtonPolygon) -> Vec<(RootValuation, i64)> {
    let mut out = Vec::new();
    let k = np.x_offset();
    if k > 0 {
        out.push((RootValuation::Infinite, k));
    }
    for segment in np.segments() {
        out.push((RootValuation::Finite(-segment.slope), segment.length));
    }
    out
}

/// Outcome of checking the composition law on concrete polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionReport {
    /// `f(g)`, computed exactly.
    pub composed: Polynomial,
    /// Polygon of the composition.
    pub actual: NewtonPolygon,
    /// The stretched prediction, when the hypotheses hold.
    pub predicted: Option<NewtonPolygon>,
    /// Why the hypotheses fail, when they do.
    pub violation: Option<PolygonError>,
    /// Exact comparison of prediction and actual polygon.
    pub matches: Option<bool>,
}

impl CompositionReport {
    pub fn hypotheses_satisfied(&self) -> bool {
        self.violation.is_none()
    }
}

/// Computes `f(g)` (under `cap`), its polygon, and the stretched prediction
/// when the hypotheses hold; hypothesis failures are reported, not raised.
pub fn verify_composition(
    f: &Polynomial,
    g: &Polynomial,
    p: &Prime,
    cap: usize,
) -> Result<CompositionReport, PolygonError> {
    if f.is_constant() || g.is_constant() {
        return Err(PolygonError::ConstantPolynomial);
    }
    let composed = f.checked_compose(g, cap)?;
    let actual = newton_polygon(&composed, p)?;
    let np_f = newton_polygon(f, p)?;
    let np_g = newton_polygon(g, p)?;
    match predict_composition(&np_f, &np_g) {
        Ok(predicted) => {
            let matches = predicted == actual;
            Ok(CompositionReport {
                composed,
                actual,
                predicted: Some(predicted),
                violation: None,
                matches: Some(matches),
            })
        }
        Err(
            violation @ (PolygonError::ZeroConstantTerm
            | PolygonError::NotPrPure { .. }
            | PolygonError::HypothesisViolation { .. }),
        ) => Ok(CompositionReport {
            composed,
            actual,
            predicted: None,
            violation: Some(violation),
            matches: None,
        }),
        Err(other) => Err(other),
    }
}
