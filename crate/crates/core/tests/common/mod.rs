//! Brute-force oracles shared by the property and acceptance suites.

use padic_newton::{BigInt, BigRational};

/// Lower convex hull by gift wrapping: repeatedly hop to the point of
/// minimal exact slope, breaking ties toward the farthest point so interior
/// collinear points never become vertices. Quadratic and slow, but it shares
/// no code or geometric predicate with the implementation under test.
pub fn naive_lower_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    use std::collections::BTreeMap;

    let mut lowest: BTreeMap<i64, i64> = BTreeMap::new();
    for &(x, y) in points {
        lowest
            .entry(x)
            .and_modify(|b| *b = (*b).min(y))
            .or_insert(y);
    }
    let candidates: Vec<(i64, i64)> = lowest.into_iter().collect();
    let Some((&first, &last)) = candidates.first().zip(candidates.last()) else {
        return Vec::new();
    };

    let mut chain = vec![first];
    let mut current = first;
    while current != last {
        let mut best: Option<(BigRational, (i64, i64))> = None;
        for &q in candidates.iter().filter(|q| q.0 > current.0) {
            let slope = BigRational::new(
                BigInt::from(q.1 - current.1),
                BigInt::from(q.0 - current.0),
            );
            let better = match &best {
                None => true,
                Some((s, b)) => slope < *s || (slope == *s && q.0 > b.0),
            };
            if better {
                best = Some((slope, q));
            }
        }
        let (_, next) = best.expect("some candidate lies to the right");
        chain.push(next);
        current = next;
    }
    chain
}

#[allow(dead_code)] // only some test binaries decode SVG
/// Parses an SVG coordinate with exactly three decimals back to a rational.
pub fn parse_dec3(text: &str) -> BigRational {
    let (sign, digits) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text),
    };
    let (int, frac) = digits.split_once('.').expect("decimal point");
    assert_eq!(frac.len(), 3, "coordinates carry exactly three decimals");
    let milli: i64 = int.parse::<i64>().unwrap() * 1000 + frac.parse::<i64>().unwrap();
    BigRational::new(BigInt::from(sign * milli), BigInt::from(1000))
}

#[allow(dead_code)]
/// Extracts `(cx, cy)` centers of vertex markers in document order.
pub fn circle_centers(svg: &str) -> Vec<(BigRational, BigRational)> {
    svg.lines()
        .filter_map(|line| {
            let rest = line.strip_prefix("<circle cx=\"")?;
            let (cx, rest) = rest.split_once('"')?;
            let rest = rest.strip_prefix(" cy=\"")?;
            let (cy, _) = rest.split_once('"')?;
            Some((parse_dec3(cx), parse_dec3(cy)))
        })
        .collect()
}
