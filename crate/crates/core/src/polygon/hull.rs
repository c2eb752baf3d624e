//! Monotone-chain lower hulls with exact integer predicates.
//!
//! Slope comparisons are done by cross-multiplication in `i128`; if a product
//! would overflow, the comparison escalates to `BigInt`. No floating point.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;

/// Compares `a1 * a2` with `b1 * b2` exactly.
fn cmp_products(a1: i128, a2: i128, b1: i128, b2: i128) -> Ordering {
    match (a1.checked_mul(a2), b1.checked_mul(b2)) {
        (Some(lhs), Some(rhs)) => lhs.cmp(&rhs),
        _ => (BigInt::from(a1) * a2).cmp(&(BigInt::from(b1) * b2)),
    }
}

/// Compares slope(a, b) with slope(b, c); requires a.0 < b.0 < c.0.
pub(crate) fn cmp_slopes(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> Ordering {
    let ab_dy = b.1 as i128 - a.1 as i128;
    let ab_dx = b.0 as i128 - a.0 as i128;
    let bc_dy = c.1 as i128 - b.1 as i128;
    let bc_dx = c.0 as i128 - b.0 as i128;
    // slope(a,b) vs slope(b,c) == ab_dy * bc_dx vs bc_dy * ab_dx, both dx > 0
    cmp_products(ab_dy, bc_dx, bc_dy, ab_dx)
}

/// Sorts by x and keeps only the lowest y at each x.
fn collapse_duplicate_x(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut lowest: BTreeMap<i64, i64> = BTreeMap::new();
    for &(x, y) in points {
        lowest
            .entry(x)
            .and_modify(|best| {
                if y < *best {
                    *best = y;
                }
            })
            .or_insert(y);
    }
    lowest.into_iter().collect()
}

/// Lower convex hull by Andrew's monotone chain.
///
/// Returns the vertex chain left to right with strictly increasing slopes;
/// collinear interior points are dropped, so the chain is canonical.
pub(crate) fn lower_hull_chain(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let points = collapse_duplicate_x(points);
    if points.len() <= 2 {
        return points;
    }
    let mut chain: Vec<(i64, i64)> = Vec::with_capacity(points.len());
    for p in points {
        // keep the top of the chain only while slopes stay strictly increasing
        while chain.len() >= 2 {
            let a = chain[chain.len() - 2];
            let b = chain[chain.len() - 1];
            if cmp_slopes(a, b, p) == Ordering::Less {
                break;
            }
            chain.pop();
        }
        chain.push(p);
    }
    chain
}
