//! Exact orientation and incircle tests, plus the index-keyed symbolic
//! perturbation that makes every incircle query decisive.
//!
//! The floating-point adaptive predicates come from the `robust` crate; they
//! return the exact sign of the determinant for any finite input that does not
//! overflow.

use super::Point2;
use std::cmp::Ordering;

#[inline]
fn c(p: Point2) -> robust::Coord<f64> {
    robust::Coord { x: p.x, y: p.y }
}

/// Positive when `a, b, c` turn counter-clockwise, negative when clockwise,
/// zero when collinear. Only the sign is meaningful.
#[inline]
pub fn orient2d(a: Point2, b: Point2, p: Point2) -> f64 {
    robust::orient2d(c(a), c(b), c(p))
}

/// Positive when `d` lies strictly inside the circle through the
/// counter-clockwise triangle `a, b, c`, negative outside, zero on it.
#[inline]
pub fn incircle(a: Point2, b: Point2, p: Point2, d: Point2) -> f64 {
    robust::incircle(c(a), c(b), c(p), c(d))
}

fn sign(v: f64) -> Ordering {
    v.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
}

/// Incircle test under symbolic perturbation.
///
/// Each site `i` is lifted to `x² + y² + ε_i` with `ε_i ≫ ε_j` whenever
/// `i < j`. When the exact determinant vanishes, the sign is decided by the
/// cofactor of the lowest-indexed of the four sites, which is an orientation
/// of the other three and never zero for distinct cocircular sites.
///
/// `tri` must be counter-clockwise and all four sites distinct. Never returns
/// `Equal` for such inputs.
pub fn incircle_perturbed(sites: &[Point2], tri: [usize; 3], d: usize) -> Ordering {
    let [a, b, cc] = tri;
    let det = incircle(sites[a], sites[b], sites[cc], sites[d]);
    let s = sign(det);
    if s != Ordering::Equal {
        return s;
    }
    // (index, cofactor sign multiplier, the other three in row order)
    let mut rows = [
        (a, 1.0, [b, cc, d]),
        (b, -1.0, [a, cc, d]),
        (cc, 1.0, [a, b, d]),
        (d, -1.0, [a, b, cc]),
    ];
    rows.sort_by_key(|r| r.0);
    for (_, mult, [u, v, w]) in rows {
        let cof = mult * orient2d(sites[u], sites[v], sites[w]);
        let s = sign(cof);
        if s != Ordering::Equal {
            return s;
        }
    }
    Ordering::Equal
}
