use super::predicates::orient2d;
use super::{check_non_degenerate, dedup, GeometryError, Point2};

/// Counter-clockwise convex hull and its area.
///
/// Boundary points lying on a hull edge are kept as hull vertices, so the
/// result matches the boundary of the Delaunay triangulation. Exact duplicates
/// collapse onto their lowest index. Indices refer to `points`; the list
/// starts at the smallest index on the hull.
pub fn convex_hull(points: &[Point2]) -> Result<(Vec<usize>, f64), GeometryError> {
    let d = dedup(points)?;
    check_non_degenerate(&d.sites)?;
    let hull = hull_of_sites(&d.sites);
    let area = polygon_area(hull.iter().map(|&v| d.sites[v]));
    let hull = hull.into_iter().map(|v| d.representative[v]).collect();
    Ok((hull, area))
}

/// Monotone chain over distinct, non-collinear sites. Returns site indices.
pub(crate) fn hull_of_sites(sites: &[Point2]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..sites.len()).collect();
    order.sort_by(|&a, &b| {
        let (p, q) = (sites[a], sites[b]);
        p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
    });

    let chain = |iter: &mut dyn Iterator<Item = usize>| {
        let mut out: Vec<usize> = Vec::new();
        for i in iter {
            while out.len() >= 2
                && orient2d(sites[out[out.len() - 2]], sites[out[out.len() - 1]], sites[i]) < 0.0
            {
                out.pop();
            }
            out.push(i);
        }
        out
    };
    let mut lower = chain(&mut order.iter().copied());
    let mut upper = chain(&mut order.iter().rev().copied());
    lower.pop();
    upper.pop();
    lower.extend(upper);

    let start = lower
        .iter()
        .enumerate()
        .min_by_key(|&(_, &v)| v)
        .map(|(k, _)| k)
        .unwrap_or(0);
    lower.rotate_left(start);
    lower
}

/// Shoelace area; positive for counter-clockwise polygons.
pub fn polygon_area(poly: impl IntoIterator<Item = Point2>) -> f64 {
    let pts: Vec<Point2> = poly.into_iter().collect();
    if pts.len() < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for (k, p) in pts.iter().enumerate() {
        let q = pts[(k + 1) % pts.len()];
        acc += p.x * q.y - q.x * p.y;
    }
    0.5 * acc
}
