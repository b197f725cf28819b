use super::delaunay::Triangulation;
use super::hull::hull_of_sites;
use super::predicates::{incircle_perturbed, orient2d};
use super::{check_non_degenerate, dedup, GeometryError, Point2};
use std::cmp::Ordering;

/// Reference triangulation by exhaustive search: a triple is kept when its
/// (perturbed) circumcircle contains no other site. O(n⁴); meant for
/// cross-checking [`super::delaunay`] on small inputs.
pub fn brute_force_delaunay(points: &[Point2]) -> Result<Triangulation, GeometryError> {
    let d = dedup(points)?;
    check_non_degenerate(&d.sites)?;
    let s = &d.sites;
    let n = s.len();
    let mut tris = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let o = orient2d(s[i], s[j], s[k]);
                if o == 0.0 {
                    continue;
                }
                let tri = if o > 0.0 { [i, j, k] } else { [i, k, j] };
                let empty = (0..n)
                    .filter(|&m| m != i && m != j && m != k)
                    .all(|m| incircle_perturbed(s, tri, m) == Ordering::Less);
                if empty {
                    tris.push(tri);
                }
            }
        }
    }
    let hull = hull_of_sites(s);
    Ok(Triangulation::assemble(d, tris, hull))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_simplex() {
        let p: Vec<Point2> = vec![(0.0, 0.0).into(), (1.0, 0.0).into(), (0.0, 1.0).into()];
        let t = brute_force_delaunay(&p).unwrap();
        assert_eq!(t.triangles(), &[[0, 1, 2]]);
    }
}
