//! Voronoi cells of the triangulated sites, clipped to the convex hull so that
//! every cell has a finite area and the cells partition the hull.

use super::delaunay::Triangulation;
use super::hull::polygon_area;
use super::Point2;

/// Keeps the part of convex polygon `poly` where `f(p) <= 0`, for an affine
/// `f(p) = n · p - offset`.
pub fn clip_convex(poly: &[Point2], normal: (f64, f64), offset: f64) -> Vec<Point2> {
    let f = |p: Point2| normal.0 * p.x + normal.1 * p.y - offset;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for (k, &p) in poly.iter().enumerate() {
        let q = poly[(k + 1) % poly.len()];
        let (fp, fq) = (f(p), f(q));
        if fp <= 0.0 {
            out.push(p);
        }
        if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
            let t = fp / (fp - fq);
            out.push(Point2::new(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)));
        }
    }
    out
}

/// Whether `p` lies inside or on the boundary of the counter-clockwise convex
/// polygon `poly`, with a relative slack `tol` for boundary points.
pub fn point_in_convex_polygon(poly: &[Point2], p: Point2, tol: f64) -> bool {
    poly.iter().enumerate().all(|(k, &a)| {
        let b = poly[(k + 1) % poly.len()];
        let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        let scale = ((b.x - a.x).abs() + (b.y - a.y).abs())
            * ((p.x - a.x).abs() + (p.y - a.y).abs()).max(1.0);
        cross >= -tol * scale
    })
}

impl Triangulation {
    /// Voronoi cell of site `v`, intersected with the convex hull.
    pub fn voronoi_cell(&self, v: usize) -> Vec<Point2> {
        let pts = self.points();
        let site = pts[v];
        let mut cell = self.hull_polygon();
        for &w in self.neighbors(v) {
            let other = pts[w];
            // Half-plane closer to `site` than to `other`.
            let normal = (other.x - site.x, other.y - site.y);
            let mid = Point2::new(0.5 * (site.x + other.x), 0.5 * (site.y + other.y));
            cell = clip_convex(&cell, normal, normal.0 * mid.x + normal.1 * mid.y);
        }
        cell
    }

    /// Hull-clipped Voronoi cell area for every site.
    pub fn voronoi_cell_areas(&self) -> Vec<f64> {
        (0..self.num_vertices())
            .map(|v| polygon_area(self.voronoi_cell(v)))
            .collect()
    }
}
