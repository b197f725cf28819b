//! Planar tessellation substrate: exact predicates, Delaunay triangulation,
//! convex hull and hull-clipped Voronoi cells.
//!
//! Everything here works on *distinct* sites. Exact duplicates in the input
//! are collapsed onto the lowest input index before triangulating, and the
//! [`Triangulation`] keeps the mapping so per-point quantities can be handed
//! back to every original index.

mod brute;
mod delaunay;
mod hull;
pub mod predicates;
mod voronoi;

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use thiserror::Error;

pub use brute::brute_force_delaunay;
pub use delaunay::{delaunay, Triangulation, TriangulationDoc};
pub use hull::{convex_hull, polygon_area};
pub use voronoi::{clip_convex, point_in_convex_polygon};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
}

/// A site in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dist(self, other: Point2) -> f64 {
        self.dist2(other).sqrt()
    }

    pub fn dist2(self, other: Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    fn key(self) -> (u64, u64) {
        // +0.0 folds -0.0 onto 0.0 so both collapse together.
        ((self.x + 0.0).to_bits(), (self.y + 0.0).to_bits())
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2 { x, y }
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2 { x, y }
    }
}

/// Result of collapsing exact duplicates.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Dedup {
    /// Distinct sites, ordered by their lowest input index.
    pub sites: Vec<Point2>,
    /// Input index -> site index.
    pub site_of: Vec<usize>,
    /// Site index -> lowest input index carrying it.
    pub representative: Vec<usize>,
}

pub(crate) fn dedup(points: &[Point2]) -> Result<Dedup, GeometryError> {
    let mut seen: HashMap<(u64, u64), usize> = HashMap::with_capacity(points.len());
    let mut sites = Vec::new();
    let mut site_of = Vec::with_capacity(points.len());
    let mut representative = Vec::new();
    for (i, &p) in points.iter().enumerate() {
        if !p.is_finite() {
            return Err(GeometryError::NonFinite { index: i });
        }
        let id = *seen.entry(p.key()).or_insert_with(|| {
            sites.push(p);
            representative.push(i);
            sites.len() - 1
        });
        site_of.push(id);
    }
    Ok(Dedup {
        sites,
        site_of,
        representative,
    })
}

/// Checks the shared precondition of the tessellation routines: at least three
/// distinct sites, not all on one line.
pub(crate) fn check_non_degenerate(sites: &[Point2]) -> Result<(), GeometryError> {
    if sites.len() < 3 {
        return Err(GeometryError::DegenerateInput(format!(
            "{} distinct point(s), need at least 3",
            sites.len()
        )));
    }
    let (a, b) = (sites[0], sites[1]);
    if sites[2..]
        .iter()
        .all(|&c| predicates::orient2d(a, b, c) == 0.0)
    {
        return Err(GeometryError::DegenerateInput(format!(
            "all {} distinct points are collinear",
            sites.len()
        )));
    }
    Ok(())
}
