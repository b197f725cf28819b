//! Per-point local size `S_i` and potential `P_i = f(S_i)`.
//!
//! `S_i` is large where the data are sparse, so the potential behaves like an
//! inverse density: the total area of the Delaunay triangles around a point,
//! the area of its (hull-clipped) Voronoi cell, or a statistic of the lengths
//! of its Delaunay edges. Density itself is never materialized.
//!
//! `f` is any strictly increasing map. It does not change which point is
//! lower than which, so the in-tree built on top of the potential is the same
//! for every choice; the transforms only matter for display.

use crate::geometry::{delaunay, GeometryError, Point2, Triangulation};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PotentialError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("local size of point {index} is {value}, expected > 0")]
    NonPositiveSize { index: usize, value: f64 },
    #[error("unknown {what} '{name}'")]
    UnknownName { what: &'static str, name: String },
}

/// Alternative statistics over a point's Delaunay edge lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistanceStat {
    Mean,
    Max,
    Min,
    Sum,
}

/// How the local size `S_i` of a point is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalSizeKind {
    /// Total area of the Delaunay triangles incident to the point.
    #[default]
    NeighborSimplexVolume,
    /// Area of the point's Voronoi cell, clipped to the convex hull.
    VoronoiCellVolume,
    /// Median distance to the Delaunay neighbors (mean of the two middle
    /// values for an even count).
    MedianNeighborDistance,
    NeighborDistanceStat(DistanceStat),
}

impl LocalSizeKind {
    pub const ALL: [LocalSizeKind; 7] = [
        LocalSizeKind::NeighborSimplexVolume,
        LocalSizeKind::VoronoiCellVolume,
        LocalSizeKind::MedianNeighborDistance,
        LocalSizeKind::NeighborDistanceStat(DistanceStat::Mean),
        LocalSizeKind::NeighborDistanceStat(DistanceStat::Max),
        LocalSizeKind::NeighborDistanceStat(DistanceStat::Min),
        LocalSizeKind::NeighborDistanceStat(DistanceStat::Sum),
    ];

    pub fn name(self) -> &'static str {
        match self {
            LocalSizeKind::NeighborSimplexVolume => "simplex",
            LocalSizeKind::VoronoiCellVolume => "voronoi",
            LocalSizeKind::MedianNeighborDistance => "median",
            LocalSizeKind::NeighborDistanceStat(DistanceStat::Mean) => "mean",
            LocalSizeKind::NeighborDistanceStat(DistanceStat::Max) => "max",
            LocalSizeKind::NeighborDistanceStat(DistanceStat::Min) => "min",
            LocalSizeKind::NeighborDistanceStat(DistanceStat::Sum) => "sum",
        }
    }
}

impl fmt::Display for LocalSizeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LocalSizeKind {
    type Err = PotentialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LocalSizeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| PotentialError::UnknownName {
                what: "local size definition",
                name: s.to_string(),
            })
    }
}

/// Strictly increasing maps from local size to potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformKind {
    /// `f(x) = x`
    Identity,
    /// `f(S_i) = ln(1 + S_i / min S)`
    #[default]
    LogRatio,
    /// `f(x) = ln(1 + x)`
    Log1p,
    /// `f(x) = -exp(-x)`
    NegExp,
    /// `f(x) = 1 / (1 + exp(-x))`
    Sigmoid,
}

impl TransformKind {
    pub const ALL: [TransformKind; 5] = [
        TransformKind::Identity,
        TransformKind::LogRatio,
        TransformKind::Log1p,
        TransformKind::NegExp,
        TransformKind::Sigmoid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TransformKind::Identity => "id",
            TransformKind::LogRatio => "log-ratio",
            TransformKind::Log1p => "log1p",
            TransformKind::NegExp => "negexp",
            TransformKind::Sigmoid => "sigmoid",
        }
    }
}

impl fmt::Display for TransformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransformKind {
    type Err = PotentialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TransformKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| PotentialError::UnknownName {
                what: "transform",
                name: s.to_string(),
            })
    }
}

/// Local sizes and potentials for every input point (duplicates included).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialField {
    pub kind: LocalSizeKind,
    pub transform: TransformKind,
    pub s: Vec<f64>,
    pub p: Vec<f64>,
}

impl PotentialField {
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

/// `S_i` for every input point of `tri`. Duplicates share the value of
/// their site.
pub fn local_size(tri: &Triangulation, kind: LocalSizeKind) -> Vec<f64> {
    let per_site: Vec<f64> = match kind {
        LocalSizeKind::NeighborSimplexVolume => {
            let mut acc = vec![0.0; tri.num_vertices()];
            for (t, verts) in tri.triangles().iter().enumerate() {
                let area = tri.triangle_area(t);
                for &v in verts {
                    acc[v] += area;
                }
            }
            acc
        }
        LocalSizeKind::VoronoiCellVolume => tri.voronoi_cell_areas(),
        LocalSizeKind::MedianNeighborDistance => {
            site_distance_stat(tri, median)
        }
        LocalSizeKind::NeighborDistanceStat(stat) => {
            site_distance_stat(tri, |d| distance_stat(stat, d))
        }
    };
    (0..tri.num_inputs())
        .map(|i| per_site[tri.vertex_of(i)])
        .collect()
}

fn site_distance_stat(tri: &Triangulation, stat: impl Fn(&mut [f64]) -> f64) -> Vec<f64> {
    let pts = tri.points();
    (0..tri.num_vertices())
        .map(|v| {
            let mut d: Vec<f64> = tri
                .neighbors(v)
                .iter()
                .map(|&w| pts[v].dist(pts[w]))
                .collect();
            stat(&mut d)
        })
        .collect()
}

fn median(d: &mut [f64]) -> f64 {
    d.sort_by(f64::total_cmp);
    let m = d.len() / 2;
    if d.len() % 2 == 1 {
        d[m]
    } else {
        0.5 * (d[m - 1] + d[m])
    }
}

fn distance_stat(stat: DistanceStat, d: &mut [f64]) -> f64 {
    match stat {
        DistanceStat::Mean => d.iter().sum::<f64>() / d.len() as f64,
        DistanceStat::Max => d.iter().copied().fold(f64::MIN, f64::max),
        DistanceStat::Min => d.iter().copied().fold(f64::MAX, f64::min),
        DistanceStat::Sum => d.iter().sum(),
    }
}

/// `P_i = f(S_i)`.
pub fn transform(s: &[f64], t: TransformKind) -> Result<Vec<f64>, PotentialError> {
    if let Some((index, &value)) = s.iter().enumerate().find(|(_, &v)| v.is_nan() || v <= 0.0) {
        return Err(PotentialError::NonPositiveSize { index, value });
    }
    let min = s.iter().copied().fold(f64::INFINITY, f64::min);
    let f = |x: f64| match t {
        TransformKind::Identity => x,
        TransformKind::LogRatio => (x / min).ln_1p(),
        TransformKind::Log1p => x.ln_1p(),
        TransformKind::NegExp => -(-x).exp(),
        TransformKind::Sigmoid => 1.0 / (1.0 + (-x).exp()),
    };
    Ok(s.iter().map(|&x| f(x)).collect())
}

/// Triangulates `points` and evaluates the potential in one go.
pub fn potential_field(
    points: &[Point2],
    kind: LocalSizeKind,
    t: TransformKind,
) -> Result<PotentialField, PotentialError> {
    let tri = delaunay(points)?;
    field_from_triangulation(&tri, kind, t)
}

pub fn field_from_triangulation(
    tri: &Triangulation,
    kind: LocalSizeKind,
    t: TransformKind,
) -> Result<PotentialField, PotentialError> {
    let s = local_size(tri, kind);
    let p = transform(&s, t)?;
    Ok(PotentialField {
        kind,
        transform: t,
        s,
        p,
    })
}

/// Fallback for inputs that cannot be tessellated (fewer than three distinct
/// points, or all on a line): the chosen distance statistic over *all* other
/// distinct points instead of the Delaunay neighbors. Only distance-based
/// kinds are accepted.
pub fn complete_graph_field(
    points: &[Point2],
    kind: LocalSizeKind,
    t: TransformKind,
) -> Result<PotentialField, PotentialError> {
    let stat = match kind {
        LocalSizeKind::MedianNeighborDistance => None,
        LocalSizeKind::NeighborDistanceStat(st) => Some(st),
        other => {
            return Err(GeometryError::DegenerateInput(format!(
                "'{other}' needs a tessellation; only distance statistics can fall back"
            ))
            .into())
        }
    };
    let d = crate::geometry::dedup(points)?;
    if d.sites.len() < 2 {
        return Err(GeometryError::DegenerateInput(
            "fewer than 2 distinct points".to_string(),
        )
        .into());
    }
    let per_site: Vec<f64> = d
        .sites
        .iter()
        .enumerate()
        .map(|(v, &p)| {
            let mut dist: Vec<f64> = d
                .sites
                .iter()
                .enumerate()
                .filter(|&(w, _)| w != v)
                .map(|(_, &q)| p.dist(q))
                .collect();
            match stat {
                None => median(&mut dist),
                Some(st) => distance_stat(st, &mut dist),
            }
        })
        .collect();
    let s: Vec<f64> = d.site_of.iter().map(|&v| per_site[v]).collect();
    let p = transform(&s, t)?;
    Ok(PotentialField {
        kind,
        transform: t,
        s,
        p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tri3() -> Triangulation {
        delaunay(&[(0.0, 0.0).into(), (1.0, 0.0).into(), (0.0, 1.0).into()]).unwrap()
    }

    #[test]
    fn simplex_volume_single_triangle() {
        assert_eq!(
            local_size(&tri3(), LocalSizeKind::NeighborSimplexVolume),
            vec![0.5, 0.5, 0.5]
        );
    }

    #[test]
    fn voronoi_volume_single_triangle() {
        let s = local_size(&tri3(), LocalSizeKind::VoronoiCellVolume);
        let want = [0.25, 0.125, 0.125];
        for (a, b) in s.iter().zip(want) {
            assert!((a - b).abs() < 1e-15, "{s:?}");
        }
    }

    #[test]
    fn median_distance_single_triangle() {
        let s = local_size(&tri3(), LocalSizeKind::MedianNeighborDistance);
        let half = 0.5 * (1.0 + 2f64.sqrt());
        assert_eq!(s[0], 1.0);
        assert!((s[1] - half).abs() < 1e-15);
        assert!((s[2] - half).abs() < 1e-15);
        assert!((s[1] - 1.2071068).abs() < 1e-7);
    }

    #[test]
    fn distance_stats() {
        let t = tri3();
        let r2 = 2f64.sqrt();
        let get = |st| local_size(&t, LocalSizeKind::NeighborDistanceStat(st));
        assert_eq!(get(DistanceStat::Max), vec![1.0, r2, r2]);
        assert_eq!(get(DistanceStat::Min), vec![1.0, 1.0, 1.0]);
        assert_eq!(get(DistanceStat::Sum), vec![2.0, 1.0 + r2, 1.0 + r2]);
        assert_eq!(get(DistanceStat::Mean)[0], 1.0);
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn identity_and_log_ratio() {
        let s = [1.0, 2.0, 4.0];
        assert_eq!(transform(&s, TransformKind::Identity).unwrap(), s.to_vec());
        let p = transform(&s, TransformKind::LogRatio).unwrap();
        let want = [2f64.ln(), 3f64.ln(), 5f64.ln()];
        for (a, b) in p.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn non_positive_size_rejected() {
        assert_eq!(
            transform(&[1.0, 0.0], TransformKind::Identity),
            Err(PotentialError::NonPositiveSize {
                index: 1,
                value: 0.0
            })
        );
        assert!(transform(&[f64::NAN], TransformKind::Log1p).is_err());
    }

    #[test]
    fn duplicates_share_sizes() {
        let pts: Vec<Point2> = vec![
            (0.0, 0.0).into(),
            (1.0, 0.0).into(),
            (0.0, 1.0).into(),
            (1.0, 1.2).into(),
            (1.0, 0.0).into(),
        ];
        for kind in LocalSizeKind::ALL {
            let f = potential_field(&pts, kind, TransformKind::LogRatio).unwrap();
            assert_eq!(f.s.len(), 5);
            assert_eq!(f.s[1], f.s[4]);
            assert_eq!(f.p[1], f.p[4]);
        }
    }

    #[test]
    fn names_round_trip() {
        for k in LocalSizeKind::ALL {
            assert_eq!(k.name().parse::<LocalSizeKind>().unwrap(), k);
        }
        for t in TransformKind::ALL {
            assert_eq!(t.name().parse::<TransformKind>().unwrap(), t);
        }
        assert!("cubic".parse::<TransformKind>().is_err());
    }

    #[test]
    fn fallback_on_collinear_input() {
        let pts: Vec<Point2> = vec![(0.0, 0.0).into(), (1.0, 0.0).into(), (3.0, 0.0).into()];
        assert!(potential_field(&pts, LocalSizeKind::MedianNeighborDistance, TransformKind::Identity).is_err());
        let f = complete_graph_field(&pts, LocalSizeKind::MedianNeighborDistance, TransformKind::Identity)
            .unwrap();
        assert_eq!(f.s, vec![2.0, 1.5, 2.5]);
        assert!(complete_graph_field(&pts, LocalSizeKind::NeighborSimplexVolume, TransformKind::Identity).is_err());
    }

    proptest! {
        #[test]
        fn transforms_preserve_ranking(s in prop::collection::vec(1e-3f64..30.0, 1..40)) {
            let mut base: Vec<usize> = (0..s.len()).collect();
            base.sort_by(|&a, &b| s[a].total_cmp(&s[b]).then(a.cmp(&b)));
            for t in TransformKind::ALL {
                let p = transform(&s, t).unwrap();
                let mut order: Vec<usize> = (0..p.len()).collect();
                order.sort_by(|&a, &b| p[a].total_cmp(&p[b]).then(a.cmp(&b)));
                prop_assert_eq!(&order, &base, "{}", t);
            }
        }
    }
}
