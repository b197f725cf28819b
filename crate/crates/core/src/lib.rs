//! Parameter-free clustering on an in-tree.
//!
//! The pipeline has four stages:
//!
//! 1. [`geometry`] tessellates the point set (Delaunay triangulation and its
//!    hull-clipped Voronoi dual) and [`potential`] turns a local size measure
//!    `S_i` of each point into a potential `P_i = f(S_i)`.
//! 2. [`intree`] links every point to its nearest point of lower potential,
//!    which yields a single in-tree over the whole data set.
//! 3. [`cutting`] severs the redundant edges between clusters, either from a
//!    few labeled points or from the potential/edge-length decision graph.
//! 4. [`intree::assign_clusters`] follows parent pointers to the roots.
//!
//! [`evalio`] holds file formats, metrics and SVG rendering, and [`itdoc`]
//! the text document used to move an in-tree between processes.

pub mod cutting;
pub mod evalio;
pub mod geometry;
pub mod intree;
pub mod itdoc;
pub mod potential;

pub use cutting::{CutError, CutResult, CutWarning, DecisionEntry, DecisionGraph, LabelSet};
pub use geometry::{GeometryError, Point2, Triangulation};
pub use intree::{ClusterAssignment, InTree};
pub use potential::{DistanceStat, LocalSizeKind, PotentialError, PotentialField, TransformKind};
