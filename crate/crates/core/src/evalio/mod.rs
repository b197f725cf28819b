//! Data files, label files, clustering metrics and figure output.

pub mod datasets;
mod io;
mod metrics;
pub mod svg;

use crate::geometry::Point2;
use thiserror::Error;

pub use io::{
    load_clusters, load_labels, load_points, parse_clusters, parse_labels, parse_points,
    sample_labels, save_clusters, save_labels, save_points, write_clusters, write_labels,
    write_points, PointFormat,
};
pub use metrics::{adjusted_rand_index, ari_fraction, metrics, purity, MetricReport};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: expected {expected} fields, found {found}")]
    Dimension {
        line: usize,
        expected: String,
        found: usize,
    },
    #[error("line {line}: index {index} labeled twice")]
    DuplicateIndex { line: usize, index: usize },
    #[error("cluster {cluster} has {size} point(s), cannot sample {need}")]
    ClusterTooSmall {
        cluster: usize,
        size: usize,
        need: usize,
    },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}

/// Complete reference partition, ids dense from 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    pub class: Vec<usize>,
}

impl GroundTruth {
    /// Renumbers arbitrary class tokens densely in order of first appearance.
    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Self {
        let mut seen: Vec<&str> = Vec::new();
        let class = tokens
            .iter()
            .map(|t| {
                let t = t.as_ref();
                match seen.iter().position(|&s| s == t) {
                    Some(k) => k,
                    None => {
                        seen.push(t);
                        seen.len() - 1
                    }
                }
            })
            .collect();
        GroundTruth { class }
    }

    pub fn num_classes(&self) -> usize {
        self.class.iter().max().map_or(0, |&m| m + 1)
    }

    pub fn len(&self) -> usize {
        self.class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class.is_empty()
    }
}

/// Points in file order (the order is the tie-breaking index), with the
/// reference partition when the file carries a class column.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub points: Vec<Point2>,
    pub truth: Option<GroundTruth>,
}
