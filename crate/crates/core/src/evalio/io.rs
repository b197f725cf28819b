use super::{Dataset, EvalError, GroundTruth};
use crate::cutting::LabelSet;
use crate::geometry::Point2;
use crate::intree::ClusterAssignment;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PointFormat {
    /// Skip the first non-empty line.
    pub header: bool,
}

fn read(path: &Path) -> Result<String, EvalError> {
    fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), EvalError> {
    fs::write(path, text).map_err(|source| EvalError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Splits on commas when present, otherwise on whitespace.
fn fields(line: &str) -> Vec<&str> {
    if line.contains(',') {
        line.split(',').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn rows(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn number(line: usize, s: &str) -> Result<f64, EvalError> {
    let v: f64 = s.parse().map_err(|_| EvalError::Parse {
        line,
        msg: format!("'{s}' is not a number"),
    })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::Parse {
            line,
            msg: format!("'{s}' is not finite"),
        })
    }
}

pub fn parse_points(text: &str, format: PointFormat) -> Result<Dataset, EvalError> {
    let mut points = Vec::new();
    let mut classes: Vec<String> = Vec::new();
    let mut width = None;
    for (line, row) in rows(text).skip(usize::from(format.header)) {
        let f = fields(row);
        if f.len() != 2 && f.len() != 3 {
            return Err(EvalError::Dimension {
                line,
                expected: "2 or 3".into(),
                found: f.len(),
            });
        }
        match width {
            None => width = Some(f.len()),
            Some(w) if w != f.len() => {
                return Err(EvalError::Dimension {
                    line,
                    expected: w.to_string(),
                    found: f.len(),
                })
            }
            _ => {}
        }
        points.push(Point2::new(number(line, f[0])?, number(line, f[1])?));
        if f.len() == 3 {
            classes.push(f[2].to_string());
        }
    }
    let truth = (width == Some(3)).then(|| GroundTruth::from_tokens(&classes));
    Ok(Dataset { points, truth })
}

/// Reads `x y` or `x y class` rows, comma- or whitespace-delimited.
pub fn load_points(path: impl AsRef<Path>, format: PointFormat) -> Result<Dataset, EvalError> {
    parse_points(&read(path.as_ref())?, format)
}

pub fn write_points(ds: &Dataset) -> String {
    let mut out = String::new();
    for (i, p) in ds.points.iter().enumerate() {
        match &ds.truth {
            Some(gt) => writeln!(out, "{},{},{}", p.x, p.y, gt.class[i]),
            None => writeln!(out, "{},{}", p.x, p.y),
        }
        .unwrap();
    }
    out
}

pub fn save_points(path: impl AsRef<Path>, ds: &Dataset) -> Result<(), EvalError> {
    write(path.as_ref(), &write_points(ds))
}

pub fn parse_labels(text: &str) -> Result<LabelSet, EvalError> {
    let mut set = LabelSet::new();
    for (line, row) in rows(text) {
        let f: Vec<&str> = row.split(',').map(str::trim).collect();
        if f.len() != 2 || f[1].is_empty() {
            return Err(EvalError::Parse {
                line,
                msg: "expected 'index,label'".into(),
            });
        }
        let index: usize = f[0].parse().map_err(|_| EvalError::Parse {
            line,
            msg: format!("'{}' is not a point index", f[0]),
        })?;
        if set.insert(index, f[1]).is_some() {
            return Err(EvalError::DuplicateIndex { line, index });
        }
    }
    Ok(set)
}

/// Reads `index,label` rows.
pub fn load_labels(path: impl AsRef<Path>) -> Result<LabelSet, EvalError> {
    parse_labels(&read(path.as_ref())?)
}

pub fn write_labels(labels: &LabelSet) -> String {
    labels.iter().fold(String::new(), |mut s, (i, l)| {
        writeln!(s, "{i},{l}").unwrap();
        s
    })
}

pub fn save_labels(path: impl AsRef<Path>, labels: &LabelSet) -> Result<(), EvalError> {
    write(path.as_ref(), &write_labels(labels))
}

/// `index,cluster_id` rows.
pub fn write_clusters(a: &ClusterAssignment) -> String {
    a.cluster_id
        .iter()
        .enumerate()
        .fold(String::new(), |mut s, (i, c)| {
            writeln!(s, "{i},{c}").unwrap();
            s
        })
}

pub fn save_clusters(path: impl AsRef<Path>, a: &ClusterAssignment) -> Result<(), EvalError> {
    write(path.as_ref(), &write_clusters(a))
}

/// Reads a clusters file back into per-point ids. Rows must list indices
/// 0, 1, 2, … in order.
pub fn parse_clusters(text: &str) -> Result<Vec<usize>, EvalError> {
    let mut ids = Vec::new();
    for (line, row) in rows(text) {
        let f: Vec<&str> = row.split(',').map(str::trim).collect();
        let parse = |s: &str| {
            s.parse::<usize>().map_err(|_| EvalError::Parse {
                line,
                msg: format!("'{s}' is not a non-negative integer"),
            })
        };
        if f.len() != 2 {
            return Err(EvalError::Dimension {
                line,
                expected: "2".into(),
                found: f.len(),
            });
        }
        let (i, c) = (parse(f[0])?, parse(f[1])?);
        if i != ids.len() {
            return Err(EvalError::Parse {
                line,
                msg: format!("expected index {}, found {i}", ids.len()),
            });
        }
        ids.push(c);
    }
    Ok(ids)
}

pub fn load_clusters(path: impl AsRef<Path>) -> Result<Vec<usize>, EvalError> {
    parse_clusters(&read(path.as_ref())?)
}

/// Picks `per_cluster` random members of every reference class as labeled
/// points; the label is the class id. Deterministic for a given seed.
pub fn sample_labels(
    gt: &GroundTruth,
    per_cluster: usize,
    seed: u64,
) -> Result<LabelSet, EvalError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members = vec![Vec::new(); gt.num_classes()];
    for (i, &c) in gt.class.iter().enumerate() {
        members[c].push(i);
    }
    let mut set = LabelSet::new();
    for (c, m) in members.iter().enumerate() {
        if m.len() < per_cluster {
            return Err(EvalError::ClusterTooSmall {
                cluster: c,
                size: m.len(),
                need: per_cluster,
            });
        }
        let mut picked: Vec<usize> = sample(&mut rng, m.len(), per_cluster)
            .into_iter()
            .map(|k| m[k])
            .collect();
        picked.sort_unstable();
        for i in picked {
            set.insert(i, c.to_string());
        }
    }
    Ok(set)
}
