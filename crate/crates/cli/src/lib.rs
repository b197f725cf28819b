//! Pipeline orchestration behind the `itclust` binary.
//!
//! [`run_pipeline`] is the whole chain (tessellate, potential, in-tree, cut,
//! write artifacts); the staged subcommands in [`cli`] expose each step on
//! its own, passing in-trees between processes as JSON documents.

pub mod cli;

use itclust::cutting::{dg_auto_cut, dg_manual_cut, ss_divisive_cut, CutResult, LabelSet};
use itclust::evalio::svg::{render_svg, SvgView};
use itclust::evalio::{
    load_labels, load_points, metrics, sample_labels, write_clusters, Dataset, EvalError,
    MetricReport, PointFormat,
};
use itclust::geometry::{delaunay, GeometryError};
use itclust::intree::build_it;
use itclust::itdoc::{self, SchemaError};
use itclust::potential::{complete_graph_field, field_from_triangulation};
use itclust::{
    CutError, CutWarning, InTree, LocalSizeKind, PotentialError, PotentialField, Triangulation,
    TransformKind,
};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Eval(EvalError),
    #[error("{path}: {source}")]
    File { path: String, source: EvalError },
    #[error("{path}: {source}")]
    Schema { path: String, source: SchemaError },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Potential(PotentialError),
    #[error(transparent)]
    Cut(#[from] CutError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for bad input, 3 for geometry that cannot be tessellated, 4 for a
    /// cutter that cannot satisfy the request.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Geometry(GeometryError::DegenerateInput(_)) => 3,
            CliError::Potential(PotentialError::Geometry(GeometryError::DegenerateInput(_))) => 3,
            CliError::Potential(PotentialError::NonPositiveSize { .. }) => 3,
            CliError::Cut(_) => 4,
            _ => 2,
        }
    }
}

impl From<PotentialError> for CliError {
    fn from(e: PotentialError) -> Self {
        match e {
            PotentialError::Geometry(g) => CliError::Geometry(g),
            other => CliError::Potential(other),
        }
    }
}

/// Attaches the file name to errors that do not already carry it.
fn in_file(path: &Path, e: EvalError) -> CliError {
    match e {
        EvalError::Io { .. } => CliError::Eval(e),
        source => CliError::File {
            path: path.display().to_string(),
            source,
        },
    }
}

pub fn read_dataset(path: &Path, header: bool) -> Result<Dataset, CliError> {
    load_points(path, PointFormat { header }).map_err(|e| in_file(path, e))
}

pub fn read_labels(path: &Path) -> Result<LabelSet, CliError> {
    load_labels(path).map_err(|e| in_file(path, e))
}

pub fn read_tree(path: &Path) -> Result<InTree, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    itdoc::import(&text).map_err(|source| CliError::Schema {
        path: path.display().to_string(),
        source,
    })
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.display().to_string(),
        source,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Potentials plus the triangulation they came from (absent when the
/// complete-graph fallback was used).
pub struct Model {
    pub tri: Option<Triangulation>,
    pub field: PotentialField,
}

/// Tessellates and evaluates the potential. With `complete_graph` set, a set
/// that cannot be tessellated falls back to distance statistics over all
/// pairs; otherwise it is an error.
pub fn build_model(
    ds: &Dataset,
    sdef: LocalSizeKind,
    transform: TransformKind,
    complete_graph: bool,
) -> Result<Model, CliError> {
    match delaunay(&ds.points) {
        Ok(tri) => {
            let field = field_from_triangulation(&tri, sdef, transform)?;
            Ok(Model {
                tri: Some(tri),
                field,
            })
        }
        Err(GeometryError::DegenerateInput(_)) if complete_graph => Ok(Model {
            tri: None,
            field: complete_graph_field(&ds.points, sdef, transform)?,
        }),
        Err(e) => Err(e.into()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViewKind {
    DelaunayPotential,
    ItPotential,
    Clusters,
    DecisionGraph,
}

impl ViewKind {
    pub const ALL: [ViewKind; 4] = [
        ViewKind::DelaunayPotential,
        ViewKind::ItPotential,
        ViewKind::Clusters,
        ViewKind::DecisionGraph,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ViewKind::DelaunayPotential => "delaunay_potential",
            ViewKind::ItPotential => "it_potential",
            ViewKind::Clusters => "clusters",
            ViewKind::DecisionGraph => "decision_graph",
        }
    }
}

impl fmt::Display for ViewKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ViewKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let norm = s.replace('-', "_");
        ViewKind::ALL
            .into_iter()
            .find(|v| v.name() == norm)
            .ok_or_else(|| {
                format!("unknown view '{s}' (delaunay_potential, it_potential, clusters, decision_graph)")
            })
    }
}

/// Where the semi-supervised cutter gets its labels.
#[derive(Debug, Clone, PartialEq)]
pub enum LabelSource {
    File(PathBuf),
    /// Drawn from the class column of the points file.
    Sample { per_cluster: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cutter {
    Ss(LabelSource),
    DgAuto { k: usize },
    DgManual { nodes: Vec<usize> },
}

impl Cutter {
    /// Resolves labels (if needed) and cuts the fresh tree.
    pub fn apply(&self, it: &InTree, ds: Option<&Dataset>) -> Result<CutResult, CliError> {
        Ok(match self {
            Cutter::DgAuto { k } => dg_auto_cut(it, *k)?,
            Cutter::DgManual { nodes } => dg_manual_cut(it, nodes)?,
            Cutter::Ss(src) => ss_divisive_cut(it, &resolve_labels(src, ds)?)?,
        })
    }
}

pub fn resolve_labels(src: &LabelSource, ds: Option<&Dataset>) -> Result<LabelSet, CliError> {
    match src {
        LabelSource::File(p) => read_labels(p),
        LabelSource::Sample { per_cluster, seed } => {
            let gt = ds.and_then(|d| d.truth.as_ref()).ok_or_else(|| {
                CliError::Usage(
                    "the ss cutter needs --labels, or a points file with a class column to sample from"
                        .into(),
                )
            })?;
            sample_labels(gt, *per_cluster, *seed).map_err(CliError::Eval)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub points: PathBuf,
    pub header: bool,
    pub sdef: LocalSizeKind,
    pub transform: TransformKind,
    pub complete_graph: bool,
    pub cutter: Cutter,
    pub out_dir: PathBuf,
    pub svg: Vec<ViewKind>,
}

/// What a pipeline run produced; every path is inside the output directory.
#[derive(Debug)]
pub struct Artifacts {
    pub tree: PathBuf,
    pub clusters: PathBuf,
    pub report: Option<PathBuf>,
    pub svgs: Vec<PathBuf>,
    pub result: CutResult,
    pub metrics: Option<MetricReport>,
}

pub fn render_view(
    view: ViewKind,
    ds: &Dataset,
    tri: Option<&Triangulation>,
    fresh: &InTree,
    result: &CutResult,
    labels: Option<&LabelSet>,
) -> Result<String, CliError> {
    let dg = itclust::cutting::decision_graph(fresh);
    let cut = fresh.with_cuts(&result.cut_nodes);
    Ok(render_svg(&match view {
        ViewKind::DelaunayPotential => SvgView::DelaunayPotential {
            points: &ds.points,
            tri: tri.ok_or_else(|| {
                GeometryError::DegenerateInput("no triangulation to draw".into())
            })?,
            potential: &fresh.potential,
        },
        ViewKind::ItPotential => SvgView::ItPotential {
            points: &ds.points,
            it: &cut,
        },
        ViewKind::Clusters => SvgView::Clusters {
            points: &ds.points,
            assignment: &result.assignment,
            labels,
        },
        ViewKind::DecisionGraph => SvgView::DecisionGraph {
            dg: &dg,
            selected: &result.cut_nodes,
        },
    }))
}

/// Writes `it.json`, `clusters.csv`, `report.json` (when the points carry
/// classes) and the requested SVGs. Deterministic: same inputs, same bytes.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<Artifacts, CliError> {
    let ds = read_dataset(&cfg.points, cfg.header)?;
    let model = build_model(&ds, cfg.sdef, cfg.transform, cfg.complete_graph)?;
    let it = build_it(&ds.points, &model.field.p);
    let labels = match &cfg.cutter {
        Cutter::Ss(src) => Some(resolve_labels(src, Some(&ds))?),
        _ => None,
    };
    let result = match &labels {
        Some(l) => ss_divisive_cut(&it, l)?,
        None => cfg.cutter.apply(&it, Some(&ds))?,
    };

    ensure_dir(&cfg.out_dir)?;
    let tree = cfg.out_dir.join("it.json");
    write_file(&tree, &itdoc::export(&it.with_cuts(&result.cut_nodes)))?;
    let clusters = cfg.out_dir.join("clusters.csv");
    write_file(&clusters, &write_clusters(&result.assignment))?;

    let mut report = None;
    let mut report_data = None;
    if let Some(gt) = &ds.truth {
        let m = metrics(&result.assignment.cluster_id, gt).map_err(CliError::Eval)?;
        let path = cfg.out_dir.join("report.json");
        write_file(&path, &to_json(&m))?;
        report = Some(path);
        report_data = Some(m);
    }

    let mut svgs = Vec::new();
    for &view in &cfg.svg {
        let text = render_view(view, &ds, model.tri.as_ref(), &it, &result, labels.as_ref())?;
        let path = cfg.out_dir.join(format!("{view}.svg"));
        write_file(&path, &text)?;
        svgs.push(path);
    }

    Ok(Artifacts {
        tree,
        clusters,
        report,
        svgs,
        result,
        metrics: report_data,
    })
}

/// One line per warning, for stderr.
pub fn describe_warnings(w: &[CutWarning]) -> Vec<String> {
    w.iter()
        .map(|CutWarning::ImpureResidue { root, labels }| {
            format!(
                "warning: cluster rooted at {root} still holds labels {}",
                labels.join(", ")
            )
        })
        .collect()
}
