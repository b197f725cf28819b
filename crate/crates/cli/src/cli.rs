use crate::{
    build_model, describe_warnings, ensure_dir, read_dataset, read_tree, render_view,
    run_pipeline, to_json, write_file, CliError, Cutter, LabelSource, PipelineConfig, ViewKind,
};
use clap::{Args, Parser, Subcommand};
use itclust::cutting::CutResult;
use itclust::evalio::{load_clusters, metrics, write_clusters};
use itclust::geometry::delaunay;
use itclust::intree::{assign_clusters, build_it};
use itclust::itdoc;
use itclust::{LocalSizeKind, TransformKind};
use itclust_server::Session;
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Debug, Parser)]
#[command(name = "itclust", version, about = "Parameter-free clustering on a nearest-descent in-tree")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Delaunay triangulation as JSON (triangulation.json).
    Triangulate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Local sizes and potentials (potential.json).
    Potential {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Uncut in-tree document (it.json).
    Tree {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Cuts an in-tree document (it.json, clusters.csv).
    Cut {
        /// In-tree document written by `tree`.
        #[arg(long)]
        tree: PathBuf,
        /// Points file; only needed to sample labels from its class column.
        #[arg(long)]
        points: Option<PathBuf>,
        #[arg(long)]
        header: bool,
        #[command(flatten)]
        cut: CutArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Purity and adjusted Rand index against the class column (report.json).
    Eval {
        /// Clusters file with `index,cluster_id` rows.
        #[arg(long)]
        clusters: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// SVG figures from points and an in-tree document.
    Plot {
        #[command(flatten)]
        input: InputArgs,
        /// In-tree document; cut flags select the clusters drawn.
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[command(flatten)]
        svg: SvgArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Serves the decision-graph API on 127.0.0.1.
    Serve {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Directory of static UI files served at "/".
        #[arg(long)]
        assets: Option<PathBuf>,
    },
    /// Whole pipeline: it.json, clusters.csv, report.json and SVGs.
    #[command(alias = "cluster")]
    Run {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        cut: CutArgs,
        #[command(flatten)]
        svg: SvgArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Rows `x,y` or `x,y,class` (comma or whitespace separated).
    #[arg(long)]
    pub points: PathBuf,
    /// Skip the first row.
    #[arg(long)]
    pub header: bool,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Local size: simplex, voronoi, median, mean, max, min or sum.
    #[arg(long, default_value = "simplex")]
    pub sdef: LocalSizeKind,
    /// Potential transform: id, log-ratio, log1p, negexp or sigmoid.
    #[arg(long, default_value = "log-ratio")]
    pub transform: TransformKind,
    /// If the points cannot be triangulated, use distances to all other
    /// points (distance-based --sdef only).
    #[arg(long)]
    pub complete_graph: bool,
}

#[derive(Debug, Args)]
pub struct CutArgs {
    /// ss, dg-auto or dg-manual, optionally followed by k (dg-auto) or a
    /// comma-separated node list (dg-manual).
    #[arg(long, required = true, num_args = 1..=2, value_names = ["METHOD", "ARG"])]
    pub cut: Vec<String>,
    /// Cluster count for dg-auto.
    #[arg(long)]
    pub k: Option<usize>,
    /// Comma-separated nodes whose outgoing edge is cut, for dg-manual.
    #[arg(long, value_delimiter = ',')]
    pub nodes: Option<Vec<usize>>,
    /// Label file (`index,label` rows) for ss.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Without --labels, ss samples this many labels per class.
    #[arg(long, default_value_t = 1)]
    pub per_cluster: usize,
    /// Seed for label sampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SvgArgs {
    /// Comma-separated views: delaunay_potential, it_potential, clusters,
    /// decision_graph, or all.
    #[arg(long, value_delimiter = ',')]
    pub svg: Vec<String>,
}

impl SvgArgs {
    pub fn views(&self) -> Result<Vec<ViewKind>, CliError> {
        let mut out = Vec::new();
        for s in &self.svg {
            if s == "all" {
                out.extend(ViewKind::ALL);
            } else {
                out.push(s.parse().map_err(CliError::Usage)?);
            }
        }
        out.dedup();
        Ok(out)
    }
}

impl CutArgs {
    pub fn cutter(&self) -> Result<Cutter, CliError> {
        let usage = |m: &str| CliError::Usage(m.to_string());
        let extra = self.cut.get(1);
        match self.cut[0].as_str() {
            "ss" => {
                if extra.is_some() {
                    return Err(usage("--cut ss takes no argument"));
                }
                Ok(Cutter::Ss(match &self.labels {
                    Some(p) => LabelSource::File(p.clone()),
                    None => LabelSource::Sample {
                        per_cluster: self.per_cluster,
                        seed: self.seed,
                    },
                }))
            }
            "dg-auto" => {
                let k = match (extra, self.k) {
                    (Some(s), None) => s
                        .parse()
                        .map_err(|_| usage(&format!("'{s}' is not a cluster count")))?,
                    (None, Some(k)) => k,
                    (Some(_), Some(_)) => return Err(usage("give k either after dg-auto or with --k")),
                    (None, None) => return Err(usage("dg-auto needs k (--k)")),
                };
                Ok(Cutter::DgAuto { k })
            }
            "dg-manual" => {
                let nodes = match (extra, &self.nodes) {
                    (Some(s), None) => s
                        .split(',')
                        .filter(|t| !t.trim().is_empty())
                        .map(|t| {
                            t.trim()
                                .parse()
                                .map_err(|_| usage(&format!("'{t}' is not a node index")))
                        })
                        .collect::<Result<_, _>>()?,
                    (None, Some(n)) => n.clone(),
                    (None, None) => Vec::new(),
                    (Some(_), Some(_)) => return Err(usage("give nodes either after dg-manual or with --nodes")),
                };
                Ok(Cutter::DgManual { nodes })
            }
            other => Err(usage(&format!(
                "unknown cutter '{other}' (ss, dg-auto, dg-manual)"
            ))),
        }
    }
}

fn report_cut(result: &CutResult) {
    for w in describe_warnings(&result.warnings) {
        eprintln!("{w}");
    }
    println!("k = {}", result.assignment.k);
}

fn write_json_to<T: serde::Serialize>(dir: &Path, name: &str, v: &T) -> Result<(), CliError> {
    ensure_dir(dir)?;
    write_file(&dir.join(name), &to_json(v))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Triangulate { input, out_dir } => {
            let ds = read_dataset(&input.points, input.header)?;
            let tri = delaunay(&ds.points)?;
            write_json_to(&out_dir, "triangulation.json", &tri.to_doc())
        }
        Command::Potential {
            input,
            model,
            out_dir,
        } => {
            let ds = read_dataset(&input.points, input.header)?;
            let m = build_model(&ds, model.sdef, model.transform, model.complete_graph)?;
            write_json_to(&out_dir, "potential.json", &m.field)
        }
        Command::Tree {
            input,
            model,
            out_dir,
        } => {
            let ds = read_dataset(&input.points, input.header)?;
            let m = build_model(&ds, model.sdef, model.transform, model.complete_graph)?;
            let it = build_it(&ds.points, &m.field.p);
            ensure_dir(&out_dir)?;
            write_file(&out_dir.join("it.json"), &itdoc::export(&it))
        }
        Command::Cut {
            tree,
            points,
            header,
            cut,
            out_dir,
        } => {
            let it = read_tree(&tree)?;
            let ds = points.map(|p| read_dataset(&p, header)).transpose()?;
            if let Some(ds) = &ds {
                if ds.points.len() != it.len() {
                    return Err(CliError::Usage(format!(
                        "{} has {} points but the in-tree has {} nodes",
                        tree.display(),
                        ds.points.len(),
                        it.len()
                    )));
                }
            }
            let result = cut.cutter()?.apply(&it, ds.as_ref())?;
            ensure_dir(&out_dir)?;
            write_file(
                &out_dir.join("it.json"),
                &itdoc::export(&it.with_cuts(&result.cut_nodes)),
            )?;
            write_file(
                &out_dir.join("clusters.csv"),
                &write_clusters(&result.assignment),
            )?;
            report_cut(&result);
            Ok(())
        }
        Command::Eval {
            clusters,
            input,
            out_dir,
        } => {
            let ds = read_dataset(&input.points, input.header)?;
            let gt = ds.truth.ok_or_else(|| {
                CliError::Usage(format!("{} has no class column", input.points.display()))
            })?;
            let ids = load_clusters(&clusters).map_err(|e| crate::in_file(&clusters, e))?;
            let report = metrics(&ids, &gt).map_err(|e| crate::in_file(&clusters, e))?;
            print!("{}", to_json(&report));
            write_json_to(&out_dir, "report.json", &report)
        }
        Command::Plot {
            input,
            tree,
            labels,
            svg,
            out_dir,
        } => {
            let ds = read_dataset(&input.points, input.header)?;
            let it = read_tree(&tree)?;
            if ds.points.len() != it.len() {
                return Err(CliError::Usage(format!(
                    "{} has {} points but the in-tree has {} nodes",
                    input.points.display(),
                    ds.points.len(),
                    it.len()
                )));
            }
            let labels = labels.map(|p| crate::read_labels(&p)).transpose()?;
            let views = svg.views()?;
            let tri = if views.contains(&ViewKind::DelaunayPotential) {
                Some(delaunay(&ds.points)?)
            } else {
                None
            };
            let cut_nodes = it.cut_nodes();
            let mut fresh = it.clone();
            fresh.cut_flags.iter_mut().for_each(|f| *f = false);
            let result = CutResult {
                assignment: assign_clusters(&it),
                cut_nodes,
                warnings: Vec::new(),
            };
            ensure_dir(&out_dir)?;
            for view in views {
                let text = render_view(view, &ds, tri.as_ref(), &fresh, &result, labels.as_ref())?;
                write_file(&out_dir.join(format!("{view}.svg")), &text)?;
            }
            Ok(())
        }
        Command::Serve {
            input,
            model,
            port,
            assets,
        } => {
            let ds = read_dataset(&input.points, input.header)?;
            let m = build_model(&ds, model.sdef, model.transform, model.complete_graph)?;
            let session = Arc::new(Session::from_potential(ds.points, &m.field.p));
            eprintln!("serving on http://127.0.0.1:{port}/");
            itclust_server::serve_blocking(session, port, assets).map_err(|source| CliError::Io {
                    path: format!("127.0.0.1:{port}"),
                    source,
                })
        }
        Command::Run {
            input,
            model,
            cut,
            svg,
            out_dir,
        } => {
            let cfg = PipelineConfig {
                points: input.points,
                header: input.header,
                sdef: model.sdef,
                transform: model.transform,
                complete_graph: model.complete_graph,
                cutter: cut.cutter()?,
                out_dir,
                svg: svg.views()?,
            };
            let art = run_pipeline(&cfg)?;
            report_cut(&art.result);
            if let Some(m) = &art.metrics {
                println!("purity = {}, ari = {}", m.purity, m.ari);
            }
            Ok(())
        }
    }
}
