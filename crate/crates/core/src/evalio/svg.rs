//! Deterministic SVG figures.
//!
//! Output depends only on the inputs: coordinates are printed with a fixed
//! number of decimals and colors come from the fixed tables below, so the same
//! inputs always give byte-identical documents.

use crate::cutting::{DecisionGraph, LabelSet};
use crate::geometry::{Point2, Triangulation};
use crate::intree::{ClusterAssignment, InTree};
use std::fmt::Write as _;

/// Sequential map for potentials, low to high (viridis, 16 stops).
pub const SEQUENTIAL: [&str; 16] = [
    "#440154", "#481a6c", "#472f7d", "#414487", "#39568c", "#31688e", "#2a788e", "#23888e",
    "#1f988b", "#22a884", "#35b779", "#54c568", "#7ad151", "#a5db36", "#d2e21b", "#fde725",
];

/// Categorical map for cluster ids, cycled.
pub const CATEGORICAL: [&str; 12] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#393b79", "#ad494a",
];

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;
const EDGE: &str = "#9a9a9a";

pub enum SvgView<'a> {
    /// Delaunay edges, points colored by potential.
    DelaunayPotential {
        points: &'a [Point2],
        tri: &'a Triangulation,
        potential: &'a [f64],
    },
    /// In-tree edges (child to parent), points colored by potential.
    ItPotential {
        points: &'a [Point2],
        it: &'a InTree,
    },
    /// Points colored by cluster; labeled points drawn as triangles.
    Clusters {
        points: &'a [Point2],
        assignment: &'a ClusterAssignment,
        labels: Option<&'a LabelSet>,
    },
    /// Potential against edge length; `selected` nodes highlighted.
    DecisionGraph {
        dg: &'a DecisionGraph,
        selected: &'a [usize],
    },
}

impl SvgView<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            SvgView::DelaunayPotential { .. } => "delaunay_potential",
            SvgView::ItPotential { .. } => "it_potential",
            SvgView::Clusters { .. } => "clusters",
            SvgView::DecisionGraph { .. } => "decision_graph",
        }
    }
}

struct Frame {
    lo: (f64, f64),
    scale: (f64, f64),
}

impl Frame {
    /// Fits the bounding box of `pts` into the canvas, keeping the aspect
    /// ratio when `equal` is set.
    fn fit(pts: impl Iterator<Item = (f64, f64)>, equal: bool) -> Frame {
        let (mut lx, mut ly, mut hx, mut hy) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for (x, y) in pts {
            lx = lx.min(x);
            ly = ly.min(y);
            hx = hx.max(x);
            hy = hy.max(y);
        }
        if lx > hx {
            (lx, ly, hx, hy) = (0.0, 0.0, 1.0, 1.0);
        }
        let span = |a: f64, b: f64| if b > a { b - a } else { 1.0 };
        let inner = SIZE - 2.0 * MARGIN;
        let (sx, sy) = (inner / span(lx, hx), inner / span(ly, hy));
        let scale = if equal {
            let s = sx.min(sy);
            (s, s)
        } else {
            (sx, sy)
        };
        Frame {
            lo: (lx, ly),
            scale,
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            MARGIN + (x - self.lo.0) * self.scale.0,
            SIZE - MARGIN - (y - self.lo.1) * self.scale.1,
        )
    }
}

fn sequential(v: f64, lo: f64, hi: f64) -> &'static str {
    let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.5 };
    let k = (t * SEQUENTIAL.len() as f64).floor() as usize;
    SEQUENTIAL[k.min(SEQUENTIAL.len() - 1)]
}

fn header(out: &mut String, title: &str) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(out, "<title>{title}</title>").unwrap();
    writeln!(out, r##"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>"##).unwrap();
}

fn segment(out: &mut String, a: (f64, f64), b: (f64, f64), color: &str) {
    writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="0.8"/>"#,
        a.0, a.1, b.0, b.1
    )
    .unwrap();
}

fn dot(out: &mut String, c: (f64, f64), r: f64, fill: &str) {
    writeln!(
        out,
        r#"<circle cx="{:.2}" cy="{:.2}" r="{r}" fill="{fill}"/>"#,
        c.0, c.1
    )
    .unwrap();
}

fn marker(out: &mut String, c: (f64, f64), fill: &str) {
    writeln!(
        out,
        r##"<polygon points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{fill}" stroke="#000000" stroke-width="0.8"/>"##,
        c.0,
        c.1 - 6.0,
        c.0 - 5.2,
        c.1 + 3.0,
        c.0 + 5.2,
        c.1 + 3.0
    )
    .unwrap();
}

fn range(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}

/// Renders one view as a standalone SVG 1.1 document.
pub fn render_svg(view: &SvgView<'_>) -> String {
    let mut out = String::new();
    header(&mut out, view.name());
    match view {
        SvgView::DelaunayPotential {
            points,
            tri,
            potential,
        } => {
            let f = Frame::fit(points.iter().map(|p| (p.x, p.y)), true);
            let sites = tri.points();
            for v in 0..tri.num_vertices() {
                for &w in tri.neighbors(v).iter().filter(|&&w| w > v) {
                    segment(
                        &mut out,
                        f.map(sites[v].x, sites[v].y),
                        f.map(sites[w].x, sites[w].y),
                        EDGE,
                    );
                }
            }
            let (lo, hi) = range(potential);
            for (p, &v) in points.iter().zip(potential.iter()) {
                dot(&mut out, f.map(p.x, p.y), 3.0, sequential(v, lo, hi));
            }
        }
        SvgView::ItPotential { points, it } => {
            let f = Frame::fit(points.iter().map(|p| (p.x, p.y)), true);
            for i in (0..it.len()).filter(|&i| !it.is_root(i)) {
                let (a, b) = (points[i], points[it.parent[i]]);
                segment(&mut out, f.map(a.x, a.y), f.map(b.x, b.y), EDGE);
            }
            let (lo, hi) = range(&it.potential);
            for (p, &v) in points.iter().zip(it.potential.iter()) {
                dot(&mut out, f.map(p.x, p.y), 3.0, sequential(v, lo, hi));
            }
        }
        SvgView::Clusters {
            points,
            assignment,
            labels,
        } => {
            let f = Frame::fit(points.iter().map(|p| (p.x, p.y)), true);
            for (p, &c) in points.iter().zip(&assignment.cluster_id) {
                dot(&mut out, f.map(p.x, p.y), 3.0, CATEGORICAL[c % CATEGORICAL.len()]);
            }
            if let Some(labels) = labels {
                let mut kinds: Vec<&str> = labels.iter().map(|(_, l)| l).collect();
                kinds.sort_unstable();
                kinds.dedup();
                for (i, l) in labels.iter().filter(|&(i, _)| i < points.len()) {
                    let k = kinds.binary_search(&l).unwrap_or(0);
                    marker(&mut out, f.map(points[i].x, points[i].y), CATEGORICAL[k % CATEGORICAL.len()]);
                }
            }
        }
        SvgView::DecisionGraph { dg, selected } => {
            let f = Frame::fit(dg.entries.iter().map(|e| (e.p, e.w)), false);
            let (x0, y0) = (MARGIN, SIZE - MARGIN);
            segment(&mut out, (x0, y0), (SIZE - MARGIN, y0), "#000000");
            segment(&mut out, (x0, y0), (x0, MARGIN), "#000000");
            writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-size="12">P</text>"#,
                SIZE - MARGIN - 8.0,
                SIZE - 8.0
            )
            .unwrap();
            writeln!(out, r#"<text x="6" y="{:.2}" font-size="12">W</text>"#, MARGIN + 4.0).unwrap();
            for e in &dg.entries {
                let color = if selected.contains(&e.node) {
                    "#1f4fd6"
                } else {
                    "#303030"
                };
                dot(&mut out, f.map(e.p, e.w), 3.0, color);
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
