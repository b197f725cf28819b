//! Removing the redundant edges of an in-tree.
//!
//! Two families of cutters are provided:
//!
//! * the decision graph, which plots every non-root node by its potential `P`
//!   and the length `W` of its outgoing edge. Edges between clusters start at
//!   nodes with low `P` and large `W`. They can be picked by hand
//!   ([`dg_manual_cut`]) or by ranking `γ = W̃·(1 − P̃)` ([`dg_auto_cut`]);
//! * the semi-supervised divisive cutter ([`ss_divisive_cut`]), which walks
//!   the edges from longest to shortest and keeps a cut only when it splits
//!   a component holding several labels into two labeled, purer parts.

use crate::intree::{assign_clusters, ClusterAssignment, InTree};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CutError {
    #[error("k = {k} exceeds the number of points ({n})")]
    KTooLarge { k: usize, n: usize },
    #[error("k = {k} is below the number of roots already present ({roots})")]
    KTooSmall { k: usize, roots: usize },
    #[error("cannot cut node {node}: {reason}")]
    InvalidCutNode { node: usize, reason: &'static str },
    #[error("need at least 2 labeled points, found {labeled}")]
    InsufficientLabels { labeled: usize },
    #[error("labeled node {node} is out of range for {n} points")]
    LabelOutOfRange { node: usize, n: usize },
    #[error("the in-tree already has severed edges")]
    AlreadyCut,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CutWarning {
    /// A component still holds more than one kind of label after the pass.
    ImpureResidue { root: usize, labels: Vec<String> },
}

/// Partial labeling: node index -> label.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelSet {
    pub labels: BTreeMap<usize, String>,
}

impl LabelSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the previous label of `node`, if any.
    pub fn insert(&mut self, node: usize, label: impl Into<String>) -> Option<String> {
        self.labels.insert(node, label.into())
    }

    pub fn get(&self, node: usize) -> Option<&str> {
        self.labels.get(&node).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn distinct(&self) -> usize {
        let mut v: Vec<&String> = self.labels.values().collect();
        v.sort();
        v.dedup();
        v.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &str)> {
        self.labels.iter().map(|(&i, l)| (i, l.as_str()))
    }
}

impl FromIterator<(usize, String)> for LabelSet {
    fn from_iter<T: IntoIterator<Item = (usize, String)>>(iter: T) -> Self {
        LabelSet {
            labels: iter.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecisionEntry {
    pub node: usize,
    pub p: f64,
    pub w: f64,
}

/// One entry per non-root node, ascending by node index.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DecisionGraph {
    pub entries: Vec<DecisionEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutResult {
    /// Nodes whose outgoing edge was severed, ascending.
    pub cut_nodes: Vec<usize>,
    pub assignment: ClusterAssignment,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<CutWarning>,
}

impl CutResult {
    fn new(it: &InTree, mut cut_nodes: Vec<usize>, warnings: Vec<CutWarning>) -> Self {
        cut_nodes.sort_unstable();
        let assignment = assign_clusters(&it.with_cuts(&cut_nodes));
        CutResult {
            cut_nodes,
            assignment,
            warnings,
        }
    }
}

fn ensure_fresh(it: &InTree) -> Result<(), CutError> {
    if it.has_cuts() {
        Err(CutError::AlreadyCut)
    } else {
        Ok(())
    }
}

pub fn decision_graph(it: &InTree) -> DecisionGraph {
    DecisionGraph {
        entries: (0..it.len())
            .filter(|&i| !it.is_root(i))
            .map(|i| DecisionEntry {
                node: i,
                p: it.potential[i],
                w: it.edge_length[i],
            })
            .collect(),
    }
}

fn min_max_normalize(v: impl Iterator<Item = f64> + Clone) -> impl Fn(f64) -> f64 {
    let lo = v.clone().fold(f64::INFINITY, f64::min);
    let hi = v.fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    move |x| if range > 0.0 { (x - lo) / range } else { 0.5 }
}

/// `γ = W̃ · (1 − P̃)` per entry, with min–max normalization over the entries
/// (a constant column normalizes to 0.5).
pub fn gamma_scores(dg: &DecisionGraph) -> Vec<(usize, f64)> {
    let nw = min_max_normalize(dg.entries.iter().map(|e| e.w));
    let np = min_max_normalize(dg.entries.iter().map(|e| e.p));
    dg.entries
        .iter()
        .map(|e| (e.node, nw(e.w) * (1.0 - np(e.p))))
        .collect()
}

/// The `m` nodes with the largest γ, ties to the lower index.
pub fn top_gamma_nodes(dg: &DecisionGraph, m: usize) -> Vec<usize> {
    let mut g = gamma_scores(dg);
    g.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    g.into_iter().take(m).map(|(i, _)| i).collect()
}

/// Cuts the edges of the `k − roots` highest-γ nodes so that exactly `k`
/// clusters remain.
pub fn dg_auto_cut(it: &InTree, k: usize) -> Result<CutResult, CutError> {
    ensure_fresh(it)?;
    let n = it.len();
    if k > n {
        return Err(CutError::KTooLarge { k, n });
    }
    let roots = it.roots().len();
    if k < roots.max(1) {
        return Err(CutError::KTooSmall { k, roots });
    }
    let cuts = top_gamma_nodes(&decision_graph(it), k - roots);
    Ok(CutResult::new(it, cuts, Vec::new()))
}

/// Severs exactly the edges leaving `cut_nodes`.
pub fn dg_manual_cut(it: &InTree, cut_nodes: &[usize]) -> Result<CutResult, CutError> {
    ensure_fresh(it)?;
    validate_cut_nodes(it, cut_nodes)?;
    Ok(CutResult::new(it, cut_nodes.to_vec(), Vec::new()))
}

/// Checks an interactive selection: in range, not a root, no repeats.
pub fn validate_cut_nodes(it: &InTree, cut_nodes: &[usize]) -> Result<(), CutError> {
    let mut seen = vec![false; it.len()];
    for &node in cut_nodes {
        if node >= it.len() {
            return Err(CutError::InvalidCutNode {
                node,
                reason: "index out of range",
            });
        }
        if it.parent[node] == node {
            return Err(CutError::InvalidCutNode {
                node,
                reason: "node is a root",
            });
        }
        if std::mem::replace(&mut seen[node], true) {
            return Err(CutError::InvalidCutNode {
                node,
                reason: "node listed twice",
            });
        }
    }
    Ok(())
}

/// Semi-supervised divisive cutting.
///
/// Edges are examined once, longest first (ties to the lower start node). An
/// edge inside a component carrying at least two kinds of label is cut
/// tentatively; the cut is kept only if both sides carry labels and the
/// larger per-side count of distinct labels drops below the component's.
/// Components left with mixed labels are reported as
/// [`CutWarning::ImpureResidue`]. Fewer than two labeled points is an
/// error; labels of a single kind simply leave the tree whole.
pub fn ss_divisive_cut(it: &InTree, labels: &LabelSet) -> Result<CutResult, CutError> {
    ensure_fresh(it)?;
    let n = it.len();
    if let Some((node, _)) = labels.iter().find(|&(i, _)| i >= n) {
        return Err(CutError::LabelOutOfRange { node, n });
    }
    if labels.len() < 2 {
        return Err(CutError::InsufficientLabels {
            labeled: labels.len(),
        });
    }

    let mut names: Vec<&str> = labels.iter().map(|(_, l)| l).collect();
    names.sort_unstable();
    names.dedup();
    let ids: HashMap<&str, usize> = names.iter().enumerate().map(|(k, &l)| (l, k)).collect();
    let mut label_of = vec![None; n];
    for (i, l) in labels.iter() {
        label_of[i] = Some(ids[l]);
    }

    let children = it.children();
    let mut cut = vec![false; n];
    let mut order: Vec<usize> = (0..n).filter(|&i| !it.is_root(i)).collect();
    order.sort_by(|&a, &b| {
        it.edge_length[b]
            .total_cmp(&it.edge_length[a])
            .then(a.cmp(&b))
    });

    let mut stack = Vec::new();
    let mut counts = |top: usize, cut: &[bool]| -> Vec<usize> {
        let mut c = vec![0usize; names.len()];
        stack.clear();
        stack.push(top);
        while let Some(v) = stack.pop() {
            if let Some(l) = label_of[v] {
                c[l] += 1;
            }
            stack.extend(children[v].iter().copied().filter(|&w| !cut[w]));
        }
        c
    };
    let kinds = |c: &[usize]| c.iter().filter(|&&x| x > 0).count();

    for &i in &order {
        let mut root = i;
        while !(it.parent[root] == root || cut[root]) {
            root = it.parent[root];
        }
        let whole = counts(root, &cut);
        let before = kinds(&whole);
        if before < 2 {
            continue;
        }
        let side_a = counts(i, &cut);
        let side_b: Vec<usize> = whole.iter().zip(&side_a).map(|(w, a)| w - a).collect();
        let (ka, kb) = (kinds(&side_a), kinds(&side_b));
        if ka >= 1 && kb >= 1 && ka.max(kb) < before {
            cut[i] = true;
        }
    }

    let cut_nodes: Vec<usize> = (0..n).filter(|&i| cut[i]).collect();
    let mut warnings = Vec::new();
    for r in (0..n).filter(|&r| it.parent[r] == r || cut[r]) {
        let c = counts(r, &cut);
        debug_assert!(r == it.parent[r] || c.iter().any(|&x| x > 0));
        if kinds(&c) >= 2 {
            warnings.push(CutWarning::ImpureResidue {
                root: r,
                labels: (0..names.len())
                    .filter(|&l| c[l] > 0)
                    .map(|l| names[l].to_string())
                    .collect(),
            });
        }
    }
    Ok(CutResult::new(it, cut_nodes, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point2;
    use crate::intree::build_it;

    fn fixture() -> InTree {
        let pts: Vec<Point2> = vec![(0.0, 0.0).into(), (1.0, 0.0).into(), (2.0, 0.0).into()];
        build_it(&pts, &[3.0, 1.0, 2.0])
    }

    fn chain() -> InTree {
        InTree {
            parent: vec![0, 0, 1, 2, 3, 4],
            edge_length: vec![0.0, 1.0, 1.0, 8.0, 1.0, 1.0],
            potential: vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
            cut_flags: vec![false; 6],
        }
    }

    fn labels(v: &[(usize, &str)]) -> LabelSet {
        v.iter().map(|&(i, l)| (i, l.to_string())).collect()
    }

    #[test]
    fn decision_graph_of_fixture() {
        let dg = decision_graph(&fixture());
        assert_eq!(
            dg.entries,
            vec![
                DecisionEntry { node: 0, p: 3.0, w: 1.0 },
                DecisionEntry { node: 2, p: 2.0, w: 1.0 },
            ]
        );
        let single = build_it(&[Point2::new(0.0, 0.0)], &[1.0]);
        assert!(decision_graph(&single).entries.is_empty());
    }

    #[test]
    fn gamma_on_fixture() {
        let g = gamma_scores(&decision_graph(&fixture()));
        assert_eq!(g, vec![(0, 0.0), (2, 0.5)]);
    }

    #[test]
    fn auto_cut_fixture() {
        let it = fixture();
        let r = dg_auto_cut(&it, 1).unwrap();
        assert!(r.cut_nodes.is_empty());
        assert_eq!(r.assignment.k, 1);
        let r = dg_auto_cut(&it, 2).unwrap();
        assert_eq!(r.cut_nodes, vec![2]);
        assert_eq!(r.assignment.cluster_id, vec![0, 0, 1]);
        let r = dg_auto_cut(&it, 3).unwrap();
        assert_eq!(r.assignment.cluster_id, vec![0, 1, 2]);
        assert_eq!(dg_auto_cut(&it, 4), Err(CutError::KTooLarge { k: 4, n: 3 }));
        assert!(matches!(dg_auto_cut(&it, 0), Err(CutError::KTooSmall { .. })));
    }

    #[test]
    fn manual_cut_fixture() {
        let it = fixture();
        assert_eq!(dg_manual_cut(&it, &[]).unwrap().assignment.k, 1);
        let r = dg_manual_cut(&it, &[2]).unwrap();
        assert_eq!(r.assignment.cluster_id, vec![0, 0, 1]);
        assert_eq!(
            dg_manual_cut(&it, &[1]),
            Err(CutError::InvalidCutNode { node: 1, reason: "node is a root" })
        );
        assert!(dg_manual_cut(&it, &[7]).is_err());
        assert!(dg_manual_cut(&it, &[2, 2]).is_err());
    }

    #[test]
    fn manual_equals_auto_on_top_gamma() {
        let it = fixture();
        let top = top_gamma_nodes(&decision_graph(&it), 1);
        assert_eq!(
            dg_manual_cut(&it, &top).unwrap(),
            dg_auto_cut(&it, 2).unwrap()
        );
    }

    #[test]
    fn rejects_already_cut_tree() {
        let it = fixture().with_cuts(&[2]);
        assert_eq!(dg_auto_cut(&it, 2), Err(CutError::AlreadyCut));
    }

    #[test]
    fn ss_chain_cuts_longest_edge() {
        let r = ss_divisive_cut(&chain(), &labels(&[(0, "A"), (5, "B")])).unwrap();
        assert_eq!(r.cut_nodes, vec![3]);
        assert_eq!(r.assignment.cluster_id, vec![0, 0, 0, 1, 1, 1]);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn ss_single_label_rejected() {
        assert_eq!(
            ss_divisive_cut(&chain(), &labels(&[(0, "A")])),
            Err(CutError::InsufficientLabels { labeled: 1 })
        );
        assert_eq!(
            ss_divisive_cut(&chain(), &LabelSet::new()),
            Err(CutError::InsufficientLabels { labeled: 0 })
        );
    }

    #[test]
    fn ss_same_label_twice_is_already_pure() {
        let r = ss_divisive_cut(&chain(), &labels(&[(0, "A"), (5, "A")])).unwrap();
        assert!(r.cut_nodes.is_empty());
        assert_eq!(r.assignment.k, 1);
    }

    #[test]
    fn ss_never_leaves_unlabeled_pieces() {
        // Labels at 2 and 3: the longest edge (node 3) separates them.
        // Afterwards nothing else is cut even though edges 4 and 5 exist.
        let r = ss_divisive_cut(&chain(), &labels(&[(2, "A"), (3, "B")])).unwrap();
        assert_eq!(r.cut_nodes, vec![3]);
        // Labels at 0 and 1 only: the long edge would create a label-free
        // side, so the short edge at node 1 is cut instead.
        let r = ss_divisive_cut(&chain(), &labels(&[(0, "A"), (1, "B")])).unwrap();
        assert_eq!(r.cut_nodes, vec![1]);
        assert_eq!(r.assignment.cluster_id, vec![0, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn ss_reports_impure_residue() {
        // A-B-A along a chain: each single cut leaves one side with both
        // kinds, so the strict-decrease rule never fires.
        let it = InTree {
            parent: vec![0, 0, 1],
            edge_length: vec![0.0, 1.0, 2.0],
            potential: vec![0.0, 1.0, 2.0],
            cut_flags: vec![false; 3],
        };
        let r = ss_divisive_cut(&it, &labels(&[(0, "A"), (1, "B"), (2, "A")])).unwrap();
        assert!(r.cut_nodes.is_empty());
        assert_eq!(
            r.warnings,
            vec![CutWarning::ImpureResidue {
                root: 0,
                labels: vec!["A".into(), "B".into()]
            }]
        );
        let r = ss_divisive_cut(&it, &labels(&[(0, "A"), (1, "B"), (2, "C")])).unwrap();
        assert_eq!(r.cut_nodes, vec![1, 2]);
        assert!(r.warnings.is_empty());
    }
}
