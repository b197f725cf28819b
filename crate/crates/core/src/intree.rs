//! In-tree construction by nearest neighbor descent, root finding, and the
//! Delaunay-restricted descent baseline.
//!
//! Points are ordered by `(P_i, i)`. Every point links to the nearest point
//! that precedes it in that order, searching over *all* points rather than
//! graph neighbors; equal distances go to the smaller index. Only the first
//! point in the order has nowhere to go, so the result is a single tree.

use crate::geometry::{Point2, Triangulation};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Directed tree over the points: each node points at its parent, the root
/// at itself. A set `cut_flags[i]` severs the edge leaving `i`, making `i` the
/// root of its own sub-tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InTree {
    pub parent: Vec<usize>,
    pub edge_length: Vec<f64>,
    pub potential: Vec<f64>,
    pub cut_flags: Vec<bool>,
}

/// Cluster membership after following every node to its root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    pub cluster_id: Vec<usize>,
    pub k: usize,
    /// Root (exemplar) of each cluster, indexed by cluster id.
    pub roots: Vec<usize>,
}

/// `true` when `(pa, a)` comes strictly before `(pb, b)`.
#[inline]
pub fn precedes(pa: f64, a: usize, pb: f64, b: usize) -> bool {
    match pa.total_cmp(&pb) {
        Ordering::Less => true,
        Ordering::Equal => a < b,
        Ordering::Greater => false,
    }
}

impl InTree {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// A node is a root when it points at itself or its outgoing edge is cut.
    pub fn is_root(&self, i: usize) -> bool {
        self.parent[i] == i || self.cut_flags[i]
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_root(i)).collect()
    }

    pub fn has_cuts(&self) -> bool {
        self.cut_flags.iter().any(|&c| c)
    }

    /// Copy of this tree with exactly the edges leaving `nodes` severed.
    pub fn with_cuts(&self, nodes: &[usize]) -> InTree {
        let mut it = self.clone();
        it.cut_flags = vec![false; self.len()];
        for &i in nodes {
            it.cut_flags[i] = true;
        }
        it
    }

    /// Nodes with a severed edge, ascending.
    pub fn cut_nodes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.cut_flags[i]).collect()
    }

    /// Children lists of the uncut tree.
    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.len()];
        for (i, &p) in self.parent.iter().enumerate() {
            if p != i {
                ch[p].push(i);
            }
        }
        ch
    }
}

/// Builds the in-tree by nearest neighbor descent over all points.
///
/// # Panics
///
/// If `points` and `potential` differ in length.
pub fn build_it(points: &[Point2], potential: &[f64]) -> InTree {
    assert_eq!(points.len(), potential.len(), "one potential per point");
    let n = points.len();
    let parent: Vec<usize> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (pi, xi) = (potential[i], points[i]);
            let mut best = i;
            let mut best_d = f64::INFINITY;
            for (j, &xj) in points.iter().enumerate() {
                if !precedes(potential[j], j, pi, i) {
                    continue;
                }
                let d = xi.dist2(xj);
                // Ascending j, so strict `<` keeps the smallest index on ties.
                if d < best_d {
                    best_d = d;
                    best = j;
                }
            }
            best
        })
        .collect();
    finish(points, potential, parent)
}

fn finish(points: &[Point2], potential: &[f64], parent: Vec<usize>) -> InTree {
    let edge_length = parent
        .iter()
        .enumerate()
        .map(|(i, &p)| points[i].dist(points[p]))
        .collect();
    InTree {
        edge_length,
        potential: potential.to_vec(),
        cut_flags: vec![false; parent.len()],
        parent,
    }
}

/// Descent restricted to Delaunay neighbors: each node moves to the neighbor
/// with the smallest `(P_j, j)` among those preceding it, and stops at a local
/// minimum. This is the gradient-style baseline; every local minimum of the
/// potential on the Delaunay graph becomes a root.
///
/// Exact duplicates of a site count as neighbors of each other.
///
/// # Panics
///
/// If `potential` does not have one entry per input point of `tri`.
pub fn delaunay_descent(tri: &Triangulation, potential: &[f64]) -> InTree {
    let n = tri.num_inputs();
    assert_eq!(n, potential.len(), "one potential per input point");
    let mut members = vec![Vec::new(); tri.num_vertices()];
    for i in 0..n {
        members[tri.vertex_of(i)].push(i);
    }
    let points: Vec<Point2> = (0..n).map(|i| tri.points()[tri.vertex_of(i)]).collect();
    let parent = (0..n)
        .map(|i| {
            let v = tri.vertex_of(i);
            let candidates = tri
                .neighbors(v)
                .iter()
                .chain(std::iter::once(&v))
                .flat_map(|&w| members[w].iter().copied())
                .filter(|&j| j != i);
            let mut best = i;
            for j in candidates {
                if precedes(potential[j], j, potential[best], best) {
                    best = j;
                }
            }
            best
        })
        .collect();
    finish(&points, potential, parent)
}

/// Follows every node to its root and numbers clusters densely in order of
/// first appearance by node index.
pub fn assign_clusters(it: &InTree) -> ClusterAssignment {
    const UNSET: usize = usize::MAX;
    let n = it.len();
    let mut root_of = vec![UNSET; n];
    let mut path = Vec::new();
    for start in 0..n {
        let mut cur = start;
        let mut steps = 0;
        while root_of[cur] == UNSET && !it.is_root(cur) {
            path.push(cur);
            cur = it.parent[cur];
            steps += 1;
            assert!(steps <= n, "parent pointers contain a cycle");
        }
        let r = if root_of[cur] == UNSET { cur } else { root_of[cur] };
        root_of[cur] = r;
        for v in path.drain(..) {
            root_of[v] = r;
        }
    }
    let mut id_of_root = vec![UNSET; n];
    let mut roots = Vec::new();
    let cluster_id = root_of
        .iter()
        .map(|&r| {
            if id_of_root[r] == UNSET {
                id_of_root[r] = roots.len();
                roots.push(r);
            }
            id_of_root[r]
        })
        .collect();
    ClusterAssignment {
        cluster_id,
        k: roots.len(),
        roots,
    }
}

/// Checks that `parent` pointers are in range and acyclic. Returns the first
/// offending node otherwise.
pub fn find_cycle_or_out_of_range(parent: &[usize]) -> Option<usize> {
    let n = parent.len();
    if let Some(i) = parent.iter().position(|&p| p >= n) {
        return Some(i);
    }
    // 0 = unvisited, 1 = on current path, 2 = known to reach a root.
    let mut state = vec![0u8; n];
    let mut path = Vec::new();
    for start in 0..n {
        let mut cur = start;
        while state[cur] == 0 {
            state[cur] = 1;
            path.push(cur);
            if parent[cur] == cur {
                break;
            }
            cur = parent[cur];
        }
        if state[cur] == 1 && parent[cur] != cur {
            return Some(cur);
        }
        for v in path.drain(..) {
            state[v] = 2;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::delaunay;
    use proptest::prelude::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point2> {
        v.iter().map(|&p| p.into()).collect()
    }

    /// Direct transcription of the descent rule: collect the candidate set,
    /// take the minimum distance, then the minimum index.
    fn oracle_parents(points: &[Point2], p: &[f64]) -> Vec<usize> {
        (0..points.len())
            .map(|i| {
                let cand: Vec<usize> = (0..points.len())
                    .filter(|&j| p[j] < p[i] || (p[j] == p[i] && j < i))
                    .collect();
                if cand.is_empty() {
                    return i;
                }
                let dmin = cand
                    .iter()
                    .map(|&j| points[i].dist(points[j]))
                    .fold(f64::INFINITY, f64::min);
                *cand
                    .iter()
                    .filter(|&&j| points[i].dist(points[j]) == dmin)
                    .min()
                    .unwrap()
            })
            .collect()
    }

    #[test]
    fn three_on_a_line() {
        let it = build_it(&pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]), &[3.0, 1.0, 2.0]);
        assert_eq!(it.parent, vec![1, 1, 1]);
        assert_eq!(it.edge_length, vec![1.0, 0.0, 1.0]);
        assert_eq!(it.roots(), vec![1]);
    }

    #[test]
    fn duplicates_attach_by_index() {
        let it = build_it(&pts(&[(0.0, 0.0), (0.0, 0.0)]), &[1.0, 1.0]);
        assert_eq!(it.parent, vec![0, 0]);
        assert_eq!(it.edge_length[1], 0.0);
    }

    #[test]
    fn equidistant_goes_to_lower_index() {
        let it = build_it(&pts(&[(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0)]), &[5.0, 1.0, 1.0]);
        assert_eq!(it.parent[0], 1);
        assert_eq!(it.parent[2], 1);
    }

    #[test]
    fn baseline_on_single_triangle() {
        let tri = delaunay(&pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])).unwrap();
        let it = delaunay_descent(&tri, &[1.0, 2.0, 3.0]);
        assert_eq!(it.parent, vec![0, 0, 0]);
    }

    #[test]
    fn baseline_finds_local_minima() {
        // Two basins on a line of 3×3 grid columns; the right basin's minimum
        // is not adjacent to the global one.
        let mut p = Vec::new();
        let mut pot = Vec::new();
        for (cx, base) in [(0.0, 1.0), (10.0, 2.0)] {
            for dx in [-1.0, 0.0, 1.0] {
                for dy in [-1.0, 0.0, 1.0] {
                    p.push(Point2::new(cx + dx + 0.01 * dy, dy + 0.013 * dx));
                    pot.push(base + dx * dx + dy * dy);
                }
            }
        }
        let tri = delaunay(&p).unwrap();
        let base = delaunay_descent(&tri, &pot);
        let it = build_it(&p, &pot);
        assert_eq!(it.roots().len(), 1);
        assert!(base.roots().len() >= 2);
        for r in base.roots() {
            let v = tri.vertex_of(r);
            assert!(tri
                .neighbors(v)
                .iter()
                .all(|&w| !precedes(pot[w], w, pot[r], r)));
        }
    }

    #[test]
    fn assign_without_cuts() {
        let it = build_it(&pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]), &[3.0, 1.0, 2.0]);
        let a = assign_clusters(&it);
        assert_eq!(a.k, 1);
        assert_eq!(a.cluster_id, vec![0, 0, 0]);
        assert_eq!(a.roots, vec![1]);
    }

    #[test]
    fn assign_with_cut() {
        let it = build_it(&pts(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]), &[3.0, 1.0, 2.0]);
        let a = assign_clusters(&it.with_cuts(&[2]));
        assert_eq!(a.k, 2);
        assert_eq!(a.cluster_id, vec![0, 0, 1]);
        assert_eq!(a.roots, vec![1, 2]);
    }

    #[test]
    fn chain_cut_in_the_middle() {
        let it = InTree {
            parent: vec![0, 0, 1, 2, 3, 4],
            edge_length: vec![0.0, 1.0, 1.0, 8.0, 1.0, 1.0],
            potential: vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
            cut_flags: vec![false; 6],
        };
        let a = assign_clusters(&it.with_cuts(&[3]));
        assert_eq!(a.cluster_id, vec![0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn cycle_detection() {
        assert_eq!(find_cycle_or_out_of_range(&[0, 0, 1]), None);
        assert!(find_cycle_or_out_of_range(&[1, 2, 1]).is_some());
        assert!(find_cycle_or_out_of_range(&[0, 5]).is_some());
    }

    fn instance() -> impl Strategy<Value = (Vec<Point2>, Vec<f64>)> {
        (1usize..40).prop_flat_map(|n| {
            (
                prop::collection::vec((-5i32..5, -5i32..5), n),
                prop::collection::vec(0u8..6, n),
            )
                .prop_map(|(c, p)| {
                    (
                        c.into_iter().map(|(x, y)| Point2::new(x as f64, y as f64)).collect(),
                        p.into_iter().map(f64::from).collect(),
                    )
                })
        })
    }

    proptest! {
        #[test]
        fn matches_rule_and_has_one_root((points, p) in instance()) {
            let it = build_it(&points, &p);
            prop_assert_eq!(&it.parent, &oracle_parents(&points, &p));
            prop_assert_eq!(it.roots().len(), 1);
            let root = it.roots()[0];
            prop_assert!((0..p.len()).all(|j| j == root || precedes(p[root], root, p[j], j)));
            for i in 0..it.len() {
                let q = it.parent[i];
                prop_assert!(q == i || precedes(p[q], q, p[i], i));
            }
            prop_assert_eq!(find_cycle_or_out_of_range(&it.parent), None);
        }

        #[test]
        fn cuts_add_clusters((points, p) in instance(), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..10)) {
            let it = build_it(&points, &p);
            let mut nodes: Vec<usize> = picks.iter().map(|ix| ix.index(it.len())).filter(|&i| it.parent[i] != i).collect();
            nodes.sort_unstable();
            nodes.dedup();
            let a = assign_clusters(&it.with_cuts(&nodes));
            prop_assert_eq!(a.k, nodes.len() + 1);
            for i in 0..it.len() {
                if !it.is_root(i) && !nodes.contains(&i) {
                    prop_assert_eq!(a.cluster_id[i], a.cluster_id[it.parent[i]]);
                }
            }
        }
    }
}
