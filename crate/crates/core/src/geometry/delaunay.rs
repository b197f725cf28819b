//! Incremental Bowyer–Watson insertion.
//!
//! The mesh keeps one symbolic vertex at infinity instead of a finite
//! super-triangle: every hull edge carries a ghost triangle `(u, v, ∞)` whose
//! "circumcircle" is the open half-plane left of `u → v` plus the open segment
//! `uv`. This keeps every predicate exact, so the result is the unique
//! triangulation defined by [`incircle_perturbed`] no matter the insertion
//! order.

use super::hull::polygon_area;
use super::predicates::{incircle_perturbed, orient2d};
use super::{check_non_degenerate, dedup, Dedup, GeometryError, Point2};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::HashMap;

const GHOST: usize = usize::MAX;
const NONE: usize = usize::MAX;

/// A Delaunay triangulation of the distinct sites of a point set.
///
/// Vertex indices (`triangles`, `hull`, `neighbors`) refer to the distinct
/// sites in [`Triangulation::points`]; use [`Triangulation::vertex_of`] to map
/// an input index onto its site.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    points: Vec<Point2>,
    site_of: Vec<usize>,
    representative: Vec<usize>,
    triangles: Vec<[usize; 3]>,
    hull: Vec<usize>,
    neighbors: Vec<Vec<usize>>,
}

/// Plain-data view of a triangulation for debugging and golden files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangulationDoc {
    pub points: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub hull: Vec<usize>,
}

/// Delaunay triangulation of `points`.
///
/// Exact duplicates are collapsed onto their lowest index first. Cocircular
/// configurations are resolved by index-keyed symbolic perturbation, so the
/// output is unique and deterministic. Triangles are stored counter-clockwise,
/// rotated so the smallest vertex comes first, and sorted.
pub fn delaunay(points: &[Point2]) -> Result<Triangulation, GeometryError> {
    let d = dedup(points)?;
    check_non_degenerate(&d.sites)?;
    let mut mesh = Mesh::new(&d.sites);
    let order = hilbert_order(&d.sites);
    let seed = mesh.seed_triangle(&order);
    for &v in &order {
        if !seed.contains(&v) {
            mesh.insert(v);
        }
    }
    let triangles = mesh.finite_triangles();
    let hull = mesh.hull();
    Ok(Triangulation::assemble(d, triangles, hull))
}

impl Triangulation {
    pub(crate) fn assemble(d: Dedup, mut triangles: Vec<[usize; 3]>, hull: Vec<usize>) -> Self {
        for t in &mut triangles {
            let k = (0..3).min_by_key(|&k| t[k]).unwrap();
            t.rotate_left(k);
        }
        triangles.sort_unstable();
        let mut neighbors = vec![Vec::new(); d.sites.len()];
        for t in &triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                neighbors[a].push(b);
                neighbors[b].push(a);
            }
        }
        for n in &mut neighbors {
            n.sort_unstable();
            n.dedup();
        }
        Triangulation {
            points: d.sites,
            site_of: d.site_of,
            representative: d.representative,
            triangles,
            hull,
            neighbors,
        }
    }

    /// Distinct sites, ordered by lowest input index.
    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    /// Number of distinct sites.
    pub fn num_vertices(&self) -> usize {
        self.points.len()
    }

    /// Number of input points, duplicates included.
    pub fn num_inputs(&self) -> usize {
        self.site_of.len()
    }

    /// Site index of input point `i`.
    pub fn vertex_of(&self, i: usize) -> usize {
        self.site_of[i]
    }

    /// Lowest input index located at site `v`.
    pub fn representative(&self, v: usize) -> usize {
        self.representative[v]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    /// Hull vertices, counter-clockwise, starting at the smallest index.
    pub fn hull(&self) -> &[usize] {
        &self.hull
    }

    /// Sorted Delaunay neighbors of site `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn num_edges(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Area of triangle `t`.
    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        polygon_area([self.points[a], self.points[b], self.points[c]])
    }

    pub fn hull_area(&self) -> f64 {
        polygon_area(self.hull.iter().map(|&v| self.points[v]))
    }

    pub fn hull_polygon(&self) -> Vec<Point2> {
        self.hull.iter().map(|&v| self.points[v]).collect()
    }

    pub fn to_doc(&self) -> TriangulationDoc {
        TriangulationDoc {
            points: self.points.iter().map(|p| [p.x, p.y]).collect(),
            triangles: self.triangles.clone(),
            hull: self.hull.clone(),
        }
    }
}

#[derive(Debug, Clone)]
struct Tri {
    v: [usize; 3],
    /// `n[k]` is the triangle across the edge opposite `v[k]`.
    n: [usize; 3],
    alive: bool,
}

impl Tri {
    fn is_ghost(&self) -> bool {
        self.v[2] == GHOST
    }

    fn edge(&self, k: usize) -> (usize, usize) {
        (self.v[(k + 1) % 3], self.v[(k + 2) % 3])
    }
}

struct Mesh<'a> {
    sites: &'a [Point2],
    tris: Vec<Tri>,
    free: Vec<usize>,
    last: usize,
    mark: Vec<u32>,
    epoch: u32,
}

impl<'a> Mesh<'a> {
    fn new(sites: &'a [Point2]) -> Self {
        Mesh {
            sites,
            tris: Vec::with_capacity(2 * sites.len() + 8),
            free: Vec::new(),
            last: 0,
            mark: Vec::new(),
            epoch: 0,
        }
    }

    /// Builds the first triangle plus its three ghosts from the first two
    /// sites in `order` and the first site not collinear with them.
    fn seed_triangle(&mut self, order: &[usize]) -> [usize; 3] {
        let (a, b) = (order[0], order[1]);
        let c = *order[2..]
            .iter()
            .find(|&&c| orient2d(self.sites[a], self.sites[b], self.sites[c]) != 0.0)
            .expect("non-degenerate input checked by caller");
        let (a, b) = if orient2d(self.sites[a], self.sites[b], self.sites[c]) > 0.0 {
            (a, b)
        } else {
            (b, a)
        };
        let new = [
            self.alloc([a, b, c]),
            self.alloc([b, a, GHOST]),
            self.alloc([c, b, GHOST]),
            self.alloc([a, c, GHOST]),
        ];
        self.link(&new, &[]);
        self.last = new[0];
        [a, b, c]
    }

    fn alloc(&mut self, v: [usize; 3]) -> usize {
        let tri = Tri {
            v,
            n: [NONE; 3],
            alive: true,
        };
        if let Some(t) = self.free.pop() {
            self.tris[t] = tri;
            t
        } else {
            self.tris.push(tri);
            self.mark.push(0);
            self.tris.len() - 1
        }
    }

    /// Connects adjacent triangles among `new`, and each of `new` to the
    /// outside triangle listed for the directed edge it shares with it.
    fn link(&mut self, new: &[usize], outside: &[((usize, usize), usize)]) {
        let mut by_edge: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for &t in new {
            for k in 0..3 {
                by_edge.insert(self.tris[t].edge(k), (t, k));
            }
        }
        for &t in new {
            for k in 0..3 {
                let (u, v) = self.tris[t].edge(k);
                if let Some(&(o, ok)) = by_edge.get(&(v, u)) {
                    self.tris[t].n[k] = o;
                    self.tris[o].n[ok] = t;
                }
            }
        }
        for &(edge, out) in outside {
            let (t, k) = by_edge[&edge];
            self.tris[t].n[k] = out;
            let ot = &mut self.tris[out];
            let ok = (0..3)
                .find(|&j| ot.edge(j) == (edge.1, edge.0))
                .expect("outside triangle shares the edge");
            ot.n[ok] = t;
        }
    }

    fn in_conflict(&self, t: usize, p: usize) -> bool {
        let tri = &self.tris[t];
        let s = self.sites;
        if tri.is_ghost() {
            let (u, v) = (tri.v[0], tri.v[1]);
            let o = orient2d(s[u], s[v], s[p]);
            if o > 0.0 {
                return true;
            }
            o == 0.0 && strictly_between(s[u], s[v], s[p])
        } else {
            incircle_perturbed(s, tri.v, p) == Ordering::Greater
        }
    }

    /// Visibility walk from the last created triangle towards `p`. Returns a
    /// triangle in conflict with `p`.
    fn locate(&self, p: usize) -> usize {
        let s = self.sites;
        let mut t = self.last;
        if !self.tris[t].alive {
            t = self.tris.iter().position(|t| t.alive && !t.is_ghost()).unwrap();
        }
        if self.tris[t].is_ghost() {
            t = self.tris[t].n[2];
        }
        let mut rot = 0;
        for _ in 0..(4 * self.tris.len() + 16) {
            let tri = &self.tris[t];
            let mut moved = false;
            for j in 0..3 {
                let k = (j + rot) % 3;
                let (u, v) = tri.edge(k);
                if orient2d(s[u], s[v], s[p]) < 0.0 {
                    t = tri.n[k];
                    moved = true;
                    break;
                }
            }
            rot = (rot + 1) % 3;
            if !moved {
                return t;
            }
            if self.tris[t].is_ghost() {
                return t;
            }
        }
        // The walk is guaranteed to terminate on a Delaunay mesh; keep a
        // linear fallback anyway.
        (0..self.tris.len())
            .find(|&t| self.tris[t].alive && self.in_conflict(t, p))
            .expect("some triangle conflicts with a new site")
    }

    fn insert(&mut self, p: usize) {
        let start = self.locate(p);
        debug_assert!(self.in_conflict(start, p));

        self.epoch += 1;
        let (in_cavity, outside) = (self.epoch, u32::MAX - self.epoch);
        let mut cavity = vec![start];
        let mut boundary: Vec<((usize, usize), usize)> = Vec::new();
        self.mark[start] = in_cavity;
        let mut stack = vec![start];
        while let Some(t) = stack.pop() {
            for k in 0..3 {
                let o = self.tris[t].n[k];
                if self.mark[o] == in_cavity {
                    continue;
                }
                if self.mark[o] != outside && self.in_conflict(o, p) {
                    self.mark[o] = in_cavity;
                    cavity.push(o);
                    stack.push(o);
                } else {
                    self.mark[o] = outside;
                    boundary.push((self.tris[t].edge(k), o));
                }
            }
        }

        for &t in &cavity {
            self.tris[t].alive = false;
            self.free.push(t);
        }
        let mut new = Vec::with_capacity(boundary.len());
        for &((u, v), _) in &boundary {
            let verts = if u == GHOST {
                [v, p, GHOST]
            } else if v == GHOST {
                [p, u, GHOST]
            } else {
                [u, v, p]
            };
            new.push(self.alloc(verts));
        }
        // Fresh slots may reuse marks from this round.
        for &t in &new {
            self.mark[t] = 0;
        }
        self.link(&new, &boundary);
        self.last = *new
            .iter()
            .find(|&&t| !self.tris[t].is_ghost())
            .unwrap_or(&new[0]);
    }

    fn finite_triangles(&self) -> Vec<[usize; 3]> {
        self.tris
            .iter()
            .filter(|t| t.alive && !t.is_ghost())
            .map(|t| t.v)
            .collect()
    }

    fn hull(&self) -> Vec<usize> {
        // Ghost (u, v, ∞) sits outside hull edge v → u.
        let mut next = HashMap::new();
        for t in self.tris.iter().filter(|t| t.alive && t.is_ghost()) {
            next.insert(t.v[1], t.v[0]);
        }
        let start = *next.keys().min().unwrap();
        let mut hull = vec![start];
        let mut cur = next[&start];
        while cur != start {
            hull.push(cur);
            cur = next[&cur];
        }
        hull
    }
}

/// `p` is known collinear with `u, v`; true when it lies strictly inside the
/// segment.
fn strictly_between(u: Point2, v: Point2, p: Point2) -> bool {
    let within = |a: f64, b: f64, x: f64| (a < x && x < b) || (b < x && x < a);
    if u.x != v.x {
        within(u.x, v.x, p.x)
    } else {
        within(u.y, v.y, p.y)
    }
}

/// Insertion order along a Hilbert curve over the bounding box, which keeps
/// consecutive walks short.
fn hilbert_order(sites: &[Point2]) -> Vec<usize> {
    const BITS: u32 = 16;
    let side = (1u64 << BITS) - 1;
    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in sites {
        lo_x = lo_x.min(p.x);
        lo_y = lo_y.min(p.y);
        hi_x = hi_x.max(p.x);
        hi_y = hi_y.max(p.y);
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y).max(f64::MIN_POSITIVE);
    let cell = |v: f64, lo: f64| (((v - lo) / span) * side as f64).clamp(0.0, side as f64) as u64;
    let mut keyed: Vec<(u64, usize)> = sites
        .iter()
        .enumerate()
        .map(|(i, p)| (hilbert_d(BITS, cell(p.x, lo_x), cell(p.y, lo_y)), i))
        .collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, i)| i).collect()
}

fn hilbert_d(bits: u32, mut x: u64, mut y: u64) -> u64 {
    let n = 1u64 << bits;
    let mut d = 0;
    let mut s = n / 2;
    while s > 0 {
        let rx = u64::from(x & s > 0);
        let ry = u64::from(y & s > 0);
        d += s * s * ((3 * rx) ^ ry);
        if ry == 0 {
            if rx == 1 {
                x = n - 1 - x;
                y = n - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        s /= 2;
    }
    d
}
