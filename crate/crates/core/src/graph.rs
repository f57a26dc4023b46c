//! Undirected simple graphs on dense vertex indices.
//!
//! Vertices are `0..n`; edges are stored with the smaller endpoint first and
//! keep their insertion index for the lifetime of the value, so an edge index
//! is a stable coordinate for incidence vectors.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the vertex count accepted by odd-cut enumeration.
pub const DEFAULT_ODD_CUT_CAP: usize = 20;

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    labels: Option<Vec<String>>,
    // adjacency[v] = (neighbor, edge index), sorted by neighbor
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph, normalizing each pair so the smaller endpoint comes first.
    pub fn new(n: usize, edge_pairs: &[(usize, usize)]) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edge_pairs.len());
        let mut edges = Vec::with_capacity(edge_pairs.len());
        for &(u, v) in edge_pairs {
            if u >= n || v >= n {
                return Err(Error::EndpointOutOfRange { u, v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
            edges.push(e);
        }
        let mut adjacency = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            adjacency[u].push((v, i));
            adjacency[v].push((u, i));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self {
            n,
            edges,
            labels: None,
            adjacency,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n, "one label per vertex");
        self.labels = Some(labels);
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, i: usize) -> (usize, usize) {
        self.edges[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    /// `(neighbor, edge index)` pairs, sorted by neighbor.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().map(|&(w, _)| w)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Returns `Some(r)` when every vertex has degree `r`.
    pub fn regular_degree(&self) -> Option<usize> {
        let r = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|v| self.degree(v) == r).then_some(r)
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        if u >= self.n || v >= self.n {
            return None;
        }
        self.adjacency[u]
            .binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|pos| self.adjacency[u][pos].1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// The spanning subgraph keeping only the edges whose index is listed.
    /// Edge order follows `keep`.
    pub fn spanning_subgraph(&self, keep: &[usize]) -> Graph {
        let pairs: Vec<_> = keep.iter().map(|&i| self.edges[i]).collect();
        let g = Graph::new(self.n, &pairs).expect("subgraph of a simple graph is simple");
        match &self.labels {
            Some(l) => g.with_labels(l.clone()),
            None => g,
        }
    }

    /// Edges with one endpoint in `x` and the other outside it.
    pub fn cut_edges(&self, in_x: &[bool]) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| in_x[u] != in_x[v])
            .map(|(i, _)| i)
            .collect()
    }

    /// Edges joining `x` to `y` (vertex sets given as membership masks).
    pub fn edges_between(&self, in_x: &[bool], in_y: &[bool]) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| (in_x[u] && in_y[v]) || (in_x[v] && in_y[u]))
            .map(|(i, _)| i)
            .collect()
    }

    /// Dense vertex-edge incidence matrix (rows are vertices).
    pub fn incidence_matrix(&self) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; self.edges.len()]; self.n];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            m[u][i] = 1;
            m[v][i] = 1;
        }
        m
    }
}

/// A proper 2-coloring of a graph's vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
}

impl Bipartition {
    pub fn membership(&self, n: usize) -> Vec<bool> {
        let mut in_a = vec![false; n];
        for &a in &self.side_a {
            in_a[a] = true;
        }
        in_a
    }

    pub fn is_balanced(&self) -> bool {
        self.side_a.len() == self.side_b.len()
    }

    /// Same partition with the sides exchanged.
    pub fn swapped(&self) -> Bipartition {
        Bipartition {
            side_a: self.side_b.clone(),
            side_b: self.side_a.clone(),
        }
    }

    /// Checks that the sides partition `0..n` and no edge is monochromatic.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let n = g.vertex_count();
        let mut seen = vec![0u8; n];
        for &v in self.side_a.iter().chain(&self.side_b) {
            if v >= n {
                return false;
            }
            seen[v] += 1;
        }
        if seen.iter().any(|&c| c != 1) {
            return false;
        }
        let in_a = self.membership(n);
        g.edges().iter().all(|&(u, v)| in_a[u] != in_a[v])
    }
}

/// Breadth-first 2-coloring. The lowest-index vertex of every component goes
/// to side A. Returns `None` when the graph has an odd cycle.
pub fn bipartition(g: &Graph) -> Option<Bipartition> {
    let n = g.vertex_count();
    let mut color: Vec<Option<bool>> = vec![None; n];
    let mut queue = VecDeque::new();
    for start in 0..n {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            let cv = color[v].unwrap();
            for w in g.neighbors(v) {
                match color[w] {
                    None => {
                        color[w] = Some(!cv);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == cv => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let mut side_a = Vec::new();
    let mut side_b = Vec::new();
    for (v, c) in color.into_iter().enumerate() {
        if c == Some(false) {
            side_a.push(v);
        } else {
            side_b.push(v);
        }
    }
    Some(Bipartition { side_a, side_b })
}

/// An edge cut `∂(X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeCut {
    pub x_side: Vec<usize>,
    pub edge_indices: Vec<usize>,
}

/// All non-trivial odd cuts: one per unordered `{X, V\X}` with `|X|` odd and
/// `3 <= |X| <= n-3`, represented by the side containing vertex 0.
pub fn enumerate_nontrivial_odd_cuts(g: &Graph, cap: usize) -> Result<Vec<EdgeCut>> {
    let mut cuts = Vec::new();
    for_each_nontrivial_odd_cut(g, cap, |mask| {
        let x_side = mask_to_vertices(mask, g.vertex_count());
        let edge_indices = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| ((mask >> u) & 1) != ((mask >> v) & 1))
            .map(|(i, _)| i)
            .collect();
        cuts.push(EdgeCut {
            x_side,
            edge_indices,
        });
    })?;
    Ok(cuts)
}

/// Calls `visit` with the vertex bitmask of every canonical non-trivial odd cut
/// side, in increasing mask order.
pub(crate) fn for_each_nontrivial_odd_cut(
    g: &Graph,
    cap: usize,
    mut visit: impl FnMut(u64),
) -> Result<()> {
    let n = g.vertex_count();
    if n > cap || n > 63 {
        return Err(Error::SizeCapExceeded {
            what: "odd-cut enumeration vertex count",
            size: n,
            cap: cap.min(63),
        });
    }
    if n % 2 == 1 {
        return Err(Error::OddOrder(n));
    }
    if n < 6 {
        return Ok(());
    }
    // Vertex 0 is always in X; enumerate the rest of X over vertices 1..n.
    for rest in 0u64..(1u64 << (n - 1)) {
        let size = rest.count_ones() as usize + 1;
        if size % 2 == 1 && size >= 3 && size + 3 <= n {
            visit((rest << 1) | 1);
        }
    }
    Ok(())
}

pub(crate) fn mask_to_vertices(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| (mask >> v) & 1 == 1).collect()
}

/// The Cartesian product `g □ h` together with the vertex map.
#[derive(Debug, Clone)]
pub struct ProductGraph {
    pub graph: Graph,
    /// `vertex_map[i] = (g-vertex, h-vertex)`; index `i = h_vertex * |V(g)| + g_vertex`.
    pub vertex_map: Vec<(usize, usize)>,
}

/// Builds `g □ h`. G-layer edges come first, grouped by h-vertex; then H-layer
/// edges grouped by h-edge. The incidence matrix is then `(I_p ⊗ M_g, M_h ⊗ I_n)`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> ProductGraph {
    let n = g.vertex_count();
    let p = h.vertex_count();
    let idx = |u: usize, v: usize| v * n + u;
    let mut pairs = Vec::with_capacity(p * g.edge_count() + n * h.edge_count());
    for v in 0..p {
        for &(u1, u2) in g.edges() {
            pairs.push((idx(u1, v), idx(u2, v)));
        }
    }
    for &(v1, v2) in h.edges() {
        for u in 0..n {
            pairs.push((idx(u, v1), idx(u, v2)));
        }
    }
    let graph = Graph::new(n * p, &pairs).expect("product of simple graphs is simple");
    let vertex_map = (0..p).flat_map(|v| (0..n).map(move |u| (u, v))).collect();
    ProductGraph { graph, vertex_map }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> Graph {
        Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn two_triangles() -> Graph {
        Graph::new(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn build_normalizes_and_rejects() {
        let g = Graph::new(2, &[(1, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(c4().edge(3), (0, 3));
        assert!(matches!(
            Graph::new(4, &[(0, 1), (0, 1)]),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            Graph::new(4, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(Graph::new(3, &[(2, 2)]), Err(Error::SelfLoop(2))));
        assert!(matches!(
            Graph::new(3, &[(0, 3)]),
            Err(Error::EndpointOutOfRange { .. })
        ));
    }

    #[test]
    fn bipartition_examples() {
        let b = bipartition(&c4()).unwrap();
        assert_eq!(b.side_a, vec![0, 2]);
        assert_eq!(b.side_b, vec![1, 3]);
        let k4 = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(bipartition(&k4).is_none());
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        let b = bipartition(&k2).unwrap();
        assert_eq!((b.side_a, b.side_b), (vec![0], vec![1]));
    }

    #[test]
    fn bipartition_each_component_starts_in_a() {
        // components {0,3} and {1,2}
        let g = Graph::new(4, &[(0, 3), (2, 1)]).unwrap();
        let b = bipartition(&g).unwrap();
        assert_eq!(b.side_a, vec![0, 1]);
        assert_eq!(b.side_b, vec![2, 3]);
    }

    #[test]
    fn odd_cuts_small_cases() {
        assert!(enumerate_nontrivial_odd_cuts(&c4(), 20).unwrap().is_empty());

        let cuts = enumerate_nontrivial_odd_cuts(&two_triangles(), 20).unwrap();
        let bridge = two_triangles().edge_index(2, 3).unwrap();
        let tri = cuts.iter().find(|c| c.x_side == vec![0, 1, 2]).unwrap();
        assert_eq!(tri.edge_indices, vec![bridge]);

        let c6 = Graph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let cuts = enumerate_nontrivial_odd_cuts(&c6, 20).unwrap();
        assert_eq!(cuts.len(), 10);
        assert!(cuts
            .iter()
            .all(|c| c.x_side.contains(&0) && c.x_side.len() == 3));
    }

    #[test]
    fn odd_cut_cap_and_parity() {
        let g = Graph::new(22, &[]).unwrap();
        assert!(matches!(
            enumerate_nontrivial_odd_cuts(&g, DEFAULT_ODD_CUT_CAP),
            Err(Error::SizeCapExceeded { .. })
        ));
        let g = Graph::new(5, &[]).unwrap();
        assert!(matches!(
            enumerate_nontrivial_odd_cuts(&g, 20),
            Err(Error::OddOrder(5))
        ));
    }

    #[test]
    fn product_examples() {
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        let sq = cartesian_product(&k2, &k2).graph;
        assert_eq!(sq.vertex_count(), 4);
        assert_eq!(sq.edge_count(), 4);
        assert_eq!(sq.regular_degree(), Some(2));
        assert!(sq.is_connected());

        let q3 = cartesian_product(&c4(), &k2).graph;
        assert_eq!((q3.vertex_count(), q3.edge_count()), (8, 12));
        assert_eq!(q3.regular_degree(), Some(3));

        let p4 = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let ladder = cartesian_product(&p4, &k2).graph;
        assert_eq!((ladder.vertex_count(), ladder.edge_count()), (8, 10));
        assert!(bipartition(&ladder).is_some());
    }

    #[test]
    fn product_vertex_map_matches_indexing() {
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        let prod = cartesian_product(&p3, &k2);
        for (i, &(u, v)) in prod.vertex_map.iter().enumerate() {
            assert_eq!(i, v * 3 + u);
        }
        // first edge of layer h=1 is g-edge (0,1) lifted
        assert_eq!(prod.graph.edge(2), (3, 4));
        // first H-layer edge joins (0,0) and (0,1)
        assert_eq!(prod.graph.edge(4), (0, 3));
    }
}
