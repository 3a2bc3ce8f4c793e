//! Immutable simple undirected graphs and the set machinery built on them.

pub mod automorphism;
pub mod bitgraph;
pub mod cover;
pub mod generators;
pub mod io;
pub mod matching;

mod vertex_set;

pub use cover::{
    exact_coloring, fractional_vertex_cover_halfintegral, maximum_independent_set,
    minimum_vertex_cover, HalfIntegralCover,
};
pub use matching::maximum_matching;
pub use vertex_set::VertexSet;

use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("induced subgraph on an empty vertex set")]
    EmptyInducedSet,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Simple undirected graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges collapse; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut m2 = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            m2 += list.len();
        }
        Ok(Graph { adj, m: m2 / 2 })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn neighborhood(&self, v: usize) -> VertexSet {
        VertexSet::from_vertices(self.n(), self.adj[v].iter().copied())
    }

    /// Neighbourhood bitmasks; requires `n <= 64`.
    pub fn neighbor_masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64, "mask representation needs n <= 64");
        self.adj
            .iter()
            .map(|list| list.iter().fold(0u64, |m, &v| m | 1 << v))
            .collect()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn is_triangle_free(&self) -> bool {
        self.edges().all(|(u, v)| {
            let (a, b) = (&self.adj[u], &self.adj[v]);
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => return false,
                }
            }
            true
        })
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n());
        Graph::new(self.n(), self.edges().map(|(u, v)| (perm[u], perm[v])))
            .expect("a permutation preserves simplicity")
    }

    fn check_set(&self, s: &VertexSet) {
        assert_eq!(
            s.universe(),
            self.n(),
            "vertex set universe does not match the graph"
        );
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges().collect::<Vec<_>>())
    }
}

/// `S ∪ {v : N(v) ⊆ S}`, applied once.
pub fn closure(g: &Graph, s: &VertexSet) -> VertexSet {
    g.check_set(s);
    let mut out = s.clone();
    for v in 0..g.n() {
        if !s.contains(v) && g.neighbors(v).iter().all(|&w| s.contains(w)) {
            out.insert(v);
        }
    }
    out
}

/// `(cl(S) \ S) ∩ T`.
pub fn boundary(g: &Graph, s: &VertexSet, t: &VertexSet) -> VertexSet {
    closure(g, s).difference(s).intersection(t)
}

/// Mask form of [`closure`] for graphs with at most 64 vertices.
pub fn closure_mask(masks: &[u64], s: u64) -> u64 {
    let mut out = s;
    for (v, &nv) in masks.iter().enumerate() {
        if nv & !s == 0 {
            out |= 1 << v;
        }
    }
    out
}

/// Reindexed induced subgraph together with its vertex maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `to_parent[new] = old`.
    pub to_parent: Vec<usize>,
    /// `from_parent[old] = Some(new)` for kept vertices.
    pub from_parent: Vec<Option<usize>>,
}

pub fn induced_subgraph(g: &Graph, s: &VertexSet) -> Result<InducedSubgraph, GraphError> {
    g.check_set(s);
    if s.is_empty() {
        return Err(GraphError::EmptyInducedSet);
    }
    let to_parent = s.to_vec();
    let mut from_parent = vec![None; g.n()];
    for (i, &v) in to_parent.iter().enumerate() {
        from_parent[v] = Some(i);
    }
    let edges = g
        .edges()
        .filter_map(|(u, v)| Some((from_parent[u]?, from_parent[v]?)));
    let graph = Graph::new(to_parent.len(), edges).expect("induced edges are valid");
    Ok(InducedSubgraph {
        graph,
        to_parent,
        from_parent,
    })
}

/// Two-colouring of a graph; `side[v]` is `false` for the colour of the
/// lowest vertex of each component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub side: Vec<bool>,
}

impl Bipartition {
    pub fn parts(&self) -> (Vec<usize>, Vec<usize>) {
        let a = (0..self.side.len()).filter(|&v| !self.side[v]).collect();
        let b = (0..self.side.len()).filter(|&v| self.side[v]).collect();
        (a, b)
    }
}

pub fn is_bipartite(g: &Graph) -> Option<Bipartition> {
    bipartition_within(g, &g.all_vertices()).map(|side| Bipartition {
        side: side.into_iter().map(|s| s.unwrap_or(false)).collect(),
    })
}

/// BFS two-colouring of `G[set]`; entries outside `set` are `None`.
pub fn bipartition_within(g: &Graph, set: &VertexSet) -> Option<Vec<Option<bool>>> {
    g.check_set(set);
    let mut side: Vec<Option<bool>> = vec![None; g.n()];
    for s in set.iter() {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let sv = side[v].expect("queued vertices are coloured");
            for &w in g.neighbors(v) {
                if !set.contains(w) {
                    continue;
                }
                match side[w] {
                    None => {
                        side[w] = Some(!sv);
                        queue.push_back(w);
                    }
                    Some(sw) if sw == sv => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(side)
}

pub fn is_independent(g: &Graph, set: &VertexSet) -> bool {
    set.iter().all(|v| g.neighbors(v).iter().all(|&w| !set.contains(w)))
}

pub fn is_vertex_cover(g: &Graph, set: &VertexSet) -> bool {
    g.edges().all(|(u, v)| set.contains(u) || set.contains(v))
}

pub fn is_clique(g: &Graph, vertices: &[usize]) -> bool {
    vertices
        .iter()
        .enumerate()
        .all(|(i, &u)| vertices[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

/// Vertex `(i, j)` is `i * n2 + j`.
pub fn cartesian_product(g1: &Graph, g2: &Graph) -> Graph {
    let n2 = g2.n();
    let mut edges = Vec::with_capacity(g1.n() * g2.m() + g2.n() * g1.m());
    for i in 0..g1.n() {
        for (a, b) in g2.edges() {
            edges.push((i * n2 + a, i * n2 + b));
        }
    }
    for (a, b) in g1.edges() {
        for j in 0..n2 {
            edges.push((a * n2 + j, b * n2 + j));
        }
    }
    Graph::new(g1.n() * n2, edges).expect("product edges are valid")
}

/// Greedy vertex-disjoint triangles: for each vertex in ascending order, the
/// lexicographically first triangle it completes among unused vertices.
/// The result is maximal.
pub fn maximal_disjoint_triangles(g: &Graph) -> Vec<[usize; 3]> {
    let mut used = vec![false; g.n()];
    let mut out = Vec::new();
    'outer: for u in 0..g.n() {
        if used[u] {
            continue;
        }
        for &v in g.neighbors(u) {
            if v <= u || used[v] {
                continue;
            }
            for &w in g.neighbors(v) {
                if w > v && !used[w] && g.has_edge(u, w) {
                    used[u] = true;
                    used[v] = true;
                    used[w] = true;
                    out.push([u, v, w]);
                    continue 'outer;
                }
            }
        }
    }
    out
}
