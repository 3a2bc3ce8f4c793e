//! Standard graph families and small-graph enumeration.

use super::Graph;
use rand::Rng;
use std::collections::BTreeSet;

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
}

/// `C_n` on `0..n` with edges `i ~ i+1 mod n`; `n >= 3`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycles need at least 3 vertices");
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid clique")
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::new(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).expect("valid")
}

/// `K_{1,k}` with centre 0.
pub fn star(k: usize) -> Graph {
    complete_bipartite(1, k)
}

/// `rows x cols` grid; cell `(r, c)` is vertex `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    Graph::new(rows * cols, edges).expect("valid grid")
}

/// Outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i ~ i+5`.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, i + 5));
    }
    Graph::new(10, edges).expect("valid Petersen graph")
}

pub fn hypercube(d: usize) -> Graph {
    let n = 1usize << d;
    Graph::new(
        n,
        (0..n).flat_map(|v| (0..d).filter(move |&b| v >> b & 1 == 0).map(move |b| (v, v | 1 << b))),
    )
    .expect("valid hypercube")
}

/// `C_n` plus the given chords.
pub fn cycle_with_chords(n: usize, chords: &[(usize, usize)]) -> Result<Graph, super::GraphError> {
    Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)).chain(chords.iter().copied()))
}

pub fn disjoint_union(graphs: &[Graph]) -> Graph {
    let mut edges = Vec::new();
    let mut offset = 0;
    for g in graphs {
        edges.extend(g.edges().map(|(u, v)| (u + offset, v + offset)));
        offset += g.n();
    }
    Graph::new(offset, edges).expect("valid union")
}

/// Keeps each edge independently with probability `p`.
pub fn random_subgraph<R: Rng>(g: &Graph, p: f64, rng: &mut R) -> Graph {
    let edges: Vec<_> = g.edges().filter(|_| rng.gen_bool(p)).collect();
    Graph::new(g.n(), edges).expect("subgraph of a valid graph")
}

pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    random_subgraph(&complete(n), p, rng)
}

/// Random bipartite graph with parts `0..a`, `a..a+b`.
pub fn random_bipartite<R: Rng>(a: usize, b: usize, p: f64, rng: &mut R) -> Graph {
    random_subgraph(&complete_bipartite(a, b), p, rng)
}

fn pair_index(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    heap_permute(n, &mut p, &mut out);
    out
}

fn heap_permute(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, p, out);
        if k % 2 == 0 {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, p, out);
}

/// One representative of every isomorphism class of graphs on `n <= 6`
/// vertices; the representative has the smallest edge mask in its class.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 6, "isomorphism-class enumeration is limited to n <= 6");
    let pairs = pair_index(n);
    let mut slot = vec![vec![0usize; n]; n];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        slot[u][v] = i;
        slot[v][u] = i;
    }
    let perms = permutations(n);
    let mut reps = BTreeSet::new();
    for mask in 0u32..1 << pairs.len() {
        let canonical = perms
            .iter()
            .map(|p| {
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(0u32, |m, (_, &(u, v))| m | 1 << slot[p[u]][p[v]])
            })
            .min()
            .unwrap_or(0);
        if canonical == mask {
            reps.insert(mask);
        }
    }
    reps.into_iter()
        .map(|mask| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e);
            Graph::new(n, edges).expect("valid")
        })
        .collect()
}

pub fn connected_graphs(n: usize) -> Vec<Graph> {
    all_graphs(n).into_iter().filter(Graph::is_connected).collect()
}

/// Canonical biadjacency of an `a × b` bipartite graph: columns as row
/// masks, minimised over row permutations after sorting the columns.
fn canonical_biadjacency(cols: &[u32], row_perms: &[Vec<usize>]) -> Vec<u32> {
    row_perms
        .iter()
        .map(|p| {
            let mut c: Vec<u32> = cols
                .iter()
                .map(|&m| (0..p.len()).filter(|&r| m >> r & 1 == 1).fold(0, |acc, r| acc | 1 << p[r]))
                .collect();
            c.sort_unstable();
            c
        })
        .min()
        .unwrap_or_default()
}

fn transpose(cols: &[u32], a: usize) -> Vec<u32> {
    (0..a)
        .map(|r| (0..cols.len()).filter(|&c| cols[c] >> r & 1 == 1).fold(0, |acc, c| acc | 1 << c))
        .collect()
}

/// One representative of every isomorphism class of connected bipartite
/// graphs on `n <= 8` vertices. The smaller side takes vertices `0..a`.
pub fn connected_bipartite_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 8, "bipartite enumeration is limited to n <= 8");
    if n <= 1 {
        return vec![Graph::empty(n)];
    }
    let mut out = Vec::new();
    for a in 1..=n / 2 {
        let b = n - a;
        let perms_a = permutations(a);
        let perms_b = if a == b { perms_a.clone() } else { Vec::new() };
        let mut reps = BTreeSet::new();
        let full = (1u32 << a) - 1;
        // Every column is non-empty in a connected graph.
        let mut cols = vec![1u32; b];
        loop {
            let canon = canonical_biadjacency(&cols, &perms_a);
            let canon = if a == b {
                canon.min(canonical_biadjacency(&transpose(&cols, a), &perms_b))
            } else {
                canon
            };
            if !reps.contains(&canon) {
                let g = biadjacency_graph(a, &canon);
                if g.is_connected() {
                    reps.insert(canon);
                }
            }
            // Odometer over non-empty non-decreasing columns.
            let mut i = b;
            while i > 0 && cols[i - 1] == full {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            cols[i - 1] += 1;
            for j in i..b {
                cols[j] = cols[i - 1];
            }
        }
        out.extend(reps.iter().map(|c| biadjacency_graph(a, c)));
    }
    out
}

fn biadjacency_graph(a: usize, cols: &[u32]) -> Graph {
    let edges = cols
        .iter()
        .enumerate()
        .flat_map(|(c, &m)| (0..a).filter(move |&r| m >> r & 1 == 1).map(move |r| (r, a + c)));
    Graph::new(a + cols.len(), edges).expect("valid")
}
