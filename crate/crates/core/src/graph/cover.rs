//! Vertex covers, independent sets and colourings of input graphs.

use super::bitgraph::BitGraph;
use super::matching::bipartite_matching;
use super::{Graph, VertexSet};
use crate::rational::{from_usize, Rational};
use num_bigint::BigInt;
use std::collections::VecDeque;

/// Optimal fractional vertex cover with weights in `{0, 1/2, 1}`, stored as
/// half-units.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfIntegralCover {
    pub halves: Vec<u8>,
}

impl HalfIntegralCover {
    pub fn weight(&self, v: usize) -> Rational {
        Rational::new(BigInt::from(self.halves[v]), BigInt::from(2))
    }

    pub fn weights(&self) -> Vec<Rational> {
        (0..self.halves.len()).map(|v| self.weight(v)).collect()
    }

    pub fn total(&self) -> Rational {
        let h: usize = self.halves.iter().map(|&h| h as usize).sum();
        from_usize(h) / from_usize(2)
    }

    fn with_halves(&self, h: u8) -> Vec<usize> {
        (0..self.halves.len()).filter(|&v| self.halves[v] == h).collect()
    }

    pub fn half_vertices(&self) -> Vec<usize> {
        self.with_halves(1)
    }

    pub fn one_vertices(&self) -> Vec<usize> {
        self.with_halves(2)
    }

    pub fn is_feasible(&self, g: &Graph) -> bool {
        g.edges().all(|(u, v)| self.halves[u] + self.halves[v] >= 2)
    }
}

/// Minimum vertex cover of the bipartite double cover via König's theorem;
/// `x_v` is half the number of copies of `v` in that cover.
pub fn fractional_vertex_cover_halfintegral(g: &Graph) -> HalfIntegralCover {
    let n = g.n();
    // Left copy v_L is adjacent to right copy w_R for every edge vw.
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    let (ml, mr) = bipartite_matching(&adj, n);
    // Alternating reachability from unmatched left vertices.
    let mut left_seen = vec![false; n];
    let mut right_seen = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&l| ml[l].is_none()).collect();
    for &l in &queue {
        left_seen[l] = true;
    }
    while let Some(l) = queue.pop_front() {
        for &r in &adj[l] {
            if right_seen[r] || ml[l] == Some(r) {
                continue;
            }
            right_seen[r] = true;
            if let Some(l2) = mr[r] {
                if !left_seen[l2] {
                    left_seen[l2] = true;
                    queue.push_back(l2);
                }
            }
        }
    }
    // Cover = (L \ Z) ∪ (R ∩ Z).
    let halves = (0..n)
        .map(|v| u8::from(!left_seen[v]) + u8::from(right_seen[v]))
        .collect();
    HalfIntegralCover { halves }
}

/// A proper `k`-colouring (colours `0..k`) or `None` when none exists.
pub fn exact_coloring(g: &Graph, k: usize) -> Option<Vec<usize>> {
    BitGraph::from_graph(g).k_coloring(k)
}

/// Lexicographically smallest maximum independent set.
pub fn maximum_independent_set(g: &Graph) -> VertexSet {
    VertexSet::from_vertices(g.n(), BitGraph::from_graph(g).maximum_independent_set())
}

/// Complement of [`maximum_independent_set`].
pub fn minimum_vertex_cover(g: &Graph) -> VertexSet {
    maximum_independent_set(g).complement()
}

#[cfg(test)]
mod tests {
    use super::super::generators::*;
    use super::super::{is_independent, is_vertex_cover};
    use super::*;
    use crate::rational::rat;

    #[test]
    fn half_integral_examples() {
        let c5 = fractional_vertex_cover_halfintegral(&cycle(5));
        assert_eq!(c5.halves, vec![1; 5]);
        assert_eq!(c5.total(), rat(5, 2));
        let edge = fractional_vertex_cover_halfintegral(&complete(2));
        assert_eq!(edge.total(), rat(1, 1));
        let star = fractional_vertex_cover_halfintegral(&star(4));
        assert_eq!(star.total(), rat(1, 1));
        assert_eq!(star.one_vertices(), vec![0]);
        let k4 = fractional_vertex_cover_halfintegral(&complete(4));
        assert_eq!(k4.total(), rat(2, 1));
        assert!(k4.is_feasible(&complete(4)));
    }

    #[test]
    fn coloring_examples() {
        let c5 = cycle(5);
        let col = exact_coloring(&c5, 3).unwrap();
        assert!(c5.edges().all(|(u, v)| col[u] != col[v]));
        assert!(exact_coloring(&c5, 2).is_none());
        assert!(exact_coloring(&complete(4), 3).is_none());
        assert_eq!(exact_coloring(&Graph::empty(0), 0), Some(vec![]));
    }

    #[test]
    fn covers_and_independent_sets() {
        let p = petersen();
        let mis = maximum_independent_set(&p);
        assert_eq!(mis.len(), 4);
        assert!(is_independent(&p, &mis));
        let vc = minimum_vertex_cover(&cycle(7));
        assert_eq!(vc.len(), 4);
        assert!(is_vertex_cover(&cycle(7), &vc));
    }
}
