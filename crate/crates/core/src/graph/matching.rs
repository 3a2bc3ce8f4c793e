//! Maximum-cardinality matchings.

use super::Graph;
use std::collections::VecDeque;

const NONE: usize = usize::MAX;

/// Maximum-cardinality matching of a general graph (Edmonds' blossom
/// contraction, `O(n^3)`). Edges are returned as `(u, v)` with `u < v`,
/// sorted.
pub fn maximum_matching(g: &Graph) -> Vec<(usize, usize)> {
    let mate = Blossom::new(g).run();
    let mut out: Vec<(usize, usize)> = (0..g.n())
        .filter(|&v| mate[v] != NONE && v < mate[v])
        .map(|v| (v, mate[v]))
        .collect();
    out.sort_unstable();
    out
}

struct Blossom<'a> {
    g: &'a Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'a> Blossom<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.n();
        Blossom {
            g,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn run(mut self) -> Vec<usize> {
        let n = self.g.n();
        // Greedy start; augmenting then only has to fix the remainder.
        for v in 0..n {
            if self.mate[v] == NONE {
                if let Some(&w) = self.g.neighbors(v).iter().find(|&&w| self.mate[w] == NONE) {
                    self.mate[v] = w;
                    self.mate[w] = v;
                }
            }
        }
        for root in 0..n {
            if self.mate[root] != NONE {
                continue;
            }
            let mut w = self.find_path(root);
            while w != NONE {
                let pv = self.parent[w];
                let ppv = self.mate[pv];
                self.mate[w] = pv;
                self.mate[pv] = w;
                w = ppv;
            }
        }
        self.mate
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.g.n()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn find_path(&mut self, root: usize) -> usize {
        let n = self.g.n();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for idx in 0..self.g.degree(v) {
                let to = self.g.neighbors(v)[idx];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return to;
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        NONE
    }
}

/// Maximum bipartite matching by augmenting paths; `adj[l]` lists right
/// vertices. Returns `match_left[l]` and `match_right[r]`.
pub fn bipartite_matching(adj: &[Vec<usize>], right: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let mut ml = vec![None; adj.len()];
    let mut mr = vec![None; right];
    for l in 0..adj.len() {
        let mut seen = vec![false; right];
        augment(adj, l, &mut seen, &mut ml, &mut mr);
    }
    (ml, mr)
}

fn augment(
    adj: &[Vec<usize>],
    l: usize,
    seen: &mut [bool],
    ml: &mut [Option<usize>],
    mr: &mut [Option<usize>],
) -> bool {
    for &r in &adj[l] {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        if mr[r].is_none_or(|l2| augment(adj, l2, seen, ml, mr)) {
            ml[l] = Some(r);
            mr[r] = Some(l);
            return true;
        }
    }
    false
}

pub fn is_matching(g: &Graph, edges: &[(usize, usize)]) -> bool {
    let mut hit = vec![false; g.n()];
    edges.iter().all(|&(u, v)| {
        let ok = g.has_edge(u, v) && !hit[u] && !hit[v];
        hit[u] = true;
        hit[v] = true;
        ok
    })
}

#[cfg(test)]
mod tests {
    use super::super::generators::*;
    use super::*;

    #[test]
    fn matching_examples() {
        assert_eq!(maximum_matching(&cycle(5)).len(), 2);
        assert_eq!(maximum_matching(&complete_bipartite(3, 3)).len(), 3);
        assert!(maximum_matching(&Graph::empty(4)).is_empty());
        let m = maximum_matching(&petersen());
        assert_eq!(m.len(), 5);
        assert!(is_matching(&petersen(), &m));
    }

    #[test]
    fn blossom_needed() {
        // Triangle 0-1-2 with pendant paths; greedy alone gets stuck.
        let g = Graph::new(6, [(0, 1), (1, 2), (2, 0), (0, 3), (2, 4), (4, 5)]).unwrap();
        assert_eq!(maximum_matching(&g).len(), 3);
    }
}
