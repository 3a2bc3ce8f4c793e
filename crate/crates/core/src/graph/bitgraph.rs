//! Dense bitset graphs with exact maximum-clique and colouring search.
//!
//! Used directly on small input graphs and on materialized confusion graphs.

use super::Graph;

/// Adjacency matrix stored as one bitset row per vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct BitGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

type Bits = Vec<u64>;

fn test(bits: &[u64], v: usize) -> bool {
    bits[v / 64] >> (v % 64) & 1 == 1
}

fn set(bits: &mut [u64], v: usize) {
    bits[v / 64] |= 1 << (v % 64);
}

fn clear(bits: &mut [u64], v: usize) {
    bits[v / 64] &= !(1 << (v % 64));
}

fn count(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

fn first(bits: &[u64]) -> Option<usize> {
    bits.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

fn members(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            (w != 0).then(|| {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                i * 64 + b
            })
        })
    })
}

fn and_into(dst: &mut [u64], a: &[u64], b: &[u64]) {
    for ((d, x), y) in dst.iter_mut().zip(a).zip(b) {
        *d = x & y;
    }
}

impl BitGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitGraph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn from_graph(g: &Graph) -> Self {
        let mut b = BitGraph::new(g.n());
        for (u, v) in g.edges() {
            b.add_edge(u, v);
        }
        b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n);
        let w = self.words;
        set(&mut self.rows[u * w..(u + 1) * w], v);
        set(&mut self.rows[v * w..(v + 1) * w], u);
    }

    /// Adds edges from `v` to every member of `bits` other than `v` itself.
    /// Callers keep the relation symmetric.
    pub fn or_row(&mut self, v: usize, bits: &[u64]) {
        let w = self.words;
        for (d, b) in self.rows[v * w..(v + 1) * w].iter_mut().zip(bits) {
            *d |= b;
        }
        clear(&mut self.rows[v * w..(v + 1) * w], v);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        test(self.row(u), v)
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        members(self.row(v))
    }

    pub fn degree(&self, v: usize) -> usize {
        count(self.row(v))
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn complement(&self) -> BitGraph {
        let mut c = BitGraph::new(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    c.add_edge(u, v);
                }
            }
        }
        c
    }

    fn full(&self) -> Bits {
        let mut b = vec![0; self.words];
        for v in 0..self.n {
            set(&mut b, v);
        }
        b
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_independent(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| vs[i + 1..].iter().all(|&v| u != v && !self.has_edge(u, v)))
    }

    pub fn is_proper_coloring(&self, colors: &[usize]) -> bool {
        colors.len() == self.n
            && (0..self.n).all(|u| self.neighbors(u).all(|v| colors[u] != colors[v]))
    }

    /// Greedy sequential colouring of `cand`; returns vertices with their
    /// colour numbers (1-based), in non-decreasing colour order.
    fn color_sort(&self, cand: &[u64], out: &mut Vec<(usize, usize)>) {
        out.clear();
        let mut uncolored = cand.to_vec();
        let mut q = vec![0u64; self.words];
        let mut k = 0;
        while let Some(_) = first(&uncolored) {
            k += 1;
            q.copy_from_slice(&uncolored);
            while let Some(v) = first(&q) {
                clear(&mut q, v);
                clear(&mut uncolored, v);
                for (qw, rw) in q.iter_mut().zip(self.row(v)) {
                    *qw &= !rw;
                }
                out.push((v, k));
            }
        }
    }

    fn color_bound(&self, cand: &[u64]) -> usize {
        let mut order = Vec::new();
        self.color_sort(cand, &mut order);
        order.last().map_or(0, |&(_, k)| k)
    }

    fn expand(&self, clique: &mut Vec<usize>, cand: Bits, best: &mut Vec<usize>) {
        let mut order = Vec::new();
        self.color_sort(&cand, &mut order);
        let mut cand = cand;
        let mut next = vec![0u64; self.words];
        for &(v, k) in order.iter().rev() {
            if clique.len() + k <= best.len() {
                return;
            }
            clique.push(v);
            and_into(&mut next, &cand, self.row(v));
            if first(&next).is_none() {
                if clique.len() > best.len() {
                    *best = clique.clone();
                }
            } else {
                self.expand(clique, next.clone(), best);
            }
            clique.pop();
            clear(&mut cand, v);
        }
    }

    /// Size of a maximum clique (colour-bounded branch and bound).
    pub fn clique_number(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        let mut best = Vec::new();
        self.expand(&mut Vec::new(), self.full(), &mut best);
        best.len()
    }

    /// Lexicographically smallest clique of size `k` inside `cand`, found by
    /// include-first search in ascending vertex order.
    fn first_clique(&self, clique: &mut Vec<usize>, cand: Bits, k: usize) -> bool {
        if clique.len() == k {
            return true;
        }
        if clique.len() + count(&cand) < k || clique.len() + self.color_bound(&cand) < k {
            return false;
        }
        let mut cand = cand;
        let mut next = vec![0u64; self.words];
        while let Some(v) = first(&cand) {
            if clique.len() + count(&cand) < k {
                return false;
            }
            clique.push(v);
            and_into(&mut next, &cand, self.row(v));
            if self.first_clique(clique, next.clone(), k) {
                return true;
            }
            clique.pop();
            clear(&mut cand, v);
        }
        false
    }

    /// Lexicographically smallest maximum clique.
    pub fn maximum_clique(&self) -> Vec<usize> {
        let omega = self.clique_number();
        let mut clique = Vec::with_capacity(omega);
        let found = self.first_clique(&mut clique, self.full(), omega);
        debug_assert!(found);
        clique
    }

    /// Lexicographically smallest maximum independent set.
    pub fn maximum_independent_set(&self) -> Vec<usize> {
        self.complement().maximum_clique()
    }

    /// DSATUR greedy colouring; colours are `0..k`.
    pub fn greedy_coloring(&self) -> Vec<usize> {
        let n = self.n;
        let mut colors = vec![usize::MAX; n];
        let mut seen: Vec<Vec<bool>> = vec![Vec::new(); n];
        let mut sat = vec![0usize; n];
        for _ in 0..n {
            let v = (0..n)
                .filter(|&v| colors[v] == usize::MAX)
                .max_by(|&a, &b| {
                    sat[a]
                        .cmp(&sat[b])
                        .then(self.degree(a).cmp(&self.degree(b)))
                        .then(b.cmp(&a))
                })
                .expect("an uncoloured vertex remains");
            let c = (0..).find(|&c| !seen[v].get(c).copied().unwrap_or(false)).unwrap();
            colors[v] = c;
            for w in self.neighbors(v) {
                if seen[w].len() <= c {
                    seen[w].resize(c + 1, false);
                }
                if !seen[w][c] {
                    seen[w][c] = true;
                    sat[w] += 1;
                }
            }
        }
        colors
    }

    /// A proper `k`-colouring if one exists (exact DSATUR backtracking).
    /// Ties between colourings are broken deterministically.
    pub fn k_coloring(&self, k: usize) -> Option<Vec<usize>> {
        let n = self.n;
        if n == 0 {
            return Some(Vec::new());
        }
        if k == 0 {
            return None;
        }
        let mut state = Dsatur {
            g: self,
            k,
            colors: vec![usize::MAX; n],
            forbid: vec![0; n * k],
            sat: vec![0; n],
            used: 0,
        };
        // A maximum clique gets distinct colours up front.
        let clique = self.maximum_clique();
        if clique.len() > k {
            return None;
        }
        for (c, &v) in clique.iter().enumerate() {
            state.assign(v, c);
        }
        state.used = clique.len();
        if state.search(n - clique.len()) {
            Some(state.colors)
        } else {
            None
        }
    }

    /// Chromatic number with an optimal colouring. `alpha`, when known,
    /// strengthens the lower bound to `ceil(n / alpha)`.
    pub fn chromatic(&self, alpha: Option<usize>) -> (usize, Vec<usize>) {
        if self.n == 0 {
            return (0, Vec::new());
        }
        let greedy = self.greedy_coloring();
        let ub = greedy.iter().max().map_or(0, |&c| c + 1);
        let mut lb = self.clique_number();
        if let Some(a) = alpha {
            lb = lb.max(self.n.div_ceil(a.max(1)));
        }
        for k in lb..ub {
            if let Some(col) = self.k_coloring(k) {
                return (k, col);
            }
        }
        (ub, greedy)
    }
}

impl std::fmt::Debug for BitGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitGraph(n={}, m={})", self.n, self.edge_count())
    }
}

struct Dsatur<'a> {
    g: &'a BitGraph,
    k: usize,
    colors: Vec<usize>,
    forbid: Vec<u32>,
    sat: Vec<usize>,
    used: usize,
}

impl Dsatur<'_> {
    fn assign(&mut self, v: usize, c: usize) {
        self.colors[v] = c;
        for w in self.g.neighbors(v) {
            let f = &mut self.forbid[w * self.k + c];
            if *f == 0 {
                self.sat[w] += 1;
            }
            *f += 1;
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.colors[v] = usize::MAX;
        for w in self.g.neighbors(v) {
            let f = &mut self.forbid[w * self.k + c];
            *f -= 1;
            if *f == 0 {
                self.sat[w] -= 1;
            }
        }
    }

    fn search(&mut self, remaining: usize) -> bool {
        if remaining == 0 {
            return true;
        }
        let mut pick = usize::MAX;
        for v in 0..self.g.n {
            if self.colors[v] != usize::MAX {
                continue;
            }
            if self.sat[v] == self.k {
                return false;
            }
            if pick == usize::MAX
                || self.sat[v] > self.sat[pick]
                || (self.sat[v] == self.sat[pick] && self.g.degree(v) > self.g.degree(pick))
            {
                pick = v;
            }
        }
        let v = pick;
        let limit = (self.used + 1).min(self.k);
        for c in 0..limit {
            if self.forbid[v * self.k + c] != 0 {
                continue;
            }
            let prev_used = self.used;
            if c == self.used {
                self.used += 1;
            }
            self.assign(v, c);
            if self.search(remaining - 1) {
                return true;
            }
            self.unassign(v, c);
            self.used = prev_used;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::super::generators::*;
    use super::*;

    #[test]
    fn cliques_and_independent_sets() {
        let c5 = BitGraph::from_graph(&cycle(5));
        assert_eq!(c5.clique_number(), 2);
        assert_eq!(c5.maximum_clique(), vec![0, 1]);
        assert_eq!(c5.maximum_independent_set(), vec![0, 2]);
        let p = BitGraph::from_graph(&petersen());
        assert_eq!(p.maximum_independent_set().len(), 4);
        assert_eq!(BitGraph::from_graph(&complete(6)).clique_number(), 6);
    }

    #[test]
    fn chromatic_numbers() {
        assert_eq!(BitGraph::from_graph(&cycle(5)).chromatic(None).0, 3);
        assert_eq!(BitGraph::from_graph(&cycle(6)).chromatic(None).0, 2);
        assert_eq!(BitGraph::from_graph(&petersen()).chromatic(None).0, 3);
        assert_eq!(BitGraph::from_graph(&complete(5)).chromatic(None).0, 5);
        let (k, col) = BitGraph::from_graph(&grid(3, 3)).chromatic(Some(5));
        assert_eq!(k, 2);
        assert!(BitGraph::from_graph(&grid(3, 3)).is_proper_coloring(&col));
        assert!(BitGraph::from_graph(&complete(4)).k_coloring(3).is_none());
    }
}
