//! Exact storage capacity and index coding rate for small graphs.
//!
//! Words `x ∈ [q]^n` are indexed by `Σ x_i q^(n-1-i)`, so index order is
//! lexicographic order. Two words are confusable when they differ at some
//! vertex `i` but agree on `N(i)`. Storage codes are the independent sets of
//! this confusion graph and index codes are its colourings.

use crate::clique_packing::{verify_storage_code, StorageCode};
use crate::graph::bitgraph::BitGraph;
use crate::graph::matching::is_matching;
use crate::graph::{is_vertex_cover, maximum_matching, minimum_vertex_cover, Graph};
use crate::interval::ln;
use crate::rational::{from_usize, LogValue, Rational};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Default bound on `q^n` for constructing a confusion graph.
pub const DEFAULT_STATE_CAP: u64 = 1 << 24;
/// Largest confusion graph materialised for independent-set and colouring
/// search.
pub const MATERIALIZE_CAP: u64 = 1 << 14;
/// Default bound on `log2` of the recovery-enumeration work estimate.
pub const DEFAULT_WORK_CAP_BITS: f64 = 34.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("alphabet size q = {0} must be at least 2")]
    InvalidAlphabet(u64),
    #[error("q^n = {q}^{n} exceeds the state cap {cap}")]
    StateSpaceTooLarge { q: u64, n: usize, cap: u64 },
    #[error("recovery enumeration needs about 2^{bits:.1} steps, above the cap 2^{cap_bits}")]
    WorkCapExceeded { bits: f64, cap_bits: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    Scap,
    Ind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ConfusionMis,
    ConfusionChromatic,
    RecoveryEnum,
    /// Matching size equals vertex cover size, which pins both quantities.
    MatchingCover,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    Code(StorageCode),
    /// Colour of every word, by word index.
    Coloring { colors: Vec<usize> },
    Matching { matching: Vec<(usize, usize)>, cover: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactResult {
    pub kind: ValueKind,
    pub q: u64,
    /// `log_q` of an integer.
    pub value: LogValue,
    pub method: Method,
    pub witness: Witness,
}

impl ExactResult {
    /// Re-checks the witness against the definitions.
    pub fn verify(&self, g: &Graph) -> bool {
        match &self.witness {
            Witness::Code(code) => {
                code.q == self.q
                    && verify_storage_code(g, code)
                    && self.value == LogValue::new(self.q, BigUint::from(code.size()))
            }
            Witness::Coloring { colors } => {
                let Ok(cg) = ConfusionGraph::new(g, self.q, DEFAULT_STATE_CAP) else {
                    return false;
                };
                if colors.len() as u64 != cg.states() {
                    return false;
                }
                let used = colors.iter().max().map_or(0, |&c| c + 1);
                let proper = (0..colors.len()).all(|x| {
                    (x + 1..colors.len()).all(|y| colors[x] != colors[y] || !cg.confusable(x as u64, y as u64))
                });
                proper && self.value == LogValue::new(self.q, BigUint::from(used))
            }
            Witness::Matching { matching, cover } => {
                let cover_set = crate::graph::VertexSet::from_vertices(g.n(), cover.iter().copied());
                let exponent = match self.kind {
                    ValueKind::Scap => matching.len(),
                    ValueKind::Ind => g.n() - matching.len(),
                };
                is_matching(g, matching)
                    && is_vertex_cover(g, &cover_set)
                    && cover.len() == matching.len()
                    && self.value == LogValue::new(self.q, BigUint::from(self.q).pow(exponent as u32))
            }
        }
    }
}

fn check_alphabet(q: u64) -> Result<(), ExactError> {
    if q < 2 {
        return Err(ExactError::InvalidAlphabet(q));
    }
    Ok(())
}

/// `q^n` when it does not exceed `cap`.
fn state_count(q: u64, n: usize, cap: u64) -> Result<u64, ExactError> {
    let mut s: u64 = 1;
    for _ in 0..n {
        s = s.checked_mul(q).filter(|&s| s <= cap).ok_or(ExactError::StateSpaceTooLarge { q, n, cap })?;
    }
    Ok(s)
}

/// Word with index `x`, most significant symbol first.
pub fn decode_word(x: u64, q: u64, n: usize) -> Vec<u64> {
    let mut w = vec![0; n];
    let mut x = x;
    for i in (0..n).rev() {
        w[i] = x % q;
        x /= q;
    }
    w
}

pub fn encode_word(w: &[u64], q: u64) -> u64 {
    w.iter().fold(0, |acc, &s| acc * q + s)
}

/// Implicit confusion graph on all `q^n` words.
#[derive(Debug, Clone)]
pub struct ConfusionGraph {
    g: Graph,
    q: u64,
    states: u64,
}

impl ConfusionGraph {
    pub fn new(g: &Graph, q: u64, cap: u64) -> Result<Self, ExactError> {
        check_alphabet(q)?;
        let states = state_count(q, g.n(), cap)?;
        Ok(ConfusionGraph { g: g.clone(), q, states })
    }

    pub fn states(&self) -> u64 {
        self.states
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Some vertex `i` has `x_i != y_i` while `x` and `y` agree on `N(i)`.
    pub fn confusable(&self, x: u64, y: u64) -> bool {
        let (wx, wy) = (decode_word(x, self.q, self.g.n()), decode_word(y, self.q, self.g.n()));
        (0..self.g.n()).any(|i| wx[i] != wy[i] && self.g.neighbors(i).iter().all(|&j| wx[j] == wy[j]))
    }

    /// Dense adjacency; requires `q^n <= MATERIALIZE_CAP`.
    pub fn materialize(&self) -> Result<BitGraph, ExactError> {
        if self.states > MATERIALIZE_CAP {
            return Err(ExactError::StateSpaceTooLarge {
                q: self.q,
                n: self.g.n(),
                cap: MATERIALIZE_CAP,
            });
        }
        let (q, n, size) = (self.q, self.g.n(), self.states as usize);
        let words: Vec<Vec<u64>> = (0..size as u64).map(|x| decode_word(x, q, n)).collect();
        let mut bg = BitGraph::new(size);
        let row_words = size.div_ceil(64).max(1);
        for i in 0..n {
            // Words grouped by their restriction to N(i), split by x_i.
            let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
            for (x, w) in words.iter().enumerate() {
                let key = self.g.neighbors(i).iter().fold(0, |acc, &j| acc * q + w[j]);
                groups.entry(key).or_default().push(x);
            }
            for members in groups.values() {
                let mut class = vec![vec![0u64; row_words]; q as usize];
                for &x in members {
                    class[words[x][i] as usize][x / 64] |= 1 << (x % 64);
                }
                let all: Vec<u64> = (0..row_words).map(|t| class.iter().fold(0, |acc, c| acc | c[t])).collect();
                for &x in members {
                    let own = &class[words[x][i] as usize];
                    let others: Vec<u64> = all.iter().zip(own).map(|(a, o)| a & !o).collect();
                    bg.or_row(x, &others);
                }
            }
        }
        Ok(bg)
    }
}

pub fn confusion_graph(g: &Graph, q: u64) -> Result<ConfusionGraph, ExactError> {
    ConfusionGraph::new(g, q, DEFAULT_STATE_CAP)
}

fn words_to_code(g: &Graph, q: u64, indices: &[usize]) -> StorageCode {
    let words = indices.iter().map(|&x| decode_word(x as u64, q, g.n())).collect();
    StorageCode::from_codewords(g, q, words)
}

/// `scap_q` as `log_q` of the maximum independent set of the confusion
/// graph; the witness is the lexicographically smallest optimal code.
pub fn scap_exact_mis(g: &Graph, q: u64) -> Result<ExactResult, ExactError> {
    let bg = confusion_graph(g, q)?.materialize()?;
    let mis = bg.maximum_independent_set();
    let code = words_to_code(g, q, &mis);
    Ok(ExactResult {
        kind: ValueKind::Scap,
        q,
        value: LogValue::new(q, BigUint::from(mis.len())),
        method: Method::ConfusionMis,
        witness: Witness::Code(code),
    })
}

/// `ind_q` as `log_q` of the chromatic number of the confusion graph.
pub fn ind_exact_chromatic(g: &Graph, q: u64) -> Result<ExactResult, ExactError> {
    let bg = confusion_graph(g, q)?.materialize()?;
    let alpha = bg.maximum_independent_set().len();
    let (chi, colors) = bg.chromatic(Some(alpha));
    Ok(ExactResult {
        kind: ValueKind::Ind,
        q,
        value: LogValue::new(q, BigUint::from(chi)),
        method: Method::ConfusionChromatic,
        witness: Witness::Coloring { colors },
    })
}

/// `log2` of `Π_i q^(q^d(i) - 1) · q^n`, the number of function tuples with
/// `f_i(0) = 0` times the words checked per tuple.
pub fn recovery_work_bits(g: &Graph, q: u64) -> f64 {
    let lq = (q as f64).log2();
    let tables: f64 = (0..g.n()).map(|i| ((q as f64).powi(g.degree(i) as i32) - 1.0) * lq).sum();
    tables + g.n() as f64 * lq
}

struct RecoverySearch<'a> {
    q: usize,
    /// `(vertex, pattern)` pairs with a free value, in branching order.
    slots: Vec<(usize, usize)>,
    /// `allowed[i][p][a]`: words whose pattern on `N(i)` is not `p` or whose
    /// `x_i` is `a`.
    allowed: &'a [Vec<Vec<Vec<u64>>>],
    /// Words whose pattern on `N(i)` is `p`.
    with_pattern: &'a [Vec<Vec<u64>>],
    choice: Vec<usize>,
    best: usize,
    best_choice: Vec<usize>,
    best_mask: Vec<u64>,
}

fn popcount(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

impl RecoverySearch<'_> {
    fn run(&mut self, level: usize, mask: &[u64]) {
        let size = popcount(mask);
        if size <= self.best {
            return;
        }
        if level == self.slots.len() {
            self.best = size;
            self.best_choice = self.choice.clone();
            self.best_mask = mask.to_vec();
            return;
        }
        let (i, p) = self.slots[level];
        let live = mask.iter().zip(&self.with_pattern[i][p]).any(|(m, w)| m & w != 0);
        // A pattern absent from every remaining word does not constrain it.
        let values = if live { self.q } else { 1 };
        for a in 0..values {
            let next: Vec<u64> = mask.iter().zip(&self.allowed[i][p][a]).map(|(m, w)| m & w).collect();
            self.choice[level] = a;
            self.run(level + 1, &next);
        }
        self.choice[level] = 0;
    }
}

/// `scap_q` by enumerating recovery functions with `f_i(0) = 0` (the
/// largest code can be shifted to contain the zero word), pruning branches
/// whose surviving words cannot beat the best code found.
pub fn scap_exact_recovery_enum(g: &Graph, q: u64) -> Result<ExactResult, ExactError> {
    scap_exact_recovery_enum_with(g, q, DEFAULT_WORK_CAP_BITS)
}

pub fn scap_exact_recovery_enum_with(g: &Graph, q: u64, cap_bits: f64) -> Result<ExactResult, ExactError> {
    check_alphabet(q)?;
    let bits = recovery_work_bits(g, q);
    if bits > cap_bits + 1e-9 {
        return Err(ExactError::WorkCapExceeded { bits, cap_bits });
    }
    let n = g.n();
    let size = state_count(q, n, u64::MAX)? as usize;
    let row_words = size.div_ceil(64).max(1);
    let words: Vec<Vec<u64>> = (0..size as u64).map(|x| decode_word(x, q, n)).collect();
    let qs = q as usize;
    let mut allowed = Vec::with_capacity(n);
    let mut with_pattern = Vec::with_capacity(n);
    for i in 0..n {
        let patterns = qs.pow(g.degree(i) as u32);
        let mut al = vec![vec![vec![0u64; row_words]; qs]; patterns];
        let mut wp = vec![vec![0u64; row_words]; patterns];
        for (x, w) in words.iter().enumerate() {
            let p = g.neighbors(i).iter().fold(0usize, |acc, &j| acc * qs + w[j] as usize);
            wp[p][x / 64] |= 1 << (x % 64);
            for (pp, row) in al.iter_mut().enumerate() {
                for (a, bits) in row.iter_mut().enumerate() {
                    if pp != p || w[i] as usize == a {
                        bits[x / 64] |= 1 << (x % 64);
                    }
                }
            }
        }
        allowed.push(al);
        with_pattern.push(wp);
    }
    let mut mask = vec![0u64; row_words];
    for x in 0..size {
        mask[x / 64] |= 1 << (x % 64);
    }
    for al in &allowed {
        for (m, w) in mask.iter_mut().zip(&al[0][0]) {
            *m &= w;
        }
    }
    let slots: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (1..qs.pow(g.degree(i) as u32)).map(move |p| (i, p)))
        .collect();
    let mut search = RecoverySearch {
        q: qs,
        choice: vec![0; slots.len()],
        slots,
        allowed: &allowed,
        with_pattern: &with_pattern,
        best: 0,
        best_choice: Vec::new(),
        best_mask: mask.clone(),
    };
    search.run(0, &mask);
    let members: Vec<usize> = (0..size).filter(|&x| search.best_mask[x / 64] >> (x % 64) & 1 == 1).collect();
    let code = words_to_code(g, q, &members);
    Ok(ExactResult {
        kind: ValueKind::Scap,
        q,
        value: LogValue::new(q, BigUint::from(members.len())),
        method: Method::RecoveryEnum,
        witness: Witness::Code(code),
    })
}

/// When the maximum matching and a minimum vertex cover have the same size
/// `m`, `scap_q = m` and `ind_q = n - m` for every `q`: the matching code
/// repeats a symbol along each matched edge, and broadcasting each matched
/// difference plus every unmatched symbol serves as an index code.
pub fn matching_cover(g: &Graph, q: u64, kind: ValueKind) -> Option<ExactResult> {
    if q < 2 {
        return None;
    }
    let matching = maximum_matching(g);
    let cover = minimum_vertex_cover(g).to_vec();
    if matching.len() != cover.len() {
        return None;
    }
    let exponent = match kind {
        ValueKind::Scap => matching.len(),
        ValueKind::Ind => g.n() - matching.len(),
    };
    Some(ExactResult {
        kind,
        q,
        value: LogValue::new(q, BigUint::from(q).pow(exponent as u32)),
        method: Method::MatchingCover,
        witness: Witness::Matching { matching, cover },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SideCheck {
    Holds,
    Fails,
    Undecided,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SandwichReport {
    /// `n - ind_q <= scap_q`, i.e. `q^n <= α χ`.
    pub lower: bool,
    /// `scap_q <= n - ind_q + log_q(n ln q)`, i.e. `α χ <= n q^n ln q`.
    pub upper: SideCheck,
}

/// Checks both sides of the sandwich between `scap_q = log_q α` and
/// `ind_q = log_q χ`. The lower side is an integer comparison; the upper
/// side compares a rational with an enclosure of `ln q`, refined until it
/// separates.
pub fn sandwich_check(n: usize, q: u64, alpha: &BigUint, chi: &BigUint) -> SandwichReport {
    let qn = BigUint::from(q).pow(n as u32);
    let product = alpha * chi;
    let lower = qn <= product;
    let upper = if n == 0 {
        // log_q(0) is -∞; the side cannot hold.
        SideCheck::Fails
    } else {
        let ratio = Rational::new(product.into(), (qn * BigUint::from(n)).into());
        let lnq_arg = from_usize(q as usize);
        let mut bits = 64;
        loop {
            let lnq = ln(&lnq_arg, bits);
            if ratio <= lnq.lo {
                break SideCheck::Holds;
            }
            if ratio > lnq.hi {
                break SideCheck::Fails;
            }
            if bits >= 4096 {
                break SideCheck::Undecided;
            }
            bits *= 2;
        }
    };
    SandwichReport { lower, upper }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;

    fn arg(r: &ExactResult) -> BigUint {
        r.value.arg.clone()
    }

    #[test]
    fn confusion_graph_shapes() {
        let k1 = Graph::empty(1);
        let cg = confusion_graph(&k1, 2).unwrap().materialize().unwrap();
        assert_eq!(cg.edge_count(), 1);
        let k2 = complete(2);
        let cg = confusion_graph(&k2, 2).unwrap().materialize().unwrap();
        // 00-10, 00-01, 11-01, 11-10: a 4-cycle.
        assert_eq!(cg.edge_count(), 4);
        assert!(cg.has_edge(0b00, 0b10) && cg.has_edge(0b00, 0b01) && !cg.has_edge(0b00, 0b11));
        for (g, edges) in [(complete(3), 12), (cycle(4), 48), (cycle(5), 240), (path(3), 16)] {
            assert_eq!(confusion_graph(&g, 2).unwrap().materialize().unwrap().edge_count(), edges);
        }
    }

    #[test]
    fn materialized_matches_predicate() {
        for g in [cycle(4), path(3), star(3)] {
            let cg = confusion_graph(&g, 3).unwrap();
            let bg = cg.materialize().unwrap();
            for x in 0..cg.states() {
                for y in 0..cg.states() {
                    if x != y {
                        assert_eq!(bg.has_edge(x as usize, y as usize), cg.confusable(x, y));
                    }
                }
            }
        }
    }

    #[test]
    fn small_values() {
        let cases: [(Graph, u32, u32); 5] = [
            (complete(2), 2, 2),
            (complete(3), 4, 2),
            (cycle(4), 4, 4),
            (cycle(5), 5, 8),
            (path(3), 2, 4),
        ];
        for (g, alpha, chi) in cases {
            let s = scap_exact_mis(&g, 2).unwrap();
            let i = ind_exact_chromatic(&g, 2).unwrap();
            assert_eq!(arg(&s), BigUint::from(alpha));
            assert_eq!(arg(&i), BigUint::from(chi));
            assert!(s.verify(&g) && i.verify(&g));
        }
        let e = ind_exact_chromatic(&Graph::empty(3), 2).unwrap();
        assert_eq!(e.value.as_rational(), Some(from_usize(3)));
    }

    #[test]
    fn recovery_enumeration_agrees() {
        for g in [complete(2), complete(3), path(3), cycle(4), star(3), complete(4), cycle(5)] {
            let a = scap_exact_mis(&g, 2).unwrap();
            let b = scap_exact_recovery_enum(&g, 2).unwrap();
            assert_eq!(a.value, b.value, "{g:?}");
            assert!(b.verify(&g));
        }
        let k2 = scap_exact_recovery_enum(&complete(2), 2).unwrap();
        assert_eq!(arg(&k2), BigUint::from(2u32));
    }

    #[test]
    fn work_cap() {
        assert!(matches!(
            scap_exact_recovery_enum(&complete(6), 2),
            Err(ExactError::WorkCapExceeded { .. })
        ));
        assert!(matches!(
            confusion_graph(&Graph::empty(25), 2),
            Err(ExactError::StateSpaceTooLarge { .. })
        ));
        assert!(matches!(
            scap_exact_mis(&Graph::empty(15), 2),
            Err(ExactError::StateSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn matching_cover_shortcut() {
        let g = cycle(4);
        let s = matching_cover(&g, 3, ValueKind::Scap).unwrap();
        assert_eq!(s.value.as_rational(), Some(from_usize(2)));
        assert!(s.verify(&g));
        assert!(matching_cover(&cycle(5), 2, ValueKind::Scap).is_none());
        let i = matching_cover(&path(3), 2, ValueKind::Ind).unwrap();
        let exact = ind_exact_chromatic(&path(3), 2).unwrap();
        assert_eq!(i.value, exact.value);
    }

    #[test]
    fn sandwich() {
        // K1: α = 1, χ = 2; 2 <= 2 ln 2 fails.
        let r = sandwich_check(1, 2, &BigUint::from(1u32), &BigUint::from(2u32));
        assert!(r.lower);
        assert_eq!(r.upper, SideCheck::Fails);
        // C5: α = 5, χ = 8; 40 <= 160 ln 2 holds.
        let r = sandwich_check(5, 2, &BigUint::from(5u32), &BigUint::from(8u32));
        assert!(r.lower);
        assert_eq!(r.upper, SideCheck::Holds);
    }
}
