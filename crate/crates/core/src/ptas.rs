//! Separator decomposition and the fixed-alphabet approximation schemes.
//!
//! Removing a vertex set `V0` splits the graph into small components that
//! are solved exactly. For storage, `scap_q(G) ∈ [Σ scap_q(G_i), Σ scap_q(G_i) + |V0|]`;
//! for index coding, `|V0| + Σ ind_q(G_i)` is an achievable rate.

use crate::exact::{
    ind_exact_chromatic, matching_cover, recovery_work_bits, scap_exact_mis, scap_exact_recovery_enum,
    ExactError, ExactResult, Method, ValueKind, DEFAULT_WORK_CAP_BITS, MATERIALIZE_CAP,
};
use crate::graph::{induced_subgraph, Graph, VertexSet};
use crate::rational::{self, LogValue, Rational};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use thiserror::Error;

/// Components up to this size are split by exhaustive separator search.
pub const EXHAUSTIVE_SEPARATOR_MAX: usize = 18;
/// BFS sources tried per split; larger components sample this many.
pub const SOURCE_BUDGET: usize = 64;
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PtasError {
    #[error("eps = {0} must lie in (0, 1]")]
    InvalidEps(Rational),
    #[error("component {index} with {size} vertices is beyond the exact solvers: {source}; try a smaller eps")]
    ComponentTooLarge {
        index: usize,
        size: usize,
        #[source]
        source: ExactError,
    },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `⌈4 / ε²⌉`.
pub fn default_cap(eps: &Rational) -> usize {
    let v = Rational::from_integer(4.into()) / (eps * eps);
    v.ceil().to_integer().to_usize().unwrap_or(usize::MAX).max(1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatorDecomposition {
    #[serde(with = "rational::serde_str")]
    pub eps: Rational,
    pub cap: usize,
    pub removed: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    /// `|V0| <= εn`, checked rather than guaranteed.
    pub within_eps: bool,
}

impl SeparatorDecomposition {
    /// No edge joins two components, every component fits the cap, and the
    /// pieces partition the vertex set.
    pub fn is_valid(&self, g: &Graph) -> bool {
        let mut owner = vec![usize::MAX; g.n()];
        for (i, c) in self.components.iter().enumerate() {
            if c.len() > self.cap {
                return false;
            }
            for &v in c {
                if v >= g.n() || owner[v] != usize::MAX {
                    return false;
                }
                owner[v] = i;
            }
        }
        for &v in &self.removed {
            if v >= g.n() || owner[v] != usize::MAX {
                return false;
            }
            owner[v] = usize::MAX - 1;
        }
        owner.iter().all(|&o| o != usize::MAX)
            && g.edges().all(|(u, v)| {
                let (a, b) = (owner[u], owner[v]);
                a == usize::MAX - 1 || b == usize::MAX - 1 || a == b
            })
    }
}

/// Connected components of `g` restricted to `alive`, each sorted.
fn components_within(g: &Graph, alive: &[bool], vertices: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.n()];
    let mut out = Vec::new();
    for &s in vertices {
        if !alive[s] || seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &w in g.neighbors(v) {
                if alive[w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Smallest set whose removal leaves pieces of at most `2|C|/3` vertices,
/// first in lexicographic order among sets of that size.
fn exhaustive_separator(g: &Graph, comp: &[usize]) -> Vec<usize> {
    let size = comp.len();
    let limit = 2 * size / 3;
    let mut alive = vec![false; g.n()];
    for k in 1..=size {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            for &v in comp {
                alive[v] = true;
            }
            for &i in &idx {
                alive[comp[i]] = false;
            }
            if components_within(g, &alive, comp).iter().all(|c| c.len() <= limit) {
                for &v in comp {
                    alive[v] = false;
                }
                return idx.iter().map(|&i| comp[i]).collect();
            }
            // Next k-combination of 0..size.
            let mut j = k;
            while j > 0 && idx[j - 1] == size - k + j - 1 {
                j -= 1;
            }
            if j == 0 {
                break;
            }
            idx[j - 1] += 1;
            for t in j..k {
                idx[t] = idx[t - 1] + 1;
            }
        }
    }
    comp.to_vec()
}

/// The BFS level whose removal minimises the larger side, ties broken by
/// level size; sources are all vertices or a seeded sample.
fn bfs_level_separator(g: &Graph, comp: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut sources = comp.to_vec();
    if sources.len() > SOURCE_BUDGET {
        sources.shuffle(rng);
        sources.truncate(SOURCE_BUDGET);
        sources.sort_unstable();
    }
    let mut inside = vec![false; g.n()];
    for &v in comp {
        inside[v] = true;
    }
    let mut best: Option<((usize, usize), Vec<usize>)> = None;
    let mut dist = vec![usize::MAX; g.n()];
    for &s in &sources {
        for &v in comp {
            dist[v] = usize::MAX;
        }
        let mut levels: Vec<Vec<usize>> = vec![vec![s]];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in g.neighbors(v) {
                if inside[w] && dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    if levels.len() <= dist[w] {
                        levels.push(Vec::new());
                    }
                    levels[dist[w]].push(w);
                    queue.push_back(w);
                }
            }
        }
        let mut below = 0;
        for level in &levels {
            let above = comp.len() - below - level.len();
            let score = (below.max(above), level.len());
            if best.as_ref().is_none_or(|(b, _)| score < *b) {
                let mut sep = level.clone();
                sep.sort_unstable();
                best = Some((score, sep));
            }
            below += level.len();
        }
    }
    best.map(|(_, sep)| sep).unwrap_or_default()
}

pub fn decompose(g: &Graph, eps: &Rational) -> Result<SeparatorDecomposition, PtasError> {
    validate_eps(eps)?;
    Ok(decompose_with(g, eps, default_cap(eps), DEFAULT_SEED))
}

fn validate_eps(eps: &Rational) -> Result<(), PtasError> {
    if *eps <= Rational::from_integer(0.into()) || *eps > Rational::one() {
        return Err(PtasError::InvalidEps(eps.clone()));
    }
    Ok(())
}

/// Splits every component larger than `cap` until all fit.
pub fn decompose_with(g: &Graph, eps: &Rational, cap: usize, seed: u64) -> SeparatorDecomposition {
    let cap = cap.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut alive = vec![true; g.n()];
    let all: Vec<usize> = (0..g.n()).collect();
    let mut pending: VecDeque<Vec<usize>> = components_within(g, &alive, &all).into();
    let mut removed = Vec::new();
    let mut components = Vec::new();
    while let Some(comp) = pending.pop_front() {
        if comp.len() <= cap {
            components.push(comp);
            continue;
        }
        let sep = if comp.len() <= EXHAUSTIVE_SEPARATOR_MAX {
            exhaustive_separator(g, &comp)
        } else {
            bfs_level_separator(g, &comp, &mut rng)
        };
        for &v in &sep {
            alive[v] = false;
        }
        removed.extend(sep);
        pending.extend(components_within(g, &alive, &comp));
    }
    removed.sort_unstable();
    components.sort();
    let within_eps = Rational::from_integer(removed.len().into()) <= eps * Rational::from_integer(g.n().into());
    let d = SeparatorDecomposition {
        eps: eps.clone(),
        cap,
        removed,
        components,
        within_eps,
    };
    assert!(d.is_valid(g), "decomposition contract violated");
    d
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentValue {
    pub vertices: Vec<usize>,
    pub method: Method,
    pub value: LogValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PtasReport {
    pub kind: ValueKind,
    pub q: u64,
    pub decomposition: SeparatorDecomposition,
    pub components: Vec<ComponentValue>,
    /// Storage: `Σ scap_q(G_i)`. Index coding: `|V0| + Σ ind_q(G_i)`.
    pub value: LogValue,
    /// Storage: `value + |V0|` bounds `scap_q(G)` from above. Index coding:
    /// the ratio bound `1 + (2|V0| + r log_q(max n_i ln q)) / (n/4)`, valid
    /// for planar inputs.
    pub band: f64,
}

/// Exact value of a small graph by the cheapest applicable method.
pub fn exact_component(g: &Graph, q: u64, kind: ValueKind) -> Result<ExactResult, ExactError> {
    if let Some(r) = matching_cover(g, q, kind) {
        return Ok(r);
    }
    let fits = (q as f64).powi(g.n() as i32) <= MATERIALIZE_CAP as f64;
    match kind {
        ValueKind::Scap if !fits && recovery_work_bits(g, q) <= DEFAULT_WORK_CAP_BITS => scap_exact_recovery_enum(g, q),
        ValueKind::Scap => scap_exact_mis(g, q),
        ValueKind::Ind => ind_exact_chromatic(g, q),
    }
}

fn solve(g: &Graph, q: u64, d: SeparatorDecomposition, kind: ValueKind) -> Result<PtasReport, PtasError> {
    let results: Vec<Result<ComponentValue, PtasError>> = d
        .components
        .par_iter()
        .enumerate()
        .map(|(index, comp)| {
            let sub = induced_subgraph(g, &VertexSet::from_vertices(g.n(), comp.iter().copied()))
                .expect("components are non-empty");
            let r = exact_component(&sub.graph, q, kind).map_err(|source| PtasError::ComponentTooLarge {
                index,
                size: comp.len(),
                source,
            })?;
            Ok(ComponentValue {
                vertices: comp.clone(),
                method: r.method,
                value: r.value,
            })
        })
        .collect();
    let components = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let n0 = d.removed.len();
    let mut arg: BigUint = components.iter().map(|c| &c.value.arg).product();
    if kind == ValueKind::Ind {
        arg *= BigUint::from(q).pow(n0 as u32);
    }
    let band = match kind {
        ValueKind::Scap => n0 as f64,
        ValueKind::Ind => {
            let n = g.n().max(1) as f64;
            let r = components.len() as f64;
            let max_ni = components.iter().map(|c| c.vertices.len()).max().unwrap_or(1) as f64;
            let lq = (q as f64).ln();
            let log_term = ((max_ni * lq).ln() / lq).max(0.0);
            1.0 + (2.0 * n0 as f64 + r * log_term) / (n / 4.0)
        }
    };
    Ok(PtasReport {
        kind,
        q,
        decomposition: d,
        components,
        value: LogValue::new(q, arg),
        band,
    })
}

pub fn ptas_scap(g: &Graph, q: u64, eps: &Rational) -> Result<PtasReport, PtasError> {
    let d = decompose(g, eps)?;
    solve(g, q, d, ValueKind::Scap)
}

pub fn ptas_ind(g: &Graph, q: u64, eps: &Rational) -> Result<PtasReport, PtasError> {
    let d = decompose(g, eps)?;
    solve(g, q, d, ValueKind::Ind)
}

/// Solves an explicit decomposition.
pub fn ptas_with(g: &Graph, q: u64, d: SeparatorDecomposition, kind: ValueKind) -> Result<PtasReport, PtasError> {
    solve(g, q, d, kind)
}

impl PtasReport {
    pub fn value_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Upper end of the storage band, `value + |V0|`, as a float.
    pub fn scap_upper_f64(&self) -> f64 {
        self.value.to_f64() + self.decomposition.removed.len() as f64
    }
}
