//! Vertex partitions `V = X ∪ Y` with `G[X]`, `G[Y]` bipartite and
//! independent boundary sets, which certify `scap(G) <= n/2` through a
//! two-gadget cover, and their construction on cycles with chords.

use super::gadget::{make_gadget, verify_gadget_cover, CoverCertificate, CoverViolation, GadgetCover};
use crate::graph::{bipartition_within, Graph, VertexSet};
use crate::rational::{self, from_usize, Rational};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest graph searched by [`find_partition`].
pub const FIND_PARTITION_MAX_N: usize = 24;

/// Hamiltonian cycles examined before [`chorded_cycle_certificate`] gives up.
pub const HAMILTONIAN_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCertificate {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub s_x: Vec<usize>,
    pub s_y: Vec<usize>,
    /// Bipartition `(A, B)` of `G[X]`.
    pub x_parts: (Vec<usize>, Vec<usize>),
    pub y_parts: (Vec<usize>, Vec<usize>),
    #[serde(with = "rational::serde_str")]
    pub bound: Rational,
    pub cover: CoverCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PartitionViolation {
    VertexOutOfRange { vertex: usize, n: usize },
    NotBipartite { side: String },
    BoundaryNotIndependent { side: String, edge: (usize, usize) },
    Cover { violation: CoverViolation },
}

impl std::fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PartitionViolation::VertexOutOfRange { vertex, n } => {
                write!(f, "vertex {vertex} out of range for {n} vertices")
            }
            PartitionViolation::NotBipartite { side } => write!(f, "G[{side}] is not bipartite"),
            PartitionViolation::BoundaryNotIndependent { side, edge } => {
                write!(f, "S_{side} contains the edge {}-{}", edge.0, edge.1)
            }
            PartitionViolation::Cover { violation } => write!(f, "derived cover fails: {violation}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("partition search needs n <= {limit}, got {n}")]
    SearchSpaceTooLarge { n: usize, limit: usize },
    #[error("no partition certificate exists")]
    NotFound,
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

fn parts(side: &[Option<bool>], set: &VertexSet) -> (VertexSet, VertexSet) {
    let n = set.universe();
    let a = VertexSet::from_vertices(n, set.iter().filter(|&v| side[v] == Some(false)));
    let b = VertexSet::from_vertices(n, set.iter().filter(|&v| side[v] == Some(true)));
    (a, b)
}

fn first_inner_edge(g: &Graph, s: &VertexSet) -> Option<(usize, usize)> {
    g.edges().find(|&(u, v)| s.contains(u) && s.contains(v))
}

/// Checks the partition conditions for `X` and, on success, returns the
/// two-gadget cover with bound `n/2`: the gadget of `G[X]` has its outside
/// coloured 1 and inside 0, the gadget of `G[Y]` the reverse.
pub fn verify_partition(g: &Graph, x: &[usize]) -> Result<PartitionCertificate, PartitionViolation> {
    let n = g.n();
    if let Some(&vertex) = x.iter().find(|&&v| v >= n) {
        return Err(PartitionViolation::VertexOutOfRange { vertex, n });
    }
    let xs = VertexSet::from_vertices(n, x.iter().copied());
    let ys = xs.complement();
    let touching = |from: &VertexSet, to: &VertexSet| {
        VertexSet::from_vertices(n, from.iter().filter(|&v| g.neighbors(v).iter().any(|&w| to.contains(w))))
    };
    let (s_x, s_y) = (touching(&xs, &ys), touching(&ys, &xs));
    let side_x = bipartition_within(g, &xs).ok_or(PartitionViolation::NotBipartite { side: "X".into() })?;
    let side_y = bipartition_within(g, &ys).ok_or(PartitionViolation::NotBipartite { side: "Y".into() })?;
    if let Some(edge) = first_inner_edge(g, &s_x) {
        return Err(PartitionViolation::BoundaryNotIndependent { side: "X".into(), edge });
    }
    if let Some(edge) = first_inner_edge(g, &s_y) {
        return Err(PartitionViolation::BoundaryNotIndependent { side: "Y".into(), edge });
    }
    let (xa, xb) = parts(&side_x, &xs);
    let (ya, yb) = parts(&side_y, &ys);
    let (red, blue) = (0, 1);
    let cover = GadgetCover {
        k: 2,
        gadgets: vec![
            make_gadget(g, &xa, &xb, blue, red),
            make_gadget(g, &ya, &yb, red, blue),
        ],
    };
    let cert = verify_gadget_cover(g, &cover).map_err(|violation| PartitionViolation::Cover { violation })?;
    Ok(PartitionCertificate {
        x: xs.to_vec(),
        y: ys.to_vec(),
        s_x: s_x.to_vec(),
        s_y: s_y.to_vec(),
        x_parts: (xa.to_vec(), xb.to_vec()),
        y_parts: (ya.to_vec(), yb.to_vec()),
        bound: from_usize(n) / from_usize(2),
        cover: cert,
    })
}

fn mask_bipartite(masks: &[u32], set: u32) -> bool {
    let mut unseen = set;
    while unseen != 0 {
        let start = unseen & unseen.wrapping_neg();
        unseen &= !start;
        let mut sides = [start, 0u32];
        let mut frontier = start;
        let mut p = 0;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= masks[v] & set;
            }
            if next & sides[p] != 0 {
                return false;
            }
            p ^= 1;
            sides[p] |= next;
            if sides[0] & sides[1] != 0 {
                return false;
            }
            frontier = next & unseen;
            unseen &= !next;
        }
    }
    true
}

fn mask_candidate(masks: &[u32], full: u32, x: u32) -> bool {
    let y = full & !x;
    let boundary = |from: u32, to: u32| {
        let mut s = 0u32;
        let mut f = from;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            if masks[v] & to != 0 {
                s |= 1 << v;
            }
        }
        s
    };
    let independent = |s: u32| {
        let mut f = s;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            if masks[v] & s != 0 {
                return false;
            }
        }
        true
    };
    independent(boundary(x, y)) && independent(boundary(y, x)) && mask_bipartite(masks, x) && mask_bipartite(masks, y)
}

/// First valid `X` in increasing bitmask order. `X` and `Y` play symmetric
/// roles, so only sets containing vertex 0 are tried.
pub fn find_partition(g: &Graph) -> Result<PartitionCertificate, PartitionError> {
    let n = g.n();
    if n > FIND_PARTITION_MAX_N {
        return Err(PartitionError::SearchSpaceTooLarge { n, limit: FIND_PARTITION_MAX_N });
    }
    if n == 0 {
        return verify_partition(g, &[]).map_err(|_| PartitionError::NotFound);
    }
    let masks: Vec<u32> = g.neighbor_masks().into_iter().map(|m| m as u32).collect();
    let full: u32 = (1u32 << n) - 1;
    let found = (0u32..1 << (n - 1))
        .into_par_iter()
        .map(|m| (m << 1) | 1)
        .find_first(|&x| mask_candidate(&masks, full, x))
        .ok_or(PartitionError::NotFound)?;
    let x: Vec<usize> = (0..n).filter(|&v| found >> v & 1 == 1).collect();
    verify_partition(g, &x).map_err(|v| PartitionError::NotApplicable(format!("search result failed verification: {v}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordedCycleCertificate {
    /// Hamiltonian cycle used, as a vertex sequence.
    pub order: Vec<usize>,
    pub chords: Vec<(usize, usize)>,
    pub endpoints: Vec<usize>,
    /// One chosen vertex per path between consecutive endpoints; the lower
    /// vertex index wins when a path has two middle vertices.
    pub middles: Vec<usize>,
    pub partition: PartitionCertificate,
}

fn is_hamiltonian_order(g: &Graph, order: &[usize]) -> bool {
    let n = g.n();
    if order.len() != n || n < 3 {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    (0..n).all(|i| g.has_edge(order[i], order[(i + 1) % n]))
}

/// Hamiltonian cycles through vertex 0, each reported once per direction,
/// stopping after `budget`.
fn hamiltonian_cycles(g: &Graph, budget: usize, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
    let n = g.n();
    let mut path = vec![0usize];
    let mut used = vec![false; n];
    used[0] = true;
    let mut count = 0usize;
    fn rec(
        g: &Graph,
        path: &mut Vec<usize>,
        used: &mut [bool],
        count: &mut usize,
        budget: usize,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> Option<bool> {
        let n = g.n();
        let last = *path.last().expect("path starts at 0");
        if path.len() == n {
            if g.has_edge(last, 0) && path[1] < path[n - 1] {
                *count += 1;
                if visit(path) {
                    return Some(true);
                }
                if *count >= budget {
                    return Some(false);
                }
            }
            return None;
        }
        for &w in g.neighbors(last) {
            if !used[w] {
                used[w] = true;
                path.push(w);
                let r = rec(g, path, used, count, budget, visit);
                path.pop();
                used[w] = false;
                if r.is_some() {
                    return r;
                }
            }
        }
        None
    }
    rec(g, &mut path, &mut used, &mut count, budget, &mut visit).unwrap_or(false)
}

fn chord_construction(g: &Graph, order: &[usize]) -> Result<ChordedCycleCertificate, String> {
    let n = order.len();
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let chords: Vec<(usize, usize)> = g
        .edges()
        .filter(|&(u, v)| {
            let d = pos[u].abs_diff(pos[v]);
            d != 1 && d != n - 1
        })
        .collect();
    let mut endpoint_pos: Vec<usize> = chords.iter().flat_map(|&(u, v)| [pos[u], pos[v]]).collect();
    endpoint_pos.sort_unstable();
    endpoint_pos.dedup();
    for (i, &a) in endpoint_pos.iter().enumerate() {
        for &b in &endpoint_pos[i + 1..] {
            let d = (b - a).min(n - (b - a));
            if d < 4 {
                return Err(format!(
                    "chord endpoints {} and {} are at distance {d} < 4 along the cycle",
                    order[a], order[b]
                ));
            }
        }
    }
    let middles: Vec<usize> = if endpoint_pos.is_empty() {
        vec![order[0]]
    } else {
        let k = endpoint_pos.len();
        (0..k)
            .map(|i| {
                let a = endpoint_pos[i];
                let len = (endpoint_pos[(i + 1) % k] + n - a) % n;
                let len = if len == 0 { n } else { len };
                let lo = order[(a + len / 2) % n];
                let hi = order[(a + len.div_ceil(2)) % n];
                lo.min(hi)
            })
            .collect()
    };
    let mut x = middles.clone();
    x.sort_unstable();
    x.dedup();
    let partition = verify_partition(g, &x).map_err(|v| v.to_string())?;
    Ok(ChordedCycleCertificate {
        order: order.to_vec(),
        chords,
        endpoints: endpoint_pos.iter().map(|&p| order[p]).collect(),
        middles,
        partition,
    })
}

/// Partition certificate for a Hamiltonian cycle plus chords whose
/// endpoints lie at least 4 apart along the cycle. Uses `order` when given,
/// else the identity order if it is a Hamiltonian cycle, else searches
/// Hamiltonian cycles for one that satisfies the condition (`n <= 24`).
pub fn chorded_cycle_certificate(g: &Graph, order: Option<&[usize]>) -> Result<ChordedCycleCertificate, PartitionError> {
    let n = g.n();
    if let Some(order) = order {
        if !is_hamiltonian_order(g, order) {
            return Err(PartitionError::NotApplicable("supplied order is not a Hamiltonian cycle".into()));
        }
        return chord_construction(g, order).map_err(PartitionError::NotApplicable);
    }
    let identity: Vec<usize> = (0..n).collect();
    if is_hamiltonian_order(g, &identity) {
        return chord_construction(g, &identity).map_err(PartitionError::NotApplicable);
    }
    if n < 3 || n > FIND_PARTITION_MAX_N {
        return Err(PartitionError::NotApplicable(format!(
            "cycle detection needs 3 <= n <= {FIND_PARTITION_MAX_N}"
        )));
    }
    let mut found = None;
    let mut last_reason = String::from("no Hamiltonian cycle");
    hamiltonian_cycles(g, HAMILTONIAN_BUDGET, |cyc| match chord_construction(g, cyc) {
        Ok(c) => {
            found = Some(c);
            true
        }
        Err(e) => {
            last_reason = e;
            false
        }
    });
    found.ok_or(PartitionError::NotApplicable(last_reason))
}
