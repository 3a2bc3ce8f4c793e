//! Gadgets and k-colour gadget covers.
//!
//! A gadget built from generator sets `A`, `B` has outside set
//! `cl(A) ∪ cl(B)` coloured `c1` and inside set `cl(A) ∩ cl(B)` coloured
//! `c2`, with weight `|A| + |B|`. If every colour class is a vertex cover,
//! capacity is at most the total weight divided by the number of colours.

use crate::graph::{closure, Graph, VertexSet};
use crate::rational::{self, from_usize, Rational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub a: VertexSet,
    pub b: VertexSet,
    pub outside: VertexSet,
    pub inside: VertexSet,
    pub c1: usize,
    pub c2: usize,
    pub weight: usize,
}

pub fn make_gadget(g: &Graph, a: &VertexSet, b: &VertexSet, c1: usize, c2: usize) -> Gadget {
    let (ca, cb) = (closure(g, a), closure(g, b));
    Gadget {
        a: a.clone(),
        b: b.clone(),
        outside: ca.union(&cb),
        inside: ca.intersection(&cb),
        c1,
        c2,
        weight: a.len() + b.len(),
    }
}

/// The gadget with `A = {v}`, `B = ∅`.
pub fn trivial_gadget(g: &Graph, v: usize, c1: usize, c2: usize) -> Gadget {
    make_gadget(
        g,
        &VertexSet::from_vertices(g.n(), [v]),
        &VertexSet::empty(g.n()),
        c1,
        c2,
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetCover {
    pub k: usize,
    pub gadgets: Vec<Gadget>,
}

impl GadgetCover {
    pub fn total_weight(&self) -> usize {
        self.gadgets.iter().map(|g| g.weight).sum()
    }

    /// `Σ w(g) / k`.
    pub fn bound(&self) -> Rational {
        from_usize(self.total_weight()) / from_usize(self.k.max(1))
    }

    /// Vertices assigned colour `c`.
    pub fn color_class(&self, n: usize, c: usize) -> VertexSet {
        let mut s = VertexSet::empty(n);
        for g in &self.gadgets {
            if g.c1 == c {
                s = s.union(&g.outside);
            }
            if g.c2 == c {
                s = s.union(&g.inside);
            }
        }
        s
    }

    pub fn to_spec(&self) -> CoverSpec {
        CoverSpec {
            k: self.k,
            gadgets: self
                .gadgets
                .iter()
                .map(|g| GadgetSpec {
                    a: g.a.to_vec(),
                    b: g.b.to_vec(),
                    c1: g.c1,
                    c2: g.c2,
                })
                .collect(),
        }
    }
}

/// Cover file format: generator sets and colours only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSpec {
    pub k: usize,
    pub gadgets: Vec<GadgetSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetSpec {
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
    pub c1: usize,
    pub c2: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverSpecError {
    #[error("gadget {gadget} names vertex {vertex}, but the graph has {n} vertices")]
    VertexOutOfRange { gadget: usize, vertex: usize, n: usize },
}

impl CoverSpec {
    pub fn build(&self, g: &Graph) -> Result<GadgetCover, CoverSpecError> {
        let n = g.n();
        let mut gadgets = Vec::with_capacity(self.gadgets.len());
        for (idx, spec) in self.gadgets.iter().enumerate() {
            if let Some(&vertex) = spec.a.iter().chain(&spec.b).find(|&&v| v >= n) {
                return Err(CoverSpecError::VertexOutOfRange {
                    gadget: idx,
                    vertex,
                    n,
                });
            }
            let a = VertexSet::from_vertices(n, spec.a.iter().copied());
            let b = VertexSet::from_vertices(n, spec.b.iter().copied());
            gadgets.push(make_gadget(g, &a, &b, spec.c1, spec.c2));
        }
        Ok(GadgetCover { k: self.k, gadgets })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoverViolation {
    NoColors,
    ColorOutOfRange { gadget: usize, color: usize },
    Uncovered { color: usize, edge: (usize, usize) },
}

impl std::fmt::Display for CoverViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoverViolation::NoColors => write!(f, "cover uses k = 0 colours"),
            CoverViolation::ColorOutOfRange { gadget, color } => {
                write!(f, "gadget {gadget} uses colour {color} outside [0, k)")
            }
            CoverViolation::Uncovered { color, edge } => {
                write!(f, "colour {color} leaves edge {}-{} uncovered", edge.0, edge.1)
            }
        }
    }
}

/// Verified cover with derived sets echoed for auditing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCertificate {
    pub k: usize,
    pub total_weight: usize,
    #[serde(with = "rational::serde_str")]
    pub bound: Rational,
    pub gadgets: Vec<GadgetEcho>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetEcho {
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
    pub c1: usize,
    pub c2: usize,
    pub outside: Vec<usize>,
    pub inside: Vec<usize>,
    pub weight: usize,
}

/// Checks that every colour class covers every edge; reports the lowest
/// failing colour and, within it, the lexicographically first edge.
pub fn verify_gadget_cover(g: &Graph, cover: &GadgetCover) -> Result<CoverCertificate, CoverViolation> {
    if cover.k == 0 {
        return Err(CoverViolation::NoColors);
    }
    for (idx, gd) in cover.gadgets.iter().enumerate() {
        for color in [gd.c1, gd.c2] {
            if color >= cover.k {
                return Err(CoverViolation::ColorOutOfRange { gadget: idx, color });
            }
        }
    }
    for color in 0..cover.k {
        let class = cover.color_class(g.n(), color);
        if let Some(edge) = g.edges().find(|&(u, v)| !class.contains(u) && !class.contains(v)) {
            return Err(CoverViolation::Uncovered { color, edge });
        }
    }
    Ok(CoverCertificate {
        k: cover.k,
        total_weight: cover.total_weight(),
        bound: cover.bound(),
        gadgets: cover
            .gadgets
            .iter()
            .map(|gd| GadgetEcho {
                a: gd.a.to_vec(),
                b: gd.b.to_vec(),
                c1: gd.c1,
                c2: gd.c2,
                outside: gd.outside.to_vec(),
                inside: gd.inside.to_vec(),
                weight: gd.weight,
            })
            .collect(),
    })
}

/// The two-colour cover of `C_9` from generators `A = {0, 2}`,
/// `B = {1, 3}` and trivial gadgets on the remaining vertices: colour 0 is
/// green, colour 1 red. Total weight 9, bound 9/2.
pub fn c9_cover(g: &Graph) -> GadgetCover {
    let n = g.n();
    let (green, red) = (0, 1);
    let mut gadgets = vec![make_gadget(
        g,
        &VertexSet::from_vertices(n, [0, 2]),
        &VertexSet::from_vertices(n, [1, 3]),
        green,
        red,
    )];
    for v in [5, 7] {
        gadgets.push(trivial_gadget(g, v, green, green));
    }
    for v in [4, 6, 8] {
        gadgets.push(trivial_gadget(g, v, red, red));
    }
    GadgetCover { k: 2, gadgets }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;
    use crate::rational::rat;

    fn set(n: usize, v: &[usize]) -> VertexSet {
        VertexSet::from_vertices(n, v.iter().copied())
    }

    #[test]
    fn gadget_examples() {
        let c9 = cycle(9);
        let gd = make_gadget(&c9, &set(9, &[0, 2]), &set(9, &[1, 3]), 0, 1);
        assert_eq!(gd.outside.to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(gd.inside.to_vec(), vec![1, 2]);
        assert_eq!(gd.weight, 4);
        let t = trivial_gadget(&c9, 4, 0, 0);
        assert_eq!((t.outside.to_vec(), t.inside.len(), t.weight), (vec![4], 0, 1));
        let same = make_gadget(&c9, &set(9, &[0, 2]), &set(9, &[0, 2]), 0, 1);
        assert_eq!(same.outside, same.inside);
        assert_eq!(same.weight, 4);
        // A degree-one neighbour is absorbed by the closure of its neighbour.
        let p = path(3);
        let t = trivial_gadget(&p, 1, 0, 0);
        assert_eq!(t.outside.to_vec(), vec![0, 1, 2]);
        assert!(t.inside.is_empty());
    }

    #[test]
    fn c9_cover_verifies() {
        let c9 = cycle(9);
        let cert = verify_gadget_cover(&c9, &c9_cover(&c9)).unwrap();
        assert_eq!(cert.bound, rat(9, 2));
        assert_eq!(cert.total_weight, 9);
    }

    #[test]
    fn mutated_cover_is_rejected() {
        let c9 = cycle(9);
        let mut cover = c9_cover(&c9);
        // Drop the trivial gadget on vertex 5.
        cover.gadgets.retain(|g| g.a.to_vec() != vec![5]);
        assert_eq!(
            verify_gadget_cover(&c9, &cover),
            Err(CoverViolation::Uncovered { color: 0, edge: (4, 5) })
        );
        let mut bad = c9_cover(&c9);
        bad.gadgets[0].c1 = 7;
        assert_eq!(
            verify_gadget_cover(&c9, &bad),
            Err(CoverViolation::ColorOutOfRange { gadget: 0, color: 7 })
        );
    }

    #[test]
    fn spec_round_trip() {
        let c9 = cycle(9);
        let spec = c9_cover(&c9).to_spec();
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"A\":[0,2]"));
        let back: CoverSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build(&c9).unwrap(), c9_cover(&c9));
        let bad = CoverSpec {
            k: 1,
            gadgets: vec![GadgetSpec { a: vec![9], b: vec![], c1: 0, c2: 0 }],
        };
        assert!(bad.build(&c9).is_err());
    }
}
