//! Approximation of `scap` and `ind` on planar graphs from the fractional
//! clique packing, with guarantees parameterised by a maximal family of `t`
//! vertex-disjoint triangles.
//!
//! Planarity is the caller's claim; only the Euler bound `m <= 3n - 6` is
//! checked. The bounds themselves are valid on any graph; the guarantees
//! hold for planar inputs.

use crate::clique_packing::{fcc_capped, PackingError};
use crate::graph::{
    exact_coloring, fractional_vertex_cover_halfintegral, induced_subgraph, is_vertex_cover,
    maximal_disjoint_triangles, minimum_vertex_cover, Graph, VertexSet,
};
use crate::rational::{self, from_usize, rat, Rational};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest triangle-free remainder whose minimum vertex cover is computed to
/// evaluate the storage guarantee at its actual `k`.
pub const EXACT_K_MAX_VERTICES: usize = 18;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanarError {
    #[error("graph with n = {n} and m = {m} violates m <= 3n - 6 and cannot be planar")]
    EulerBoundViolated { n: usize, m: usize },
    #[error("graph contains the triangle {0:?}")]
    NotTriangleFree([usize; 3]),
    #[error("half-weight vertices admit no proper 3-colouring")]
    NoThreeColoring,
    #[error(transparent)]
    Packing(#[from] PackingError),
}

/// `m <= 3n - 6` for `n >= 3`.
pub fn check_euler(g: &Graph) -> Result<(), PlanarError> {
    let (n, m) = (g.n(), g.m());
    if n >= 3 && m + 6 > 3 * n {
        return Err(PlanarError::EulerBoundViolated { n, m });
    }
    Ok(())
}

/// `(3t + k) / (2t + 3k/4)`, the storage ratio bound; 1 when `t = k = 0`.
pub fn scap_ratio_bound(t: usize, k: usize) -> Rational {
    if t == 0 && k == 0 {
        return Rational::one();
    }
    from_usize(3 * t + k) / (from_usize(2 * t) + rat(3, 4) * from_usize(k))
}

/// Piecewise index-coding ratio bound in `t / n`; 1 for the empty graph.
pub fn ind_ratio_bound(n: usize, t: usize) -> Rational {
    if n == 0 {
        return Rational::one();
    }
    let (nr, tr) = (from_usize(n), from_usize(t));
    if 12 * t <= n {
        (rational::int(3) * &nr + rational::int(3) * &tr) / (rational::int(4) * &nr - rational::int(12) * &tr)
            + rat(3, 4)
    } else if 4 * t <= n {
        tr / nr + rat(7, 4)
    } else {
        rational::int(4) - rational::int(8) * tr / nr
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproxReport {
    pub n: usize,
    #[serde(with = "rational::serde_str")]
    pub fcc: Rational,
    pub t: usize,
    pub triangles: Vec<[usize; 3]>,
    pub triangle_free: bool,
    #[serde(with = "rational::serde_str")]
    pub scap_lower: Rational,
    /// Minimum vertex cover size, when computed.
    pub scap_upper_vc: Option<usize>,
    /// Worst case over `k`: 4/3 when triangle-free, else 3/2.
    #[serde(with = "rational::serde_str")]
    pub guarantee_scap: Rational,
    /// `k = vc(G - T)`, when the remainder is small enough.
    pub k: Option<usize>,
    #[serde(with = "opt_rational")]
    pub guarantee_scap_at_k: Option<Rational>,
    #[serde(with = "rational::serde_str")]
    pub ind_upper: Rational,
    /// Worst case over `t`: 3/2 when triangle-free, else 2.
    #[serde(with = "rational::serde_str")]
    pub guarantee_ind: Rational,
    #[serde(with = "rational::serde_str")]
    pub guarantee_ind_at_t: Rational,
}

mod opt_rational {
    use crate::rational::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

fn report(g: &Graph) -> Result<ApproxReport, PlanarError> {
    check_euler(g)?;
    let n = g.n();
    // Planar graphs are K5-free.
    let fcc = fcc_capped(g, Some(4))?.value;
    let triangles = maximal_disjoint_triangles(g);
    let t = triangles.len();
    let triangle_free = t == 0;
    let mut rest = VertexSet::full(n);
    for tri in &triangles {
        for &v in tri {
            rest.remove(v);
        }
    }
    let k = (rest.len() <= EXACT_K_MAX_VERTICES).then(|| {
        if rest.is_empty() {
            return 0;
        }
        let sub = induced_subgraph(g, &rest).expect("subset of the vertex set");
        minimum_vertex_cover(&sub.graph).len()
    });
    let scap_upper_vc = (n <= EXACT_K_MAX_VERTICES).then(|| minimum_vertex_cover(g).len());
    Ok(ApproxReport {
        n,
        fcc: fcc.clone(),
        t,
        triangles,
        triangle_free,
        scap_lower: fcc.clone(),
        scap_upper_vc,
        guarantee_scap: if triangle_free { rat(4, 3) } else { rat(3, 2) },
        k,
        guarantee_scap_at_k: k.map(|k| scap_ratio_bound(t, k)),
        ind_upper: from_usize(n) - fcc,
        guarantee_ind: if triangle_free { rat(3, 2) } else { rational::int(2) },
        guarantee_ind_at_t: ind_ratio_bound(n, t),
    })
}

/// `fcc(G) <= scap(G) <= ratio · fcc(G)`.
pub fn approx_scap_planar(g: &Graph) -> Result<ApproxReport, PlanarError> {
    report(g)
}

/// `ind(G) <= n - fcc(G) <= ratio · ind(G)`.
pub fn approx_ind_planar(g: &Graph) -> Result<ApproxReport, PlanarError> {
    report(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundedCover {
    pub cover: Vec<usize>,
    #[serde(with = "rational::serde_str")]
    pub fractional: Rational,
    /// Half-weight vertices by colour class, heaviest first; the first class
    /// is rounded down and the others up.
    pub classes: [Vec<usize>; 3],
}

/// Integral vertex cover of size at most `4/3` of the fractional optimum on
/// a 3-colourable triangle-free graph.
pub fn round_vc_4_3(g: &Graph) -> Result<RoundedCover, PlanarError> {
    if let Some(&tri) = maximal_disjoint_triangles(g).first() {
        return Err(PlanarError::NotTriangleFree(tri));
    }
    let x = fractional_vertex_cover_halfintegral(g);
    let halves = VertexSet::from_vertices(g.n(), x.half_vertices());
    let mut classes: [Vec<usize>; 3] = Default::default();
    if !halves.is_empty() {
        let sub = induced_subgraph(g, &halves).expect("subset of the vertex set");
        let colors = exact_coloring(&sub.graph, 3).ok_or(PlanarError::NoThreeColoring)?;
        for (local, &c) in colors.iter().enumerate() {
            classes[c].push(sub.to_parent[local]);
        }
    }
    // Stable: equal classes keep colour order.
    classes.sort_by_key(|c| std::cmp::Reverse(c.len()));
    let mut cover = VertexSet::from_vertices(g.n(), x.one_vertices());
    for &v in classes[1].iter().chain(&classes[2]) {
        cover.insert(v);
    }
    assert!(is_vertex_cover(g, &cover), "rounded cover misses an edge");
    let fractional = x.total();
    debug_assert!(from_usize(cover.len()) <= rat(4, 3) * &fractional || fractional.is_zero());
    Ok(RoundedCover {
        cover: cover.to_vec(),
        fractional,
        classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::*;

    #[test]
    fn ratio_formulas() {
        assert_eq!(scap_ratio_bound(0, 4), rat(4, 3));
        assert_eq!(scap_ratio_bound(2, 0), rat(3, 2));
        assert_eq!(scap_ratio_bound(0, 0), Rational::one());
        assert_eq!(ind_ratio_bound(10, 0), rat(3, 2));
        // Branches meet at t = n/12 and t = n/4.
        assert_eq!(ind_ratio_bound(12, 1), rat(11, 6));
        assert_eq!(from_usize(1) / from_usize(12) + rat(7, 4), rat(11, 6));
        assert_eq!(ind_ratio_bound(12, 3), rational::int(2));
        assert_eq!(rational::int(4) - rational::int(8) * rat(1, 4), rational::int(2));
        assert_eq!(ind_ratio_bound(12, 4), rat(4, 3));
        for n in 1..40 {
            for t in 0..=n / 3 {
                assert!(ind_ratio_bound(n, t) <= rational::int(2));
            }
        }
    }

    #[test]
    fn report_examples() {
        let r = approx_scap_planar(&cycle(5)).unwrap();
        assert_eq!((r.fcc.clone(), r.t, r.triangle_free), (rat(5, 2), 0, true));
        assert_eq!(r.guarantee_scap, rat(4, 3));
        assert_eq!(r.ind_upper, rat(5, 2));
        let r = approx_scap_planar(&complete(4)).unwrap();
        assert_eq!((r.fcc.clone(), r.t, r.scap_upper_vc), (rational::int(3), 1, Some(3)));
        assert_eq!(r.guarantee_scap, rat(3, 2));
        let r = approx_ind_planar(&grid(3, 3)).unwrap();
        assert_eq!((r.fcc.clone(), r.ind_upper.clone()), (rational::int(4), rational::int(5)));
        assert_eq!(r.guarantee_ind, rat(3, 2));
        let c9 = cycle_with_chords(9, &[(0, 3), (3, 6)]).unwrap();
        let r = approx_scap_planar(&c9).unwrap();
        assert!(r.triangle_free);
        assert_eq!(r.fcc, rat(9, 2));
        let two = disjoint_union(&[complete(3), complete(3)]);
        assert_eq!(approx_scap_planar(&two).unwrap().k, Some(0));
        assert!(matches!(approx_scap_planar(&complete(5)), Err(PlanarError::EulerBoundViolated { .. })));
    }

    #[test]
    fn rounding() {
        let r = round_vc_4_3(&cycle(5)).unwrap();
        assert_eq!((r.fractional.clone(), r.cover.len()), (rat(5, 2), 3));
        let r = round_vc_4_3(&cycle(6)).unwrap();
        assert_eq!(r.cover.len(), 3);
        let r = round_vc_4_3(&star(5)).unwrap();
        assert_eq!(r.cover, vec![0]);
        assert!(matches!(round_vc_4_3(&complete(3)), Err(PlanarError::NotTriangleFree(_))));
        // The Grötzsch graph is triangle-free with chromatic number 4.
        let grotzsch = Graph::new(
            11,
            [
                (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                (5, 1), (5, 4), (6, 0), (6, 2), (7, 1), (7, 3), (8, 2), (8, 4), (9, 3), (9, 0),
                (10, 5), (10, 6), (10, 7), (10, 8), (10, 9),
            ],
        )
        .unwrap();
        assert!(matches!(round_vc_4_3(&grotzsch), Err(PlanarError::NoThreeColoring)));
    }
}
