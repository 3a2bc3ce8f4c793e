//! The entropy LP upper bound on storage capacity, with an optional
//! partial-failure rate.
//!
//! Full mode uses an elemental form: `z_∅ = 0`, `z_i <= 1` (or `<= R` for an
//! isolated `i`), `z_{N(b)+b} - z_{N(b)} <= R` for every vertex `b`, and
//! `z_{S+i} + z_{S+j} >= z_S + z_{S+ij}`. Every closure row
//! `z_T - z_S <= |T\S| - (1-R)|bo(S,T)|` is a sum of these along a chain
//! from `S` to `T`, and each of these is itself a closure or submodularity
//! row, so the optimum is unchanged. Variables are merged along
//! automorphism orbits of subsets, which preserves the optimum because the
//! LP is invariant and convex.

use crate::graph::automorphism::subset_orbits;
use crate::graph::{boundary, closure_mask, Graph, VertexSet};
use crate::lp::{self, LinearProgram, LpError, Relation, Sense};
use crate::rational::{from_usize, Rational};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Largest `n` for full mode.
pub const FULL_MODE_MAX_N: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InfoLpError {
    #[error("full mode needs 2^n variables; n = {n} exceeds {limit}")]
    TooManySubsets { n: usize, limit: usize },
    #[error("rate {0} outside [0, 1]")]
    RateOutOfRange(Rational),
    #[error("restricted family must contain the empty set and V")]
    InvalidFamily,
    #[error("the entropy LP did not reach an optimum")]
    NotOptimal,
    #[error(transparent)]
    Lp(#[from] LpError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpMode {
    Full,
    /// Constraints instantiated only among the given subsets.
    Restricted(Vec<VertexSet>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfoLpReport {
    pub value: Rational,
    pub variables: usize,
    pub constraints: usize,
    /// Set when only part of the constraint family was used, in which case
    /// tighter bounds may exist.
    pub restricted_family: bool,
    /// Optimal `z` for each subset mask in full mode (`z_∅ = 0` included).
    pub z: Option<Vec<Rational>>,
}

pub fn info_lp_bound(g: &Graph, mode: &LpMode) -> Result<Rational, InfoLpError> {
    Ok(info_lp(g, mode)?.value)
}

pub fn info_lp(g: &Graph, mode: &LpMode) -> Result<InfoLpReport, InfoLpError> {
    partial_info_lp(g, &Rational::zero(), mode)
}

pub fn partial_info_lp_bound(g: &Graph, rate: &Rational, mode: &LpMode) -> Result<Rational, InfoLpError> {
    Ok(partial_info_lp(g, rate, mode)?.value)
}

pub fn partial_info_lp(g: &Graph, rate: &Rational, mode: &LpMode) -> Result<InfoLpReport, InfoLpError> {
    if rate < &Rational::zero() || rate > &Rational::one() {
        return Err(InfoLpError::RateOutOfRange(rate.clone()));
    }
    match mode {
        LpMode::Full => full(g, rate),
        LpMode::Restricted(family) => restricted(g, rate, family),
    }
}

type Row = (Vec<(usize, Rational)>, Relation, Rational);

fn merge(coeffs: Vec<(usize, i64)>) -> Vec<(usize, Rational)> {
    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
    for (j, a) in coeffs {
        *acc.entry(j).or_default() += a;
    }
    acc.into_iter()
        .filter(|&(_, a)| a != 0)
        .map(|(j, a)| (j, Rational::from_integer(a.into())))
        .collect()
}

fn full(g: &Graph, rate: &Rational) -> Result<InfoLpReport, InfoLpError> {
    let n = g.n();
    if n > FULL_MODE_MAX_N {
        return Err(InfoLpError::TooManySubsets {
            n,
            limit: FULL_MODE_MAX_N,
        });
    }
    if n == 0 {
        return Ok(InfoLpReport {
            value: Rational::zero(),
            variables: 0,
            constraints: 0,
            restricted_family: false,
            z: Some(vec![Rational::zero()]),
        });
    }
    let orbit = subset_orbits(g);
    // Variable index per orbit representative; the empty set has none.
    let mut var_of: BTreeMap<u32, usize> = BTreeMap::new();
    for (s, &rep) in orbit.iter().enumerate().skip(1) {
        if rep as usize == s {
            let k = var_of.len();
            var_of.insert(rep, k);
        }
    }
    let var = |s: u64| -> Option<usize> { (s != 0).then(|| var_of[&orbit[s as usize]]) };
    let term = |s: u64, a: i64| var(s).map(|j| (j, a));

    let masks = g.neighbor_masks();
    let mut rows: BTreeSet<Row> = BTreeSet::new();
    let mut push = |coeffs: Vec<(usize, i64)>, rel: Relation, rhs: Rational| {
        let coeffs = merge(coeffs);
        if !coeffs.is_empty() {
            rows.insert((coeffs, rel, rhs));
        }
    };
    for i in 0..n {
        let bound = if masks[i] == 0 { rate.clone() } else { Rational::one() };
        push(term(1 << i, 1).into_iter().collect(), Relation::Le, bound);
        let nb = masks[i];
        push(
            term(nb | 1 << i, 1).into_iter().chain(term(nb, -1)).collect(),
            Relation::Le,
            rate.clone(),
        );
    }
    for s in 0u64..1 << n {
        for i in 0..n {
            if s >> i & 1 == 1 {
                continue;
            }
            for j in i + 1..n {
                if s >> j & 1 == 1 {
                    continue;
                }
                let coeffs: Vec<(usize, i64)> = [
                    term(s | 1 << i, 1),
                    term(s | 1 << j, 1),
                    term(s, -1),
                    term(s | 1 << i | 1 << j, -1),
                ]
                .into_iter()
                .flatten()
                .collect();
                push(coeffs, Relation::Ge, Rational::zero());
            }
        }
    }

    let nv = var_of.len();
    let mut lp = LinearProgram::new(nv, Sense::Maximize);
    for (&rep, &j) in &var_of {
        // Every optimum has z_S >= z_V - (n - |S|) >= -n, so this bound is
        // inactive; it keeps the origin feasible for the simplex.
        let size = rep.count_ones() as usize;
        lp.set_bounds(j, Some(-from_usize(n * size)), None);
    }
    let full_mask = (1u64 << n) - 1;
    lp.set_objective(var(full_mask).expect("V is nonempty"), Rational::one());
    let constraints = rows.len();
    for (coeffs, rel, rhs) in rows {
        lp.add_constraint(coeffs, rel, rhs);
    }
    let sol = lp::solve_guided(&lp)?;
    if !sol.is_optimal() {
        return Err(InfoLpError::NotOptimal);
    }
    let z = (0u64..1 << n)
        .map(|s| var(s).map_or_else(Rational::zero, |j| sol.values[j].clone()))
        .collect();
    Ok(InfoLpReport {
        value: sol.objective,
        variables: nv,
        constraints,
        restricted_family: false,
        z: Some(z),
    })
}

fn restricted(g: &Graph, rate: &Rational, family: &[VertexSet]) -> Result<InfoLpReport, InfoLpError> {
    let n = g.n();
    let mut sets: Vec<VertexSet> = family.to_vec();
    for s in &sets {
        assert_eq!(s.universe(), n, "family member over a different vertex range");
    }
    sets.sort_by_key(|s| (s.len(), s.to_vec()));
    sets.dedup();
    let empty = VertexSet::empty(n);
    let all = g.all_vertices();
    if !sets.contains(&empty) || !sets.contains(&all) {
        return Err(InfoLpError::InvalidFamily);
    }
    let index: BTreeMap<Vec<usize>, usize> = sets
        .iter()
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(k, s)| (s.to_vec(), k))
        .collect();
    let var = |s: &VertexSet| index.get(&s.to_vec()).copied();
    let mut lp = LinearProgram::new(index.len(), Sense::Maximize);
    for j in 0..index.len() {
        lp.set_bounds(j, None, None);
    }
    lp.set_objective(var(&all).expect("V is in the family"), Rational::one());
    let one_minus = Rational::one() - rate;
    let mut constraints = 0;
    for s in &sets {
        for t in &sets {
            if s != t && s.is_subset(t) {
                let rhs = from_usize(t.len() - s.len())
                    - &one_minus * from_usize(boundary(g, s, t).len());
                let coeffs = merge(
                    var(t).map(|j| (j, 1)).into_iter().chain(var(s).map(|j| (j, -1))).collect(),
                );
                lp.add_constraint(coeffs, Relation::Le, rhs);
                constraints += 1;
            }
        }
    }
    for (a, s) in sets.iter().enumerate() {
        for t in &sets[a + 1..] {
            if s.is_subset(t) || t.is_subset(s) {
                continue;
            }
            let (meet, join) = (s.intersection(t), s.union(t));
            let in_family = |x: &VertexSet| x.is_empty() || var(x).is_some();
            if !in_family(&meet) || !in_family(&join) {
                continue;
            }
            let coeffs = merge(
                [
                    var(s).map(|j| (j, 1)),
                    var(t).map(|j| (j, 1)),
                    var(&meet).map(|j| (j, -1)),
                    var(&join).map(|j| (j, -1)),
                ]
                .into_iter()
                .flatten()
                .collect(),
            );
            if !coeffs.is_empty() {
                lp.add_constraint(coeffs, Relation::Ge, Rational::zero());
                constraints += 1;
            }
        }
    }
    let sol = lp::solve_guided(&lp)?;
    if !sol.is_optimal() {
        return Err(InfoLpError::NotOptimal);
    }
    Ok(InfoLpReport {
        value: sol.objective,
        variables: index.len(),
        constraints,
        restricted_family: true,
        z: None,
    })
}

/// All subsets of `V` as a restricted family (the literal LP; for testing
/// small graphs).
pub fn power_set(n: usize) -> Vec<VertexSet> {
    assert!(n <= 16);
    (0u64..1 << n).map(|m| VertexSet::from_mask(n, m)).collect()
}

/// Checks a full-mode solution against every literal closure and
/// submodularity row of the LP.
pub fn check_literal_rows(g: &Graph, rate: &Rational, z: &[Rational]) -> bool {
    let n = g.n();
    let masks = g.neighbor_masks();
    let one_minus = Rational::one() - rate;
    if !z[0].is_zero() {
        return false;
    }
    for t in 0u64..1 << n {
        // S ⊆ T by iterating submasks
        let mut s = t;
        loop {
            let cl = closure_mask(&masks, s);
            let bo = ((cl & !s) & t).count_ones() as usize;
            let rhs = from_usize((t & !s).count_ones() as usize) - &one_minus * from_usize(bo);
            if &z[t as usize] - &z[s as usize] > rhs {
                return false;
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & t;
        }
    }
    for s in 0usize..1 << n {
        for t in s + 1..1 << n {
            if &z[s] + &z[t] < &z[s & t] + &z[s | t] {
                return false;
            }
        }
    }
    true
}
