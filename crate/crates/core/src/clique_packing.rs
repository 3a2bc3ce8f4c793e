//! Fractional clique packings and the storage codes that realise them.

use crate::graph::{is_clique, Graph};
use crate::lp::{self, LinearProgram, LpError, Relation, Sense};
use crate::partial::{entropy_hq, PartialError, DEFAULT_DIGITS};
use crate::rational::{self, from_usize, Rational};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PackingError {
    #[error("delta = {delta} exceeds 1 - 1/q = {limit}; use the plain packing instead")]
    DeltaOutOfRange { delta: Rational, limit: Rational },
    #[error("alphabet 2^{bits} exceeds the cap 2^{cap_bits}")]
    AlphabetOverflow { bits: usize, cap_bits: usize },
    #[error("code would hold 2^{info_bits} codewords, above the cap 2^{cap_bits}")]
    CodeTooLarge { info_bits: usize, cap_bits: usize },
    #[error("invalid packing: {0}")]
    InvalidPacking(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Entropy(#[from] PartialError),
}

/// All cliques of size `>= min_size` and `<= max_size`, each sorted, in
/// canonical order (by size, then lexicographically).
pub fn enumerate_cliques_sized(g: &Graph, min_size: usize, max_size: Option<usize>) -> Vec<Vec<usize>> {
    let cap = max_size.unwrap_or(usize::MAX);
    let mut all = BTreeSet::new();
    for maximal in maximal_cliques(g) {
        let k = maximal.len();
        assert!(k <= 30, "clique of size {k} is too large to expand into subsets");
        for mask in 1u32..1 << k {
            let size = mask.count_ones() as usize;
            if size < min_size || size > cap {
                continue;
            }
            let sub: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| maximal[i]).collect();
            all.insert((size, sub));
        }
    }
    all.into_iter().map(|(_, c)| c).collect()
}

/// Cliques of size at least 2 (singletons contribute nothing to `fcc`).
pub fn enumerate_cliques(g: &Graph, max_size: Option<usize>) -> Vec<Vec<usize>> {
    enumerate_cliques_sized(g, 2, max_size)
}

/// Maximal cliques by Bron–Kerbosch with Tomita pivoting.
pub fn maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let nbrs: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut out = Vec::new();
    bron_kerbosch(&nbrs, &mut Vec::new(), (0..n).collect(), BTreeSet::new(), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn bron_kerbosch(
    nbrs: &[BTreeSet<usize>],
    r: &mut Vec<usize>,
    mut p: BTreeSet<usize>,
    mut x: BTreeSet<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let pivot = p
        .iter()
        .chain(x.iter())
        .max_by_key(|&&u| p.intersection(&nbrs[u]).count())
        .copied()
        .expect("p is nonempty");
    let candidates: Vec<usize> = p.difference(&nbrs[pivot]).copied().collect();
    for v in candidates {
        r.push(v);
        let p2 = p.intersection(&nbrs[v]).copied().collect();
        let x2 = x.intersection(&nbrs[v]).copied().collect();
        bron_kerbosch(nbrs, r, p2, x2, out);
        r.pop();
        p.remove(&v);
        x.insert(v);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedClique {
    pub vertices: Vec<usize>,
    #[serde(with = "rational::serde_str")]
    pub weight: Rational,
}

/// Clique weights with their LP objective.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalCliquePacking {
    /// Cliques with positive weight, in canonical order.
    pub cliques: Vec<WeightedClique>,
    #[serde(with = "rational::serde_str")]
    pub value: Rational,
    /// For the entropy-weighted variant: the true optimum lies within this
    /// distance of `value`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub error_bound: Option<Rational>,
}

mod opt_rational {
    use crate::rational::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&format_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

impl FractionalCliquePacking {
    /// Checks completeness of every clique, weights in `[0, 1]`, vertex
    /// loads at most 1, and the `Σ x_C (|C| - 1)` objective.
    pub fn validate(&self, g: &Graph) -> Result<(), PackingError> {
        let mut load = vec![Rational::zero(); g.n()];
        let mut value = Rational::zero();
        for c in &self.cliques {
            if c.vertices.iter().any(|&v| v >= g.n()) || !is_clique(g, &c.vertices) {
                return Err(PackingError::InvalidPacking(format!(
                    "{:?} is not a clique",
                    c.vertices
                )));
            }
            if c.weight < Rational::zero() || c.weight > Rational::one() {
                return Err(PackingError::InvalidPacking(format!(
                    "weight {} outside [0, 1]",
                    c.weight
                )));
            }
            for &v in &c.vertices {
                load[v] += &c.weight;
            }
            value += &c.weight * from_usize(c.vertices.len().saturating_sub(1));
        }
        if let Some(v) = load.iter().position(|l| l > &Rational::one()) {
            return Err(PackingError::InvalidPacking(format!("vertex {v} has load {}", load[v])));
        }
        if self.error_bound.is_none() && value != self.value {
            return Err(PackingError::InvalidPacking(format!(
                "stated value {} differs from objective {value}",
                self.value
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("packing serializes")
    }
}

fn solve_packing(
    g: &Graph,
    cliques: Vec<Vec<usize>>,
    coeff: impl Fn(&[usize]) -> Rational,
) -> Result<FractionalCliquePacking, PackingError> {
    let mut lp = LinearProgram::new(cliques.len(), Sense::Maximize);
    let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); g.n()];
    for (j, c) in cliques.iter().enumerate() {
        lp.set_objective(j, coeff(c));
        for &v in c {
            rows[v].push((j, Rational::one()));
        }
    }
    // x_C <= 1 is implied by any vertex row of C.
    for row in rows.into_iter().filter(|r| !r.is_empty()) {
        lp.add_constraint(row, Relation::Le, Rational::one());
    }
    let sol = lp::solve_guided(&lp)?;
    let cliques = cliques
        .into_iter()
        .zip(sol.values)
        .filter(|(_, w)| !w.is_zero())
        .map(|(vertices, weight)| WeightedClique { vertices, weight })
        .collect();
    Ok(FractionalCliquePacking {
        cliques,
        value: sol.objective,
        error_bound: None,
    })
}

/// Optimal fractional clique packing, `max Σ x_C (|C| - 1)`.
pub fn fcc(g: &Graph) -> Result<FractionalCliquePacking, PackingError> {
    fcc_capped(g, None)
}

/// [`fcc`] restricted to cliques of at most `max_size` vertices.
pub fn fcc_capped(g: &Graph, max_size: Option<usize>) -> Result<FractionalCliquePacking, PackingError> {
    solve_packing(g, enumerate_cliques(g, max_size), |c| from_usize(c.len() - 1))
}

/// `max Σ x_C (|C| - h_q(δ))` over all cliques including singletons, which
/// carry positive weight `1 - h_q(δ)` here. `h_q(δ)` enters as a rational
/// approximation; the result's `error_bound` is `n` times its accuracy since
/// `Σ x_C <= n`.
pub fn fcc_delta(
    g: &Graph,
    q: u64,
    delta: &Rational,
    digits: usize,
) -> Result<FractionalCliquePacking, PackingError> {
    let limit = Rational::one() - Rational::new(1.into(), q.into());
    if delta > &limit {
        return Err(PackingError::DeltaOutOfRange {
            delta: delta.clone(),
            limit,
        });
    }
    let h = entropy_hq(q, delta, digits)?;
    // The midpoint rounded to the working precision keeps the LP small.
    let bits = crate::interval::bits_for_digits(digits);
    let h_mid = crate::interval::round_dyadic(&h.mid(), bits, false);
    let radius = h.radius_about(&h_mid);
    let mut packing = solve_packing(g, enumerate_cliques_sized(g, 1, None), |c| {
        from_usize(c.len()) - &h_mid
    })?;
    packing.error_bound = Some(radius * from_usize(g.n()));
    Ok(packing)
}

pub fn fcc_delta_default(g: &Graph, q: u64, delta: &Rational) -> Result<FractionalCliquePacking, PackingError> {
    fcc_delta(g, q, delta, DEFAULT_DIGITS)
}

/// Explicit code: codewords over `[0, q)` and a recovery table per vertex
/// keyed by the neighbours' symbols in ascending vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StorageCode {
    pub q: u64,
    pub n: usize,
    pub codewords: Vec<Vec<u64>>,
    #[serde(with = "recovery_serde")]
    pub recovery: Vec<BTreeMap<Vec<u64>, u64>>,
}

mod recovery_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::collections::BTreeMap;

    #[derive(Serialize, Deserialize)]
    struct Entry {
        neighborhood: Vec<u64>,
        symbol: u64,
    }

    pub fn serialize<S: Serializer>(r: &[BTreeMap<Vec<u64>, u64>], s: S) -> Result<S::Ok, S::Error> {
        let tables: Vec<Vec<Entry>> = r
            .iter()
            .map(|t| {
                t.iter()
                    .map(|(k, &v)| Entry {
                        neighborhood: k.clone(),
                        symbol: v,
                    })
                    .collect()
            })
            .collect();
        tables.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BTreeMap<Vec<u64>, u64>>, D::Error> {
        let tables = Vec::<Vec<Entry>>::deserialize(d)?;
        Ok(tables
            .into_iter()
            .map(|t| t.into_iter().map(|e| (e.neighborhood, e.symbol)).collect())
            .collect())
    }
}

impl StorageCode {
    /// Code with recovery tables read off the codewords. Tables record the
    /// first symbol seen per neighbourhood; [`verify_storage_code`] decides
    /// whether they are functions.
    pub fn from_codewords(g: &Graph, q: u64, codewords: Vec<Vec<u64>>) -> Self {
        let mut recovery = vec![BTreeMap::new(); g.n()];
        for w in &codewords {
            for (i, table) in recovery.iter_mut().enumerate() {
                let key: Vec<u64> = g.neighbors(i).iter().map(|&j| w[j]).collect();
                table.entry(key).or_insert(w[i]);
            }
        }
        StorageCode {
            q,
            n: g.n(),
            codewords,
            recovery,
        }
    }

    pub fn size(&self) -> usize {
        self.codewords.len()
    }

    /// `log_q |code|`.
    pub fn log_size(&self) -> rational::LogValue {
        rational::LogValue::new(self.q, self.codewords.len().into())
    }

    /// Every codeword is reproduced by the recovery tables.
    pub fn tables_consistent(&self, g: &Graph) -> bool {
        self.recovery.len() == self.n
            && self.codewords.iter().all(|w| {
                (0..self.n).all(|i| {
                    let key: Vec<u64> = g.neighbors(i).iter().map(|&j| w[j]).collect();
                    self.recovery[i].get(&key) == Some(&w[i])
                })
            })
    }
}

/// True iff codewords agreeing on `N(i)` agree on `i`, for every `i`.
pub fn verify_storage_code(g: &Graph, code: &StorageCode) -> bool {
    if code.n != g.n() {
        return false;
    }
    if code
        .codewords
        .iter()
        .any(|w| w.len() != code.n || w.iter().any(|&s| s >= code.q))
    {
        return false;
    }
    (0..g.n()).all(|i| {
        let mut seen: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
        code.codewords.iter().all(|w| {
            let key: Vec<u64> = g.neighbors(i).iter().map(|&j| w[j]).collect();
            *seen.entry(key).or_insert(w[i]) == w[i]
        })
    })
}

/// Caps for [`build_storage_code`].
#[derive(Debug, Clone, Copy)]
pub struct CodeCaps {
    /// Largest alphabet exponent `L` with `q = 2^L`.
    pub alphabet_bits: usize,
    /// Largest number of information bits (code size `2^bits`).
    pub info_bits: usize,
}

impl Default for CodeCaps {
    fn default() -> Self {
        CodeCaps {
            alphabet_bits: 20,
            info_bits: 20,
        }
    }
}

pub fn build_storage_code(g: &Graph, packing: &FractionalCliquePacking) -> Result<StorageCode, PackingError> {
    build_storage_code_with(g, packing, CodeCaps::default())
}

/// Per clique `C` with weight `x_C` over `q = 2^L`, every member stores a
/// `x_C L`-bit sub-symbol; the highest-indexed member stores the sum of the
/// others modulo `2^(x_C L)`. Free sub-symbols range over all values, so
/// `|code| = 2^(L · value)`.
pub fn build_storage_code_with(
    g: &Graph,
    packing: &FractionalCliquePacking,
    caps: CodeCaps,
) -> Result<StorageCode, PackingError> {
    if packing.error_bound.is_some() {
        return Err(PackingError::InvalidPacking(
            "entropy-weighted packings have no plain code construction".into(),
        ));
    }
    packing.validate(g)?;
    let weights: Vec<&Rational> = packing.cliques.iter().map(|c| &c.weight).collect();
    let l_big = rational::common_denominator(weights.iter().copied());
    let l = l_big.to_usize().filter(|&l| l <= caps.alphabet_bits).ok_or_else(|| {
        PackingError::AlphabetOverflow {
            bits: l_big.to_usize().unwrap_or(usize::MAX),
            cap_bits: caps.alphabet_bits,
        }
    })?;
    let q = 1u64 << l;
    // (clique index, bits per sub-symbol, per-member bit offsets)
    let mut offset = vec![0usize; g.n()];
    let mut layout = Vec::new();
    let mut info_bits = 0usize;
    for c in &packing.cliques {
        let b = (&c.weight * from_usize(l)).to_integer().to_usize().expect("integral width");
        if b == 0 {
            continue;
        }
        let offs: Vec<usize> = c
            .vertices
            .iter()
            .map(|&v| {
                let o = offset[v];
                offset[v] += b;
                o
            })
            .collect();
        info_bits += b * (c.vertices.len() - 1);
        layout.push((c.vertices.clone(), b, offs));
    }
    debug_assert!(offset.iter().all(|&o| o <= l));
    if info_bits > caps.info_bits {
        return Err(PackingError::CodeTooLarge {
            info_bits,
            cap_bits: caps.info_bits,
        });
    }
    let mut codewords = Vec::with_capacity(1 << info_bits);
    for info in 0u64..1 << info_bits {
        let mut word = vec![0u64; g.n()];
        let mut cursor = 0;
        for (verts, b, offs) in &layout {
            let mask = (1u64 << b) - 1;
            let mut sum = 0u64;
            let last = verts.len() - 1;
            for k in 0..last {
                let s = (info >> cursor) & mask;
                cursor += b;
                sum = (sum + s) & mask;
                word[verts[k]] |= s << offs[k];
            }
            word[verts[last]] |= sum << offs[last];
        }
        codewords.push(word);
    }
    codewords.sort();
    Ok(StorageCode::from_codewords(g, q, codewords))
}

/// Rate `log_q |code|` of a clique-packing code as an exact rational, valid
/// when `q` is a power of two and the size a power of two.
pub fn code_rate(code: &StorageCode) -> Option<Rational> {
    code.log_size().as_rational()
}

/// `Σ x_C (|C| - 1)` recomputed from the weights.
pub fn packing_objective(p: &FractionalCliquePacking) -> Rational {
    p.cliques
        .iter()
        .map(|c| &c.weight * from_usize(c.vertices.len().saturating_sub(1)))
        .sum()
}
