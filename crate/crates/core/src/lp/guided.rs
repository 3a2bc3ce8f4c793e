//! Floating-point simplex used only to propose a basis, and the exact
//! recovery and certification of the primal and dual solutions it implies.

use crate::rational::Rational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};

type Rows = [(Vec<(usize, Rational)>, Rational)];

const TOL: f64 = 1e-9;
/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_STREAK: usize = 50;

struct FloatTableau {
    m: usize,
    k: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    basis: Vec<usize>,
    nonbasis: Vec<usize>,
}

impl FloatTableau {
    fn new(rows: &Rows, obj: &[Rational], k: usize) -> Self {
        let m = rows.len();
        let mut a = vec![0.0; m * k];
        let f = |r: &Rational| r.to_f64().unwrap_or(0.0);
        for (i, (coeffs, _)) in rows.iter().enumerate() {
            for (j, v) in coeffs {
                a[i * k + j] = f(v);
            }
        }
        FloatTableau {
            m,
            k,
            a,
            b: rows.iter().map(|(_, r)| f(r)).collect(),
            c: obj.iter().map(f).collect(),
            basis: (k..k + m).collect(),
            nonbasis: (0..k).collect(),
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let k = self.k;
        let inv = 1.0 / self.a[r * k + e];
        for j in 0..k {
            self.a[r * k + j] *= inv;
        }
        self.a[r * k + e] = inv;
        self.b[r] *= inv;
        let row: Vec<f64> = self.a[r * k..(r + 1) * k].to_vec();
        let nz: Vec<usize> = (0..k).filter(|&j| j != e && row[j] != 0.0).collect();
        let br = self.b[r];
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.a[i * k + e];
            if f == 0.0 {
                continue;
            }
            let ai = &mut self.a[i * k..(i + 1) * k];
            for &j in &nz {
                ai[j] -= f * row[j];
            }
            ai[e] = -f * inv;
            self.b[i] -= f * br;
            if self.b[i] < 0.0 && self.b[i] > -TOL {
                self.b[i] = 0.0;
            }
        }
        let f = self.c[e];
        if f != 0.0 {
            for &j in &nz {
                self.c[j] -= f * row[j];
            }
            self.c[e] = -f * inv;
        }
        std::mem::swap(&mut self.basis[r], &mut self.nonbasis[e]);
    }

    /// Steepest-edge pricing, switching to Bland's rule during long
    /// degenerate runs. Returns the pivot count, or `None` if the run is unbounded or
    /// hits the iteration limit.
    fn optimize(&mut self) -> Option<usize> {
        let k = self.k;
        let limit = 50 * (self.m + k) + 1000;
        let mut streak = 0usize;
        for pivots in 0..limit {
            let bland = streak >= DEGENERATE_STREAK;
            let candidates = (0..k).filter(|&j| self.c[j] > TOL);
            let e = if bland {
                candidates.min_by_key(|&j| self.nonbasis[j])
            } else {
                // Squared column norms of the current tableau.
                let mut norms = vec![1.0f64; k];
                for i in 0..self.m {
                    for (nj, &v) in norms.iter_mut().zip(&self.a[i * k..(i + 1) * k]) {
                        *nj += v * v;
                    }
                }
                let score = |j: usize| self.c[j] * self.c[j] / norms[j];
                candidates.max_by(|&x, &y| score(x).total_cmp(&score(y)))
            };
            let Some(e) = e else {
                return Some(pivots);
            };
            let mut best: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let aie = self.a[i * k + e];
                if aie <= TOL {
                    continue;
                }
                let ratio = self.b[i].max(0.0) / aie;
                let better = match best {
                    None => true,
                    Some((bi, br)) => {
                        if ratio < br - 1e-12 {
                            true
                        } else if ratio <= br + 1e-12 {
                            if bland {
                                self.basis[i] < self.basis[bi]
                            } else {
                                aie > self.a[bi * k + e]
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let (r, ratio) = best?;
            if ratio < 1e-12 {
                streak += 1;
            } else {
                streak = 0;
            }
            self.pivot(r, e);
        }
        None
    }
}

/// Solves the square system `rows · x = rhs` exactly by sparse Gaussian
/// elimination; `None` when singular.
fn solve_square(mut rows: Vec<BTreeMap<usize, Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rows.len();
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, row) in rows.iter().enumerate() {
        for &j in row.keys() {
            col_rows[j].insert(i);
        }
    }
    let mut done = vec![false; n];
    let mut order: Vec<(usize, usize)> = Vec::with_capacity(n);
    for _ in 0..n {
        let r = (0..n).filter(|&i| !done[i]).min_by_key(|&i| (rows[i].len(), i))?;
        let c = *rows[r].keys().min_by_key(|&&j| (col_rows[j].len(), j))?;
        done[r] = true;
        order.push((r, c));
        let piv = rows[r][&c].clone();
        let pivot_row: Vec<(usize, Rational)> = rows[r].iter().map(|(&j, v)| (j, v.clone())).collect();
        let targets: Vec<usize> = col_rows[c].iter().copied().filter(|&i| !done[i]).collect();
        for i in targets {
            let f = &rows[i][&c] / &piv;
            for (j, v) in &pivot_row {
                let entry = rows[i].entry(*j).or_insert_with(Rational::zero);
                *entry -= &f * v;
                if entry.is_zero() {
                    rows[i].remove(j);
                    col_rows[*j].remove(&i);
                } else {
                    col_rows[*j].insert(i);
                }
            }
            let d = &f * &rhs[r];
            rhs[i] -= d;
        }
    }
    let mut x = vec![Rational::zero(); n];
    for &(r, c) in order.iter().rev() {
        let mut acc = rhs[r].clone();
        for (&j, v) in &rows[r] {
            if j != c {
                acc -= v * &x[j];
            }
        }
        x[c] = acc / &rows[r][&c];
    }
    Some(x)
}

/// Optimal standard-form point, certified by an exact dual solution.
pub(super) fn certify(rows: &Rows, obj: &[Rational], k: usize) -> Option<(Vec<Rational>, usize)> {
    if rows.iter().any(|(_, b)| b.is_negative()) {
        return None;
    }
    let mut t = FloatTableau::new(rows, obj, k);
    let pivots = t.optimize()?;
    let m = rows.len();
    let basic_cols: Vec<usize> = t.basis.iter().copied().filter(|&v| v < k).collect();
    let tight_rows: Vec<usize> = t.nonbasis.iter().copied().filter(|&v| v >= k).map(|v| v - k).collect();
    if basic_cols.len() != tight_rows.len() {
        return None;
    }
    let d = basic_cols.len();
    let col_pos: BTreeMap<usize, usize> = basic_cols.iter().enumerate().map(|(p, &j)| (j, p)).collect();

    let mut primal_rows = vec![BTreeMap::new(); d];
    let mut dual_rows = vec![BTreeMap::new(); d];
    for (r, &i) in tight_rows.iter().enumerate() {
        for (j, v) in &rows[i].0 {
            if let Some(&p) = col_pos.get(j) {
                primal_rows[r].insert(p, v.clone());
                dual_rows[p].insert(r, v.clone());
            }
        }
    }
    let xb = solve_square(primal_rows, tight_rows.iter().map(|&i| rows[i].1.clone()).collect())?;
    let yb = solve_square(dual_rows, basic_cols.iter().map(|&j| obj[j].clone()).collect())?;

    let mut x = vec![Rational::zero(); k];
    for (p, &j) in basic_cols.iter().enumerate() {
        x[j] = xb[p].clone();
    }
    let mut y = vec![Rational::zero(); m];
    for (r, &i) in tight_rows.iter().enumerate() {
        y[i] = yb[r].clone();
    }
    if x.iter().chain(&y).any(|v| v.is_negative()) {
        return None;
    }
    let mut reduced: Vec<Rational> = vec![Rational::zero(); k];
    for (i, (coeffs, b)) in rows.iter().enumerate() {
        let lhs: Rational = coeffs.iter().map(|(j, v)| v * &x[*j]).sum();
        if &lhs > b {
            return None;
        }
        if !y[i].is_zero() {
            for (j, v) in coeffs {
                reduced[*j] += v * &y[i];
            }
        }
    }
    if reduced.iter().zip(obj).any(|(r, c)| r < c) {
        return None;
    }
    let primal: Rational = obj.iter().zip(&x).map(|(c, v)| c * v).sum();
    let dual: Rational = rows.iter().zip(&y).map(|((_, b), v)| b * v).sum();
    (primal == dual).then_some((x, pivots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn sparse_solve() {
        let rows = vec![
            BTreeMap::from([(0, int(2)), (1, int(1))]),
            BTreeMap::from([(1, int(3))]),
        ];
        assert_eq!(solve_square(rows, vec![int(5), int(3)]).unwrap(), vec![int(2), int(1)]);
        let singular = vec![
            BTreeMap::from([(0, int(1)), (1, int(1))]),
            BTreeMap::from([(0, int(2)), (1, int(2))]),
        ];
        assert!(solve_square(singular, vec![int(1), int(2)]).is_none());
    }

    #[test]
    fn certifies_small_program() {
        // max x + y, x + 2y <= 4, 3x + y <= 6
        let rows = vec![
            (vec![(0, int(1)), (1, int(2))], int(4)),
            (vec![(0, int(3)), (1, int(1))], int(6)),
        ];
        let (x, _) = certify(&rows, &[int(1), int(1)], 2).unwrap();
        assert_eq!(x, vec![rat(8, 5), rat(6, 5)]);
    }
}
