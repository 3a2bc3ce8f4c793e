//! Exact rational linear programming.
//!
//! A dictionary simplex over [`Rational`] with Bland's rule, so it
//! terminates under degeneracy, and a guided variant for large programs
//! that certifies a floating-point basis exactly. General bounds and
//! relations are reduced to `A y <= b, y >= 0`; a phase-1 auxiliary
//! variable is introduced only when the origin is infeasible. Optimal
//! assignments are re-checked exactly against the original program before
//! they are returned.

use crate::rational::Rational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

mod guided;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("malformed LP: {0}")]
    MalformedLP(String),
    #[error("simplex returned an assignment violating {0}")]
    VerificationFailed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// Sparse row `Σ coeffs · x  (relation)  rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    /// `None` is unbounded on that side. Variables default to `[0, ∞)`.
    pub lower: Vec<Option<Rational>>,
    pub upper: Vec<Option<Rational>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LPSolution {
    pub status: LpStatus,
    /// Optimal value; zero unless `status` is `Optimal`.
    pub objective: Rational,
    /// Optimal assignment; empty unless `status` is `Optimal`.
    pub values: Vec<Rational>,
    pub pivots: usize,
}

impl LPSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize, sense: Sense) -> Self {
        LinearProgram {
            num_vars,
            sense,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
            lower: vec![Some(Rational::zero()); num_vars],
            upper: vec![None; num_vars],
        }
    }

    pub fn set_objective(&mut self, var: usize, coeff: Rational) {
        self.objective[var] = coeff;
    }

    pub fn add_constraint(
        &mut self,
        coeffs: Vec<(usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<Rational>, upper: Option<Rational>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.num_vars;
        if self.objective.len() != n || self.lower.len() != n || self.upper.len() != n {
            return Err(LpError::MalformedLP(format!(
                "objective/bounds lengths {}/{}/{} differ from {n} variables",
                self.objective.len(),
                self.lower.len(),
                self.upper.len()
            )));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if let Some((j, _)) = c.coeffs.iter().find(|(j, _)| *j >= n) {
                return Err(LpError::MalformedLP(format!(
                    "row {i} references variable {j} of {n}"
                )));
            }
        }
        for j in 0..n {
            if let (Some(l), Some(u)) = (&self.lower[j], &self.upper[j]) {
                if l > u {
                    return Err(LpError::MalformedLP(format!(
                        "variable {j} has lower bound {l} above upper bound {u}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Checks an assignment against every row and bound; returns the first
    /// violated item.
    pub fn check(&self, x: &[Rational]) -> Result<(), String> {
        if x.len() != self.num_vars {
            return Err("assignment length".into());
        }
        for j in 0..self.num_vars {
            if self.lower[j].as_ref().is_some_and(|l| &x[j] < l) {
                return Err(format!("lower bound of variable {j}"));
            }
            if self.upper[j].as_ref().is_some_and(|u| &x[j] > u) {
                return Err(format!("upper bound of variable {j}"));
            }
        }
        for (i, c) in self.constraints.iter().enumerate() {
            let lhs: Rational = c.coeffs.iter().map(|(j, a)| a * &x[*j]).sum();
            let ok = match c.relation {
                Relation::Le => lhs <= c.rhs,
                Relation::Ge => lhs >= c.rhs,
                Relation::Eq => lhs == c.rhs,
            };
            if !ok {
                return Err(format!("row {i}"));
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

/// How an original variable is expressed through standard-form columns.
enum VarMap {
    /// `x = shift + y`
    Shifted { col: usize, shift: Rational },
    /// `x = shift - y`
    Mirrored { col: usize, shift: Rational },
    /// `x = y+ - y-`
    Split { pos: usize, neg: usize },
}

/// `max obj · y` subject to `rows` (`a · y <= rhs`) and `y >= 0`.
struct StandardForm {
    cols: usize,
    maps: Vec<VarMap>,
    rows: Vec<(Vec<(usize, Rational)>, Rational)>,
    obj: Vec<Rational>,
}

impl StandardForm {
    fn new(lp: &LinearProgram) -> Self {
        let mut cols = 0;
        let mut maps = Vec::with_capacity(lp.num_vars);
        let mut extra_rows: Vec<(usize, Rational)> = Vec::new();
        for j in 0..lp.num_vars {
            match (&lp.lower[j], &lp.upper[j]) {
                (Some(l), u) => {
                    if let Some(u) = u {
                        extra_rows.push((cols, u - l));
                    }
                    maps.push(VarMap::Shifted {
                        col: cols,
                        shift: l.clone(),
                    });
                    cols += 1;
                }
                (None, Some(u)) => {
                    maps.push(VarMap::Mirrored {
                        col: cols,
                        shift: u.clone(),
                    });
                    cols += 1;
                }
                (None, None) => {
                    maps.push(VarMap::Split {
                        pos: cols,
                        neg: cols + 1,
                    });
                    cols += 2;
                }
            }
        }

        let mut rows: Vec<(Vec<(usize, Rational)>, Rational)> = Vec::new();
        for c in &lp.constraints {
            let mut coeffs: Vec<(usize, Rational)> = Vec::new();
            let mut rhs = c.rhs.clone();
            for (j, a) in &c.coeffs {
                if a.is_zero() {
                    continue;
                }
                match &maps[*j] {
                    VarMap::Shifted { col, shift } => {
                        rhs -= a * shift;
                        coeffs.push((*col, a.clone()));
                    }
                    VarMap::Mirrored { col, shift } => {
                        rhs -= a * shift;
                        coeffs.push((*col, -a));
                    }
                    VarMap::Split { pos, neg } => {
                        coeffs.push((*pos, a.clone()));
                        coeffs.push((*neg, -a));
                    }
                }
            }
            coeffs = merge(coeffs);
            let negated = || {
                (
                    coeffs.iter().map(|(j, a)| (*j, -a)).collect::<Vec<_>>(),
                    -rhs.clone(),
                )
            };
            match c.relation {
                Relation::Le => rows.push((coeffs.clone(), rhs.clone())),
                Relation::Ge => rows.push(negated()),
                Relation::Eq => {
                    rows.push((coeffs.clone(), rhs.clone()));
                    rows.push(negated());
                }
            }
        }
        for (col, cap) in extra_rows {
            rows.push((vec![(col, Rational::one())], cap));
        }

        let sign = match lp.sense {
            Sense::Maximize => Rational::one(),
            Sense::Minimize => -Rational::one(),
        };
        let mut obj = vec![Rational::zero(); cols];
        for (j, c) in lp.objective.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c * &sign;
            match &maps[j] {
                VarMap::Shifted { col, .. } => obj[*col] += c,
                VarMap::Mirrored { col, .. } => obj[*col] -= c,
                VarMap::Split { pos, neg } => {
                    obj[*pos] += c.clone();
                    obj[*neg] -= c;
                }
            }
        }
        StandardForm { cols, maps, rows, obj }
    }

    /// Maps a standard-form point back, re-checks it against `lp`, and
    /// recomputes the objective.
    fn finish(&self, lp: &LinearProgram, y: &[Rational], pivots: usize) -> Result<LPSolution, LpError> {
        let values: Vec<Rational> = self
            .maps
            .iter()
            .map(|m| match m {
                VarMap::Shifted { col, shift } => shift + &y[*col],
                VarMap::Mirrored { col, shift } => shift - &y[*col],
                VarMap::Split { pos, neg } => &y[*pos] - &y[*neg],
            })
            .collect();
        lp.check(&values).map_err(LpError::VerificationFailed)?;
        let objective = lp.evaluate(&values);
        Ok(LPSolution {
            status: LpStatus::Optimal,
            objective,
            values,
            pivots,
        })
    }
}

/// Exact optimum by the rational simplex with Bland's rule.
pub fn solve(lp: &LinearProgram) -> Result<LPSolution, LpError> {
    lp.validate()?;
    let form = StandardForm::new(lp);
    solve_form(lp, &form)
}

fn solve_form(lp: &LinearProgram, form: &StandardForm) -> Result<LPSolution, LpError> {
    let mut dict = Dictionary::new(form.cols, &form.rows, &form.obj);
    let outcome = dict.run();
    let pivots = dict.pivots;
    match outcome {
        LpStatus::Optimal => form.finish(lp, &dict.primal(form.cols), pivots),
        status => Ok(LPSolution {
            status,
            objective: Rational::zero(),
            values: Vec::new(),
            pivots,
        }),
    }
}

/// Exact optimum for large programs whose origin is feasible in standard
/// form. A floating-point simplex proposes a basis; the basic primal and
/// dual solutions are then recomputed in exact arithmetic and accepted only
/// if both are feasible with equal objectives, which proves optimality.
/// Otherwise this falls back to [`solve`].
pub fn solve_guided(lp: &LinearProgram) -> Result<LPSolution, LpError> {
    lp.validate()?;
    let form = StandardForm::new(lp);
    if let Some((y, pivots)) = guided::certify(&form.rows, &form.obj, form.cols) {
        return form.finish(lp, &y, pivots);
    }
    solve_form(lp, &form)
}

fn merge(mut coeffs: Vec<(usize, Rational)>) -> Vec<(usize, Rational)> {
    coeffs.sort_by_key(|(j, _)| *j);
    let mut out: Vec<(usize, Rational)> = Vec::with_capacity(coeffs.len());
    for (j, a) in coeffs {
        match out.last_mut() {
            Some((k, b)) if *k == j => *b += a,
            _ => out.push((j, a)),
        }
    }
    out.retain(|(_, a)| !a.is_zero());
    out
}

/// Dictionary `x_B = b - A x_N`, `z = v + c · x_N`. Variables are numbered
/// structural `0..k`, slacks `k..k+m`, auxiliary `k+m`.
struct Dictionary {
    m: usize,
    /// `a[i][j]` for row `i`, nonbasic column `j`.
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    c: Vec<Rational>,
    v: Rational,
    basis: Vec<usize>,
    nonbasis: Vec<usize>,
    pivots: usize,
    original_obj: Vec<Rational>,
}

impl Dictionary {
    fn new(k: usize, rows: &[(Vec<(usize, Rational)>, Rational)], obj: &[Rational]) -> Self {
        let m = rows.len();
        let mut a = vec![vec![Rational::zero(); k]; m];
        let mut b = Vec::with_capacity(m);
        for (i, (coeffs, rhs)) in rows.iter().enumerate() {
            for (j, v) in coeffs {
                a[i][*j] = v.clone();
            }
            b.push(rhs.clone());
        }
        Dictionary {
            m,
            a,
            b,
            c: obj.to_vec(),
            v: Rational::zero(),
            basis: (k..k + m).collect(),
            nonbasis: (0..k).collect(),
            pivots: 0,
            original_obj: obj.to_vec(),
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        self.pivots += 1;
        let piv = self.a[r][e].clone();
        let inv = piv.recip();
        // Normalise the pivot row into an expression for the entering variable.
        let mut row = std::mem::take(&mut self.a[r]);
        for (j, x) in row.iter_mut().enumerate() {
            if j == e {
                *x = inv.clone();
            } else if !x.is_zero() {
                *x *= &inv;
            }
        }
        self.b[r] *= &inv;
        let nz: Vec<usize> = (0..row.len()).filter(|&j| j != e && !row[j].is_zero()).collect();
        let br = self.b[r].clone();
        for i in 0..self.m {
            if i == r || self.a[i][e].is_zero() {
                continue;
            }
            let f = std::mem::replace(&mut self.a[i][e], Rational::zero());
            let ai = &mut self.a[i];
            for &j in &nz {
                let d = &f * &row[j];
                ai[j] -= d;
            }
            ai[e] = -(&f * &inv);
            self.b[i] -= &f * &br;
        }
        if !self.c[e].is_zero() {
            let f = std::mem::replace(&mut self.c[e], Rational::zero());
            for &j in &nz {
                let d = &f * &row[j];
                self.c[j] -= d;
            }
            self.c[e] = -(&f * &inv);
            self.v += &f * &br;
        }
        self.a[r] = row;
        std::mem::swap(&mut self.basis[r], &mut self.nonbasis[e]);
    }

    /// Bland: entering column with smallest variable index among positive
    /// reduced costs; leaving row by minimum ratio, ties to smallest basic
    /// variable index.
    fn choose(&self) -> Option<(usize, Option<usize>)> {
        let e = (0..self.c.len())
            .filter(|&j| self.c[j].is_positive())
            .min_by_key(|&j| self.nonbasis[j])?;
        let mut best: Option<(usize, Rational)> = None;
        for i in 0..self.m {
            let aie = &self.a[i][e];
            if !aie.is_positive() {
                continue;
            }
            let ratio = &self.b[i] / aie;
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        Some((e, best.map(|(i, _)| i)))
    }

    /// Runs to optimality; `false` when unbounded.
    fn optimize(&mut self) -> bool {
        while let Some((e, leave)) = self.choose() {
            match leave {
                Some(r) => self.pivot(r, e),
                None => return false,
            }
        }
        true
    }

    fn run(&mut self) -> LpStatus {
        let k = self.nonbasis.len();
        let worst = (0..self.m).filter(|&i| self.b[i].is_negative()).min_by(|&x, &y| {
            self.b[x].cmp(&self.b[y]).then(x.cmp(&y))
        });
        if let Some(r) = worst {
            let aux = k + self.m;
            for row in &mut self.a {
                row.push(-Rational::one());
            }
            self.nonbasis.push(aux);
            self.c = vec![Rational::zero(); k + 1];
            self.c[k] = -Rational::one();
            self.v = Rational::zero();
            self.pivot(r, k);
            let bounded = self.optimize();
            debug_assert!(bounded, "phase 1 is bounded by construction");
            if !self.v.is_zero() {
                return LpStatus::Infeasible;
            }
            if let Some(r) = self.basis.iter().position(|&x| x == aux) {
                // Degenerate basic auxiliary: pivot it out on any nonzero.
                if let Some(e) = (0..self.nonbasis.len()).find(|&j| !self.a[r][j].is_zero()) {
                    self.pivot(r, e);
                } else {
                    // The row is identically zero; drop it.
                    self.a.remove(r);
                    self.b.remove(r);
                    self.basis.remove(r);
                    self.m -= 1;
                }
            }
            let col = self
                .nonbasis
                .iter()
                .position(|&x| x == aux)
                .expect("auxiliary variable is nonbasic");
            for row in &mut self.a {
                row.remove(col);
            }
            self.nonbasis.remove(col);
            self.restore_objective();
        }
        if self.optimize() {
            LpStatus::Optimal
        } else {
            LpStatus::Unbounded
        }
    }

    fn restore_objective(&mut self) {
        let k = self.original_obj.len();
        self.c = vec![Rational::zero(); self.nonbasis.len()];
        self.v = Rational::zero();
        for (j, &var) in self.nonbasis.iter().enumerate() {
            if var < k {
                self.c[j] = self.original_obj[var].clone();
            }
        }
        for i in 0..self.m {
            let var = self.basis[i];
            if var >= k || self.original_obj[var].is_zero() {
                continue;
            }
            let cv = self.original_obj[var].clone();
            self.v += &cv * &self.b[i];
            for j in 0..self.nonbasis.len() {
                if !self.a[i][j].is_zero() {
                    let d = &cv * &self.a[i][j];
                    self.c[j] -= d;
                }
            }
        }
    }

    fn primal(&self, k: usize) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); k];
        for (i, &var) in self.basis.iter().enumerate() {
            if var < k {
                y[var] = self.b[i].clone();
            }
        }
        y
    }
}
