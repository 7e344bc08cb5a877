//! Exact rational linear programming.
//!
//! A dense two-phase primal simplex over `BigRational` using Bland's rule.
//! Every outcome carries a certificate that can be checked by substitution:
//! a dual solution for optimal programs, Farkas multipliers for infeasible
//! ones, and an improving ray for unbounded ones.
//!
//! Programs have the form
//!
//! ```text
//!     max/min  c·x   s.t.  G x <= h,  E x = f,  x_j >= 0 for flagged j
//! ```
//!
//! Unflagged variables are free. Strict inequalities are not supported;
//! callers introduce a margin variable instead.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{dot, IntMatrix, RatMatrix, RatVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    fn sign(self) -> BigRational {
        match self {
            Sense::Maximize => BigRational::one(),
            Sense::Minimize => -BigRational::one(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: RatVector,
    pub ineq: RatMatrix,
    pub ineq_rhs: RatVector,
    pub eq: RatMatrix,
    pub eq_rhs: RatVector,
    pub nonnegative: Vec<bool>,
}

impl LinearProgram {
    /// Zero objective, no constraints, `n` free variables.
    pub fn new(n: usize) -> Self {
        LinearProgram {
            sense: Sense::Maximize,
            objective: vec![BigRational::zero(); n],
            ineq: RatMatrix::zeros(0, n),
            ineq_rhs: Vec::new(),
            eq: RatMatrix::zeros(0, n),
            eq_rhs: Vec::new(),
            nonnegative: vec![false; n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn maximize(mut self, c: RatVector) -> Self {
        self.sense = Sense::Maximize;
        self.objective = c;
        self
    }

    pub fn minimize(mut self, c: RatVector) -> Self {
        self.sense = Sense::Minimize;
        self.objective = c;
        self
    }

    pub fn with_ineq(mut self, g: RatMatrix, h: RatVector) -> Self {
        self.ineq = g;
        self.ineq_rhs = h;
        self
    }

    pub fn with_int_ineq(self, g: &IntMatrix, h: &[num_bigint::BigInt]) -> Self {
        let h = h.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        self.with_ineq(g.to_rational(), h)
    }

    pub fn with_eq(mut self, e: RatMatrix, f: RatVector) -> Self {
        self.eq = e;
        self.eq_rhs = f;
        self
    }

    /// Marks every variable as nonnegative.
    pub fn nonnegative(mut self) -> Self {
        self.nonnegative = vec![true; self.num_vars()];
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        let ok = self.ineq.cols() == n
            && self.eq.cols() == n
            && self.nonnegative.len() == n
            && self.ineq.rows() == self.ineq_rhs.len()
            && self.eq.rows() == self.eq_rhs.len();
        if ok {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "LP with {n} variables: ineq {}x{} / {}, eq {}x{} / {}, {} sign flags",
                self.ineq.rows(),
                self.ineq.cols(),
                self.ineq_rhs.len(),
                self.eq.rows(),
                self.eq.cols(),
                self.eq_rhs.len(),
                self.nonnegative.len()
            )))
        }
    }

    /// True when `x` satisfies every constraint exactly.
    pub fn is_feasible_point(&self, x: &[BigRational]) -> bool {
        x.len() == self.num_vars()
            && self
                .ineq
                .row_iter()
                .zip(&self.ineq_rhs)
                .all(|(g, h)| dot(g, x) <= *h)
            && self.eq.row_iter().zip(&self.eq_rhs).all(|(e, f)| dot(e, x) == *f)
            && x
                .iter()
                .zip(&self.nonnegative)
                .all(|(v, &nn)| !nn || !v.is_negative())
    }

    // (Gᵀy + Eᵀz)_j for every variable j.
    fn combine(&self, m: &Multipliers) -> RatVector {
        let mut out = vec![BigRational::zero(); self.num_vars()];
        for (row, y) in self.ineq.row_iter().zip(&m.ineq) {
            for (o, g) in out.iter_mut().zip(row) {
                *o += g * y;
            }
        }
        for (row, z) in self.eq.row_iter().zip(&m.eq) {
            for (o, e) in out.iter_mut().zip(row) {
                *o += e * z;
            }
        }
        out
    }

    fn rhs_value(&self, m: &Multipliers) -> BigRational {
        dot(&m.ineq, &self.ineq_rhs) + dot(&m.eq, &self.eq_rhs)
    }
}

/// Row multipliers: `ineq` for the rows of `G`, `eq` for the rows of `E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multipliers {
    pub ineq: RatVector,
    pub eq: RatVector,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpResult {
    /// `dual` satisfies `y >= 0`, `Gᵀy + Eᵀz = s·c` on free variables and
    /// `>= s·c` on nonnegative ones, and `h·y + f·z = s·value`, where
    /// `s = +1` for maximization and `-1` for minimization.
    Optimal {
        point: RatVector,
        value: BigRational,
        dual: Multipliers,
    },
    /// `farkas` satisfies `y >= 0`, `yᵀG + zᵀE = 0` on free variables and
    /// `>= 0` on nonnegative ones, and `h·y + f·z = -1`.
    Infeasible { farkas: Multipliers },
    /// `point` is feasible; `ray` satisfies `G d <= 0`, `E d = 0`, sign
    /// constraints, and strictly improves the objective.
    Unbounded { point: RatVector, ray: RatVector },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl LpResult {
    pub fn status(&self) -> LpStatus {
        match self {
            LpResult::Optimal { .. } => LpStatus::Optimal,
            LpResult::Infeasible { .. } => LpStatus::Infeasible,
            LpResult::Unbounded { .. } => LpStatus::Unbounded,
        }
    }

    pub fn point(&self) -> Option<&RatVector> {
        match self {
            LpResult::Optimal { point, .. } | LpResult::Unbounded { point, .. } => Some(point),
            LpResult::Infeasible { .. } => None,
        }
    }

    pub fn value(&self) -> Option<&BigRational> {
        match self {
            LpResult::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    /// Checks the attached certificate by exact substitution.
    pub fn verify(&self, lp: &LinearProgram) -> bool {
        let s = lp.sense.sign();
        let signs_ok = |m: &Multipliers| {
            m.ineq.len() == lp.ineq.rows()
                && m.eq.len() == lp.eq.rows()
                && m.ineq.iter().all(|y| !y.is_negative())
        };
        match self {
            LpResult::Optimal { point, value, dual } => {
                if !lp.is_feasible_point(point) || dot(&lp.objective, point) != *value {
                    return false;
                }
                if !signs_ok(dual) {
                    return false;
                }
                let comb = lp.combine(dual);
                let reduced_ok = comb.iter().zip(&lp.objective).zip(&lp.nonnegative).all(
                    |((a, c), &nn)| {
                        let target = &s * c;
                        if nn {
                            *a >= target
                        } else {
                            *a == target
                        }
                    },
                );
                reduced_ok && lp.rhs_value(dual) == &s * value
            }
            LpResult::Infeasible { farkas } => {
                signs_ok(farkas)
                    && lp
                        .combine(farkas)
                        .iter()
                        .zip(&lp.nonnegative)
                        .all(|(a, &nn)| if nn { !a.is_negative() } else { a.is_zero() })
                    && lp.rhs_value(farkas).is_negative()
            }
            LpResult::Unbounded { point, ray } => {
                lp.is_feasible_point(point)
                    && ray.len() == lp.num_vars()
                    && lp.ineq.row_iter().all(|g| !dot(g, ray).is_positive())
                    && lp.eq.row_iter().all(|e| dot(e, ray).is_zero())
                    && ray
                        .iter()
                        .zip(&lp.nonnegative)
                        .all(|(d, &nn)| !nn || !d.is_negative())
                    && (&s * dot(&lp.objective, ray)).is_positive()
            }
        }
    }
}

/// Outcome of a pure feasibility question.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(RatVector),
    Infeasible(Multipliers),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }

    pub fn point(&self) -> Option<&RatVector> {
        match self {
            Feasibility::Feasible(p) => Some(p),
            Feasibility::Infeasible(_) => None,
        }
    }
}

/// Feasibility of `G x <= h, E x = f` over free `x`.
pub fn lp_feasible(g: &RatMatrix, h: &[BigRational], e: &RatMatrix, f: &[BigRational]) -> Result<Feasibility> {
    let lp = LinearProgram::new(g.cols())
        .with_ineq(g.clone(), h.to_vec())
        .with_eq(e.clone(), f.to_vec());
    feasibility(&lp)
}

/// Feasibility of the constraint set of `lp`; the objective is ignored.
pub fn feasibility(lp: &LinearProgram) -> Result<Feasibility> {
    let probe = LinearProgram {
        objective: vec![BigRational::zero(); lp.num_vars()],
        ..lp.clone()
    };
    match lp_solve(&probe)? {
        LpResult::Optimal { point, .. } => Ok(Feasibility::Feasible(point)),
        LpResult::Infeasible { farkas } => Ok(Feasibility::Infeasible(farkas)),
        LpResult::Unbounded { .. } => Err(Error::Internal("zero objective reported unbounded".into())),
    }
}

// Indices of the first occurrence of each distinct (row, rhs) pair.
fn distinct_rows(m: &RatMatrix, rhs: &[BigRational]) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for i in 0..m.rows() {
        let dup = kept
            .iter()
            .any(|&k| rhs[k] == rhs[i] && m.row(k) == m.row(i));
        if !dup {
            kept.push(i);
        }
    }
    kept
}

struct Tableau {
    rows: Vec<RatVector>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, r: usize) -> &BigRational {
        &self.rows[r][self.width]
    }

    fn pivot(&mut self, r: usize, j: usize, obj: &mut RatVector) {
        let inv = self.rows[r][j].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let eliminate = |row: &mut RatVector| {
            let f = row[j].clone();
            if f.is_zero() {
                return;
            }
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        };
        for row in self.rows.iter_mut() {
            if !row.is_empty() {
                eliminate(row);
            }
        }
        eliminate(obj);
        self.rows[r] = pivot_row;
        self.basis[r] = j;
    }

    /// Bland's-rule simplex on the columns below `allowed`; returns the
    /// entering column of an unbounded direction, if one is found.
    fn run(&mut self, obj: &mut RatVector, allowed: usize) -> Option<usize> {
        loop {
            let j = (0..allowed).find(|&j| obj[j].is_negative())?;
            let mut leave: Option<(usize, BigRational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &leave {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                None => return Some(j),
                Some((r, _)) => self.pivot(r, j, obj),
            }
        }
    }

    // Reduced-cost row for column costs `cost` under the current basis.
    fn objective_row(&self, cost: &[BigRational]) -> RatVector {
        let mut obj: RatVector = cost.to_vec();
        obj.push(BigRational::zero());
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, v) in obj.iter_mut().zip(row) {
                *o -= cb * v;
            }
        }
        obj
    }

    // c_Bᵀ B⁻¹, read off the artificial columns.
    fn duals(&self, cost: &[BigRational], art_start: usize) -> RatVector {
        let m = self.rows.len();
        let mut y = vec![BigRational::zero(); m];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (i, yi) in y.iter_mut().enumerate() {
                *yi += cb * &row[art_start + i];
            }
        }
        y
    }

    fn column_values(&self) -> RatVector {
        let mut x = vec![BigRational::zero(); self.width];
        for (r, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs(r).clone();
        }
        x
    }
}

/// Solves `lp` exactly. Deterministic for fixed input.
pub fn lp_solve(lp: &LinearProgram) -> Result<LpResult> {
    lp.validate()?;
    let n = lp.num_vars();

    let kept_ineq = distinct_rows(&lp.ineq, &lp.ineq_rhs);
    let kept_eq = distinct_rows(&lp.eq, &lp.eq_rhs);
    let m_ineq = kept_ineq.len();
    let m = m_ineq + kept_eq.len();

    // Column layout: x⁺ (all vars), x⁻ (free vars), slacks, artificials.
    let mut neg_col: Vec<Option<usize>> = vec![None; n];
    let mut next = n;
    for (col, &nonneg) in neg_col.iter_mut().zip(&lp.nonnegative) {
        if !nonneg {
            *col = Some(next);
            next += 1;
        }
    }
    let slack_start = next;
    let art_start = slack_start + m_ineq;
    let width = art_start + m;

    let mut sigma: Vec<bool> = Vec::with_capacity(m); // true = row negated
    let mut rows: Vec<RatVector> = Vec::with_capacity(m);
    let sources = kept_ineq
        .iter()
        .map(|&i| (lp.ineq.row(i), &lp.ineq_rhs[i]))
        .chain(kept_eq.iter().map(|&i| (lp.eq.row(i), &lp.eq_rhs[i])));
    for (r, (coeffs, rhs)) in sources.enumerate() {
        let mut row = vec![BigRational::zero(); width + 1];
        for (j, a) in coeffs.iter().enumerate() {
            row[j] = a.clone();
            if let Some(nc) = neg_col[j] {
                row[nc] = -a;
            }
        }
        if r < m_ineq {
            row[slack_start + r] = BigRational::one();
        }
        row[width] = rhs.clone();
        let flip = rhs.is_negative();
        if flip {
            for v in row.iter_mut() {
                *v = -&*v;
            }
        }
        row[art_start + r] = BigRational::one();
        sigma.push(flip);
        rows.push(row);
    }
    let mut tab = Tableau {
        rows,
        basis: (art_start..width).collect(),
        width,
    };

    // Row multipliers on the original (unflipped) rows, scattered back to
    // the caller's indexing; duplicate rows get zero.
    let scatter = |y: &[BigRational], scale: &BigRational| -> Multipliers {
        let mut ineq = vec![BigRational::zero(); lp.ineq.rows()];
        let mut eq = vec![BigRational::zero(); lp.eq.rows()];
        for (r, yr) in y.iter().enumerate() {
            let u = if sigma[r] { -yr } else { yr.clone() };
            let v = -u * scale;
            if r < m_ineq {
                ineq[kept_ineq[r]] = v;
            } else {
                eq[kept_eq[r - m_ineq]] = v;
            }
        }
        Multipliers { ineq, eq }
    };

    // Phase I: minimize the sum of artificials.
    let mut phase1_cost = vec![BigRational::zero(); width];
    for c in phase1_cost[art_start..].iter_mut() {
        *c = BigRational::one();
    }
    let mut obj = tab.objective_row(&phase1_cost);
    if tab.run(&mut obj, art_start).is_some() {
        return Err(Error::Internal("phase I unbounded".into()));
    }
    let infeasibility: BigRational = tab
        .basis
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b >= art_start)
        .map(|(r, _)| tab.rhs(r).clone())
        .sum();
    if infeasibility.is_positive() {
        let y = tab.duals(&phase1_cost, art_start);
        let raw = scatter(&y, &BigRational::one());
        let scale = -lp.rhs_value(&raw).recip();
        return Ok(LpResult::Infeasible {
            farkas: scatter(&y, &scale),
        });
    }

    // Drive zero-level artificials out of the basis where possible; rows
    // where that fails are redundant and keep their artificial at zero.
    for r in 0..m {
        if tab.basis[r] < art_start {
            continue;
        }
        if let Some(j) = (0..art_start).find(|&j| !tab.rows[r][j].is_zero()) {
            tab.pivot(r, j, &mut obj);
        }
    }

    // Phase II: minimize w = -s·c.
    let s = lp.sense.sign();
    let mut cost = vec![BigRational::zero(); width];
    for j in 0..n {
        let w = -(&s * &lp.objective[j]);
        if let Some(nc) = neg_col[j] {
            cost[nc] = -&w;
        }
        cost[j] = w;
    }
    let mut obj = tab.objective_row(&cost);
    let unbounded = tab.run(&mut obj, art_start);

    let cols = tab.column_values();
    let to_x = |v: &[BigRational]| -> RatVector {
        (0..n)
            .map(|j| match neg_col[j] {
                Some(nc) => &v[j] - &v[nc],
                None => v[j].clone(),
            })
            .collect()
    };
    let point = to_x(&cols);

    if let Some(j) = unbounded {
        let mut dir = vec![BigRational::zero(); width];
        dir[j] = BigRational::one();
        for (r, &b) in tab.basis.iter().enumerate() {
            dir[b] = -&tab.rows[r][j];
        }
        return Ok(LpResult::Unbounded {
            point,
            ray: to_x(&dir),
        });
    }

    let value = dot(&lp.objective, &point);
    let y = tab.duals(&cost, art_start);
    Ok(LpResult::Optimal {
        point,
        value,
        dual: scatter(&y, &BigRational::one()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn qv(v: &[i64]) -> RatVector {
        v.iter().map(|&x| q(x)).collect()
    }

    fn qm(rows: &[&[i64]]) -> RatMatrix {
        IntMatrix::from_i64_rows(rows).unwrap().to_rational()
    }

    fn unit_box(n: usize) -> (RatMatrix, RatVector) {
        let eye = RatMatrix::identity(n);
        let g = eye.vstack(&eye.map(|x| -x)).unwrap();
        let mut h = vec![q(1); n];
        h.extend(vec![q(0); n]);
        (g, h)
    }

    #[test]
    fn box_maximum() {
        let (g, h) = unit_box(2);
        let lp = LinearProgram::new(2).maximize(qv(&[1, 1])).with_ineq(g, h);
        let res = lp_solve(&lp).unwrap();
        assert!(res.verify(&lp));
        match res {
            LpResult::Optimal { point, value, .. } => {
                assert_eq!(value, q(2));
                assert_eq!(point, qv(&[1, 1]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn farkas_witness() {
        let lp = LinearProgram::new(1).with_ineq(qm(&[&[1], &[-1]]), qv(&[0, -1]));
        let res = lp_solve(&lp).unwrap();
        assert!(res.verify(&lp));
        match res {
            LpResult::Infeasible { farkas } => assert_eq!(farkas.ineq, qv(&[1, 1])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded_ray() {
        let lp = LinearProgram::new(1).maximize(qv(&[1])).with_ineq(qm(&[&[-1]]), qv(&[0]));
        let res = lp_solve(&lp).unwrap();
        assert!(res.verify(&lp));
        match res {
            LpResult::Unbounded { ray, .. } => assert_eq!(ray, qv(&[1])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn minimize_with_equalities() {
        // min x + 2y  s.t. x + y = 3, x <= 2, y free
        let lp = LinearProgram::new(2)
            .minimize(qv(&[1, 2]))
            .with_ineq(qm(&[&[1, 0]]), qv(&[2]))
            .with_eq(qm(&[&[1, 1]]), qv(&[3]));
        let res = lp_solve(&lp).unwrap();
        assert!(res.verify(&lp));
        assert_eq!(res.value(), Some(&q(4)));
    }

    #[test]
    fn nonnegative_variables() {
        // max x0 - x1, x >= 0, x0 + x1 <= 4, x0 <= 3
        let lp = LinearProgram::new(2)
            .maximize(qv(&[1, -1]))
            .with_ineq(qm(&[&[1, 1], &[1, 0]]), qv(&[4, 3]))
            .nonnegative();
        let res = lp_solve(&lp).unwrap();
        assert!(res.verify(&lp));
        assert_eq!(res.value(), Some(&q(3)));
    }

    #[test]
    fn infeasible_equalities_with_sign_constraints() {
        // l0 + l1 = 1, l0 + l1 = 2 over l >= 0
        let lp = LinearProgram::new(2)
            .with_eq(qm(&[&[1, 1], &[1, 1]]), qv(&[1, 2]))
            .nonnegative();
        let res = lp_solve(&lp).unwrap();
        assert_eq!(res.status(), LpStatus::Infeasible);
        assert!(res.verify(&lp));
    }

    #[test]
    fn duplicate_and_redundant_rows() {
        let lp = LinearProgram::new(2)
            .maximize(qv(&[1, 0]))
            .with_ineq(qm(&[&[1, 0], &[1, 0], &[0, 1]]), qv(&[5, 5, 1]))
            .with_eq(qm(&[&[0, 1], &[0, 2]]), qv(&[1, 2]));
        let res = lp_solve(&lp).unwrap();
        assert!(res.verify(&lp));
        assert_eq!(res.value(), Some(&q(5)));
    }

    #[test]
    fn empty_program() {
        let lp = LinearProgram::new(0);
        let res = lp_solve(&lp).unwrap();
        assert!(res.verify(&lp));
        assert_eq!(res.status(), LpStatus::Optimal);
        let lp = LinearProgram::new(2).maximize(qv(&[0, 1]));
        assert_eq!(lp_solve(&lp).unwrap().status(), LpStatus::Unbounded);
    }

    #[test]
    fn dimension_errors() {
        let lp = LinearProgram::new(2).with_ineq(qm(&[&[1]]), qv(&[0]));
        assert!(matches!(lp_solve(&lp), Err(Error::Dimension(_))));
    }

    #[test]
    fn deterministic() {
        let (g, h) = unit_box(3);
        let lp = LinearProgram::new(3).maximize(qv(&[1, 0, 0])).with_ineq(g, h);
        assert_eq!(lp_solve(&lp).unwrap(), lp_solve(&lp).unwrap());
    }

    #[test]
    fn feasibility_helper() {
        let (g, h) = unit_box(2);
        let f = lp_feasible(&g, &h, &RatMatrix::zeros(0, 2), &[]).unwrap();
        assert!(f.is_feasible());
        let p = f.point().unwrap();
        assert!(g.mul_vec(p).unwrap().iter().zip(&h).all(|(a, b)| a <= b));
    }
}
