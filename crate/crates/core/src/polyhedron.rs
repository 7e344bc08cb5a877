//! Polyhedra in H-representation `{x : A x <= b}`.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::budget::{choose, ensure, Budgets};
use crate::error::{Error, Result};
use crate::linalg::{det, rank, rank_of_rows, solve_square};
use crate::lp::{feasibility, lp_solve, LinearProgram, LpResult};
use crate::matrix::{dot, IntMatrix, IntVector, RatVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polyhedron {
    a: IntMatrix,
    b: IntVector,
    full_rank: bool,
}

/// A vertex of the real polyhedron together with its tight constraints.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RealVertex {
    pub point: RatVector,
    pub tight_rows: Vec<usize>,
}

impl RealVertex {
    pub fn is_integral(&self) -> bool {
        self.point.iter().all(|x| x.is_integer())
    }

    pub fn integer_point(&self) -> Option<IntVector> {
        self.is_integral()
            .then(|| self.point.iter().map(|x| x.to_integer()).collect())
    }
}

/// Exact range of one coordinate; `None` means infinite in that direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateBounds {
    pub lower: Option<BigRational>,
    pub upper: Option<BigRational>,
}

impl Polyhedron {
    /// Requires `rank(A) = n`.
    pub fn new(a: IntMatrix, b: IntVector) -> Result<Self> {
        let p = Self::relaxed(a, b)?;
        if !p.full_rank {
            return Err(Error::Rank {
                rank: rank(&p.a),
                expected: p.dim(),
            });
        }
        Ok(p)
    }

    /// Accepts rank-deficient systems and records the violation in
    /// [`Polyhedron::is_full_rank`].
    pub fn relaxed(a: IntMatrix, b: IntVector) -> Result<Self> {
        if a.rows() == 0 || a.cols() == 0 {
            return Err(Error::Dimension(format!(
                "constraint matrix must be nonempty, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        if b.len() != a.rows() {
            return Err(Error::Dimension(format!(
                "{} right-hand sides for {} rows",
                b.len(),
                a.rows()
            )));
        }
        let full_rank = rank(&a) == a.cols();
        Ok(Polyhedron { a, b, full_rank })
    }

    pub fn from_i64(a: &[&[i64]], b: &[i64]) -> Result<Self> {
        Self::new(IntMatrix::from_i64_rows(a)?, crate::matrix::int_vector(b))
    }

    pub fn a(&self) -> &IntMatrix {
        &self.a
    }

    pub fn b(&self) -> &IntVector {
        &self.b
    }

    /// Ambient dimension n.
    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    /// Number of inequalities m.
    pub fn num_constraints(&self) -> usize {
        self.a.rows()
    }

    pub fn is_full_rank(&self) -> bool {
        self.full_rank
    }

    fn require_full_rank(&self) -> Result<()> {
        if self.full_rank {
            Ok(())
        } else {
            Err(Error::Rank {
                rank: rank(&self.a),
                expected: self.dim(),
            })
        }
    }

    /// Slack vector `b - A x`.
    pub fn slack(&self, x: &[BigInt]) -> IntVector {
        self.a
            .row_iter()
            .zip(&self.b)
            .map(|(row, bi)| bi - dot(row, x))
            .collect()
    }

    pub fn slack_rational(&self, x: &[BigRational]) -> RatVector {
        self.a
            .row_iter()
            .zip(&self.b)
            .map(|(row, bi)| {
                let ax = row
                    .iter()
                    .zip(x)
                    .fold(BigRational::zero(), |acc, (a, v)| acc + v * a);
                BigRational::from_integer(bi.clone()) - ax
            })
            .collect()
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.slack(x).iter().all(|s| !s.is_negative())
    }

    /// The constraint system as an LP with zero objective.
    pub fn lp(&self) -> LinearProgram {
        LinearProgram::new(self.dim()).with_int_ineq(&self.a, &self.b)
    }

    pub fn is_feasible(&self) -> Result<bool> {
        Ok(feasibility(&self.lp())?.is_feasible())
    }

    /// All vertices, by enumeration of nonsingular n-row bases.
    ///
    /// Output is duplicate-free and sorted lexicographically by point.
    pub fn real_vertices(&self, budgets: &Budgets) -> Result<Vec<RealVertex>> {
        self.require_full_rank()?;
        let (m, n) = (self.num_constraints(), self.dim());
        ensure("basis", choose(m, n), budgets.bases)?;
        let bases: Vec<Vec<usize>> = (0..m).combinations(n).collect();
        let points: Vec<RatVector> = bases
            .par_iter()
            .filter_map(|rows| {
                let sub = self.a.select_rows(rows);
                if det(&sub).expect("square").is_zero() {
                    return None;
                }
                let rhs: IntVector = rows.iter().map(|&i| self.b[i].clone()).collect();
                let x = solve_square(&sub, &rhs).expect("nonsingular");
                self.slack_rational(&x)
                    .iter()
                    .all(|s| !s.is_negative())
                    .then_some(x)
            })
            .collect();
        let unique: BTreeSet<RatVector> = points.into_iter().collect();
        Ok(unique
            .into_iter()
            .map(|point| {
                let tight_rows = self
                    .slack_rational(&point)
                    .iter()
                    .positions(Zero::is_zero)
                    .collect();
                RealVertex { point, tight_rows }
            })
            .collect())
    }

    /// Exact minimum and maximum of `x_i` over the polyhedron.
    pub fn coordinate_bounds(&self, i: usize) -> Result<CoordinateBounds> {
        if i >= self.dim() {
            return Err(Error::Parameter(format!(
                "coordinate {i} of a {}-dimensional polyhedron",
                self.dim()
            )));
        }
        let mut e = vec![BigRational::zero(); self.dim()];
        e[i] = BigRational::one();
        let solve = |lp: LinearProgram| -> Result<Option<BigRational>> {
            match lp_solve(&lp)? {
                LpResult::Optimal { value, .. } => Ok(Some(value)),
                LpResult::Unbounded { .. } => Ok(None),
                LpResult::Infeasible { .. } => Err(Error::Infeasible),
            }
        };
        let upper = solve(self.lp().maximize(e.clone()))?;
        let lower = solve(self.lp().minimize(e))?;
        Ok(CoordinateBounds { lower, upper })
    }

    /// Finite bounds for every coordinate, or the first unbounded one.
    pub fn bounding_box(&self) -> Result<Vec<(BigRational, BigRational)>> {
        (0..self.dim())
            .map(|i| {
                let cb = self.coordinate_bounds(i)?;
                match (cb.lower, cb.upper) {
                    (Some(lo), Some(hi)) => Ok((lo, hi)),
                    _ => Err(Error::Unbounded(i)),
                }
            })
            .collect()
    }

    pub fn is_bounded(&self) -> Result<bool> {
        match self.bounding_box() {
            Ok(_) => Ok(true),
            Err(Error::Unbounded(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// Checks the classical characterization of a vertex: the tight rows
    /// contain n linearly independent constraints.
    pub fn tight_rows_have_full_rank(&self, v: &RealVertex) -> bool {
        rank_of_rows(&self.a, &v.tight_rows) == self.dim()
    }
}
