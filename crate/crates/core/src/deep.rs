//! Δ-deep bases.
//!
//! An n-subset `B` of the constraint rows is a Δ-deep base when `A_B` is
//! nonsingular and the band system
//!
//! ```text
//!     b_B - (Δ-1)·1 <= A_B x <= b_B,    A_rest x <= b_rest
//! ```
//!
//! is feasible over the reals.

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::budget::{choose, ensure, Budgets};
use crate::error::{Error, Result};
use crate::linalg::det;
use crate::lp::{feasibility, Feasibility, LinearProgram};
use crate::matrix::{to_rational_vector, IntMatrix, IntVector, RatVector};
use crate::polyhedron::Polyhedron;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeepBase {
    /// Sorted row indices, `|rows| = n`.
    pub rows: Vec<usize>,
    /// `|det(A_B)|`, nonzero.
    pub det_abs: BigInt,
    /// A point satisfying the band system.
    pub witness: RatVector,
}

fn check_delta(delta: &BigInt) -> Result<()> {
    if delta.is_positive() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("Δ must be positive, got {delta}")))
    }
}

// The band system for `rows`: the original system plus the lower band rows
// -A_B x <= -(b_B - (Δ-1)).
fn band_system(p: &Polyhedron, rows: &[usize], delta: &BigInt) -> LinearProgram {
    let a = p.a();
    let band = a.select_rows(rows).map(|x| -x);
    let g = a.vstack(&band).expect("same width");
    let slack = delta - BigInt::one();
    let mut h: IntVector = p.b().clone();
    h.extend(rows.iter().map(|&i| -(&p.b()[i] - &slack)));
    LinearProgram::new(p.dim()).with_int_ineq(&g, &h)
}

/// Exact substitution check of the band system at `x`.
pub fn satisfies_band_system(p: &Polyhedron, rows: &[usize], delta: &BigInt, x: &[BigRational]) -> bool {
    let limit = BigRational::from_integer(delta - BigInt::one());
    p.slack_rational(x)
        .iter()
        .enumerate()
        .all(|(i, s)| !s.is_negative() && (!rows.contains(&i) || *s <= limit))
}

fn det_abs(a: &IntMatrix, rows: &[usize]) -> BigInt {
    det(&a.select_rows(rows)).expect("square").abs()
}

/// Every Δ-deep base of `p`, sorted by row set.
pub fn enumerate_deep_bases(p: &Polyhedron, delta: &BigInt, budgets: &Budgets) -> Result<Vec<DeepBase>> {
    check_delta(delta)?;
    if !p.is_full_rank() {
        return Err(Error::Rank {
            rank: crate::linalg::rank(p.a()),
            expected: p.dim(),
        });
    }
    let (m, n) = (p.num_constraints(), p.dim());
    ensure("basis", choose(m, n), budgets.bases)?;
    let subsets: Vec<Vec<usize>> = (0..m).combinations(n).collect();
    let found: Vec<Option<DeepBase>> = subsets
        .par_iter()
        .map(|rows| {
            let d = det_abs(p.a(), rows);
            if d.is_zero() {
                return Ok(None);
            }
            Ok(match feasibility(&band_system(p, rows, delta))? {
                Feasibility::Feasible(witness) => Some(DeepBase {
                    rows: rows.clone(),
                    det_abs: d,
                    witness,
                }),
                Feasibility::Infeasible(_) => None,
            })
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// β_Δ(P), the number of Δ-deep bases.
pub fn beta(p: &Polyhedron, delta: &BigInt, budgets: &Budgets) -> Result<usize> {
    Ok(enumerate_deep_bases(p, delta, budgets)?.len())
}

/// Rows whose slack at `v` is at most Δ-1.
pub fn near_tight_rows(p: &Polyhedron, v: &[BigInt], delta: &BigInt) -> Vec<usize> {
    let limit = delta - BigInt::one();
    p.slack(v).iter().positions(|s| *s <= limit).collect()
}

/// The lexicographically smallest nonsingular n-subset of the near-tight
/// rows of the integer point `v`; `v` itself is the band-system witness.
///
/// Failing to find one contradicts the near-tightness theorem for hull
/// vertices and is reported as [`Error::Violation`].
pub fn deep_base_for_vertex(p: &Polyhedron, delta: &BigInt, v: &[BigInt]) -> Result<DeepBase> {
    check_delta(delta)?;
    if !p.contains(v) {
        return Err(Error::Parameter("point lies outside the polyhedron".into()));
    }
    let near = near_tight_rows(p, v, delta);
    near.iter()
        .copied()
        .combinations(p.dim())
        .find_map(|rows| {
            let d = det_abs(p.a(), &rows);
            (!d.is_zero()).then(|| DeepBase {
                rows,
                det_abs: d,
                witness: to_rational_vector(v),
            })
        })
        .ok_or_else(|| {
            Error::Violation(format!(
                "no nonsingular base among near-tight rows {near:?} at {v:?} (Δ = {delta})"
            ))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::int_vector;

    fn unit_square() -> Polyhedron {
        Polyhedron::from_i64(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], &[1, 1, 0, 0]).unwrap()
    }

    fn triangle() -> Polyhedron {
        Polyhedron::from_i64(&[&[2, 2], &[-1, 0], &[0, -1]], &[3, 0, 0]).unwrap()
    }

    fn rows(bases: &[DeepBase]) -> Vec<Vec<usize>> {
        bases.iter().map(|b| b.rows.clone()).collect()
    }

    #[test]
    fn square_bases() {
        let b = Budgets::default();
        let p = unit_square();
        let corners = vec![vec![0, 1], vec![0, 3], vec![1, 2], vec![2, 3]];
        for delta in [1, 2] {
            let found = enumerate_deep_bases(&p, &BigInt::from(delta), &b).unwrap();
            assert_eq!(rows(&found), corners);
            for base in &found {
                assert!(satisfies_band_system(&p, &base.rows, &BigInt::from(delta), &base.witness));
            }
        }
        assert_eq!(beta(&p, &BigInt::from(1), &b).unwrap(), 4);
    }

    #[test]
    fn infeasible_has_no_bases() {
        let p = Polyhedron::from_i64(&[&[1], &[-1]], &[0, -1]).unwrap();
        assert!(enumerate_deep_bases(&p, &BigInt::from(3), &Budgets::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn rejects_bad_delta() {
        let p = unit_square();
        assert!(enumerate_deep_bases(&p, &BigInt::from(0), &Budgets::default()).is_err());
    }

    #[test]
    fn square_vertex_base() {
        let base = deep_base_for_vertex(&unit_square(), &BigInt::from(1), &int_vector(&[1, 1])).unwrap();
        assert_eq!(base.rows, vec![0, 1]);
        assert_eq!(base.det_abs, BigInt::from(1));
    }

    #[test]
    fn triangle_vertex_base() {
        let p = triangle();
        let delta = BigInt::from(2);
        let v = int_vector(&[1, 0]);
        assert_eq!(p.slack(&v), int_vector(&[1, 1, 0]));
        let base = deep_base_for_vertex(&p, &delta, &v).unwrap();
        assert_eq!(base.rows, vec![0, 1]);
        assert!(satisfies_band_system(&p, &base.rows, &delta, &base.witness));
    }

    #[test]
    fn violation_is_reported() {
        // Interior point of a large box at Δ = 1: no tight rows at all.
        let p = Polyhedron::from_i64(&[&[1], &[-1]], &[5, 5]).unwrap();
        let err = deep_base_for_vertex(&p, &BigInt::from(1), &int_vector(&[0])).unwrap_err();
        assert!(matches!(err, Error::Violation(_)));
    }
}
