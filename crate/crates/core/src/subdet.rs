//! Maximal subdeterminants Δ_k(A), Δ(A) and Δ_ext.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::budget::{choose, ensure, Budgets};
use crate::error::{Error, Result};
use crate::linalg::{det, rank};
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaProfile {
    /// Δ_1(A) = ‖A‖_max.
    pub delta_1: BigInt,
    /// Δ(A), the maximum over maximal (rank-sized) minors.
    pub delta_rank: BigInt,
    /// Δ of the augmented matrix (A | b).
    pub delta_ext: BigInt,
    pub per_k: Option<Vec<(usize, BigInt)>>,
}

/// Maximum absolute value of the k×k minors of `a`.
pub fn delta_k(a: &IntMatrix, k: usize, budgets: &Budgets) -> Result<BigInt> {
    let (m, n) = (a.rows(), a.cols());
    if k == 0 || k > m.min(n) {
        return Err(Error::Parameter(format!(
            "k = {k} outside 1..={} for a {m}x{n} matrix",
            m.min(n)
        )));
    }
    let needed = choose(m, k).saturating_mul(choose(n, k));
    ensure("minor", needed, budgets.minors)?;

    let row_sets: Vec<Vec<usize>> = (0..m).combinations(k).collect();
    let col_sets: Vec<Vec<usize>> = (0..n).combinations(k).collect();
    let best = row_sets
        .par_iter()
        .map(|rows| {
            let sub = a.select_rows(rows);
            let mut best = BigInt::zero();
            for cols in &col_sets {
                let d = det(&sub.select_cols(cols)).expect("square minor").abs();
                if d > best {
                    best = d;
                }
            }
            best
        })
        .max()
        .unwrap_or_default();
    Ok(best)
}

fn require_full_column_rank(a: &IntMatrix) -> Result<()> {
    let r = rank(a);
    if r != a.cols() {
        return Err(Error::Rank {
            rank: r,
            expected: a.cols(),
        });
    }
    Ok(())
}

/// Δ(A) = Δ_n(A) for a matrix of full column rank n.
pub fn delta(a: &IntMatrix, budgets: &Budgets) -> Result<BigInt> {
    require_full_column_rank(a)?;
    delta_k(a, a.cols(), budgets)
}

/// Δ_n of the augmented matrix (A | b).
pub fn delta_ext(a: &IntMatrix, b: &[BigInt], budgets: &Budgets) -> Result<BigInt> {
    require_full_column_rank(a)?;
    let aug = a.append_col(b)?;
    delta_k(&aug, a.cols(), budgets)
}

/// Collects Δ_1, Δ, Δ_ext and, when requested, the full Δ_k table.
pub fn profile(a: &IntMatrix, b: &[BigInt], per_k: bool, budgets: &Budgets) -> Result<DeltaProfile> {
    let per_k = if per_k {
        Some(
            (1..=a.rows().min(a.cols()))
                .map(|k| delta_k(a, k, budgets).map(|d| (k, d)))
                .collect::<Result<Vec<_>>>()?,
        )
    } else {
        None
    };
    Ok(DeltaProfile {
        delta_1: a.max_abs(),
        delta_rank: delta(a, budgets)?,
        delta_ext: delta_ext(a, b, budgets)?,
        per_k,
    })
}
