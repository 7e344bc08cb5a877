//! Largest convex-independent subsets of the grid `{0..Δ-1}^n`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use itertools::Itertools;
use num_bigint::BigInt;

use crate::budget::{ensure, Budgets};
use crate::error::{Error, Result};
use crate::hull::convex_combination;
use crate::matrix::IntVector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaResult {
    pub value: usize,
    pub witness: Vec<IntVector>,
}

/// True iff no point of `points` is a convex combination of the others.
pub fn is_convex_independent(points: &[IntVector]) -> Result<bool> {
    for (i, p) in points.iter().enumerate() {
        let others: Vec<&IntVector> = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, q)| q)
            .collect();
        if convex_combination(p, &others)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of grid points Δ^n, if it fits in a u64.
pub fn grid_size(n: usize, delta: u64) -> Option<u64> {
    delta.checked_pow(u32::try_from(n).ok()?)
}

pub fn grid(n: usize, delta: u64) -> Vec<IntVector> {
    (0..n)
        .map(|_| (0..delta).map(BigInt::from))
        .multi_cartesian_product()
        .collect()
}

struct Search<'a> {
    grid: &'a [IntVector],
    best: Vec<usize>,
    cap: usize,
}

impl Search<'_> {
    fn inside(&self, p: usize, set: &[usize]) -> Result<bool> {
        let members: Vec<&IntVector> = set.iter().map(|&i| &self.grid[i]).collect();
        Ok(convex_combination(&self.grid[p], &members)?.is_some())
    }

    // `chosen` is convex independent; `candidates` are later grid points
    // outside conv(chosen).
    fn descend(&mut self, chosen: &mut Vec<usize>, candidates: &[usize]) -> Result<()> {
        if chosen.len() > self.best.len() {
            self.best = chosen.clone();
        }
        for (pos, &c) in candidates.iter().enumerate() {
            if self.best.len() >= self.cap {
                return Ok(());
            }
            let rest = &candidates[pos + 1..];
            if chosen.len() + 1 + rest.len() <= self.best.len() {
                return Ok(());
            }
            chosen.push(c);
            let mut independent = true;
            for k in 0..chosen.len() - 1 {
                let others: Vec<usize> = chosen
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != k)
                    .map(|(_, &i)| i)
                    .collect();
                if self.inside(chosen[k], &others)? {
                    independent = false;
                    break;
                }
            }
            if independent {
                let mut next = Vec::with_capacity(rest.len());
                for &r in rest {
                    if !self.inside(r, chosen)? {
                        next.push(r);
                    }
                }
                if chosen.len() + next.len() > self.best.len() {
                    self.descend(chosen, &next)?;
                }
            }
            chosen.pop();
        }
        Ok(())
    }
}

/// γ(n, Δ) by exact branch and bound over subsets of the grid.
///
/// Points are added in lexicographic order; grid points already inside the
/// hull of the current set are dropped from the branch, and the search
/// stops early once it reaches the upper bound 2·Δ^(n-1).
pub fn gamma_bruteforce(n: usize, delta: u64, budgets: &Budgets) -> Result<GammaResult> {
    if n == 0 || delta == 0 {
        return Err(Error::Parameter(format!("γ needs n >= 1 and Δ >= 1, got ({n}, {delta})")));
    }
    let size = grid_size(n, delta).map_or(u128::MAX, u128::from);
    ensure("gamma grid", size, budgets.gamma_grid)?;
    let pts = grid(n, delta);
    let brass = grid_size(n - 1, delta)
        .and_then(|v| v.checked_mul(2))
        .map_or(usize::MAX, |v| v as usize);
    let mut search = Search {
        grid: &pts,
        best: Vec::new(),
        cap: brass.min(pts.len()),
    };
    let all: Vec<usize> = (0..pts.len()).collect();
    search.descend(&mut Vec::new(), &all)?;
    let witness: Vec<IntVector> = search.best.iter().map(|&i| pts[i].clone()).collect();
    Ok(GammaResult {
        value: witness.len(),
        witness,
    })
}

fn cache() -> &'static Mutex<HashMap<(usize, u64), usize>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u64), usize>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Memoized [`gamma_bruteforce`] value.
pub fn gamma_value(n: usize, delta: u64, budgets: &Budgets) -> Result<usize> {
    if let Some(&v) = cache().lock().expect("gamma cache").get(&(n, delta)) {
        return Ok(v);
    }
    let v = gamma_bruteforce(n, delta, budgets)?.value;
    cache().lock().expect("gamma cache").insert((n, delta), v);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::int_vector;

    fn pts(v: &[&[i64]]) -> Vec<IntVector> {
        v.iter().map(|p| int_vector(p)).collect()
    }

    #[test]
    fn independence_examples() {
        assert!(!is_convex_independent(&pts(&[&[0, 0], &[1, 0], &[2, 0]])).unwrap());
        assert!(is_convex_independent(&pts(&[&[0, 0], &[1, 0], &[0, 1]])).unwrap());
        assert!(is_convex_independent(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])).unwrap());
        assert!(!is_convex_independent(&pts(&[&[0, 0], &[2, 0], &[0, 2], &[1, 1]])).unwrap());
    }

    #[test]
    fn small_gammas() {
        let b = Budgets::default();
        assert_eq!(gamma_bruteforce(1, 1, &b).unwrap().value, 1);
        for d in 2..6 {
            assert_eq!(gamma_bruteforce(1, d, &b).unwrap().value, 2);
        }
        let g = gamma_bruteforce(2, 2, &b).unwrap();
        assert_eq!(g.value, 4);
        assert!(is_convex_independent(&g.witness).unwrap());
        assert_eq!(gamma_bruteforce(2, 1, &b).unwrap().value, 1);
    }

    #[test]
    fn budget_and_parameters() {
        let b = Budgets::default();
        assert!(matches!(gamma_bruteforce(3, 5, &b), Err(Error::Budget { .. })));
        assert!(matches!(gamma_bruteforce(0, 2, &b), Err(Error::Parameter(_))));
        assert!(matches!(gamma_bruteforce(2, 0, &b), Err(Error::Parameter(_))));
    }

    #[test]
    fn grid_order() {
        assert_eq!(grid(2, 2), pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]));
        assert_eq!(grid_size(3, 4), Some(64));
    }
}
