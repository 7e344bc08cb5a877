//! Enumeration budgets.
//!
//! Every exhaustive enumeration in the crate is guarded by one of these
//! limits. Exceeding a limit is an error, never a silent truncation.

use std::str::FromStr;

use crate::error::{Error, Result};

/// Environment variable holding default budget overrides, in the same
/// `key=value,key=value` syntax accepted by [`Budgets::apply`].
pub const BUDGET_ENV: &str = "DELTAHULL_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Maximum number of k×k minors examined by a single Δ_k computation.
    pub minors: u64,
    /// Maximum number of n-row subsets examined by basis enumerations.
    pub bases: u64,
    /// Maximum number of lattice points collected from one polytope.
    pub lattice_points: u64,
    /// Maximum number of hull vertices for face enumeration.
    pub face_vertices: u64,
    /// Maximum grid size Δ^n for the γ brute force.
    pub gamma_grid: u64,
    /// Largest grid Δ^n for which the verification pipeline uses an exact γ
    /// instead of the 2Δ^(n-1) upper bound.
    pub lemma_gamma_grid: u64,
    /// Rejection-sampling attempts for random instances.
    pub gen_attempts: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            minors: 10_000_000,
            bases: 1_000_000,
            lattice_points: 1_000_000,
            face_vertices: 20,
            gamma_grid: 64,
            lemma_gamma_grid: 9,
            gen_attempts: 10_000,
        }
    }
}

impl Budgets {
    /// Defaults, overridden by [`BUDGET_ENV`] when it is set.
    pub fn from_env() -> Result<Self> {
        let mut budgets = Budgets::default();
        if let Ok(spec) = std::env::var(BUDGET_ENV) {
            budgets.apply(&spec)?;
        }
        Ok(budgets)
    }

    /// Applies overrides of the form `minors=1000,points=50`.
    pub fn apply(&mut self, spec: &str) -> Result<()> {
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parameter(format!("budget item `{item}` is not key=value")))?;
            let value = parse_count(value.trim())
                .ok_or_else(|| Error::Parameter(format!("budget value `{value}` is not a count")))?;
            let slot = match key.trim() {
                "minors" => &mut self.minors,
                "bases" => &mut self.bases,
                "points" | "lattice_points" => &mut self.lattice_points,
                "faces" | "face_vertices" => &mut self.face_vertices,
                "gamma" | "gamma_grid" => &mut self.gamma_grid,
                "lemma_gamma" | "lemma_gamma_grid" => &mut self.lemma_gamma_grid,
                "attempts" | "gen_attempts" => &mut self.gen_attempts,
                other => return Err(Error::Parameter(format!("unknown budget `{other}`"))),
            };
            *slot = value;
        }
        Ok(())
    }
}

impl FromStr for Budgets {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut b = Budgets::default();
        b.apply(s)?;
        Ok(b)
    }
}

// Accepts plain integers and `1e7`-style powers of ten.
fn parse_count(s: &str) -> Option<u64> {
    if let Ok(v) = s.parse::<u64>() {
        return Some(v);
    }
    let (mantissa, exp) = s.split_once(['e', 'E'])?;
    let mantissa: u64 = mantissa.parse().ok()?;
    let exp: u32 = exp.parse().ok()?;
    mantissa.checked_mul(10u64.checked_pow(exp)?)
}

/// Number of k-subsets of an n-set, saturating at `u128::MAX`.
pub(crate) fn choose(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub(crate) fn ensure(what: &'static str, needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        Err(Error::Budget {
            what,
            needed: needed.to_string(),
            budget,
        })
    } else {
        Ok(())
    }
}
