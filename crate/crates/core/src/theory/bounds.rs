//! Closed-form vertex-count bounds.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{Pow, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundValues {
    /// 2·C(m,n)·Δ^(n-1).
    pub main_bound: BigInt,
    /// Maximum vertex count of an n-polytope with m facets.
    pub xi: BigInt,
    /// Upper bound 2·Δ^(n-1) on γ(n, Δ).
    pub brass: BigInt,
    /// Lower bound (4/n)·Δ^(n-2) on γ(n, Δ).
    pub erdos_furedi: BigRational,
}

fn choose(n: usize, k: usize) -> BigInt {
    if k > n {
        BigInt::from(0)
    } else {
        binomial(BigInt::from(n), BigInt::from(k))
    }
}

pub fn main_bound(n: usize, m: usize, delta: &BigInt) -> BigInt {
    BigInt::from(2) * choose(m, n) * Pow::pow(delta, n.saturating_sub(1))
}

pub fn brass(n: usize, delta: &BigInt) -> BigInt {
    BigInt::from(2) * Pow::pow(delta, n.saturating_sub(1))
}

pub fn erdos_furedi(n: usize, delta: &BigInt) -> BigRational {
    let d = BigRational::from_integer(delta.clone());
    let power = n as i32 - 2;
    let scale = BigRational::new(BigInt::from(4), BigInt::from(n));
    scale * Pow::pow(&d, power)
}

/// ξ(n, m): `m/(m-s)·C(m-s, s)` for n = 2s, `2·C(m-s-1, s)` for n = 2s+1.
pub fn xi(n: usize, m: usize) -> Result<BigInt> {
    if n == 0 || m < n {
        return Err(Error::Parameter(format!("ξ needs m >= n >= 1, got n = {n}, m = {m}")));
    }
    let s = n / 2;
    if n % 2 == 1 {
        return Ok(BigInt::from(2) * choose(m - s - 1, s));
    }
    let v = BigRational::new(BigInt::from(m), BigInt::from(m - s))
        * BigRational::from_integer(choose(m - s, s));
    if !v.is_integer() {
        return Err(Error::Internal(format!("ξ({n},{m}) = {v} is not integral")));
    }
    Ok(v.to_integer())
}

pub fn bound_formulas(n: usize, m: usize, delta: &BigInt) -> Result<BoundValues> {
    if !delta.is_positive() {
        return Err(Error::Parameter(format!("Δ must be positive, got {delta}")));
    }
    Ok(BoundValues {
        main_bound: main_bound(n, m, delta),
        xi: xi(n, m)?,
        brass: brass(n, delta),
        erdos_furedi: erdos_furedi(n, delta),
    })
}

/// `|vert| / bound` as a reduced fraction.
pub fn ratio(count: usize, bound: &BigInt) -> BigRational {
    if bound.is_positive() {
        BigRational::new(BigInt::from(count), bound.clone())
    } else {
        BigRational::zero()
    }
}
