//! Instance families.
//!
//! Random instances come from ChaCha8 seeded with `seed_from_u64(seed)`.
//! An integer in `[lo, hi]` is drawn by taking 64-bit outputs `u`, rejecting
//! `u >= s·⌊(2^64-1)/s⌋` for the span `s = hi - lo + 1`, and returning
//! `lo + u mod s`. Each attempt draws the entries of `A` row by row and then
//! `b`; attempts repeat until `A` has full column rank and `P` is feasible
//! and bounded.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::polyhedron::Polyhedron;
use crate::subdet::delta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// `0 <= x <= scale`.
    Hypercube,
    /// `x >= 0, 1ᵀx <= scale`.
    ScaledSimplex,
    /// `x >= 0, 2x₁ + 2x₂ <= 2·scale + 1` in the plane.
    DilatedTriangle,
    /// Uniform entries of `A` in `[-bound, bound]`, of `b` in
    /// `[-bound, 2·scale·bound]`.
    Random,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Hypercube,
        Family::ScaledSimplex,
        Family::DilatedTriangle,
        Family::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Hypercube => "hypercube",
            Family::ScaledSimplex => "scaled-simplex",
            Family::DilatedTriangle => "dilated-triangle",
            Family::Random => "random",
        }
    }

    /// Δ(A) of the structured families.
    pub fn known_delta(self) -> Option<u64> {
        match self {
            Family::Hypercube | Family::ScaledSimplex => Some(1),
            Family::DilatedTriangle => Some(2),
            Family::Random => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown family `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceSpec {
    pub family: Family,
    pub n: usize,
    /// Row count; fixed by the family except for random instances.
    pub m: Option<usize>,
    pub entry_bound: u64,
    pub scale: u64,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(family: Family, n: usize) -> Self {
        InstanceSpec {
            family,
            n,
            m: None,
            entry_bound: 3,
            scale: 1,
            seed: 0,
        }
    }

    pub fn rows(&self) -> usize {
        match self.family {
            Family::Hypercube => 2 * self.n,
            Family::ScaledSimplex => self.n + 1,
            Family::DilatedTriangle => 3,
            Family::Random => self.m.unwrap_or(2 * self.n),
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        InstanceSpec { seed, ..self.clone() }
    }

    /// Canonical description, e.g. `random:n=2,m=6,bound=3,scale=1,seed=7`.
    pub fn id(&self) -> String {
        match self.family {
            Family::Random => format!(
                "random:n={},m={},bound={},scale={},seed={}",
                self.n,
                self.rows(),
                self.entry_bound,
                self.scale,
                self.seed
            ),
            f => format!("{f}:n={},scale={}", self.n, self.scale),
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parameter(msg));
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if self.scale == 0 {
            return bad("scale must be positive".into());
        }
        if self.family == Family::DilatedTriangle && self.n != 2 {
            return bad(format!("dilated-triangle is planar, got n = {}", self.n));
        }
        match (self.family, self.m) {
            (Family::Random, _) => {
                if self.entry_bound == 0 {
                    return bad("bound must be positive".into());
                }
                if self.rows() <= self.n {
                    return bad(format!(
                        "a bounded polyhedron needs m > n, got m = {}, n = {}",
                        self.rows(),
                        self.n
                    ));
                }
            }
            (f, Some(m)) if m != self.rows() => {
                return bad(format!("{f} with n = {} has {} rows, not {m}", self.n, self.rows()));
            }
            _ => {}
        }
        Ok(())
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Parameter(format!("invalid value `{value}` for `{key}`")))
}

/// `family:key=value,...` with keys `n`, `m`, `bound`, `scale`, `seed`
/// and `count`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteSpec {
    pub spec: InstanceSpec,
    pub count: usize,
}

impl FromStr for SuiteSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, params) = s.split_once(':').unwrap_or((s, ""));
        let mut spec = InstanceSpec::new(family.trim().parse()?, 2);
        let mut count = 1;
        for item in params.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Parameter(format!("expected key=value, got `{item}`")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "n" => spec.n = parse_value(key, value)?,
                "m" => spec.m = Some(parse_value(key, value)?),
                "bound" | "entry_bound" => spec.entry_bound = parse_value(key, value)?,
                "scale" => spec.scale = parse_value(key, value)?,
                "seed" => spec.seed = parse_value(key, value)?,
                "count" => count = parse_value(key, value)?,
                _ => return Err(Error::Parameter(format!("unknown suite key `{key}`"))),
            }
        }
        spec.validate()?;
        Ok(SuiteSpec { spec, count })
    }
}

/// ChaCha8 stream with unbiased bounded draws.
pub struct InstanceRng(ChaCha8Rng);

impl InstanceRng {
    pub fn new(seed: u64) -> Self {
        InstanceRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in `[lo, hi]`.
    pub fn uniform(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi, "empty range");
        let span = (hi as i128 - lo as i128 + 1) as u128;
        if span > u64::MAX as u128 {
            return self.next_u64() as i64;
        }
        let span = span as u64;
        let zone = (u64::MAX / span) * span;
        loop {
            let u = self.next_u64();
            if u < zone {
                return (lo as i128 + (u % span) as i128) as i64;
            }
        }
    }
}

fn structured(spec: &InstanceSpec) -> Result<Polyhedron> {
    let n = spec.n;
    let s = BigInt::from(spec.scale);
    let unit = |i: usize, sign: i64| -> Vec<BigInt> {
        (0..n).map(|j| BigInt::from(if i == j { sign } else { 0 })).collect()
    };
    let (rows, b): (Vec<Vec<BigInt>>, Vec<BigInt>) = match spec.family {
        Family::Hypercube => {
            let upper = (0..n).map(|i| (unit(i, 1), s.clone()));
            let lower = (0..n).map(|i| (unit(i, -1), BigInt::from(0)));
            upper.chain(lower).unzip()
        }
        Family::ScaledSimplex => {
            let lower = (0..n).map(|i| (unit(i, -1), BigInt::from(0)));
            lower.chain(std::iter::once((vec![BigInt::from(1); n], s.clone()))).unzip()
        }
        Family::DilatedTriangle => vec![
            (vec![BigInt::from(2), BigInt::from(2)], BigInt::from(2) * &s + 1),
            (unit(0, -1), BigInt::from(0)),
            (unit(1, -1), BigInt::from(0)),
        ]
        .into_iter()
        .unzip(),
        Family::Random => unreachable!("random is not structured"),
    };
    Polyhedron::new(IntMatrix::from_rows(&rows)?, b)
}

fn random(spec: &InstanceSpec, budgets: &Budgets) -> Result<Polyhedron> {
    let (m, n) = (spec.rows(), spec.n);
    let bound = i64::try_from(spec.entry_bound)
        .map_err(|_| Error::Parameter("bound too large".into()))?;
    let rhs_hi = bound
        .checked_mul(2)
        .and_then(|v| v.checked_mul(i64::try_from(spec.scale).ok()?))
        .ok_or_else(|| Error::Parameter("scale too large".into()))?;
    let mut rng = InstanceRng::new(spec.seed);
    for _ in 0..budgets.gen_attempts {
        let entries: Vec<BigInt> = (0..m * n).map(|_| rng.uniform(-bound, bound).into()).collect();
        let b: Vec<BigInt> = (0..m).map(|_| rng.uniform(-bound, rhs_hi).into()).collect();
        let p = Polyhedron::relaxed(IntMatrix::from_vec(m, n, entries)?, b)?;
        if !p.is_full_rank() || !p.is_feasible()? {
            continue;
        }
        if p.is_bounded()? {
            return Ok(p);
        }
    }
    Err(Error::Generation(budgets.gen_attempts))
}

/// Builds the instance described by `spec`.
///
/// Structured families are checked against their known Δ.
pub fn generate(spec: &InstanceSpec, budgets: &Budgets) -> Result<Polyhedron> {
    spec.validate()?;
    if spec.family == Family::Random {
        return random(spec, budgets);
    }
    let p = structured(spec)?;
    let expected = BigInt::from(spec.family.known_delta().expect("structured"));
    let got = delta(p.a(), budgets)?;
    if got != expected {
        return Err(Error::Internal(format!(
            "{} has Δ = {got}, expected {expected}",
            spec.id()
        )));
    }
    Ok(p)
}

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub id: String,
    pub spec: InstanceSpec,
    pub polyhedron: Polyhedron,
}

/// `count` instances; instance `i` uses seed `seed + i` (wrapping).
pub fn generate_suite(suite: &SuiteSpec, budgets: &Budgets) -> Result<Vec<GeneratedInstance>> {
    (0..suite.count)
        .into_par_iter()
        .map(|i| {
            let spec = suite.spec.with_seed(suite.spec.seed.wrapping_add(i as u64));
            let polyhedron = generate(&spec, budgets)?;
            Ok(GeneratedInstance {
                id: spec.id(),
                spec,
                polyhedron,
            })
        })
        .collect()
}
