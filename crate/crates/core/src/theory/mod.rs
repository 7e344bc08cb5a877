//! Exact checks of the near-tightness theorem and the vertex bounds that
//! follow from it.

pub mod bounds;
pub mod gamma;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::budget::Budgets;
use crate::deep::{beta, deep_base_for_vertex, DeepBase};
use crate::error::{Error, Result};
use crate::hull::IntegerHull;
use crate::linalg::rank_of_rows;
use crate::matrix::IntVector;
use crate::polyhedron::Polyhedron;
use crate::subdet::{profile, DeltaProfile};

pub use bounds::{bound_formulas, BoundValues};
pub use gamma::{gamma_bruteforce, gamma_value, is_convex_independent, GammaResult};

/// Split of `[m]` by the magnitude of a slack vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportProfile {
    pub threshold: BigInt,
    pub supp: Vec<usize>,
    pub zeros: Vec<usize>,
}

/// `supp_t(v) = {i : |v_i| >= t}`. Threshold 0 means the nonzero entries,
/// so `supp_0` is the ordinary support.
pub fn support_profile(v: &[BigInt], threshold: &BigInt) -> SupportProfile {
    let (supp, zeros) = (0..v.len()).partition(|&i| {
        if threshold.is_positive() {
            v[i].abs() >= *threshold
        } else {
            !v[i].is_zero()
        }
    });
    SupportProfile {
        threshold: threshold.clone(),
        supp,
        zeros,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceCheck {
    /// Index into [`IntegerHull::faces`].
    pub face: usize,
    pub dim: usize,
    pub improper: bool,
    /// Rows whose slack stays at most Δ-1 on every lattice point of the face.
    pub near_tight_rows: Vec<usize>,
    pub rank: usize,
    /// n - k.
    pub required_rank: usize,
    pub rank_ok: bool,
    /// Largest `|supp_Δ(b - A x)|` over the face's lattice points.
    pub max_supp: usize,
    /// m - n + k.
    pub supp_limit: usize,
    pub supp_ok: bool,
    /// Each lattice point's own near-tight rows reach rank n - k.
    pub pointwise_ok: bool,
}

impl FaceCheck {
    pub fn passed(&self) -> bool {
        self.rank_ok && self.supp_ok
    }
}

fn near_limit(delta: &BigInt) -> BigInt {
    delta - BigInt::one()
}

pub fn check_theorem1(p: &Polyhedron, hull: &IntegerHull, delta: &BigInt) -> Vec<FaceCheck> {
    let (m, n) = (p.num_constraints(), p.dim());
    let limit = near_limit(delta);
    hull.faces
        .par_iter()
        .enumerate()
        .map(|(idx, face)| {
            let k = face.dim;
            let slacks: Vec<IntVector> = face.lattice_members.iter().map(|x| p.slack(x)).collect();
            let near: Vec<usize> = (0..m)
                .filter(|&i| slacks.iter().all(|s| s[i] <= limit))
                .collect();
            let rank = rank_of_rows(p.a(), &near);
            let required_rank = n - k;
            let max_supp = slacks
                .iter()
                .map(|s| support_profile(s, delta).supp.len())
                .max()
                .unwrap_or(0);
            let supp_limit = m - n + k;
            let pointwise_ok = slacks.iter().all(|s| {
                let own: Vec<usize> = (0..m).filter(|&i| s[i] <= limit).collect();
                rank_of_rows(p.a(), &own) >= required_rank
            });
            FaceCheck {
                face: idx,
                dim: k,
                improper: face.improper,
                near_tight_rows: near,
                rank,
                required_rank,
                rank_ok: rank >= required_rank,
                max_supp,
                supp_limit,
                supp_ok: max_supp <= supp_limit,
                pointwise_ok,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCheck {
    pub vertex: IntVector,
    /// `None` when no nonsingular base exists among the near-tight rows.
    pub base: Option<DeepBase>,
    /// `‖b_B - A_B v‖_∞` for the base found.
    pub base_slack: Option<BigInt>,
    pub prop1_ok: bool,
    /// `|supp_{Δ-1}(b - A v)|`.
    pub supp_literal: usize,
    /// `|supp_Δ(b - A v)|`.
    pub supp_derived: usize,
    pub prop2_literal_ok: bool,
    pub prop2_derived_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corollary1Check {
    pub vertices: Vec<VertexCheck>,
    /// m - n.
    pub supp_limit: usize,
    pub prop1_ok: bool,
    pub prop2_literal_ok: bool,
    pub prop2_derived_ok: bool,
    pub vertex_count: usize,
    pub main_bound: BigInt,
    pub ratio: BigRational,
    pub prop3_ok: bool,
}

pub fn check_corollary1(p: &Polyhedron, hull: &IntegerHull, delta: &BigInt) -> Result<Corollary1Check> {
    let (m, n) = (p.num_constraints(), p.dim());
    let supp_limit = m - n;
    let literal = near_limit(delta);
    let vertices = hull
        .vertices
        .par_iter()
        .map(|v| {
            let slack = p.slack(v);
            let base = match deep_base_for_vertex(p, delta, v) {
                Ok(b) => Some(b),
                Err(Error::Violation(_)) => None,
                Err(e) => return Err(e),
            };
            let base_slack = base
                .as_ref()
                .map(|b| b.rows.iter().map(|&i| slack[i].clone()).max().unwrap_or_default());
            let prop1_ok = base_slack.as_ref().is_some_and(|s| *s <= literal);
            let supp_literal = support_profile(&slack, &literal).supp.len();
            let supp_derived = support_profile(&slack, delta).supp.len();
            Ok(VertexCheck {
                vertex: v.clone(),
                base,
                base_slack,
                prop1_ok,
                supp_literal,
                supp_derived,
                prop2_literal_ok: supp_literal <= supp_limit,
                prop2_derived_ok: supp_derived <= supp_limit,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let main_bound = bounds::main_bound(n, m, delta);
    let vertex_count = vertices.len();
    Ok(Corollary1Check {
        supp_limit,
        prop1_ok: vertices.iter().all(|v| v.prop1_ok),
        prop2_literal_ok: vertices.iter().all(|v| v.prop2_literal_ok),
        prop2_derived_ok: vertices.iter().all(|v| v.prop2_derived_ok),
        vertex_count,
        ratio: bounds::ratio(vertex_count, &main_bound),
        prop3_ok: BigInt::from(vertex_count) <= main_bound,
        main_bound,
        vertices,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaSource {
    Exact,
    Brass,
}

impl GammaSource {
    pub fn as_str(self) -> &'static str {
        match self {
            GammaSource::Exact => "exact",
            GammaSource::Brass => "brass",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma1Check {
    pub beta: usize,
    pub gamma: BigInt,
    pub gamma_source: GammaSource,
    pub bound: BigInt,
    pub vertex_count: usize,
    pub ok: bool,
}

/// γ(n, Δ) exactly when the grid has at most `lemma_gamma_grid` points,
/// otherwise the upper bound 2·Δ^(n-1).
pub fn lemma_gamma(n: usize, delta: &BigInt, budgets: &Budgets) -> Result<(BigInt, GammaSource)> {
    let limit = budgets.lemma_gamma_grid.min(budgets.gamma_grid);
    if let Some(d) = delta.to_u64() {
        if gamma::grid_size(n, d).is_some_and(|s| s <= limit) {
            return Ok((BigInt::from(gamma_value(n, d, budgets)?), GammaSource::Exact));
        }
    }
    Ok((bounds::brass(n, delta), GammaSource::Brass))
}

pub fn check_lemma1(
    p: &Polyhedron,
    hull: &IntegerHull,
    delta: &BigInt,
    budgets: &Budgets,
) -> Result<Lemma1Check> {
    let beta = beta(p, delta, budgets)?;
    let (gamma, gamma_source) = lemma_gamma(p.dim(), delta, budgets)?;
    let bound = BigInt::from(beta) * &gamma;
    let vertex_count = hull.vertices.len();
    Ok(Lemma1Check {
        beta,
        ok: BigInt::from(vertex_count) <= bound,
        gamma,
        gamma_source,
        bound,
        vertex_count,
    })
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub id: String,
    pub m: usize,
    pub n: usize,
    /// Δ used by every check.
    pub delta: BigInt,
    pub delta_overridden: bool,
    pub profile: DeltaProfile,
    pub lattice_points: usize,
    pub vertices: Vec<IntVector>,
    pub faces_per_dim: Vec<usize>,
    pub theorem1: Vec<FaceCheck>,
    pub lemma1: Lemma1Check,
    pub corollary1: Corollary1Check,
    pub bounds: BoundValues,
    /// `P ∩ Z^n` is empty, so every check holds trivially.
    pub vacuous: bool,
}

impl VerificationReport {
    pub fn theorem1_ok(&self) -> bool {
        self.theorem1.iter().all(FaceCheck::passed)
    }

    pub fn theorem1_violations(&self) -> usize {
        self.theorem1.iter().filter(|f| !f.passed()).count()
    }

    /// Every gating check holds. The literal form of the support bound on
    /// vertices is informational and not included.
    pub fn ok(&self) -> bool {
        self.theorem1_ok()
            && self.lemma1.ok
            && self.corollary1.prop1_ok
            && self.corollary1.prop2_derived_ok
            && self.corollary1.prop3_ok
    }
}

/// Runs the whole pipeline on a bounded, full-rank polyhedron.
pub fn verify_instance(
    id: &str,
    p: &Polyhedron,
    delta_override: Option<BigInt>,
    budgets: &Budgets,
) -> Result<VerificationReport> {
    let profile = profile(p.a(), p.b(), false, budgets)?;
    let delta_overridden = delta_override.is_some();
    let delta = match delta_override {
        Some(d) if !d.is_positive() => {
            return Err(Error::Parameter(format!("Δ must be positive, got {d}")));
        }
        Some(d) => d,
        None => profile.delta_rank.clone(),
    };
    p.bounding_box()?;
    let hull = IntegerHull::compute(p, budgets)?;
    let theorem1 = check_theorem1(p, &hull, &delta);
    let lemma1 = check_lemma1(p, &hull, &delta, budgets)?;
    let corollary1 = check_corollary1(p, &hull, &delta)?;
    let bounds = bound_formulas(p.dim(), p.num_constraints(), &delta)?;
    Ok(VerificationReport {
        id: id.to_string(),
        m: p.num_constraints(),
        n: p.dim(),
        delta,
        delta_overridden,
        profile,
        lattice_points: hull.lattice.len(),
        faces_per_dim: hull.faces_per_dim(),
        vacuous: hull.lattice.is_empty(),
        vertices: hull.vertices,
        theorem1,
        lemma1,
        corollary1,
        bounds,
    })
}
