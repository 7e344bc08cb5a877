//! The integer hull `P_I = conv(P ∩ Z^n)`: its lattice points, vertices and
//! faces.
//!
//! Faces are identified by their vertex sets. Each reported face carries a
//! supporting-hyperplane certificate `(c, d, margin)` with `‖c‖_∞ <= 1`,
//! `c·v = d` on the face's vertices and `c·w <= d - margin` on all other
//! vertices, found by a margin-maximizing LP.

use std::collections::{BTreeSet, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::budget::{ensure, Budgets};
use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank};
use crate::lp::{lp_solve, LinearProgram, LpResult};
use crate::matrix::{dot, to_rational_vector, IntMatrix, IntVector, RatMatrix, RatVector};
use crate::polyhedron::Polyhedron;

/// Lattice points, sorted lexicographically and duplicate-free.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LatticePointSet {
    points: Vec<IntVector>,
}

impl LatticePointSet {
    pub fn new(mut points: Vec<IntVector>) -> Self {
        points.sort();
        points.dedup();
        LatticePointSet { points }
    }

    pub fn points(&self) -> &[IntVector] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// All integer points of a bounded polyhedron.
///
/// Coordinates are fixed one at a time; the exact LP range of the next
/// coordinate given the fixed prefix decides which integers to try.
pub fn lattice_points(p: &Polyhedron, budgets: &Budgets) -> Result<LatticePointSet> {
    let bbox = match p.bounding_box() {
        Ok(b) => b,
        Err(Error::Infeasible) => return Ok(LatticePointSet::default()),
        Err(e) => return Err(e),
    };
    let count = AtomicU64::new(0);
    let (lo, hi) = &bbox[0];
    let first: Vec<BigInt> = integer_range(lo, hi).collect();
    let chunks: Vec<Vec<IntVector>> = first
        .into_par_iter()
        .map(|x0| {
            let mut out = Vec::new();
            let mut prefix = vec![x0];
            extend_prefix(p, &mut prefix, &mut out, &count, budgets.lattice_points)?;
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(LatticePointSet::new(chunks.into_iter().flatten().collect()))
}

fn integer_range(lo: &BigRational, hi: &BigRational) -> impl Iterator<Item = BigInt> {
    let mut cur = lo.ceil().to_integer();
    let end = hi.floor().to_integer();
    std::iter::from_fn(move || {
        (cur <= end).then(|| {
            let v = cur.clone();
            cur += 1;
            v
        })
    })
}

fn extend_prefix(
    p: &Polyhedron,
    prefix: &mut IntVector,
    out: &mut Vec<IntVector>,
    count: &AtomicU64,
    budget: u64,
) -> Result<()> {
    let n = p.dim();
    let i = prefix.len();
    if i == n {
        let seen = count.fetch_add(1, Ordering::Relaxed) + 1;
        ensure("lattice point", seen as u128, budget)?;
        out.push(prefix.clone());
        return Ok(());
    }
    // Restrict to the free coordinates x_i..x_{n-1}.
    let a = p.a();
    let free: Vec<usize> = (i..n).collect();
    let sub = a.select_cols(&free);
    let rhs: Vec<BigInt> = (0..a.rows())
        .map(|r| &p.b()[r] - dot(&a.row(r)[..i], prefix))
        .collect();
    let lp = LinearProgram::new(n - i).with_int_ineq(&sub, &rhs);
    let mut e = vec![BigRational::zero(); n - i];
    e[0] = BigRational::one();
    let bound = |lp: LinearProgram| -> Result<Option<BigRational>> {
        match lp_solve(&lp)? {
            LpResult::Optimal { value, .. } => Ok(Some(value)),
            LpResult::Infeasible { .. } => Ok(None),
            LpResult::Unbounded { .. } => Err(Error::Unbounded(i)),
        }
    };
    let Some(hi) = bound(lp.clone().maximize(e.clone()))? else {
        return Ok(());
    };
    let lo = bound(lp.minimize(e))?.expect("feasible above, feasible below");
    for v in integer_range(&lo, &hi) {
        prefix.push(v);
        extend_prefix(p, prefix, out, count, budget)?;
        prefix.pop();
    }
    Ok(())
}

/// Convex weights expressing `v` through `others`, if any exist.
pub fn convex_combination(v: &[BigInt], others: &[&IntVector]) -> Result<Option<RatVector>> {
    if others.is_empty() {
        return Ok(None);
    }
    let n = v.len();
    let k = others.len();
    // Rows: one per coordinate, then the sum-to-one row.
    let mut e = RatMatrix::zeros(n + 1, k);
    for (col, s) in others.iter().enumerate() {
        for (row, x) in s.iter().enumerate() {
            e[(row, col)] = BigRational::from_integer(x.clone());
        }
        e[(n, col)] = BigRational::one();
    }
    let mut f = to_rational_vector(v);
    f.push(BigRational::one());
    let lp = LinearProgram::new(k).with_eq(e, f).nonnegative();
    match lp_solve(&lp)? {
        LpResult::Optimal { point, .. } => Ok(Some(point)),
        _ => Ok(None),
    }
}

/// Vertices of `conv(S)`: the points not expressible as a convex
/// combination of the others. Sorted.
///
/// Midpoints of two other members are discarded first; every vertex
/// survives that filter, so the LP test only runs against survivors.
pub fn hull_vertices(s: &LatticePointSet) -> Result<Vec<IntVector>> {
    if s.is_empty() {
        return Err(Error::Empty);
    }
    let pts = s.points();
    let members: HashSet<&IntVector> = pts.iter().collect();
    let candidates: Vec<&IntVector> = pts
        .par_iter()
        .filter(|x| {
            !pts.iter().any(|y| {
                if y == *x {
                    return false;
                }
                let mirror: IntVector = x.iter().zip(y).map(|(a, b)| a * 2 - b).collect();
                members.contains(&mirror)
            })
        })
        .collect();
    let keep: Vec<bool> = (0..candidates.len())
        .into_par_iter()
        .map(|i| {
            let others: Vec<&IntVector> = candidates
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| *p)
                .collect();
            Ok(convex_combination(candidates[i], &others)?.is_none())
        })
        .collect::<Result<_>>()?;
    Ok(candidates
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(p, _)| p.clone())
        .collect())
}

/// Affine dimension of a point set (0 for a single point or none).
pub fn face_dim(members: &[IntVector]) -> usize {
    let Some((first, rest)) = members.split_first() else {
        return 0;
    };
    if rest.is_empty() {
        return 0;
    }
    let diffs: Vec<IntVector> = rest
        .iter()
        .map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())
        .collect();
    rank(&IntMatrix::from_rows(&diffs).expect("equal lengths"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceCertificate {
    pub normal: RatVector,
    pub offset: BigRational,
    pub margin: BigRational,
}

impl FaceCertificate {
    /// Exact check against a vertex list and the claimed face vertex set.
    pub fn verify(&self, vertices: &[IntVector], face: &[usize]) -> bool {
        let one = BigRational::one();
        if self.normal.iter().any(|c| c.abs() > one) || !self.margin.is_positive() {
            return false;
        }
        vertices.iter().enumerate().all(|(i, v)| {
            let val = dot(&self.normal, &to_rational_vector(v));
            if face.contains(&i) {
                val == self.offset
            } else {
                val <= &self.offset - &self.margin
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullFace {
    /// Indices into the sorted hull vertex list.
    pub vertex_indices: Vec<usize>,
    /// Lattice points of `P` lying on the face.
    pub lattice_members: Vec<IntVector>,
    pub dim: usize,
    pub certificate: FaceCertificate,
    /// True for `P_I` itself. Its certificate is the vacuous `(0, 0, 1)`.
    pub improper: bool,
}

/// Decides whether `subset` is exactly the vertex set of a proper face by
/// maximizing the separation margin; returns the certificate when it is.
///
/// The full vertex set is not handled here (the margin LP is unbounded).
pub fn face_certificate(vertices: &[IntVector], subset: &[usize]) -> Result<Option<FaceCertificate>> {
    if subset.is_empty() || subset.len() >= vertices.len() {
        return Err(Error::Parameter("face test needs a nonempty proper subset".into()));
    }
    let n = vertices[0].len();
    // Variables: c (n), offset, margin.
    let nv = n + 2;
    let row = |v: &IntVector, margin: i64| -> RatVector {
        let mut r = to_rational_vector(v);
        r.push(-BigRational::one());
        r.push(BigRational::from_integer(margin.into()));
        r
    };
    let on: Vec<RatVector> = subset.iter().map(|&i| row(&vertices[i], 0)).collect();
    let mut off: Vec<RatVector> = (0..vertices.len())
        .filter(|i| !subset.contains(i))
        .map(|i| row(&vertices[i], 1))
        .collect();
    let mut h = vec![BigRational::zero(); off.len()];
    for j in 0..n {
        for sign in [1, -1] {
            let mut r = vec![BigRational::zero(); nv];
            r[j] = BigRational::from_integer(sign.into());
            off.push(r);
            h.push(BigRational::one());
        }
    }
    let mut objective = vec![BigRational::zero(); nv];
    objective[n + 1] = BigRational::one();
    let lp = LinearProgram::new(nv)
        .maximize(objective)
        .with_ineq(RatMatrix::from_rows(&off)?, h)
        .with_eq(RatMatrix::from_rows(&on)?, vec![BigRational::zero(); on.len()]);
    match lp_solve(&lp)? {
        LpResult::Optimal { point, value, .. } if value.is_positive() => Ok(Some(FaceCertificate {
            normal: point[..n].to_vec(),
            offset: point[n].clone(),
            margin: value,
        })),
        LpResult::Optimal { .. } => Ok(None),
        other => Err(Error::Internal(format!("face LP ended {:?}", other.status()))),
    }
}

// Vertex sets of the facets of conv(vertices), which has affine dim `d >= 1`.
fn facet_vertex_sets(vertices: &[IntVector], d: usize) -> BTreeSet<Vec<usize>> {
    let base = &vertices[0];
    let diff = |v: &IntVector| -> RatVector {
        v.iter()
            .zip(base)
            .map(|(a, b)| BigRational::from_integer(a - b))
            .collect()
    };
    // A basis of the direction space of the affine hull.
    let mut basis: Vec<RatVector> = Vec::new();
    let mut basis_int: Vec<IntVector> = Vec::new();
    for v in &vertices[1..] {
        let dv: IntVector = v.iter().zip(base).map(|(a, b)| a - b).collect();
        basis_int.push(dv);
        if rank(&IntMatrix::from_rows(&basis_int).expect("equal lengths")) > basis.len() {
            basis.push(diff(v));
        } else {
            basis_int.pop();
        }
        if basis.len() == d {
            break;
        }
    }
    let values = |c: &RatVector| -> Vec<BigRational> {
        vertices.iter().map(|v| dot(c, &to_rational_vector(v))).collect()
    };

    let mut facets = BTreeSet::new();
    for sel in (0..vertices.len()).combinations(d) {
        let s0 = to_rational_vector(&vertices[sel[0]]);
        let rows: Vec<RatVector> = sel[1..]
            .iter()
            .map(|&k| {
                let dk: RatVector = to_rational_vector(&vertices[k])
                    .iter()
                    .zip(&s0)
                    .map(|(a, b)| a - b)
                    .collect();
                basis.iter().map(|bv| dot(&dk, bv)).collect()
            })
            .collect();
        let m = if rows.is_empty() {
            RatMatrix::zeros(0, d)
        } else {
            RatMatrix::from_rows(&rows).expect("equal lengths")
        };
        let ns = nullspace(&m);
        if ns.len() != 1 {
            continue;
        }
        let alpha = &ns[0];
        let normal: RatVector = (0..base.len())
            .map(|j| {
                basis
                    .iter()
                    .zip(alpha)
                    .fold(BigRational::zero(), |acc, (bv, a)| acc + a * &bv[j])
            })
            .collect();
        let vals = values(&normal);
        let level = &vals[sel[0]];
        let below = vals.iter().all(|v| v <= level);
        let above = vals.iter().all(|v| v >= level);
        if below || above {
            facets.insert(vals.iter().positions(|v| v == level).collect());
        }
    }
    facets
}

/// All nonempty faces of `conv(vertices)`, with certificates and the
/// lattice points of `s` on each. Sorted by dimension, then vertex set; the
/// improper face comes last.
///
/// Candidate faces are the facets and their iterated intersections; each
/// candidate is then certified by [`face_certificate`].
pub fn faces(s: &LatticePointSet, vertices: &[IntVector], budgets: &Budgets) -> Result<Vec<HullFace>> {
    if vertices.is_empty() {
        return Err(Error::Empty);
    }
    ensure("face vertex", vertices.len() as u128, budgets.face_vertices)?;
    let n = vertices[0].len();
    let d = face_dim(vertices);

    let mut candidates: BTreeSet<Vec<usize>> = BTreeSet::new();
    if d > 0 {
        let facets = facet_vertex_sets(vertices, d);
        let mut work: Vec<Vec<usize>> = facets.iter().cloned().collect();
        candidates.extend(facets.iter().cloned());
        while let Some(f) = work.pop() {
            for g in &facets {
                let meet: Vec<usize> = f.iter().copied().filter(|i| g.contains(i)).collect();
                if !meet.is_empty() && candidates.insert(meet.clone()) {
                    work.push(meet);
                }
            }
        }
    }
    let candidates: Vec<Vec<usize>> = candidates.into_iter().collect();
    let mut out: Vec<HullFace> = candidates
        .par_iter()
        .map(|w| {
            let cert = face_certificate(vertices, w)?
                .ok_or_else(|| Error::Internal(format!("facet intersection {w:?} is not a face")))?;
            let members: Vec<IntVector> = s
                .points()
                .iter()
                .filter(|p| dot(&cert.normal, &to_rational_vector(p)) == cert.offset)
                .cloned()
                .collect();
            Ok(HullFace {
                vertex_indices: w.clone(),
                dim: face_dim(&members),
                lattice_members: members,
                certificate: cert,
                improper: false,
            })
        })
        .collect::<Result<_>>()?;
    out.sort_by(|a, b| (a.dim, &a.vertex_indices).cmp(&(b.dim, &b.vertex_indices)));
    out.push(HullFace {
        vertex_indices: (0..vertices.len()).collect(),
        lattice_members: s.points().to_vec(),
        dim: d,
        certificate: FaceCertificate {
            normal: vec![BigRational::zero(); n],
            offset: BigRational::zero(),
            margin: BigRational::one(),
        },
        improper: true,
    });
    Ok(out)
}

/// Everything known about `P_I` for one polyhedron.
#[derive(Debug, Clone)]
pub struct IntegerHull {
    pub lattice: LatticePointSet,
    pub vertices: Vec<IntVector>,
    pub faces: Vec<HullFace>,
}

impl IntegerHull {
    pub fn compute(p: &Polyhedron, budgets: &Budgets) -> Result<Self> {
        let lattice = lattice_points(p, budgets)?;
        if lattice.is_empty() {
            return Ok(IntegerHull {
                lattice,
                vertices: Vec::new(),
                faces: Vec::new(),
            });
        }
        let vertices = hull_vertices(&lattice)?;
        let faces = faces(&lattice, &vertices, budgets)?;
        Ok(IntegerHull {
            lattice,
            vertices,
            faces,
        })
    }

    /// Affine dimension of `P_I`, or `None` when it is empty.
    pub fn dim(&self) -> Option<usize> {
        self.faces.last().map(|f| f.dim)
    }

    pub fn faces_per_dim(&self) -> Vec<usize> {
        let Some(d) = self.dim() else {
            return Vec::new();
        };
        let mut counts = vec![0; d + 1];
        for f in &self.faces {
            counts[f.dim] += 1;
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::int_vector;

    fn pts(v: &[&[i64]]) -> Vec<IntVector> {
        v.iter().map(|p| int_vector(p)).collect()
    }

    fn unit_square() -> Polyhedron {
        Polyhedron::from_i64(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]], &[1, 1, 0, 0]).unwrap()
    }

    #[test]
    fn square_lattice() {
        let s = lattice_points(&unit_square(), &Budgets::default()).unwrap();
        assert_eq!(s.points(), &pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]])[..]);
    }

    #[test]
    fn no_integer_points_in_thin_slab() {
        let p = Polyhedron::from_i64(&[&[1], &[-1], &[2], &[-2]], &[1, 0, 1, -1]).unwrap();
        let s = lattice_points(&p, &Budgets::default()).unwrap();
        assert!(s.is_empty());
        assert!(IntegerHull::compute(&p, &Budgets::default()).unwrap().vertices.is_empty());
    }

    #[test]
    fn unbounded_and_infeasible() {
        let p = Polyhedron::from_i64(&[&[-1, 0], &[0, -1]], &[0, 0]).unwrap();
        assert!(matches!(lattice_points(&p, &Budgets::default()), Err(Error::Unbounded(_))));
        let p = Polyhedron::from_i64(&[&[1], &[-1]], &[0, -1]).unwrap();
        assert!(lattice_points(&p, &Budgets::default()).unwrap().is_empty());
    }

    #[test]
    fn lattice_budget() {
        let b = Budgets {
            lattice_points: 3,
            ..Budgets::default()
        };
        assert!(matches!(lattice_points(&unit_square(), &b), Err(Error::Budget { .. })));
    }

    #[test]
    fn midpoint_is_not_a_vertex() {
        let s = LatticePointSet::new(pts(&[&[0, 0], &[1, 0], &[2, 0]]));
        assert_eq!(hull_vertices(&s).unwrap(), pts(&[&[0, 0], &[2, 0]]));
        assert_eq!(hull_vertices(&LatticePointSet::default()), Err(Error::Empty));
        let single = LatticePointSet::new(pts(&[&[4, 4]]));
        assert_eq!(hull_vertices(&single).unwrap(), pts(&[&[4, 4]]));
    }

    #[test]
    fn dims() {
        assert_eq!(face_dim(&pts(&[&[3, 1]])), 0);
        assert_eq!(face_dim(&pts(&[&[0, 0], &[1, 0], &[2, 0]])), 1);
        assert_eq!(face_dim(&pts(&[&[0, 0], &[1, 0], &[0, 1]])), 2);
    }

    #[test]
    fn square_face_lattice() {
        let h = IntegerHull::compute(&unit_square(), &Budgets::default()).unwrap();
        assert_eq!(h.vertices.len(), 4);
        assert_eq!(h.faces_per_dim(), vec![4, 4, 1]);
        for f in h.faces.iter().filter(|f| !f.improper) {
            assert!(f.certificate.verify(&h.vertices, &f.vertex_indices));
        }
        assert!(h.faces.last().unwrap().improper);
    }

    #[test]
    fn segment_face_members() {
        let s = LatticePointSet::new(pts(&[&[0, 0], &[1, 0], &[2, 0]]));
        let v = hull_vertices(&s).unwrap();
        let f = faces(&s, &v, &Budgets::default()).unwrap();
        assert_eq!(f.len(), 3);
        let top = f.last().unwrap();
        assert_eq!(top.dim, 1);
        assert_eq!(top.lattice_members.len(), 3);
        assert_eq!(f[0].lattice_members, pts(&[&[0, 0]]));
    }

    #[test]
    fn face_subset_test() {
        let v = pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        assert!(face_certificate(&v, &[0, 1]).unwrap().is_some());
        assert!(face_certificate(&v, &[0, 3]).unwrap().is_none());
        assert!(face_certificate(&v, &[0, 1, 2, 3]).is_err());
    }

    #[test]
    fn face_budget() {
        let b = Budgets {
            face_vertices: 3,
            ..Budgets::default()
        };
        let s = lattice_points(&unit_square(), &b).unwrap();
        let v = hull_vertices(&s).unwrap();
        assert!(matches!(faces(&s, &v, &b), Err(Error::Budget { .. })));
    }
}
