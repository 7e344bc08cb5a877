//! Reference implementations for cross-checking. Everything here is slow,
//! direct and shares no code with `deltahull`.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, Zero};

pub type Q = Ratio<i128>;

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] * cofactor_det(&minor);
    }
    total
}

/// Rank by Gaussian elimination over the rationals.
pub fn rational_rank(m: &[Vec<i128>]) -> usize {
    let mut a: Vec<Vec<Q>> = m.iter().map(|r| r.iter().map(|&x| Q::from(x)).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let f = row[c] / pivot[c];
                for (x, &p) in row.iter_mut().zip(&pivot) {
                    *x -= f * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn submatrix(m: &[Vec<i128>], rows: &[usize], cols: &[usize]) -> Vec<Vec<i128>> {
    rows.iter().map(|&r| cols.iter().map(|&c| m[r][c]).collect()).collect()
}

/// Largest |k×k minor| by exhaustive cofactor expansion.
pub fn max_minor(m: &[Vec<i128>], k: usize) -> i128 {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut best = 0;
    for r in (0..rows).combinations(k) {
        for c in (0..cols).combinations(k) {
            best = best.max(cofactor_det(&submatrix(m, &r, &c)).abs());
        }
    }
    best
}

pub fn mat_mul(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}

/// Vertices of `{x : A x <= b}` by Cramer's rule on every n-row subset.
pub fn cramer_vertices(a: &[Vec<i128>], b: &[i128]) -> Vec<Vec<Q>> {
    let n = a.first().map_or(0, Vec::len);
    let mut out = BTreeSet::new();
    for rows in (0..a.len()).combinations(n) {
        let sub = submatrix(a, &rows, &(0..n).collect::<Vec<_>>());
        let d = cofactor_det(&sub);
        if d == 0 {
            continue;
        }
        let x: Vec<Q> = (0..n)
            .map(|j| {
                let mut replaced = sub.clone();
                for (i, &r) in rows.iter().enumerate() {
                    replaced[i][j] = b[r];
                }
                Q::new(cofactor_det(&replaced), d)
            })
            .collect();
        let feasible = a.iter().zip(b).all(|(row, &bi)| {
            let ax: Q = row.iter().zip(&x).map(|(&r, v)| v * r).sum();
            ax <= Q::from(bi)
        });
        if feasible {
            out.insert(x);
        }
    }
    out.into_iter().collect()
}

/// Integer points of `{A x <= b}` inside the box `[lo, hi]`, lexicographic.
pub fn box_lattice_points(a: &[Vec<i128>], b: &[i128], lo: &[i128], hi: &[i128]) -> Vec<Vec<i128>> {
    lo.iter()
        .zip(hi)
        .map(|(&l, &h)| l..=h)
        .multi_cartesian_product()
        .filter(|x| {
            a.iter()
                .zip(b)
                .all(|(row, &bi)| row.iter().zip(x).map(|(r, v)| r * v).sum::<i128>() <= bi)
        })
        .collect()
}

fn cross(o: (i128, i128), a: (i128, i128), b: (i128, i128)) -> i128 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn dist2(a: (i128, i128), b: (i128, i128)) -> i128 {
    (a.0 - b.0).pow(2) + (a.1 - b.1).pow(2)
}

/// Jarvis march; returns the strict hull vertices sorted.
pub fn gift_wrap(points: &[(i128, i128)]) -> Vec<(i128, i128)> {
    let pts: Vec<(i128, i128)> = points.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let Some(&start) = pts.first() else {
        return Vec::new();
    };
    if pts.len() == 1 {
        return pts;
    }
    let mut hull = vec![start];
    let mut p = start;
    loop {
        let mut q = if pts[0] == p { pts[1] } else { pts[0] };
        for &r in &pts {
            if r == p {
                continue;
            }
            let c = cross(p, q, r);
            if c < 0 || (c == 0 && dist2(p, r) > dist2(p, q)) {
                q = r;
            }
        }
        if q == start {
            break;
        }
        hull.push(q);
        p = q;
    }
    hull.sort();
    hull
}

fn on_segment(p: (i128, i128), a: (i128, i128), b: (i128, i128)) -> bool {
    cross(a, b, p) == 0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

/// Planar membership in `conv(others)` via Carathéodory: a point, a segment
/// or a triangle of `others` contains `p`.
pub fn in_hull_2d(p: (i128, i128), others: &[(i128, i128)]) -> bool {
    if others.contains(&p) {
        return true;
    }
    for (i, &a) in others.iter().enumerate() {
        for (j, &b) in others.iter().enumerate().skip(i + 1) {
            if on_segment(p, a, b) {
                return true;
            }
            for &c in &others[j + 1..] {
                let (d1, d2, d3) = (cross(a, b, p), cross(b, c, p), cross(c, a, p));
                let neg = d1 < 0 || d2 < 0 || d3 < 0;
                let pos = d1 > 0 || d2 > 0 || d3 > 0;
                if !(neg && pos) && cross(a, b, c) != 0 {
                    return true;
                }
            }
        }
    }
    false
}

pub fn convex_independent_2d(points: &[(i128, i128)]) -> bool {
    (0..points.len()).all(|i| {
        let others: Vec<(i128, i128)> = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &q)| q)
            .collect();
        !in_hull_2d(points[i], &others)
    })
}

/// Largest convex-independent subset of `{0..d-1}^2` by trying every subset.
pub fn gamma_2d(d: i128) -> usize {
    let grid: Vec<(i128, i128)> = (0..d).cartesian_product(0..d).collect();
    let mut best = 0;
    for mask in 0u32..(1 << grid.len()) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let subset: Vec<(i128, i128)> = (0..grid.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| grid[i])
            .collect();
        if convex_independent_2d(&subset) {
            best = size;
        }
    }
    best
}

/// Structural conditions of a column-style Hermite normal form with `rank`
/// columns: pivot rows strictly increase, pivots are positive, entries above
/// a pivot vanish and entries left of a pivot lie in `[0, pivot)`.
pub fn check_hnf_shape(h: &[Vec<i128>], rank: usize) -> Result<(), String> {
    let mut last: Option<usize> = None;
    for j in 0..rank {
        let Some(p) = (0..h.len()).find(|&i| h[i][j] != 0) else {
            return Err(format!("column {j} is zero"));
        };
        if last.is_some_and(|l| p <= l) {
            return Err(format!("pivot row of column {j} does not increase"));
        }
        if h[p][j] <= 0 {
            return Err(format!("pivot of column {j} is not positive"));
        }
        for k in 0..j {
            if h[p][k] < 0 || h[p][k] >= h[p][j] {
                return Err(format!("entry ({p},{k}) not reduced modulo pivot {}", h[p][j]));
            }
        }
        last = Some(p);
    }
    Ok(())
}

/// Plain-data linear program: optimize `c·x` subject to `G x <= h`,
/// `E x = f` and `x_j >= 0` where `nonneg[j]`.
pub struct Lp {
    pub maximize: bool,
    pub c: Vec<BigRational>,
    pub g: Vec<Vec<BigRational>>,
    pub h: Vec<BigRational>,
    pub e: Vec<Vec<BigRational>>,
    pub f: Vec<BigRational>,
    pub nonneg: Vec<bool>,
}

pub enum LpClaim {
    Optimal {
        x: Vec<BigRational>,
        value: BigRational,
        y: Vec<BigRational>,
        z: Vec<BigRational>,
    },
    Infeasible {
        y: Vec<BigRational>,
        z: Vec<BigRational>,
    },
    Unbounded {
        x: Vec<BigRational>,
        d: Vec<BigRational>,
    },
}

fn dotq(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn feasible(lp: &Lp, x: &[BigRational]) -> bool {
    x.len() == lp.c.len()
        && lp.g.iter().zip(&lp.h).all(|(r, h)| dotq(r, x) <= *h)
        && lp.e.iter().zip(&lp.f).all(|(r, f)| dotq(r, x) == *f)
        && x.iter().zip(&lp.nonneg).all(|(v, &nn)| !nn || !v.is_negative())
}

// yᵀG + zᵀE, column by column.
fn combine(lp: &Lp, y: &[BigRational], z: &[BigRational]) -> Vec<BigRational> {
    (0..lp.c.len())
        .map(|j| {
            let a: BigRational = lp.g.iter().zip(y).map(|(r, w)| &r[j] * w).sum();
            let b: BigRational = lp.e.iter().zip(z).map(|(r, w)| &r[j] * w).sum();
            a + b
        })
        .collect()
}

/// Checks a claimed LP outcome by substitution alone.
pub fn check_lp_claim(lp: &Lp, claim: &LpClaim) -> Result<(), String> {
    let sign = if lp.maximize { BigRational::from_integer(1.into()) } else { BigRational::from_integer((-1).into()) };
    let mult_ok = |y: &[BigRational], z: &[BigRational]| {
        y.len() == lp.g.len() && z.len() == lp.e.len() && y.iter().all(|v| !v.is_negative())
    };
    match claim {
        LpClaim::Optimal { x, value, y, z } => {
            if !feasible(lp, x) {
                return Err("optimal point infeasible".into());
            }
            if dotq(&lp.c, x) != *value {
                return Err("objective value mismatch".into());
            }
            if !mult_ok(y, z) {
                return Err("dual multipliers malformed or negative".into());
            }
            // Weak duality: s·c·x' <= (yᵀG + zᵀE)·x' <= y·h + z·f for feasible x'.
            for (j, a) in combine(lp, y, z).iter().enumerate() {
                let target = &sign * &lp.c[j];
                let ok = if lp.nonneg[j] { *a >= target } else { *a == target };
                if !ok {
                    return Err(format!("dual constraint {j} violated"));
                }
            }
            if dotq(y, &lp.h) + dotq(z, &lp.f) != &sign * value {
                return Err("duality gap is nonzero".into());
            }
            Ok(())
        }
        LpClaim::Infeasible { y, z } => {
            if !mult_ok(y, z) {
                return Err("Farkas multipliers malformed or negative".into());
            }
            for (j, a) in combine(lp, y, z).iter().enumerate() {
                let ok = if lp.nonneg[j] { !a.is_negative() } else { a.is_zero() };
                if !ok {
                    return Err(format!("Farkas combination nonzero in column {j}"));
                }
            }
            if !(dotq(y, &lp.h) + dotq(z, &lp.f)).is_negative() {
                return Err("Farkas right-hand side is not negative".into());
            }
            Ok(())
        }
        LpClaim::Unbounded { x, d } => {
            if !feasible(lp, x) {
                return Err("base point infeasible".into());
            }
            if d.len() != lp.c.len()
                || !lp.g.iter().all(|r| !dotq(r, d).is_positive())
                || !lp.e.iter().all(|r| dotq(r, d).is_zero())
                || !d.iter().zip(&lp.nonneg).all(|(v, &nn)| !nn || !v.is_negative())
            {
                return Err("ray leaves the feasible region".into());
            }
            if !(&sign * dotq(&lp.c, d)).is_positive() {
                return Err("ray does not improve the objective".into());
            }
            Ok(())
        }
    }
}
