//! Exact integer and rational linear algebra.
//!
//! Everything here is exact: determinants and ranks use fraction-free
//! (Bareiss) elimination over the integers, solves and null spaces use
//! Gaussian elimination over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, RatMatrix, RatVector};

/// Determinant by fraction-free two-step elimination.
pub fn det(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a: Vec<Vec<BigInt>> = m.row_iter().map(<[BigInt]>::to_vec).collect();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            for j in k + 1..n {
                let v = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// Rank over the rationals, via fraction-free row echelon form.
pub fn rank(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = m.row_iter().map(<[BigInt]>::to_vec).collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            for j in c + 1..cols {
                let v = &row[j] * &pivot_row[c] - &row[c] * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Rank of the rows of `m` listed in `rows`.
pub fn rank_of_rows(m: &IntMatrix, rows: &[usize]) -> usize {
    if rows.is_empty() {
        0
    } else {
        rank(&m.select_rows(rows))
    }
}

/// Unique solution of `m · x = rhs` for nonsingular square integer `m`.
pub fn solve_square(m: &IntMatrix, rhs: &[BigInt]) -> Result<RatVector> {
    let rat = m.to_rational();
    let rhs: RatVector = rhs
        .iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect();
    solve_square_rational(&rat, &rhs)
}

pub fn solve_square_rational(m: &RatMatrix, rhs: &[BigRational]) -> Result<RatVector> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "solve with a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    if rhs.len() != n {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for {n} equations",
            rhs.len()
        )));
    }
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero()).ok_or(Error::Singular)?;
        a.swap(k, p);
        let inv = a[k][k].recip();
        for v in a[k][k..].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k || row[k].is_zero() {
                continue;
            }
            let f = row[k].clone();
            for (x, p) in row[k..].iter_mut().zip(&pivot[k..]) {
                *x -= &f * p;
            }
        }
    }
    Ok(a.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Basis of the right null space `{x : m·x = 0}` over the rationals.
///
/// One basis vector per free column of the reduced row echelon form, with a
/// 1 in that column.
pub fn nullspace(m: &RatMatrix) -> Vec<RatVector> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigRational>> = m.row_iter().map(<[BigRational]>::to_vec).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r][c..].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row[c..].iter_mut().zip(&pivot[c..]) {
                *x -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free = (0..cols).filter(|c| !pivots.contains(c));
    free.map(|f| {
        let mut x = vec![BigRational::zero(); cols];
        x[f] = BigRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = -a[row][f].clone();
        }
        x
    })
    .collect()
}

/// `M = (H | 0) · Q` with `Q` unimodular.
///
/// `H` is `rows × rank` and in column-style Hermite normal form: lower
/// echelon with strictly increasing pivot rows, positive pivots, and the
/// entries left of each pivot reduced into `[0, pivot)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnfDecomposition {
    pub h: IntMatrix,
    pub q: IntMatrix,
    pub rank: usize,
}

impl HnfDecomposition {
    /// The padded factor `(H | 0)`, of the same shape as the input.
    pub fn padded_h(&self) -> IntMatrix {
        let n = self.q.rows();
        let mut out = IntMatrix::zeros(self.h.rows(), n);
        for i in 0..self.h.rows() {
            for j in 0..self.rank {
                out[(i, j)] = self.h[(i, j)].clone();
            }
        }
        out
    }

    /// Row indices holding the pivots of `H`, in column order.
    pub fn pivot_rows(&self) -> Vec<usize> {
        (0..self.rank)
            .map(|j| {
                (0..self.h.rows())
                    .find(|&i| !self.h[(i, j)].is_zero())
                    .expect("HNF column without pivot")
            })
            .collect()
    }
}

// Column operations on `w` mirrored as inverse row operations on `q`, so
// that `w · q` never changes.
struct ColumnReducer {
    w: IntMatrix,
    q: IntMatrix,
}

impl ColumnReducer {
    // col j += k * col i
    fn add_col(&mut self, j: usize, i: usize, k: &BigInt) {
        for r in 0..self.w.rows() {
            let v = &self.w[(r, i)] * k;
            self.w[(r, j)] += v;
        }
        for c in 0..self.q.cols() {
            let v = &self.q[(j, c)] * k;
            self.q[(i, c)] -= v;
        }
    }

    fn negate_col(&mut self, i: usize) {
        for r in 0..self.w.rows() {
            self.w[(r, i)] = -&self.w[(r, i)];
        }
        for c in 0..self.q.cols() {
            self.q[(i, c)] = -&self.q[(i, c)];
        }
    }

    // Replaces columns (i, j) by a unimodular combination that moves
    // gcd(w[r,i], w[r,j]) into column i and zeroes w[r,j].
    fn gcd_combine(&mut self, r: usize, i: usize, j: usize) {
        let a = self.w[(r, i)].clone();
        let b = self.w[(r, j)].clone();
        if b.is_zero() {
            return;
        }
        let (g, s, t) = if !a.is_zero() && b.is_multiple_of(&a) {
            (a.abs(), a.signum(), BigInt::zero())
        } else {
            let e = a.extended_gcd(&b);
            if e.gcd.is_negative() {
                (-e.gcd, -e.x, -e.y)
            } else {
                (e.gcd, e.x, e.y)
            }
        };
        let ag = &a / &g;
        let bg = &b / &g;
        for row in 0..self.w.rows() {
            let ci = self.w[(row, i)].clone();
            let cj = self.w[(row, j)].clone();
            self.w[(row, i)] = &s * &ci + &t * &cj;
            self.w[(row, j)] = &ag * &cj - &bg * &ci;
        }
        for col in 0..self.q.cols() {
            let qi = self.q[(i, col)].clone();
            let qj = self.q[(j, col)].clone();
            self.q[(i, col)] = &ag * &qi + &bg * &qj;
            self.q[(j, col)] = &s * &qj - &t * &qi;
        }
    }
}

/// Column-style Hermite decomposition of an arbitrary integer matrix.
pub fn hnf_decompose(m: &IntMatrix) -> HnfDecomposition {
    let n = m.cols();
    let mut red = ColumnReducer {
        w: m.clone(),
        q: IntMatrix::identity(n),
    };
    let mut c = 0;
    for r in 0..m.rows() {
        if c == n {
            break;
        }
        for j in c + 1..n {
            red.gcd_combine(r, c, j);
        }
        if red.w[(r, c)].is_zero() {
            continue;
        }
        if red.w[(r, c)].is_negative() {
            red.negate_col(c);
        }
        let pivot = red.w[(r, c)].clone();
        for j in 0..c {
            let k = red.w[(r, j)].div_floor(&pivot);
            if !k.is_zero() {
                red.add_col(j, c, &-k);
            }
        }
        c += 1;
    }
    let h = red.w.select_cols(&(0..c).collect::<Vec<_>>());
    HnfDecomposition {
        h,
        q: red.q,
        rank: c,
    }
}

pub fn is_unimodular(q: &IntMatrix) -> Result<bool> {
    Ok(det(q)?.abs().is_one())
}
