//! Elimination kernels: rank and determinant by fraction-free (Bareiss)
//! elimination over the integers, reduced row-echelon form and kernels over
//! the rationals.

use super::{LinalgError, RationalMatrix};
use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Scales every row by the lcm of its denominators. Row scaling preserves
/// rank; the scale factors are returned so determinants can be corrected.
fn integer_rows(m: &RationalMatrix) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut rows = Vec::with_capacity(m.rows());
    let mut scales = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let lcm = m
            .row(i)
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        rows.push(
            m.row(i)
                .iter()
                .map(|e| e.numer() * (&lcm / e.denom()))
                .collect(),
        );
        scales.push(lcm);
    }
    (rows, scales)
}

struct Echelon {
    rank: usize,
    /// `+1` or `-1` from row swaps.
    sign: i8,
    /// Last pivot; for a full-rank square input this is the determinant of
    /// the integer-scaled matrix up to `sign`.
    last_pivot: BigInt,
}

/// In-place Bareiss elimination with first-nonzero pivoting. Columns without
/// a pivot are skipped; the remaining updates are exactly those of Bareiss on
/// the matrix with those columns deleted, so every division is exact.
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> Echelon {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut sign = 1i8;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            sign = -sign;
        }
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[c];
        for row in tail.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let t = pivot * &row[j] - &lead * &pivot_row[j];
                let (q, rem) = t.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact Bareiss division");
                row[j] = q;
            }
        }
        prev = a[r][c].clone();
        r += 1;
    }
    Echelon {
        rank: r,
        sign,
        last_pivot: prev,
    }
}

/// Exact rank (dimension of the row space).
pub fn rank(m: &RationalMatrix) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let (mut rows, _) = integer_rows(m);
    bareiss(&mut rows, m.cols()).rank
}

/// Exact determinant. Panics on a non-square input; the empty matrix has
/// determinant 1.
pub fn det(m: &RationalMatrix) -> Rational {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return Rational::one();
    }
    let (mut rows, scales) = integer_rows(m);
    let ech = bareiss(&mut rows, n);
    if ech.rank < n {
        return Rational::zero();
    }
    let scale: BigInt = scales.iter().product();
    let d = Rational::new(ech.last_pivot, scale);
    if ech.sign < 0 {
        -d
    } else {
        d
    }
}

/// Reduced row-echelon form plus the pivot columns in ascending order.
pub fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = a[(r, c)].recip();
        for j in c..cols {
            a[(r, j)] = &a[(r, j)] * &inv;
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                let delta = &f * &a[(r, j)];
                a[(i, j)] -= delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Kernel basis read off the reduced row-echelon form. One vector per free
/// column, free columns in ascending order, with that column's entry set to
/// 1 and the other free entries 0.
pub fn nullspace_basis(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let cols = m.cols();
    let (r, pivots) = rref(m);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = vec![Rational::zero(); cols];
            x[f] = Rational::one();
            for (k, &p) in pivots.iter().enumerate() {
                x[p] = -r[(k, f)].clone();
            }
            x
        })
        .collect()
}

/// Solves `M x = b` for square nonsingular `M`; `b` may carry several
/// right-hand-side columns.
pub fn solve_invertible(
    m: &RationalMatrix,
    b: &RationalMatrix,
) -> Result<RationalMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if b.rows() != m.rows() {
        return Err(LinalgError::ShapeMismatch {
            expected: (m.rows(), b.cols()),
            found: b.shape(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(RationalMatrix::zeros(0, b.cols()));
    }
    let aug = RationalMatrix::hstack(&[m, b]);
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(LinalgError::Singular);
    }
    Ok(r.block(0, n, n, b.cols()))
}

pub fn inverse(m: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
    solve_invertible(m, &RationalMatrix::identity(m.rows()))
}
