use super::{elimination, LinalgError, RationalMatrix, RationalPolynomial};
use crate::rational::{int, Rational};

/// Dense matrix of polynomials in `s`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolynomialMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RationalPolynomial>,
}

/// Result of Cramer's rule: `x_i = numerators[i] / denominator`, unreduced.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CramerSolution {
    pub numerators: Vec<RationalPolynomial>,
    pub denominator: RationalPolynomial,
}

impl PolynomialMatrix {
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> RationalPolynomial,
    ) -> Self {
        let entries = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Self {
            rows,
            cols,
            entries,
        }
    }

    /// The pencil `sE - A`.
    pub fn pencil(e: &RationalMatrix, a: &RationalMatrix) -> Self {
        assert_eq!(e.shape(), a.shape(), "pencil blocks must share a shape");
        Self::from_fn(e.rows(), e.cols(), |i, j| {
            RationalPolynomial::linear(-a[(i, j)].clone(), e[(i, j)].clone())
        })
    }

    /// Constant polynomial matrix.
    pub fn constant(m: &RationalMatrix) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i, j| {
            RationalPolynomial::constant(m[(i, j)].clone())
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalPolynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.entries
            .iter()
            .filter_map(RationalPolynomial::degree)
            .max()
    }

    pub fn eval(&self, s: &Rational) -> RationalMatrix {
        RationalMatrix::from_vec(
            self.rows,
            self.cols,
            self.entries.iter().map(|p| p.eval(s)).collect(),
        )
    }

    pub fn with_column(&self, j: usize, col: &[RationalPolynomial]) -> Self {
        assert_eq!(col.len(), self.rows);
        let mut out = self.clone();
        for (i, p) in col.iter().enumerate() {
            out.entries[i * self.cols + j] = p.clone();
        }
        out
    }

    pub fn mul_vec(&self, v: &[RationalPolynomial]) -> Vec<RationalPolynomial> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(RationalPolynomial::zero(), |acc, j| {
                    acc.add(&self.get(i, j).mul(&v[j]))
                })
            })
            .collect()
    }

    /// Upper bound on `deg det`: the sum over columns of the largest entry
    /// degree in that column.
    fn det_degree_bound(&self) -> usize {
        (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .filter_map(|i| self.get(i, j).degree())
                    .max()
                    .unwrap_or(0)
            })
            .sum()
    }
}

/// `det P(s)` by exact evaluation at `s = 0, 1, ..., d` and interpolation,
/// where `d` bounds the determinant's degree (`d <= n` for a pencil).
pub fn det_poly(p: &PolynomialMatrix) -> Result<RationalPolynomial, LinalgError> {
    if p.rows != p.cols {
        return Err(LinalgError::NotSquare {
            rows: p.rows,
            cols: p.cols,
        });
    }
    let bound = p.det_degree_bound();
    let xs: Vec<Rational> = (0..=bound as i64).map(int).collect();
    let ys: Vec<Rational> = xs.iter().map(|x| elimination::det(&p.eval(x))).collect();
    Ok(RationalPolynomial::interpolate(&xs, &ys))
}

/// Solves `P(s) x(s) = b(s)` by Cramer's rule.
pub fn solve_poly_cramer(
    p: &PolynomialMatrix,
    b: &[RationalPolynomial],
) -> Result<CramerSolution, LinalgError> {
    let denominator = det_poly(p)?;
    if b.len() != p.rows {
        return Err(LinalgError::ShapeMismatch {
            expected: (p.rows, 1),
            found: (b.len(), 1),
        });
    }
    if denominator.is_zero() {
        return Err(LinalgError::SingularPencil);
    }
    let numerators = (0..p.cols)
        .map(|j| det_poly(&p.with_column(j, b)))
        .collect::<Result<_, _>>()?;
    Ok(CramerSolution {
        numerators,
        denominator,
    })
}
