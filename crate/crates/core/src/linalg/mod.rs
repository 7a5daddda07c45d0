//! Exact linear algebra over the rationals and over `Q[s]`.

mod elimination;
mod matrix;
mod poly;
mod poly_matrix;

pub use elimination::{det, inverse, nullspace_basis, rank, rref, solve_invertible};
pub use matrix::RationalMatrix;
pub use poly::RationalPolynomial;
pub use poly_matrix::{det_poly, solve_poly_cramer, CramerSolution, PolynomialMatrix};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix is singular")]
    Singular,
    #[error("polynomial matrix has identically zero determinant")]
    SingularPencil,
}
