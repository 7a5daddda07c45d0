//! The descriptor system `E x' = A x, y = C x` with its regularity certificate.

use crate::linalg::{det_poly, rank, PolynomialMatrix, RationalMatrix, RationalPolynomial};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("IrregularPencil: det(sE - A) is identically zero")]
    IrregularPencil,
}

/// A validated triple `(E, A, C)` whose pencil `sE - A` is regular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescriptorSystem {
    e: RationalMatrix,
    a: RationalMatrix,
    c: RationalMatrix,
    det_pencil: RationalPolynomial,
    rank_e: usize,
}

impl DescriptorSystem {
    /// Checks shapes and regularity and caches `det(sE - A)` and `rank E`.
    ///
    /// `C` may have zero rows; it must still report `n` columns.
    pub fn validate(
        e: RationalMatrix,
        a: RationalMatrix,
        c: RationalMatrix,
    ) -> Result<Self, SystemError> {
        let n = e.rows();
        if n == 0 {
            return Err(SystemError::DimensionMismatch(
                "state dimension must be at least 1".into(),
            ));
        }
        if !e.is_square() {
            return Err(SystemError::DimensionMismatch(format!(
                "E must be square, got {}x{}",
                e.rows(),
                e.cols()
            )));
        }
        if a.shape() != (n, n) {
            return Err(SystemError::DimensionMismatch(format!(
                "A must be {n}x{n}, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        if c.cols() != n {
            return Err(SystemError::DimensionMismatch(format!(
                "C must have {n} columns, got {}",
                c.cols()
            )));
        }
        let det_pencil =
            det_poly(&PolynomialMatrix::pencil(&e, &a)).expect("pencil is square by construction");
        if det_pencil.is_zero() {
            return Err(SystemError::IrregularPencil);
        }
        let rank_e = rank(&e);
        Ok(Self {
            e,
            a,
            c,
            det_pencil,
            rank_e,
        })
    }

    pub fn e(&self) -> &RationalMatrix {
        &self.e
    }

    pub fn a(&self) -> &RationalMatrix {
        &self.a
    }

    pub fn c(&self) -> &RationalMatrix {
        &self.c
    }

    /// State dimension.
    pub fn n(&self) -> usize {
        self.e.rows()
    }

    /// Output dimension.
    pub fn m(&self) -> usize {
        self.c.rows()
    }

    pub fn det_pencil(&self) -> &RationalPolynomial {
        &self.det_pencil
    }

    pub fn rank_e(&self) -> usize {
        self.rank_e
    }

    /// `sE - A` as a polynomial matrix.
    pub fn pencil(&self) -> PolynomialMatrix {
        PolynomialMatrix::pencil(&self.e, &self.a)
    }

    /// True when `E` is invertible. Such systems have no impulsive behaviour.
    pub fn is_standard(&self) -> bool {
        self.rank_e == self.n()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn n2() -> RationalMatrix {
        RationalMatrix::from_i64(&[&[0, 1], &[0, 0]])
    }

    #[test]
    fn nilpotent_fast_system() {
        let sys = DescriptorSystem::validate(
            n2(),
            RationalMatrix::identity(2),
            RationalMatrix::from_i64(&[&[1, 0]]),
        )
        .unwrap();
        assert_eq!(sys.det_pencil(), &RationalPolynomial::one());
        assert_eq!(sys.rank_e(), 1);
        assert!(!sys.is_standard());
        assert_eq!((sys.n(), sys.m()), (2, 1));
    }

    #[test]
    fn standard_system_has_characteristic_polynomial() {
        let a = RationalMatrix::from_i64(&[&[1, 2], &[3, 4]]);
        let sys = DescriptorSystem::validate(
            RationalMatrix::identity(2),
            a,
            RationalMatrix::from_i64(&[&[5, -1]]),
        )
        .unwrap();
        // s^2 - 5s - 2
        assert_eq!(
            sys.det_pencil(),
            &RationalPolynomial::from_i64(&[-2, -5, 1])
        );
        assert!(sys.is_standard());
        let scaled = RationalMatrix::identity(2).scale(&int(2));
        let sys2 = DescriptorSystem::validate(
            scaled,
            RationalMatrix::zeros(2, 2),
            RationalMatrix::zeros(0, 2),
        )
        .unwrap();
        assert!(sys2.is_standard());
        assert_eq!(sys2.m(), 0);
    }

    #[test]
    fn identity_three_is_standard() {
        let sys = DescriptorSystem::validate(
            RationalMatrix::identity(3),
            RationalMatrix::zeros(3, 3),
            RationalMatrix::zeros(1, 3),
        )
        .unwrap();
        assert!(sys.is_standard());
    }

    #[test]
    fn zero_pencil_is_irregular() {
        let err = DescriptorSystem::validate(
            RationalMatrix::zeros(1, 1),
            RationalMatrix::zeros(1, 1),
            RationalMatrix::from_i64(&[&[1]]),
        )
        .unwrap_err();
        assert_eq!(err, SystemError::IrregularPencil);
    }

    #[test]
    fn shape_errors() {
        let bad_a = DescriptorSystem::validate(
            RationalMatrix::identity(2),
            RationalMatrix::identity(3),
            RationalMatrix::zeros(1, 2),
        );
        assert!(matches!(bad_a, Err(SystemError::DimensionMismatch(_))));
        let bad_c = DescriptorSystem::validate(
            RationalMatrix::identity(2),
            RationalMatrix::identity(2),
            RationalMatrix::zeros(1, 3),
        );
        assert!(matches!(bad_c, Err(SystemError::DimensionMismatch(_))));
        let empty = DescriptorSystem::validate(
            RationalMatrix::zeros(0, 0),
            RationalMatrix::zeros(0, 0),
            RationalMatrix::zeros(0, 0),
        );
        assert!(matches!(empty, Err(SystemError::DimensionMismatch(_))));
    }

    #[test]
    fn validate_is_idempotent() {
        let sys = DescriptorSystem::validate(
            n2(),
            RationalMatrix::identity(2),
            RationalMatrix::from_i64(&[&[0, 1]]),
        )
        .unwrap();
        let again =
            DescriptorSystem::validate(sys.e().clone(), sys.a().clone(), sys.c().clone()).unwrap();
        assert_eq!(sys, again);
    }
}
