//! Floating-point numerical rank, for comparison with the exact kernel only.

use crate::linalg::RationalMatrix;
use nalgebra::DMatrix;
use num_traits::ToPrimitive;

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum TolerancePolicy {
    /// `max(rows, cols) * eps * sigma_max`.
    #[default]
    Default,
    /// Fixed absolute threshold.
    Absolute(f64),
    /// `factor * sigma_max`.
    Relative(f64),
}

pub fn to_f64_matrix(m: &RationalMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        m[(i, j)].to_f64().unwrap_or(f64::NAN)
    })
}

/// Number of singular values above the policy threshold.
pub fn float_rank(m: &RationalMatrix, policy: TolerancePolicy) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    let sv = to_f64_matrix(m).singular_values();
    let sigma_max = sv.iter().cloned().fold(0.0, f64::max);
    let tol = match policy {
        TolerancePolicy::Default => m.rows().max(m.cols()) as f64 * f64::EPSILON * sigma_max,
        TolerancePolicy::Absolute(t) => t,
        TolerancePolicy::Relative(f) => f * sigma_max,
    };
    sv.iter().filter(|&&s| s > tol).count()
}
