//! Impulse observability of descriptor systems `E x' = A x, y = C x`.
//!
//! Every verdict is an exact rank equality over the rationals, evaluated on
//! the original data `(E, A, C)` through the block matrix `O_k(E, A, C)`.
//! Besides the verdict the crate produces explicit unobservable impulses
//! (witnesses), frequency-domain responses split into smooth and impulsive
//! parts, and an independent check against systems assembled from
//! Weierstrass canonical data.

pub mod criteria;
pub mod exec;
pub mod float_rank;
pub mod frequency;
pub mod linalg;
pub mod random;
pub mod rational;
pub mod suites;
pub mod system;
pub mod weierstrass;

pub use criteria::{
    build_obs_matrix, check_order_r, find_witness, is_impulse_observable, order_reduce,
    verify_witness, BlockObservabilityMatrix, CriteriaError, ImpulseWitness, ObservabilityReport,
    OrderCheck, RankRow, Strategy,
};
pub use exec::Execution;
pub use frequency::{solve_frequency, FrequencySolution};
pub use linalg::{RationalMatrix, RationalPolynomial};
pub use rational::Rational;
pub use system::{DescriptorSystem, SystemError};
