//! Pseudo-random regular descriptor systems for property suites.

use crate::linalg::RationalMatrix;
use crate::rational::int;
use crate::system::{DescriptorSystem, SystemError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Independent per-trial generator derived from a suite seed.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mixed = seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    ChaCha8Rng::seed_from_u64(mixed)
}

fn sparse_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> RationalMatrix {
    let density = pick_density(rng);
    let entries = (0..rows * cols)
        .map(|_| {
            if rng.random_bool(density) {
                int(rng.random_range(-bound..=bound))
            } else {
                int(0)
            }
        })
        .collect();
    RationalMatrix::from_vec(rows, cols, entries)
}

fn pick_density<R: Rng>(rng: &mut R) -> f64 {
    [0.25, 0.5, 0.75, 1.0][rng.random_range(0..4)]
}

fn zero_columns<R: Rng>(rng: &mut R, m: &mut RationalMatrix) {
    let cols = m.cols();
    if cols == 0 {
        return;
    }
    for _ in 0..rng.random_range(0..=cols) {
        let j = rng.random_range(0..cols);
        for i in 0..m.rows() {
            m[(i, j)] = int(0);
        }
    }
}

/// Draws `(E, A, C)` with entries in `[-bound, bound]`. `E` has a random
/// number of zeroed rows so singular `E` is common, and sparsity and zeroed
/// columns of `E` and `C` vary per draw so both verdicts and higher-index
/// pencils occur.
pub fn random_triple<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
    bound: i64,
) -> (RationalMatrix, RationalMatrix, RationalMatrix) {
    let mut e = sparse_matrix(rng, n, n, bound);
    let zeroed = rng.random_range(0..=n);
    for _ in 0..zeroed {
        let i = rng.random_range(0..n);
        for j in 0..n {
            e[(i, j)] = int(0);
        }
    }
    if rng.random_bool(0.5) {
        zero_columns(rng, &mut e);
    }
    let a = sparse_matrix(rng, n, n, bound);
    let mut c = sparse_matrix(rng, m, n, bound);
    if rng.random_bool(0.5) {
        zero_columns(rng, &mut c);
    }
    (e, a, c)
}

/// Redraws until the pencil is regular; returns the system and the number of
/// irregular draws discarded.
pub fn random_regular_system<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
    bound: i64,
) -> (DescriptorSystem, usize) {
    let mut discarded = 0;
    loop {
        let (e, a, c) = random_triple(rng, n, m, bound);
        match DescriptorSystem::validate(e, a, c) {
            Ok(sys) => return (sys, discarded),
            Err(SystemError::IrregularPencil) => discarded += 1,
            Err(other) => unreachable!("generator produced bad shapes: {other}"),
        }
    }
}
