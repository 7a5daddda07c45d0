//! Descriptor systems generated from Weierstrass canonical data, and the
//! fast-subsystem rank conditions evaluated in those coordinates.
//!
//! Given `T`, `S` invertible, the assembled system satisfies
//!
//! ```text
//! diag(T, I) [sE - A; C] S = [sI - A1, 0; 0, sN - I; C1, C2]
//! ```
//!
//! so impulse observability can be read off `(N, C2)` alone. This gives an
//! oracle that shares no code path with the intrinsic criterion beyond rank.

use crate::criteria::obs_matrix_from_blocks;
use crate::linalg::{inverse, rank, RationalMatrix};
use crate::rational::{int, Rational};
use crate::system::{DescriptorSystem, SystemError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeierstrassError {
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("transform {0} is singular")]
    SingularTransform(&'static str),
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),
    #[error(transparent)]
    System(#[from] SystemError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassData {
    pub a1: RationalMatrix,
    pub n: RationalMatrix,
    pub c1: RationalMatrix,
    pub c2: RationalMatrix,
    pub t: RationalMatrix,
    pub s: RationalMatrix,
}

impl WeierstrassData {
    pub fn n1(&self) -> usize {
        self.a1.rows()
    }

    pub fn n2(&self) -> usize {
        self.n.rows()
    }

    pub fn dim(&self) -> usize {
        self.n1() + self.n2()
    }

    pub fn m(&self) -> usize {
        self.c1.rows()
    }

    /// Nilpotency index of `N`.
    pub fn h(&self) -> Result<usize, WeierstrassError> {
        nilpotency_index(&self.n)
    }

    fn check_shapes(&self) -> Result<(), WeierstrassError> {
        let (n1, n2, m) = (self.n1(), self.n2(), self.m());
        let n = n1 + n2;
        let ok = self.a1.is_square()
            && self.n.is_square()
            && self.c1.cols() == n1
            && self.c2.shape() == (m, n2)
            && self.t.shape() == (n, n)
            && self.s.shape() == (n, n);
        if ok {
            Ok(())
        } else {
            Err(WeierstrassError::InvalidDimensions(
                "canonical blocks have inconsistent shapes".into(),
            ))
        }
    }
}

/// Smallest `h >= 1` with `N^h = 0`.
pub fn nilpotency_index(n: &RationalMatrix) -> Result<usize, WeierstrassError> {
    if !n.is_square() {
        return Err(WeierstrassError::InvalidDimensions(format!(
            "N must be square, got {}x{}",
            n.rows(),
            n.cols()
        )));
    }
    let mut power = n.clone();
    for h in 1..=n.rows().max(1) {
        if power.is_zero() {
            return Ok(h);
        }
        power = power.mul(n);
    }
    Err(WeierstrassError::NotNilpotent)
}

/// `E = T^-1 diag(I, N) S^-1`, `A = T^-1 diag(A1, I) S^-1`, `C = [C1 C2] S^-1`.
pub fn assemble(wd: &WeierstrassData) -> Result<DescriptorSystem, WeierstrassError> {
    wd.check_shapes()?;
    nilpotency_index(&wd.n)?;
    let t_inv = inverse(&wd.t).map_err(|_| WeierstrassError::SingularTransform("T"))?;
    let s_inv = inverse(&wd.s).map_err(|_| WeierstrassError::SingularTransform("S"))?;
    let e_core = RationalMatrix::block_diag(&RationalMatrix::identity(wd.n1()), &wd.n);
    let a_core = RationalMatrix::block_diag(&wd.a1, &RationalMatrix::identity(wd.n2()));
    let e = t_inv.mul(&e_core).mul(&s_inv);
    let a = t_inv.mul(&a_core).mul(&s_inv);
    let c = RationalMatrix::hstack(&[&wd.c1, &wd.c2]).mul(&s_inv);
    Ok(DescriptorSystem::validate(e, a, c)?)
}

/// The stack `[N^{r+2}; C2 N; C2 N^2; ...; C2 N^{r+1}]`.
pub fn fast_stack(wd: &WeierstrassData, r: usize) -> RationalMatrix {
    let mut parts = vec![wd.n.pow(r as u32 + 2)];
    let mut cn = wd.c2.clone();
    for _ in 1..=r + 1 {
        cn = cn.mul(&wd.n);
        parts.push(cn.clone());
    }
    RationalMatrix::vstack(&parts.iter().collect::<Vec<_>>())
}

/// `rank [N^{r+2}; C2 N; ...; C2 N^{r+1}] = rank N`.
pub fn fast_rank_condition(wd: &WeierstrassData, r: usize) -> bool {
    rank(&fast_stack(wd, r)) == rank(&wd.n)
}

/// `n2 (r + 1) + rank` of the fast stack, which equals
/// `rank O_{r+2}(N, I, C2)`.
pub fn reduced_form_rank(wd: &WeierstrassData, r: usize) -> usize {
    wd.n2() * (r + 1) + rank(&fast_stack(wd, r))
}

/// `rank O_{r+2}(N, I, C2)` computed on the block matrix itself.
pub fn fast_obs_rank(wd: &WeierstrassData, r: usize) -> usize {
    let eye = RationalMatrix::identity(wd.n2());
    rank(&obs_matrix_from_blocks(&wd.n, &eye, &wd.c2, r + 2))
}

fn random_dense(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> RationalMatrix {
    let entries = (0..rows * cols)
        .map(|_| int(rng.random_range(-bound..=bound)))
        .collect();
    RationalMatrix::from_vec(rows, cols, entries)
}

/// Product of random elementary operations with determinant `+-1`: row
/// additions with small multipliers and swaps.
fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> RationalMatrix {
    let mut m = RationalMatrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..2 * n {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        if rng.random_bool(0.2) {
            for c in 0..n {
                let tmp = m[(i, c)].clone();
                m[(i, c)] = m[(j, c)].clone();
                m[(j, c)] = tmp;
            }
        } else {
            let k: Rational = int(*[-2i64, -1, 1, 2].get(rng.random_range(0..4)).unwrap());
            for c in 0..n {
                let delta = &k * &m[(j, c)];
                m[(i, c)] += delta;
            }
        }
    }
    m
}

/// Deterministic pseudo-random canonical data. `A1`, `C1`, `C2` are dense
/// with entries in `[-bound, bound]`; `N` is strictly upper triangular with
/// entries in the same range; `T`, `S` are unimodular.
pub fn random_canonical(
    seed: u64,
    n1: usize,
    n2: usize,
    m: usize,
    entry_bound: i64,
) -> Result<WeierstrassData, WeierstrassError> {
    if n1 + n2 == 0 {
        return Err(WeierstrassError::InvalidDimensions(
            "n1 + n2 must be at least 1".into(),
        ));
    }
    if entry_bound < 0 {
        return Err(WeierstrassError::InvalidDimensions(
            "entry bound must be non-negative".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a1 = random_dense(&mut rng, n1, n1, entry_bound);
    let mut n = RationalMatrix::zeros(n2, n2);
    for i in 0..n2 {
        for j in i + 1..n2 {
            n[(i, j)] = int(rng.random_range(-entry_bound..=entry_bound));
        }
    }
    let c1 = random_dense(&mut rng, m, n1, entry_bound);
    let c2 = random_dense(&mut rng, m, n2, entry_bound);
    let t = random_unimodular(&mut rng, n1 + n2);
    let s = random_unimodular(&mut rng, n1 + n2);
    Ok(WeierstrassData {
        a1,
        n,
        c1,
        c2,
        t,
        s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{check_order_r, is_impulse_observable, Strategy};
    use crate::linalg::det;

    fn nil(n: usize) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n.saturating_sub(1) {
            m[(i, i + 1)] = int(1);
        }
        m
    }

    fn canonical(
        a1: RationalMatrix,
        n: RationalMatrix,
        c1: RationalMatrix,
        c2: RationalMatrix,
    ) -> WeierstrassData {
        let dim = a1.rows() + n.rows();
        WeierstrassData {
            a1,
            n,
            c1,
            c2,
            t: RationalMatrix::identity(dim),
            s: RationalMatrix::identity(dim),
        }
    }

    #[test]
    fn nilpotency_examples() {
        assert_eq!(nilpotency_index(&RationalMatrix::zeros(2, 2)), Ok(1));
        assert_eq!(nilpotency_index(&nil(2)), Ok(2));
        assert_eq!(nilpotency_index(&nil(4)), Ok(4));
        assert_eq!(
            nilpotency_index(&RationalMatrix::identity(2)),
            Err(WeierstrassError::NotNilpotent)
        );
        assert_eq!(nilpotency_index(&RationalMatrix::zeros(0, 0)), Ok(1));
    }

    #[test]
    fn identity_transforms_reproduce_blocks() {
        let wd = canonical(
            RationalMatrix::zeros(0, 0),
            nil(2),
            RationalMatrix::zeros(1, 0),
            RationalMatrix::from_i64(&[&[0, 1]]),
        );
        let sys = assemble(&wd).unwrap();
        assert_eq!(sys.e(), &nil(2));
        assert_eq!(sys.a(), &RationalMatrix::identity(2));
        assert_eq!(sys.c(), &RationalMatrix::from_i64(&[&[0, 1]]));

        let wd = canonical(
            RationalMatrix::from_i64(&[&[-1]]),
            RationalMatrix::zeros(1, 1),
            RationalMatrix::from_i64(&[&[1]]),
            RationalMatrix::from_i64(&[&[1]]),
        );
        let sys = assemble(&wd).unwrap();
        assert_eq!(sys.e(), &RationalMatrix::from_i64(&[&[1, 0], &[0, 0]]));
        assert_eq!(sys.a(), &RationalMatrix::from_i64(&[&[-1, 0], &[0, 1]]));
        assert_eq!(sys.c(), &RationalMatrix::from_i64(&[&[1, 1]]));
    }

    #[test]
    fn assemble_rejects_bad_data() {
        let mut wd = canonical(
            RationalMatrix::zeros(0, 0),
            RationalMatrix::identity(1),
            RationalMatrix::zeros(1, 0),
            RationalMatrix::from_i64(&[&[1]]),
        );
        assert_eq!(assemble(&wd), Err(WeierstrassError::NotNilpotent));
        wd.n = RationalMatrix::zeros(1, 1);
        wd.t = RationalMatrix::zeros(1, 1);
        assert_eq!(assemble(&wd), Err(WeierstrassError::SingularTransform("T")));
        wd.t = RationalMatrix::identity(2);
        assert!(matches!(
            assemble(&wd),
            Err(WeierstrassError::InvalidDimensions(_))
        ));
    }

    #[test]
    fn transformed_copy_keeps_verdict() {
        let s2 = canonical(
            RationalMatrix::zeros(0, 0),
            nil(2),
            RationalMatrix::zeros(1, 0),
            RationalMatrix::from_i64(&[&[0, 1]]),
        );
        let mut moved = s2.clone();
        moved.t = RationalMatrix::from_i64(&[&[1, 2], &[0, 1]]);
        moved.s = RationalMatrix::from_i64(&[&[0, 1], &[1, -3]]);
        for wd in [&s2, &moved] {
            let rep = is_impulse_observable(&assemble(wd).unwrap(), Strategy::AllOrders).unwrap();
            assert!(!rep.verdict);
        }
    }

    #[test]
    fn fast_rank_examples() {
        let n3 = canonical(
            RationalMatrix::zeros(0, 0),
            nil(3),
            RationalMatrix::zeros(1, 0),
            RationalMatrix::from_i64(&[&[0, 0, 1]]),
        );
        assert!(!fast_rank_condition(&n3, 0));
        assert_eq!(rank(&fast_stack(&n3, 0)), 1);
        // C2 N = C2 N^2 = 0 and N^3 = 0, so the reduced form is 3 * 2 + 0.
        assert_eq!(rank(&fast_stack(&n3, 1)), 0);
        assert_eq!(reduced_form_rank(&n3, 1), 6);
        assert_eq!(fast_obs_rank(&n3, 1), 6);

        let observable = canonical(
            RationalMatrix::zeros(0, 0),
            nil(2),
            RationalMatrix::zeros(1, 0),
            RationalMatrix::from_i64(&[&[1, 0]]),
        );
        assert!(fast_rank_condition(&observable, 0));

        let s2 = canonical(
            RationalMatrix::zeros(0, 0),
            nil(2),
            RationalMatrix::zeros(1, 0),
            RationalMatrix::from_i64(&[&[0, 1]]),
        );
        assert_eq!(reduced_form_rank(&s2, 0), 2);
        assert_eq!(fast_obs_rank(&s2, 0), 2);

        let scalar = canonical(
            RationalMatrix::zeros(0, 0),
            RationalMatrix::zeros(1, 1),
            RationalMatrix::zeros(1, 0),
            RationalMatrix::from_i64(&[&[1]]),
        );
        assert_eq!(reduced_form_rank(&scalar, 0), 1);
        for r in 0..3 {
            assert!(fast_rank_condition(&scalar, r));
        }
    }

    #[test]
    fn generator_contract() {
        let a = random_canonical(7, 2, 3, 2, 3).unwrap();
        assert_eq!(a, random_canonical(7, 2, 3, 2, 3).unwrap());
        assert!(a.n.pow(3).is_zero());
        for i in 0..3 {
            for j in 0..=i {
                assert_eq!(a.n[(i, j)], int(0));
            }
        }
        assert!(det(&a.t) == int(1) || det(&a.t) == int(-1));
        assert!(det(&a.s) == int(1) || det(&a.s) == int(-1));
        let slow = random_canonical(3, 3, 0, 1, 3).unwrap();
        assert!(assemble(&slow).unwrap().is_standard());
        assert!(random_canonical(1, 0, 0, 1, 3).is_err());
    }

    #[test]
    fn oracle_agreement_on_seeds() {
        for seed in 0..20 {
            let wd = random_canonical(
                seed,
                (seed % 3) as usize,
                1 + (seed % 4) as usize,
                1 + (seed % 2) as usize,
                3,
            )
            .unwrap();
            let sys = assemble(&wd).unwrap();
            for r in 0..wd.dim() {
                assert_eq!(
                    check_order_r(&sys, r).unwrap().holds,
                    fast_rank_condition(&wd, r)
                );
                assert_eq!(reduced_form_rank(&wd, r), fast_obs_rank(&wd, r));
            }
        }
    }
}
