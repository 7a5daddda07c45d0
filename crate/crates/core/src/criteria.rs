//! Impulse-observability criteria evaluated directly on `(E, A, C)`.
//!
//! The central object is the block matrix
//!
//! ```text
//!          | E  A           |
//!          |    E  A        |
//!          |       .  .     |
//!  O_k  =  |          E  A  |
//!          |             E  |
//!          | 0  C           |
//!          |       .  .     |
//!          |          0  C  |
//! ```
//!
//! with `k` block columns and `2k - 1` block rows. Its kernel is exactly the
//! set of stacked vectors `(p_{-1}, p_0, ..., p_r)`, `k = r + 2`, satisfying
//! `E p_i + A p_{i+1} = 0` (`i = -1..=r`, `p_{r+1} = 0`) and `C p_i = 0`,
//! i.e. the pairs `(v, P(s))` with `P(s) = sum (-s)^i p_i` and
//! `(sE - A) P(s) = E v`, `C P(s) = 0`.
//!
//! The system has no unobservable impulse of order `<= r` iff
//! `rank O_{r+2} = n (r + 1) + rank E`, and the answer is the same for every
//! `r` in `0..n`.

use crate::exec::Execution;
use crate::linalg::{nullspace_basis, rank, PolynomialMatrix, RationalMatrix, RationalPolynomial};
use crate::rational::Rational;
use crate::system::DescriptorSystem;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriteriaError {
    #[error("block count k = {0} must be at least 2")]
    BlockCountTooSmall(usize),
    #[error("order r = {r} out of range 0..={max}")]
    OrderOutOfRange { r: usize, max: usize },
    #[error("criterion disagrees across orders (internal defect): {0:?}")]
    EquivalenceViolated(Vec<RankRow>),
    #[error("rank test fails at r = {0} but no witness was found (internal defect)")]
    WitnessMissing(usize),
    #[error("witness of order 0 cannot be reduced further")]
    NothingToReduce,
    #[error("witness failed verification")]
    WitnessVerificationFailed,
}

/// `O_k(E, A, C)` together with its block count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockObservabilityMatrix {
    k: usize,
    matrix: RationalMatrix,
}

impl BlockObservabilityMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> RationalMatrix {
        self.matrix
    }
}

/// Assembles `O_k` from raw blocks. `E`, `A` must be `n x n` and `C` `m x n`;
/// `n = 0` and `m = 0` are allowed.
pub fn obs_matrix_from_blocks(
    e: &RationalMatrix,
    a: &RationalMatrix,
    c: &RationalMatrix,
    k: usize,
) -> RationalMatrix {
    assert!(k >= 2, "O_k needs k >= 2");
    let n = e.rows();
    let m = c.rows();
    assert_eq!(a.shape(), (n, n));
    assert_eq!(c.cols(), n);
    let mut out = RationalMatrix::zeros(k * n + (k - 1) * m, k * n);
    for j in 0..k {
        out.set_block(j * n, j * n, e);
        if j + 1 < k {
            out.set_block(j * n, (j + 1) * n, a);
        }
    }
    for j in 0..k - 1 {
        out.set_block(k * n + j * m, (j + 1) * n, c);
    }
    out
}

pub fn build_obs_matrix(
    sys: &DescriptorSystem,
    k: usize,
) -> Result<BlockObservabilityMatrix, CriteriaError> {
    if k < 2 {
        return Err(CriteriaError::BlockCountTooSmall(k));
    }
    Ok(BlockObservabilityMatrix {
        k,
        matrix: obs_matrix_from_blocks(sys.e(), sys.a(), sys.c(), k),
    })
}

/// Rank target for order `r`: `n (r + 1) + rank E`.
pub fn required_rank(sys: &DescriptorSystem, r: usize) -> usize {
    sys.n() * (r + 1) + sys.rank_e()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrderCheck {
    pub r: usize,
    pub holds: bool,
    pub rank_found: usize,
    pub rank_required: usize,
}

fn check_range(sys: &DescriptorSystem, r: usize) -> Result<(), CriteriaError> {
    let max = sys.n() - 1;
    if r > max {
        return Err(CriteriaError::OrderOutOfRange { r, max });
    }
    Ok(())
}

/// Tests `rank O_{r+2} = n (r + 1) + rank E`, i.e. absence of unobservable
/// impulses of order `<= r`. Requires `r <= n - 1`.
pub fn check_order_r(sys: &DescriptorSystem, r: usize) -> Result<OrderCheck, CriteriaError> {
    check_range(sys, r)?;
    Ok(check_order_unbounded(sys, r))
}

/// Same as [`check_order_r`] without the `r <= n - 1` range restriction.
pub fn check_order_unbounded(sys: &DescriptorSystem, r: usize) -> OrderCheck {
    let rank_found = rank(&obs_matrix_from_blocks(sys.e(), sys.a(), sys.c(), r + 2));
    let rank_required = required_rank(sys, r);
    OrderCheck {
        r,
        holds: rank_found == rank_required,
        rank_found,
        rank_required,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Only `r = 0`: `rank [E A; 0 E; 0 C] = n + rank E`.
    FirstOrderOnly,
    /// Every `r` in `0..n`, cross-checked for agreement.
    AllOrders,
    SingleOrder(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RankRow {
    pub r: usize,
    pub rank: usize,
    pub required: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObservabilityReport {
    pub verdict: bool,
    pub strategy: Strategy,
    pub rank_e: usize,
    pub rank_table: Vec<RankRow>,
    pub witness: Option<ImpulseWitness>,
}

pub fn is_impulse_observable(
    sys: &DescriptorSystem,
    strategy: Strategy,
) -> Result<ObservabilityReport, CriteriaError> {
    is_impulse_observable_with(sys, strategy, Execution::default())
}

/// Like [`is_impulse_observable`], with explicit control over how the per-order
/// rank checks are scheduled.
pub fn is_impulse_observable_with(
    sys: &DescriptorSystem,
    strategy: Strategy,
    exec: Execution,
) -> Result<ObservabilityReport, CriteriaError> {
    let orders: Vec<usize> = match strategy {
        Strategy::FirstOrderOnly => vec![0],
        Strategy::AllOrders => (0..sys.n()).collect(),
        Strategy::SingleOrder(r) => {
            check_range(sys, r)?;
            vec![r]
        }
    };
    let checks = exec.map(&orders, |&r| check_order_unbounded(sys, r));
    let rank_table: Vec<RankRow> = checks
        .iter()
        .map(|c| RankRow {
            r: c.r,
            rank: c.rank_found,
            required: c.rank_required,
        })
        .collect();
    if checks.windows(2).any(|w| w[0].holds != w[1].holds) {
        return Err(CriteriaError::EquivalenceViolated(rank_table));
    }
    let verdict = checks.iter().all(|c| c.holds);
    let witness = match checks.iter().filter(|c| !c.holds).map(|c| c.r).min() {
        None => None,
        Some(r) => Some(search_witness(sys, r).ok_or(CriteriaError::WitnessMissing(r))?),
    };
    Ok(ObservabilityReport {
        verdict,
        strategy,
        rank_e: sys.rank_e(),
        rank_table,
        witness,
    })
}

/// An unobservable impulse `P(s)` with its impulsive initial state `v`.
///
/// Coefficients are stored in the alternating convention
/// `P(s) = p_0 - s p_1 + ... + (-s)^r p_r`, which keeps the kernel layout of
/// `O_{r+2}` and the witness indices aligned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImpulseWitness {
    v: Vec<Rational>,
    coeffs: Vec<Vec<Rational>>,
}

fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

impl ImpulseWitness {
    /// Stores `(v, p_0..p_r)` as given, without trimming or checking.
    pub fn from_alternating(v: Vec<Rational>, coeffs: Vec<Vec<Rational>>) -> Self {
        Self { v, coeffs }
    }

    /// Builds from power-basis coefficient vectors `P(s) = sum s^i c_i`.
    pub fn from_plain(v: Vec<Rational>, plain: Vec<Vec<Rational>>) -> Self {
        let coeffs = plain
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                if i % 2 == 0 {
                    c
                } else {
                    c.into_iter().map(|x| -x).collect()
                }
            })
            .collect();
        Self { v, coeffs }
    }

    /// Builds from the components of `P(s)`; trailing zero coefficients are
    /// dropped so the order is the true degree.
    pub fn from_polynomials(v: Vec<Rational>, components: &[RationalPolynomial]) -> Self {
        let deg = components
            .iter()
            .filter_map(RationalPolynomial::degree)
            .max();
        let plain = match deg {
            None => Vec::new(),
            Some(d) => (0..=d)
                .map(|i| components.iter().map(|p| p.coeff(i)).collect())
                .collect(),
        };
        Self::from_plain(v, plain)
    }

    /// The impulsive initial state (`p_{-1}`).
    pub fn v(&self) -> &[Rational] {
        &self.v
    }

    /// `p_0, ..., p_r` in the alternating convention.
    pub fn alternating(&self) -> &[Vec<Rational>] {
        &self.coeffs
    }

    /// Power-basis coefficients: entry `i` is the coefficient vector of `s^i`.
    pub fn plain(&self) -> Vec<Vec<Rational>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i % 2 == 0 {
                    c.clone()
                } else {
                    c.iter().map(|x| -x).collect()
                }
            })
            .collect()
    }

    /// The order `r` (index of the last stored coefficient vector).
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Component polynomials of `P(s)`.
    pub fn polynomials(&self) -> Vec<RationalPolynomial> {
        let n = self.v.len();
        let plain = self.plain();
        (0..n)
            .map(|j| {
                RationalPolynomial::new(
                    plain
                        .iter()
                        .map(|c| c.get(j).cloned().unwrap_or_else(Rational::zero))
                        .collect(),
                )
            })
            .collect()
    }
}

/// Kernel vectors of `O_{r+2}` split into `(p_{-1}, [p_0..p_r])`.
fn split_kernel_vector(x: &[Rational], n: usize) -> (Vec<Rational>, Vec<Vec<Rational>>) {
    let v = x[..n].to_vec();
    let ps = x[n..].chunks(n).map(<[Rational]>::to_vec).collect();
    (v, ps)
}

/// Witness of order `<= r` read from the kernel of `O_{r+2}`, requiring
/// `r <= n - 1`.
///
/// Among the RREF kernel basis vectors with a nonzero impulse part, the one
/// of highest trimmed order is chosen (first in basis order on ties). The
/// maximal order over the basis is the maximal order over the whole kernel.
pub fn find_witness(
    sys: &DescriptorSystem,
    r: usize,
) -> Result<Option<ImpulseWitness>, CriteriaError> {
    check_range(sys, r)?;
    Ok(search_witness(sys, r))
}

/// [`find_witness`] without the range restriction on `r`.
pub fn search_witness(sys: &DescriptorSystem, r: usize) -> Option<ImpulseWitness> {
    let n = sys.n();
    let o = obs_matrix_from_blocks(sys.e(), sys.a(), sys.c(), r + 2);
    let mut best: Option<(usize, ImpulseWitness)> = None;
    for x in nullspace_basis(&o) {
        let (v, mut ps) = split_kernel_vector(&x, n);
        while ps.last().is_some_and(|p| is_zero_vec(p)) {
            ps.pop();
        }
        let Some(order) = ps.len().checked_sub(1) else {
            continue;
        };
        if best.as_ref().is_none_or(|(o, _)| order > *o) {
            best = Some((order, ImpulseWitness::from_alternating(v, ps)));
        }
    }
    best.map(|(_, w)| w)
}

/// Exact check of `(sE - A) P(s) = E v` and `C P(s) = 0` as polynomial
/// identities, with `P` nonzero in its top coefficient.
pub fn verify_witness(sys: &DescriptorSystem, w: &ImpulseWitness) -> bool {
    let n = sys.n();
    if w.v.len() != n || w.coeffs.is_empty() || w.coeffs.iter().any(|p| p.len() != n) {
        return false;
    }
    if is_zero_vec(w.coeffs.last().expect("nonempty")) {
        return false;
    }
    let p = w.polynomials();
    let lhs = sys.pencil().mul_vec(&p);
    let ev = sys.e().mul_vec(&w.v);
    let state_ok = lhs
        .iter()
        .zip(&ev)
        .all(|(l, r)| *l == RationalPolynomial::constant(r.clone()));
    let output_ok = PolynomialMatrix::constant(sys.c())
        .mul_vec(&p)
        .iter()
        .all(RationalPolynomial::is_zero);
    state_ok && output_ok
}

/// Drops an order-`r` witness (`r >= 1`) to the order-0 witness
/// `(p_{r-1}, p_r)`; the result is verified and `E p_r = 0` is checked.
pub fn order_reduce(
    sys: &DescriptorSystem,
    w: &ImpulseWitness,
) -> Result<ImpulseWitness, CriteriaError> {
    let r = w.order();
    if r == 0 {
        return Err(CriteriaError::NothingToReduce);
    }
    let top = w.coeffs[r].clone();
    let reduced = ImpulseWitness::from_alternating(w.coeffs[r - 1].clone(), vec![top.clone()]);
    if !verify_witness(sys, &reduced) || !is_zero_vec(&sys.e().mul_vec(&top)) {
        return Err(CriteriaError::WitnessVerificationFailed);
    }
    Ok(reduced)
}

/// `dim ker O_{r+2}`; always at least `n - rank E`, with equality exactly
/// when no unobservable impulse of order `<= r` exists.
pub fn obs_nullity(sys: &DescriptorSystem, r: usize) -> usize {
    (r + 2) * sys.n() - check_order_unbounded(sys, r).rank_found
}

/// Sign helper for rendering the alternating convention: `(-1)^i`.
pub fn alternating_sign(i: usize) -> Rational {
    if i.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn nil(n: usize) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n.saturating_sub(1) {
            m[(i, i + 1)] = int(1);
        }
        m
    }

    fn sys(e: RationalMatrix, a: RationalMatrix, c: &[&[i64]]) -> DescriptorSystem {
        DescriptorSystem::validate(e, a, RationalMatrix::from_i64(c)).unwrap()
    }

    fn s1() -> DescriptorSystem {
        sys(nil(2), RationalMatrix::identity(2), &[&[1, 0]])
    }

    fn s2() -> DescriptorSystem {
        sys(nil(2), RationalMatrix::identity(2), &[&[0, 1]])
    }

    fn n3() -> DescriptorSystem {
        sys(nil(3), RationalMatrix::identity(3), &[&[0, 0, 1]])
    }

    /// Rank via Gauss-Jordan pivots over the rationals; a separate route from
    /// the fraction-free kernel behind `rank`.
    fn rref_rank(m: &RationalMatrix) -> usize {
        crate::linalg::rref(m).1.len()
    }

    #[test]
    fn obs_matrix_layout_k2() {
        let s = s2();
        let o = build_obs_matrix(&s, 2).unwrap();
        let e = s.e();
        let a = s.a();
        let expected = RationalMatrix::vstack(&[
            &RationalMatrix::hstack(&[e, a]),
            &RationalMatrix::hstack(&[&RationalMatrix::zeros(2, 2), e]),
            &RationalMatrix::hstack(&[&RationalMatrix::zeros(1, 2), s.c()]),
        ]);
        assert_eq!(o.matrix(), &expected);
        assert_eq!(o.k(), 2);
    }

    #[test]
    fn obs_matrix_sizes() {
        let o = build_obs_matrix(&s1(), 3).unwrap();
        assert_eq!(o.matrix().shape(), (8, 6));
        assert_eq!(
            build_obs_matrix(&s1(), 1),
            Err(CriteriaError::BlockCountTooSmall(1))
        );
    }

    #[test]
    fn obs_matrix_standard_system_has_full_column_rank() {
        let a = RationalMatrix::from_i64(&[&[1, -2], &[3, 0]]);
        let s = sys(RationalMatrix::identity(2), a, &[&[2, 5]]);
        let o = build_obs_matrix(&s, 2).unwrap();
        assert_eq!(rank(o.matrix()), 4);
    }

    #[test]
    fn fixed_ranks_agree_with_rref_oracle() {
        // Frozen from hand elimination, confirmed by Gauss-Jordan.
        let cases = [(s1(), 0, 3, 3), (s2(), 0, 2, 3), (n3(), 1, 6, 8)];
        for (s, r, found, required) in cases {
            let o = obs_matrix_from_blocks(s.e(), s.a(), s.c(), r + 2);
            assert_eq!(rref_rank(&o), found);
            let c = check_order_r(&s, r).unwrap();
            assert_eq!((c.rank_found, c.rank_required), (found, required));
            assert_eq!(c.holds, found == required);
        }
    }

    #[test]
    fn order_range_is_enforced() {
        assert_eq!(
            check_order_r(&s1(), 2),
            Err(CriteriaError::OrderOutOfRange { r: 2, max: 1 })
        );
        assert!(find_witness(&s1(), 2).is_err());
    }

    #[test]
    fn strategies_on_fixtures() {
        let a = RationalMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[-1, 2, 3]]);
        let standard = sys(RationalMatrix::identity(3), a, &[&[0, 0, 0]]);
        for st in [
            Strategy::FirstOrderOnly,
            Strategy::AllOrders,
            Strategy::SingleOrder(2),
        ] {
            let rep = is_impulse_observable(&standard, st).unwrap();
            assert!(rep.verdict);
            assert!(rep.witness.is_none());
        }

        let rep = is_impulse_observable(&s2(), Strategy::AllOrders).unwrap();
        assert!(!rep.verdict);
        assert_eq!(rep.rank_table.len(), 2);
        assert!(rep.rank_table.iter().all(|row| row.rank != row.required));
        assert_eq!(rep.witness.as_ref().unwrap().order(), 0);

        let rep = is_impulse_observable(&s1(), Strategy::AllOrders).unwrap();
        assert!(rep.verdict);
        assert_eq!(
            rep.rank_table,
            vec![
                RankRow {
                    r: 0,
                    rank: 3,
                    required: 3
                },
                RankRow {
                    r: 1,
                    rank: 5,
                    required: 5
                }
            ]
        );
    }

    #[test]
    fn sequential_and_parallel_reports_match() {
        for s in [s1(), s2(), n3()] {
            let a =
                is_impulse_observable_with(&s, Strategy::AllOrders, Execution::Sequential).unwrap();
            let b =
                is_impulse_observable_with(&s, Strategy::AllOrders, Execution::Parallel).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn witness_fixtures() {
        assert_eq!(find_witness(&s1(), 0).unwrap(), None);
        let w = find_witness(&s2(), 0).unwrap().unwrap();
        assert_eq!(w.v(), ints(&[0, -1]).as_slice());
        assert_eq!(w.alternating(), &[ints(&[1, 0])]);
        assert!(verify_witness(&s2(), &w));

        let w = find_witness(&n3(), 1).unwrap().unwrap();
        assert_eq!(w.order(), 1);
        assert_eq!(w.v(), ints(&[0, 0, 1]).as_slice());
        assert_eq!(w.alternating(), &[ints(&[0, -1, 0]), ints(&[1, 0, 0])]);
        assert_eq!(
            w.polynomials(),
            vec![
                RationalPolynomial::from_i64(&[0, -1]),
                RationalPolynomial::from_i64(&[-1]),
                RationalPolynomial::zero()
            ]
        );
        assert!(verify_witness(&n3(), &w));
    }

    #[test]
    fn verify_rejects_bad_witnesses() {
        let bad = ImpulseWitness::from_alternating(ints(&[0, 0]), vec![ints(&[1, 0])]);
        assert!(!verify_witness(&s2(), &bad));
        let zero = ImpulseWitness::from_alternating(ints(&[3, 1]), vec![ints(&[0, 0])]);
        assert!(!verify_witness(&s2(), &zero));
        let empty = ImpulseWitness::from_alternating(ints(&[0, -1]), vec![]);
        assert!(!verify_witness(&s2(), &empty));
        let short = ImpulseWitness::from_alternating(ints(&[0]), vec![ints(&[1, 0])]);
        assert!(!verify_witness(&s2(), &short));
    }

    #[test]
    fn order_reduction_on_n3() {
        let w = ImpulseWitness::from_alternating(
            ints(&[0, 0, 1]),
            vec![ints(&[0, -1, 0]), ints(&[1, 0, 0])],
        );
        let red = order_reduce(&n3(), &w).unwrap();
        assert_eq!(red.order(), 0);
        assert_eq!(red.v(), ints(&[0, -1, 0]).as_slice());
        assert_eq!(red.alternating(), &[ints(&[1, 0, 0])]);
        assert!(n3()
            .e()
            .mul_vec(&red.alternating()[0])
            .iter()
            .all(Zero::is_zero));
        assert_eq!(
            order_reduce(&n3(), &red),
            Err(CriteriaError::NothingToReduce)
        );
    }

    #[test]
    fn order_reduction_detects_corruption() {
        let w = ImpulseWitness::from_alternating(
            ints(&[0, 0, 1]),
            vec![ints(&[0, -1, 0]), ints(&[0, 1, 0])],
        );
        assert_eq!(
            order_reduce(&n3(), &w),
            Err(CriteriaError::WitnessVerificationFailed)
        );
    }

    #[test]
    fn plain_and_alternating_conventions() {
        let w =
            ImpulseWitness::from_alternating(ints(&[1]), vec![ints(&[2]), ints(&[3]), ints(&[5])]);
        assert_eq!(w.plain(), vec![ints(&[2]), ints(&[-3]), ints(&[5])]);
        assert_eq!(ImpulseWitness::from_plain(ints(&[1]), w.plain()), w);
        assert_eq!(alternating_sign(3), int(-1));
    }

    #[test]
    fn nullity_identity_on_fixtures() {
        for (s, observable) in [(s1(), true), (s2(), false), (n3(), false)] {
            for r in 0..s.n() {
                let floor = s.n() - s.rank_e();
                let nullity = obs_nullity(&s, r);
                assert!(nullity >= floor);
                assert_eq!(nullity == floor, observable);
            }
        }
    }

    #[test]
    fn output_free_system() {
        let s = DescriptorSystem::validate(
            nil(2),
            RationalMatrix::identity(2),
            RationalMatrix::zeros(0, 2),
        )
        .unwrap();
        let o = build_obs_matrix(&s, 3).unwrap();
        assert_eq!(o.matrix().shape(), (6, 6));
        let rep = is_impulse_observable(&s, Strategy::AllOrders).unwrap();
        assert!(!rep.verdict);
        assert!(verify_witness(&s, rep.witness.as_ref().unwrap()));

        let index_one = DescriptorSystem::validate(
            RationalMatrix::from_i64(&[&[1, 0], &[0, 0]]),
            RationalMatrix::identity(2),
            RationalMatrix::zeros(0, 2),
        )
        .unwrap();
        assert!(
            is_impulse_observable(&index_one, Strategy::AllOrders)
                .unwrap()
                .verdict
        );
    }
}
