//! Frequency-domain response `X(s) = (sE - A)^{-1} E w` of the initial-value
//! problem, split into strictly proper part `X_A` and polynomial part `X_P`.

use crate::criteria::{verify_witness, ImpulseWitness};
use crate::linalg::{solve_poly_cramer, PolynomialMatrix, RationalPolynomial};
use crate::rational::Rational;
use crate::system::DescriptorSystem;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrequencyError {
    #[error("initial state has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero denominator in component {0}")]
    ZeroDenominator(usize),
    #[error("constructed witness failed verification (internal defect)")]
    WitnessVerificationFailed,
}

/// Strictly proper / polynomial decomposition of a vector of fractions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSplit {
    /// `(numerator, denominator)` of each strictly proper part.
    pub proper: Vec<(RationalPolynomial, RationalPolynomial)>,
    pub poly: Vec<RationalPolynomial>,
    /// `lim_{s -> inf} s X_A(s)`.
    pub q: Vec<Rational>,
}

/// Euclidean split of each `num / den` into `quot + rem / den` with
/// `deg rem < deg den`, together with the limit of `s * rem / den`.
pub fn split_rational(
    fractions: &[(RationalPolynomial, RationalPolynomial)],
) -> Result<RationalSplit, FrequencyError> {
    let mut proper = Vec::with_capacity(fractions.len());
    let mut poly = Vec::with_capacity(fractions.len());
    let mut q = Vec::with_capacity(fractions.len());
    for (i, (num, den)) in fractions.iter().enumerate() {
        let (quot, rem) = num.div_rem(den).ok_or(FrequencyError::ZeroDenominator(i))?;
        let d = den.degree().expect("nonzero denominator");
        let limit = match d {
            0 => Rational::zero(),
            _ => rem.coeff(d - 1) / den.leading().expect("nonzero denominator"),
        };
        proper.push((rem, den.clone()));
        poly.push(quot);
        q.push(limit);
    }
    Ok(RationalSplit { proper, poly, q })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencySolution {
    pub w: Vec<Rational>,
    /// Numerators of `X_A` over the common denominator.
    pub x_proper_num: Vec<RationalPolynomial>,
    /// Monic `det(sE - A)`.
    pub denom: RationalPolynomial,
    /// `X_P`, the frequency-domain impulse.
    pub x_poly: Vec<RationalPolynomial>,
    pub q: Vec<Rational>,
}

impl FrequencySolution {
    /// Numerators of the full `X(s)` over `denom`.
    pub fn numerators(&self) -> Vec<RationalPolynomial> {
        self.x_proper_num
            .iter()
            .zip(&self.x_poly)
            .map(|(a, p)| a.add(&p.mul(&self.denom)))
            .collect()
    }

    /// Component `i` of `X_A` in lowest terms with a monic denominator.
    pub fn reduced_proper(&self, i: usize) -> (RationalPolynomial, RationalPolynomial) {
        let num = &self.x_proper_num[i];
        if num.is_zero() {
            return (RationalPolynomial::zero(), RationalPolynomial::one());
        }
        let g = num.gcd(&self.denom);
        let (n, _) = num.div_rem(&g).expect("gcd is nonzero");
        let (d, _) = self.denom.div_rem(&g).expect("gcd is nonzero");
        let lead = d.leading().expect("nonzero").recip();
        (n.scale(&lead), d.scale(&lead))
    }

    /// Numerators of `C X(s)` over `denom`; all zero iff the output vanishes.
    pub fn output_numerators(&self, sys: &DescriptorSystem) -> Vec<RationalPolynomial> {
        PolynomialMatrix::constant(sys.c()).mul_vec(&self.numerators())
    }

    pub fn output_vanishes(&self, sys: &DescriptorSystem) -> bool {
        self.output_numerators(sys)
            .iter()
            .all(RationalPolynomial::is_zero)
    }

    /// `(sE - A)(X_A + X_P) = E w`, checked after clearing the denominator.
    pub fn residual_holds(&self, sys: &DescriptorSystem) -> bool {
        let lhs = sys.pencil().mul_vec(&self.numerators());
        let ew = sys.e().mul_vec(&self.w);
        lhs.iter().zip(&ew).all(|(l, r)| *l == self.denom.scale(r))
    }
}

/// Solves the first block row of the frequency-domain equation for initial
/// state `w` and splits the result. The output row is not imposed.
pub fn solve_frequency(
    sys: &DescriptorSystem,
    w: &[Rational],
) -> Result<FrequencySolution, FrequencyError> {
    if w.len() != sys.n() {
        return Err(FrequencyError::DimensionMismatch {
            expected: sys.n(),
            found: w.len(),
        });
    }
    let rhs: Vec<RationalPolynomial> = sys
        .e()
        .mul_vec(w)
        .into_iter()
        .map(RationalPolynomial::constant)
        .collect();
    let cramer = solve_poly_cramer(&sys.pencil(), &rhs).expect("validated pencil is regular");
    let lead = cramer.denominator.leading().expect("nonzero").recip();
    let denom = cramer.denominator.scale(&lead);
    let fractions: Vec<_> = cramer
        .numerators
        .iter()
        .map(|num| (num.scale(&lead), denom.clone()))
        .collect();
    let split = split_rational(&fractions)?;
    Ok(FrequencySolution {
        w: w.to_vec(),
        x_proper_num: split.proper.into_iter().map(|(num, _)| num).collect(),
        denom,
        x_poly: split.poly,
        q: split.q,
    })
}

/// Order of a frequency-domain impulse: the largest component degree, or
/// `None` when `X_P = 0`.
pub fn impulse_order(x_poly: &[RationalPolynomial]) -> Option<usize> {
    x_poly.iter().filter_map(RationalPolynomial::degree).max()
}

/// When `C X = 0` and `X_P != 0`, the pair `(w - q, X_P)` is an unobservable
/// impulse with its initial state.
pub fn polynomial_witness_from_solution(
    sys: &DescriptorSystem,
    sol: &FrequencySolution,
) -> Result<Option<ImpulseWitness>, FrequencyError> {
    if impulse_order(&sol.x_poly).is_none() || !sol.output_vanishes(sys) {
        return Ok(None);
    }
    let v: Vec<Rational> = sol.w.iter().zip(&sol.q).map(|(w, q)| w - q).collect();
    let witness = ImpulseWitness::from_polynomials(v, &sol.x_poly);
    if !verify_witness(sys, &witness) {
        return Err(FrequencyError::WitnessVerificationFailed);
    }
    Ok(Some(witness))
}
