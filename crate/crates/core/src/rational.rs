//! Exact rational scalars.
//!
//! Entries are `num_rational::BigRational`, which keeps every value in lowest
//! terms with a positive denominator. This module adds the textual form used
//! by the JSON formats: `"p/q"` or a bare integer `"p"`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::str::FromStr;
use thiserror::Error;

pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"` with optional surrounding whitespace and sign.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let bad = || ParseRationalError::Invalid(text.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let valid = |s: &str, signed: bool| {
        let digits = if signed {
            s.strip_prefix(['-', '+']).unwrap_or(s)
        } else {
            s
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return Err(bad());
    }
    let n = BigInt::from_str(num.strip_prefix('+').unwrap_or(num)).map_err(|_| bad())?;
    let d = BigInt::from_str(den).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(text.to_string()));
    }
    Ok(Rational::new(n, d))
}

/// Converts a plain decimal literal such as `-0.125` into the exact rational
/// it spells, without passing through binary floating point.
pub fn parse_decimal(text: &str) -> Result<Rational, ParseRationalError> {
    let t = text.trim();
    let bad = || ParseRationalError::Invalid(text.to_string());
    let (mantissa, exponent) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.bytes().chain(fp.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{ip}{fp}");
    let mut value = Rational::from_integer(BigInt::from_str(&digits).map_err(|_| bad())?);
    let scale = exponent - fp.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Ok(if neg { -value } else { value })
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Human-oriented rendering used in CLI output (`-1/2`, `3`).
pub fn format_vector(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integer_and_fraction() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(
            parse_rational(" 2 / -1 ").unwrap_err(),
            ParseRationalError::Invalid(" 2 / -1 ".into())
        );
        assert_eq!(parse_rational("0/7").unwrap(), int(0));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("--1").is_err());
    }

    #[test]
    fn normalizes_on_construction() {
        let r = frac(10, -4);
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(r.numer(), &BigInt::from(-5));
        assert_eq!(format_rational(&frac(4, 8)), "1/2");
        assert_eq!(format_rational(&frac(-9, 3)), "-3");
    }

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(parse_decimal("0.1").unwrap(), frac(1, 10));
        assert_eq!(parse_decimal("-2.50").unwrap(), frac(-5, 2));
        assert_eq!(parse_decimal("1e-3").unwrap(), frac(1, 1000));
        assert_eq!(parse_decimal("12").unwrap(), int(12));
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal(".").is_err());
    }
}
