//! Human-readable text for terminal output.

use impobs_core::criteria::ImpulseWitness;
use impobs_core::rational::format_vector;
use impobs_core::RationalPolynomial;

pub fn poly_vector(v: &[RationalPolynomial]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// `order r, v = (...), P(s) = (...)`.
pub fn witness_line(w: &ImpulseWitness) -> String {
    format!(
        "order {}, v = {}, P(s) = {}",
        w.order(),
        format_vector(w.v()),
        poly_vector(&w.polynomials())
    )
}

/// Coefficient tables in both sign conventions, one line each.
pub fn witness_tables(w: &ImpulseWitness, indent: &str) -> String {
    let alt: Vec<String> = w
        .alternating()
        .iter()
        .enumerate()
        .map(|(i, p)| format!("p_{i} = {}", format_vector(p)))
        .collect();
    let plain: Vec<String> = w
        .plain()
        .iter()
        .enumerate()
        .map(|(i, p)| format!("P_{i} = {}", format_vector(p)))
        .collect();
    format!(
        "{indent}P(s) = sum (-s)^i p_i: {}\n{indent}P(s) = sum s^i P_i:    {}",
        alt.join(", "),
        plain.join(", ")
    )
}

/// `num/den`, with parentheses only where a term has several monomials.
pub fn fraction(num: &RationalPolynomial, den: &RationalPolynomial) -> String {
    let wrap = |p: &RationalPolynomial| {
        let text = p.to_string();
        if text.trim_start_matches('-').contains([' ', '*']) {
            format!("({text})")
        } else {
            text
        }
    };
    if num.is_zero() || *den == RationalPolynomial::one() {
        return num.to_string();
    }
    format!("{}/{}", wrap(num), wrap(den))
}
