//! JSON file formats: system input, check reports and generator sidecars.
//!
//! Rationals travel as strings `"p"` / `"p/q"`; bare JSON integers are
//! accepted on input. JSON floats are refused unless approximate ingest is
//! requested, in which case the literal text is converted exactly.

use crate::CliError;
use impobs_core::criteria::{ImpulseWitness, ObservabilityReport, RankRow, Strategy};
use impobs_core::rational::{format_rational, parse_decimal, parse_rational};
use impobs_core::weierstrass::WeierstrassData;
use impobs_core::{DescriptorSystem, Rational, RationalMatrix, RationalPolynomial};
use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};
use std::io::Write;
use std::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RawSystemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "E")]
    pub e: Vec<Vec<Value>>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Value>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<Value>>,
}

#[derive(Clone, Debug)]
pub struct SystemFile {
    pub name: Option<String>,
    pub system: DescriptorSystem,
}

fn entry(v: &Value, approx: bool, at: &str) -> Result<Rational, CliError> {
    let bad = |what: &str| CliError::Input(format!("{at}: {what}"));
    match v {
        Value::Number(num) if num.is_i64() || num.is_u64() => {
            parse_rational(&num.to_string()).map_err(|e| bad(&e.to_string()))
        }
        Value::Number(num) if approx => {
            parse_decimal(&num.to_string()).map_err(|e| bad(&e.to_string()))
        }
        Value::Number(num) => Err(bad(&format!(
            "float literal {num} refused in exact mode (use \"p/q\" or --approx)"
        ))),
        Value::String(s) => match parse_rational(s) {
            Ok(r) => Ok(r),
            Err(_) if approx => parse_decimal(s).map_err(|e| bad(&e.to_string())),
            Err(e) => Err(bad(&format!("{e} in {s:?}"))),
        },
        other => Err(bad(&format!(
            "expected a number or \"p/q\" string, got {other}"
        ))),
    }
}

/// Parses a list of rows. `cols` fixes the width for matrices that may have
/// no rows.
fn parse_matrix(
    rows: &[Vec<Value>],
    cols: Option<usize>,
    approx: bool,
    label: &str,
) -> Result<RationalMatrix, CliError> {
    let width = match (rows.first(), cols) {
        (Some(r), _) => r.len(),
        (None, Some(c)) => c,
        (None, None) => 0,
    };
    let mut entries = Vec::with_capacity(rows.len() * width);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(CliError::Input(format!(
                "DimensionMismatch: {label} row {i} has {} entries, expected {width}",
                row.len()
            )));
        }
        for (j, v) in row.iter().enumerate() {
            entries.push(entry(v, approx, &format!("{label}[{i}][{j}]"))?);
        }
    }
    Ok(RationalMatrix::from_vec(rows.len(), width, entries))
}

impl RawSystemFile {
    pub fn from_matrices(
        name: Option<String>,
        e: &RationalMatrix,
        a: &RationalMatrix,
        c: &RationalMatrix,
    ) -> Self {
        Self {
            name,
            e: matrix_to_json(e),
            a: matrix_to_json(a),
            c: matrix_to_json(c),
        }
    }

    pub fn into_system(self, approx: bool) -> Result<SystemFile, CliError> {
        let e = parse_matrix(&self.e, None, approx, "E")?;
        let a = parse_matrix(&self.a, None, approx, "A")?;
        let c = parse_matrix(&self.c, Some(e.cols()), approx, "C")?;
        let system = DescriptorSystem::validate(e, a, c)?;
        Ok(SystemFile {
            name: self.name,
            system,
        })
    }
}

pub fn read_system(path: &Path, approx: bool) -> Result<SystemFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let raw: RawSystemFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    raw.into_system(approx)
}

fn rational_to_json(r: &Rational) -> Value {
    let text = format_rational(r);
    match text.parse::<i64>() {
        Ok(i) => Value::Number(Number::from(i)),
        Err(_) => Value::String(text),
    }
}

/// Integers that fit in `i64` become JSON numbers, everything else `"p/q"`.
pub fn matrix_to_json(m: &RationalMatrix) -> Vec<Vec<Value>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| rational_to_json(&m[(i, j)]))
                .collect()
        })
        .collect()
}

pub fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn parse_strings(v: &[String]) -> Result<Vec<Rational>, CliError> {
    v.iter()
        .map(|s| parse_rational(s).map_err(|e| CliError::Input(format!("{e} in {s:?}"))))
        .collect()
}

pub fn strategy_name(s: Strategy) -> String {
    match s {
        Strategy::FirstOrderOnly => "first".into(),
        Strategy::AllOrders => "all".into(),
        Strategy::SingleOrder(r) => format!("r={r}"),
    }
}

pub fn parse_strategy(text: &str) -> Result<Strategy, String> {
    match text {
        "first" => Ok(Strategy::FirstOrderOnly),
        "all" => Ok(Strategy::AllOrders),
        _ => text
            .strip_prefix("r=")
            .and_then(|k| k.parse().ok())
            .map(Strategy::SingleOrder)
            .ok_or_else(|| format!("expected first, all or r=K, got {text:?}")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRowJson {
    pub r: usize,
    pub rank: usize,
    pub required: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub v: Vec<String>,
    pub order: usize,
    /// `p_i` with `P(s) = sum (-s)^i p_i`.
    pub alternating: Vec<Vec<String>>,
    /// `P_i` with `P(s) = sum s^i P_i`.
    pub plain: Vec<Vec<String>>,
}

impl WitnessJson {
    pub fn from_witness(w: &ImpulseWitness) -> Self {
        Self {
            v: strings(w.v()),
            order: w.order(),
            alternating: w.alternating().iter().map(|p| strings(p)).collect(),
            plain: w.plain().iter().map(|p| strings(p)).collect(),
        }
    }

    /// Rebuilds the witness and checks that both coefficient lists and the
    /// order describe the same `P(s)`.
    pub fn to_witness(&self) -> Result<ImpulseWitness, CliError> {
        let v = parse_strings(&self.v)?;
        let coeffs = self
            .alternating
            .iter()
            .map(|p| parse_strings(p))
            .collect::<Result<Vec<_>, _>>()?;
        let w = ImpulseWitness::from_alternating(v, coeffs);
        let plain = self
            .plain
            .iter()
            .map(|p| parse_strings(p))
            .collect::<Result<Vec<_>, _>>()?;
        if w.plain() != plain || w.order() != self.order {
            return Err(CliError::Input(
                "witness coefficient lists are inconsistent".into(),
            ));
        }
        Ok(w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloatRow {
    pub r: usize,
    pub exact: usize,
    pub float: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloatComparison {
    pub policy: String,
    pub rows: Vec<FloatRow>,
    pub disagreements: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub verdict: bool,
    pub strategy: String,
    pub rank_table: Vec<RankRowJson>,
    #[serde(rename = "rank_E")]
    pub rank_e: usize,
    /// Coefficients of `det(sE - A)`, constant term first.
    pub det_pencil: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub float_comparison: Option<FloatComparison>,
}

impl ReportFile {
    pub fn new(name: Option<String>, sys: &DescriptorSystem, rep: &ObservabilityReport) -> Self {
        Self {
            name,
            verdict: rep.verdict,
            strategy: strategy_name(rep.strategy),
            rank_table: rep
                .rank_table
                .iter()
                .map(|r| RankRowJson {
                    r: r.r,
                    rank: r.rank,
                    required: r.required,
                })
                .collect(),
            rank_e: rep.rank_e,
            det_pencil: strings(sys.det_pencil().coeffs()),
            witness: rep.witness.as_ref().map(WitnessJson::from_witness),
            float_comparison: None,
        }
    }

    pub fn to_report(&self) -> Result<ObservabilityReport, CliError> {
        Ok(ObservabilityReport {
            verdict: self.verdict,
            strategy: parse_strategy(&self.strategy).map_err(CliError::Input)?,
            rank_e: self.rank_e,
            rank_table: self
                .rank_table
                .iter()
                .map(|r| RankRow {
                    r: r.r,
                    rank: r.rank,
                    required: r.required,
                })
                .collect(),
            witness: self
                .witness
                .as_ref()
                .map(WitnessJson::to_witness)
                .transpose()?,
        })
    }

    pub fn det_pencil_poly(&self) -> Result<RationalPolynomial, CliError> {
        Ok(RationalPolynomial::new(parse_strings(&self.det_pencil)?))
    }
}

/// Canonical data behind a generated system.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalFile {
    pub seed: u64,
    pub bound: i64,
    pub n1: usize,
    pub n2: usize,
    pub m: usize,
    #[serde(rename = "A1")]
    pub a1: Vec<Vec<Value>>,
    #[serde(rename = "N")]
    pub n: Vec<Vec<Value>>,
    #[serde(rename = "C1")]
    pub c1: Vec<Vec<Value>>,
    #[serde(rename = "C2")]
    pub c2: Vec<Vec<Value>>,
    #[serde(rename = "T")]
    pub t: Vec<Vec<Value>>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<Value>>,
}

impl CanonicalFile {
    pub fn new(seed: u64, bound: i64, wd: &WeierstrassData) -> Self {
        Self {
            seed,
            bound,
            n1: wd.n1(),
            n2: wd.n2(),
            m: wd.m(),
            a1: matrix_to_json(&wd.a1),
            n: matrix_to_json(&wd.n),
            c1: matrix_to_json(&wd.c1),
            c2: matrix_to_json(&wd.c2),
            t: matrix_to_json(&wd.t),
            s: matrix_to_json(&wd.s),
        }
    }

    pub fn to_data(&self) -> Result<WeierstrassData, CliError> {
        let (n1, n2) = (Some(self.n1), Some(self.n2));
        let dim = Some(self.n1 + self.n2);
        Ok(WeierstrassData {
            a1: parse_matrix(&self.a1, n1, false, "A1")?,
            n: parse_matrix(&self.n, n2, false, "N")?,
            c1: parse_matrix(&self.c1, n1, false, "C1")?,
            c2: parse_matrix(&self.c2, n2, false, "C2")?,
            t: parse_matrix(&self.t, dim, false, "T")?,
            s: parse_matrix(&self.s, dim, false, "S")?,
        })
    }
}

pub fn to_json_text<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text
}

/// Writes through a temporary file in the target directory, then renames it
/// into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io_err = |e: std::io::Error| CliError::Output(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(contents.as_bytes()).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn raw(v: Value) -> RawSystemFile {
        serde_json::from_value(v).unwrap()
    }

    #[test]
    fn parses_integers_and_fractions() {
        let f = raw(json!({"E": [[1, "1/2"], [0, 0]], "A": [[0, 0], [0, 1]], "C": [["-3/4", 2]]}))
            .into_system(false)
            .unwrap();
        assert_eq!(format_rational(&f.system.e()[(0, 1)]), "1/2");
        assert_eq!(format_rational(&f.system.c()[(0, 0)]), "-3/4");
    }

    #[test]
    fn floats_need_approx() {
        let doc = json!({"E": [[0.5]], "A": [[1]], "C": [[1]]});
        assert!(matches!(
            raw(doc.clone()).into_system(false),
            Err(CliError::Input(_))
        ));
        let f = raw(doc).into_system(true).unwrap();
        assert_eq!(format_rational(&f.system.e()[(0, 0)]), "1/2");
    }

    #[test]
    fn empty_c_is_zero_rows() {
        let f = raw(json!({"E": [[1, 0], [0, 1]], "A": [[0, 0], [0, 0]], "C": []}))
            .into_system(false)
            .unwrap();
        assert_eq!(f.system.c().shape(), (0, 2));
    }

    #[test]
    fn rejects_ragged_rows_and_bad_strings() {
        let ragged = raw(json!({"E": [[1, 0], [0]], "A": [[0, 0], [0, 0]], "C": []}));
        assert!(ragged
            .into_system(false)
            .unwrap_err()
            .to_string()
            .contains("DimensionMismatch"));
        let zero_den = raw(json!({"E": [["1/0"]], "A": [[1]], "C": []}));
        assert!(zero_den.into_system(false).is_err());
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in [
            Strategy::FirstOrderOnly,
            Strategy::AllOrders,
            Strategy::SingleOrder(3),
        ] {
            assert_eq!(parse_strategy(&strategy_name(s)), Ok(s));
        }
        assert!(parse_strategy("r=").is_err());
        assert!(parse_strategy("some").is_err());
    }

    #[test]
    fn large_integers_serialize_as_strings() {
        let big = parse_rational("123456789012345678901234567890").unwrap();
        assert_eq!(
            rational_to_json(&big),
            json!("123456789012345678901234567890")
        );
        assert_eq!(rational_to_json(&impobs_core::rational::int(-7)), json!(-7));
        assert_eq!(
            rational_to_json(&parse_rational("2/6").unwrap()),
            json!("1/3")
        );
    }
}
