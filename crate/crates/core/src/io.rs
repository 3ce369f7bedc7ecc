//! JSON interchange for curvature operators, jets and connections.
//!
//! Indices on the wire are 1-based; rationals are `"p/q"` strings. Only
//! nonzero entries are written, in a fixed order, so output is
//! byte-for-byte deterministic.
//!
//! ```text
//! tensor:     {"m": 3, "entries": [{"i":1,"j":2,"k":1,"l":2,"v":"1/1"}, ...]}
//! jet:        {"m": 3, "order": 6, "terms": [{"exps":[1,0,0],"v":"1/3"}, ...]}
//! connection: {"m": 3, "order": 6, "gamma": [{"i":1,"j":1,"k":2,"poly":[<jet terms>]}, ...]}
//! ```
//! Connection entries are stored once for `i ≤ j`; `Γ[j][i][k]` is implied.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::CurvatureOp;
use crate::connection::{Connection, ConnectionError};
use crate::jet::{total_degree, Jet};
use crate::rational::{self, Rational};
use crate::tensor::Tensor4;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("JSON error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("dimension {m} exceeds the configured maximum {max}")]
    TooLarge { m: usize, max: usize },
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Field {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub v: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorFile {
    pub m: usize,
    pub entries: Vec<TensorEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetTerm {
    pub exps: Vec<u16>,
    pub v: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JetFile {
    pub m: usize,
    pub order: u32,
    pub terms: Vec<JetTerm>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub poly: Vec<JetTerm>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionFile {
    pub m: usize,
    pub order: u32,
    pub gamma: Vec<GammaEntry>,
}

fn check_index(field: String, value: usize, m: usize) -> Result<usize, FormatError> {
    if value == 0 || value > m {
        Err(field_err(field, format!("index {value} outside 1..={m}")))
    } else {
        Ok(value - 1)
    }
}

fn parse_value(field: String, v: &str) -> Result<Rational, FormatError> {
    rational::parse(v).map_err(|e| field_err(field, e.to_string()))
}

/// Upper bound on `m` for file input and generation.
pub fn max_dimension() -> usize {
    std::env::var("CURVFORGE_MAX_M")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(8)
}

fn check_dimension(m: usize) -> Result<(), FormatError> {
    let max = max_dimension();
    if m > max {
        return Err(FormatError::TooLarge { m, max });
    }
    if m == 0 {
        return Err(field_err("m", "dimension must be positive"));
    }
    Ok(())
}

/// Parses a tensor file into a raw (unvalidated) 4-index array, so that
/// symmetry violations can be reported by the caller.
pub fn parse_tensor(text: &str) -> Result<Tensor4<Rational>, FormatError> {
    let file: TensorFile = serde_json::from_str(text)?;
    let m = file.m;
    check_dimension(m)?;
    let mut t = Tensor4::from_fn(m, |_, _, _, _| rational::zero());
    let mut seen = BTreeSet::new();
    for (n, e) in file.entries.iter().enumerate() {
        let f = |name: &str| format!("entries[{n}].{name}");
        let idx = [
            check_index(f("i"), e.i, m)?,
            check_index(f("j"), e.j, m)?,
            check_index(f("k"), e.k, m)?,
            check_index(f("l"), e.l, m)?,
        ];
        if !seen.insert(idx) {
            return Err(field_err(format!("entries[{n}]"), "duplicate index tuple"));
        }
        t.set(idx[0], idx[1], idx[2], idx[3], parse_value(f("v"), &e.v)?);
    }
    Ok(t)
}

pub fn tensor_to_file(a: &CurvatureOp) -> TensorFile {
    TensorFile {
        m: a.dim(),
        entries: a
            .tensor()
            .entries()
            .filter(|(_, v)| !num_traits::Zero::is_zero(*v))
            .map(|([i, j, k, l], v)| TensorEntry {
                i: i + 1,
                j: j + 1,
                k: k + 1,
                l: l + 1,
                v: rational::to_string(v),
            })
            .collect(),
    }
}

pub fn tensor_to_json(a: &CurvatureOp) -> String {
    let mut s = serde_json::to_string_pretty(&tensor_to_file(a)).expect("serializable");
    s.push('\n');
    s
}

/// Terms in (degree, exponent) order.
pub fn jet_terms(jet: &Jet) -> Vec<JetTerm> {
    let mut terms: Vec<_> = jet.terms().collect();
    terms.sort_by(|(a, _), (b, _)| (total_degree(a), *a).cmp(&(total_degree(b), *b)));
    terms
        .into_iter()
        .map(|(e, c)| JetTerm {
            exps: e.to_vec(),
            v: rational::to_string(c),
        })
        .collect()
}

fn jet_from_terms(field: &str, m: usize, order: u32, terms: &[JetTerm]) -> Result<Jet, FormatError> {
    let parsed = terms
        .iter()
        .enumerate()
        .map(|(n, t)| Ok((t.exps.clone(), parse_value(format!("{field}[{n}].v"), &t.v)?)))
        .collect::<Result<Vec<_>, FormatError>>()?;
    Jet::from_terms(m, order, parsed).map_err(|e| field_err(field, e.to_string()))
}

pub fn jet_to_file(jet: &Jet) -> JetFile {
    JetFile {
        m: jet.nvars(),
        order: jet.order(),
        terms: jet_terms(jet),
    }
}

pub fn parse_jet(text: &str) -> Result<Jet, FormatError> {
    let file: JetFile = serde_json::from_str(text)?;
    check_dimension(file.m)?;
    jet_from_terms("terms", file.m, file.order, &file.terms)
}

pub fn jet_to_json(jet: &Jet) -> String {
    serde_json::to_string(&jet_to_file(jet)).expect("serializable")
}

pub fn connection_to_file(nabla: &Connection) -> ConnectionFile {
    let m = nabla.dim();
    let mut gamma = Vec::new();
    for i in 0..m {
        for j in i..m {
            for k in 0..m {
                let g = nabla.gamma(i, j, k);
                if !g.is_zero() {
                    gamma.push(GammaEntry {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                        poly: jet_terms(g),
                    });
                }
            }
        }
    }
    ConnectionFile {
        m,
        order: nabla.order(),
        gamma,
    }
}

pub fn connection_to_json(nabla: &Connection) -> String {
    let mut s = serde_json::to_string_pretty(&connection_to_file(nabla)).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_connection(text: &str) -> Result<Connection, FormatError> {
    let file: ConnectionFile = serde_json::from_str(text)?;
    let m = file.m;
    check_dimension(m)?;
    let order = file.order;
    let mut gamma = vec![Jet::zero(m, order); m * m * m];
    let mut seen = BTreeSet::new();
    for (n, e) in file.gamma.iter().enumerate() {
        let f = |name: &str| format!("gamma[{n}].{name}");
        let i = check_index(f("i"), e.i, m)?;
        let j = check_index(f("j"), e.j, m)?;
        let k = check_index(f("k"), e.k, m)?;
        if i > j {
            return Err(field_err(format!("gamma[{n}]"), "entries must have i <= j"));
        }
        if !seen.insert((i, j, k)) {
            return Err(field_err(format!("gamma[{n}]"), "duplicate index triple"));
        }
        let jet = jet_from_terms(&f("poly"), m, order, &e.poly)?;
        gamma[(j * m + i) * m + k] = jet.clone();
        gamma[(i * m + j) * m + k] = jet;
    }
    Connection::from_symbols(m, order, gamma).map_err(|e: ConnectionError| field_err("connection", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_connection, random_curvature, rng_from_seed, ComponentMask};

    #[test]
    fn jet_wire_format_is_exact() {
        let j = &Jet::monomial(2, 3, &[1, 0], rational::frac(1, 3))
            + &Jet::constant(2, 3, rational::int(-2));
        assert_eq!(
            jet_to_json(&j),
            r#"{"m":2,"order":3,"terms":[{"exps":[0,0],"v":"-2/1"},{"exps":[1,0],"v":"1/3"}]}"#
        );
        assert_eq!(parse_jet(&jet_to_json(&j)).unwrap(), j);
    }

    #[test]
    fn tensor_round_trip() {
        let a = random_curvature(5, 3, ComponentMask::ALL).unwrap();
        let t = parse_tensor(&tensor_to_json(&a)).unwrap();
        assert_eq!(CurvatureOp::try_from_tensor(t).unwrap(), a);
    }

    #[test]
    fn connection_round_trip() {
        let c = random_connection(&mut rng_from_seed(2), 3, 4);
        assert_eq!(parse_connection(&connection_to_json(&c)).unwrap(), c);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad = r#"{"m":3,"entries":[{"i":1,"j":4,"k":1,"l":1,"v":"1"}]}"#;
        let msg = parse_tensor(bad).unwrap_err().to_string();
        assert!(msg.contains("entries[0].j"), "{msg}");

        let bad_value = r#"{"m":3,"entries":[{"i":1,"j":2,"k":1,"l":1,"v":"1/0"}]}"#;
        assert!(parse_tensor(bad_value).unwrap_err().to_string().contains("entries[0].v"));

        let syntax = "{\n  \"m\": 3,\n  \"entries\": [\n}";
        match parse_tensor(syntax) {
            Err(FormatError::Json { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }

        let high = r#"{"m":3,"order":2,"gamma":[{"i":1,"j":1,"k":1,"poly":[{"exps":[3,0,0],"v":"1"}]}]}"#;
        assert!(parse_connection(high).unwrap_err().to_string().contains("gamma[0].poly"));

        let swapped = r#"{"m":3,"order":2,"gamma":[{"i":2,"j":1,"k":1,"poly":[]}]}"#;
        assert!(parse_connection(swapped).is_err());
    }
}
