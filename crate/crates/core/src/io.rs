//! File formats: points, strata and polynomial lists.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::lie::GradedAlgebra;
use crate::num::{from_f64, parse_rational, Rational};
use crate::orbit::{Stratum, StratumSpec};
use crate::parse::parse_lines;
use crate::poly::{Point, Polynomial};

fn value_to_rational(name: &str, v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else {
                n.as_f64()
                    .and_then(from_f64)
                    .ok_or_else(|| Error::Input(format!("coordinate `{name}` is not a finite number")))
            }
        }
        _ => Err(Error::Input(format!("coordinate `{name}` must be a number or a string like \"3/4\""))),
    }
}

/// Point from a `{name: value}` map; values are integers, floats or strings
/// `"a/b"`. Coordinates that are not mentioned are zero.
pub fn point_from_json(alg: &GradedAlgebra, values: &BTreeMap<String, Value>) -> Result<Point> {
    let parsed: Vec<(&str, Rational)> =
        values.iter().map(|(k, v)| Ok((k.as_str(), value_to_rational(k, v)?))).collect::<Result<_>>()?;
    Point::from_names(alg, parsed)
}

pub fn point_to_json(alg: &GradedAlgebra, p: &Point) -> BTreeMap<String, Value> {
    (0..alg.dim())
        .filter(|&i| !num_traits::Zero::is_zero(p.get(i)))
        .map(|i| (alg.name(i).to_string(), Value::String(p.get(i).to_string())))
        .collect()
}

pub fn read_point(alg: &GradedAlgebra, path: &Path) -> Result<Point> {
    let text = std::fs::read_to_string(path)?;
    let values: BTreeMap<String, Value> = serde_json::from_str(&text)?;
    point_from_json(alg, &values)
}

/// True if the JSON document looks like a stratum rather than a point.
pub fn is_stratum_document(v: &Value) -> bool {
    v.as_object()
        .is_some_and(|o| o.contains_key("set_zero") || o.contains_key("identify") || o.contains_key("witness_point"))
}

pub fn read_stratum(alg: &GradedAlgebra, path: &Path) -> Result<Stratum> {
    let text = std::fs::read_to_string(path)?;
    let spec: StratumSpec = serde_json::from_str(&text)?;
    Stratum::from_spec(alg, &spec)
}

/// Reads a polynomial list; the first error is reported with its line.
pub fn read_polynomials(alg: &GradedAlgebra, text: &str) -> Result<Vec<(usize, Polynomial)>> {
    parse_lines(alg, text)
        .into_iter()
        .map(|(line, r)| match r {
            Ok(p) => Ok((line, p)),
            Err(Error::Parse { pos, msg }) => Err(Error::Input(format!("line {line}, column {}: {msg}", pos + 1))),
            Err(e) => Err(Error::Input(format!("line {line}: {e}"))),
        })
        .collect()
}
