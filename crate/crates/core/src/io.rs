//! JSON formats and the canonical report writer.
//!
//! Matrices: `{"rows": r, "cols": c, "field": "rational" | "float64", "data": [[…], …]}`,
//! rational entries as strings `"p/q"`. Subspaces: `{"ambient": n, "basis": [[…], …]}`.

use std::fmt::Write as _;

use serde::Deserialize;
use serde_json::{json, Map, Number, Value};

use crate::error::{Error, Result};
use crate::field::{format_rational, parse_rational, rational_from_f64, FieldKind, Rational};
use crate::matrix::Matrix;
use crate::nbody::{CcSettings, NBodySystem};
use crate::subspace::Subspace;

/// A matrix tagged with the field it was read in.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMatrix {
    Rational(Matrix<Rational>),
    Float(Matrix<f64>),
}

impl AnyMatrix {
    pub fn field(&self) -> FieldKind {
        match self {
            AnyMatrix::Rational(_) => FieldKind::Rational,
            AnyMatrix::Float(_) => FieldKind::Float64,
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        match self {
            AnyMatrix::Rational(m) => m.to_f64(),
            AnyMatrix::Float(m) => m.clone(),
        }
    }

    /// Exact copy; errors for float input since the exact backend needs rationals.
    pub fn to_rational(&self) -> Result<Matrix<Rational>> {
        match self {
            AnyMatrix::Rational(m) => Ok(m.clone()),
            AnyMatrix::Float(_) => Err(Error::FieldMismatch {
                expected: FieldKind::Rational,
                found: FieldKind::Float64,
            }),
        }
    }

    pub fn rows(&self) -> usize {
        match self {
            AnyMatrix::Rational(m) => m.rows(),
            AnyMatrix::Float(m) => m.rows(),
        }
    }
}

fn parse_field(v: Option<&Value>) -> Result<FieldKind> {
    match v.and_then(Value::as_str) {
        None | Some("rational") => Ok(FieldKind::Rational),
        Some("float64") | Some("float") | Some("f64") => Ok(FieldKind::Float64),
        Some(other) => Err(Error::Invalid(format!("unknown field {other:?}"))),
    }
}

fn rational_entry(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => {
            parse_rational(s).ok_or_else(|| Error::Invalid(format!("bad rational {s:?}")))
        }
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else {
                parse_rational(&n.to_string())
                    .ok_or_else(|| Error::Invalid(format!("bad rational {n}")))
            }
        }
        other => Err(Error::Invalid(format!("bad matrix entry {other}"))),
    }
}

fn float_entry(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::Invalid(format!("bad number {n}"))),
        Value::String(s) => match parse_rational(s) {
            Some(r) => Ok(crate::field::rational_to_f64(&r)),
            None => s
                .parse()
                .map_err(|_| Error::Invalid(format!("bad number {s:?}"))),
        },
        other => Err(Error::Invalid(format!("bad matrix entry {other}"))),
    }
}

fn rows_of(v: &Value) -> Result<&Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Invalid("expected an array of rows".into()))
}

fn build<T: crate::field::Field>(
    data: &[Value],
    rows: usize,
    cols: usize,
    entry: impl Fn(&Value) -> Result<T>,
) -> Result<Matrix<T>> {
    if data.len() != rows {
        return Err(Error::DimensionMismatch {
            expected: rows,
            found: data.len(),
        });
    }
    let mut out = Vec::with_capacity(rows);
    for row in data {
        let row = rows_of(row)?;
        if row.len() != cols {
            return Err(Error::DimensionMismatch {
                expected: cols,
                found: row.len(),
            });
        }
        out.push(row.iter().map(&entry).collect::<Result<Vec<T>>>()?);
    }
    if rows == 0 {
        return Ok(Matrix::zeros(0, cols));
    }
    Matrix::from_rows(out)
}

/// Accepts the tagged object or a bare array of rows (rational by default).
pub fn matrix_from_json(v: &Value) -> Result<AnyMatrix> {
    let (data, field) = match v {
        Value::Array(_) => (v, FieldKind::Rational),
        Value::Object(o) => (
            o.get("data")
                .ok_or_else(|| Error::Invalid("matrix without \"data\"".into()))?,
            parse_field(o.get("field"))?,
        ),
        _ => return Err(Error::Invalid("matrix must be an object or array".into())),
    };
    let data = rows_of(data)?;
    let rows = match v.get("rows") {
        Some(r) => r
            .as_u64()
            .ok_or_else(|| Error::Invalid("bad \"rows\"".into()))? as usize,
        None => data.len(),
    };
    let cols = match v.get("cols") {
        Some(c) => c
            .as_u64()
            .ok_or_else(|| Error::Invalid("bad \"cols\"".into()))? as usize,
        None => data.first().and_then(Value::as_array).map_or(0, Vec::len),
    };
    Ok(match field {
        FieldKind::Rational => AnyMatrix::Rational(build(data, rows, cols, rational_entry)?),
        FieldKind::Float64 => AnyMatrix::Float(build(data, rows, cols, float_entry)?),
    })
}

pub fn rational_matrix_to_json(m: &Matrix<Rational>) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "field": "rational",
        "data": m.to_rows().iter().map(|r| r.iter().map(format_rational).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn float_matrix_to_json(m: &Matrix<f64>) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "field": "float64",
        "data": m.to_rows().iter().map(|r| r.iter().map(|x| float(*x)).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

pub fn matrix_to_json(m: &AnyMatrix) -> Value {
    match m {
        AnyMatrix::Rational(m) => rational_matrix_to_json(m),
        AnyMatrix::Float(m) => float_matrix_to_json(m),
    }
}

/// A float as a JSON number; non-finite values become `null`.
pub fn float(x: f64) -> Value {
    Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn rational(r: &Rational) -> Value {
    Value::String(format_rational(r))
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnySubspace {
    Rational(Subspace<Rational>),
    Float(Subspace<f64>),
}

pub fn subspace_from_json(v: &Value, field: FieldKind) -> Result<AnySubspace> {
    let ambient =
        v.get("ambient")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Invalid("subspace without \"ambient\"".into()))? as usize;
    let basis = rows_of(
        v.get("basis")
            .ok_or_else(|| Error::Invalid("subspace without \"basis\"".into()))?,
    )?;
    Ok(match field {
        FieldKind::Rational => {
            let vecs = basis
                .iter()
                .map(|b| rows_of(b)?.iter().map(rational_entry).collect())
                .collect::<Result<Vec<Vec<Rational>>>>()?;
            AnySubspace::Rational(Subspace::new(ambient, vecs, 0.0)?)
        }
        FieldKind::Float64 => {
            let vecs = basis
                .iter()
                .map(|b| rows_of(b)?.iter().map(float_entry).collect())
                .collect::<Result<Vec<Vec<f64>>>>()?;
            AnySubspace::Float(Subspace::new(ambient, vecs, 1e-10)?)
        }
    })
}

pub fn subspace_to_json<T: crate::linalg::Backend>(s: &Subspace<T>) -> Value {
    let basis: Vec<Value> = s
        .basis()
        .iter()
        .map(|b| {
            Value::Array(
                b.iter()
                    .map(|x| match x.exact_value() {
                        Some(r) => rational(&r),
                        None => float(x.as_f64()),
                    })
                    .collect(),
            )
        })
        .collect();
    json!({ "ambient": s.ambient_dim(), "basis": basis })
}

#[derive(Clone, Debug, PartialEq)]
pub enum PathSpec {
    Krein {
        b: AnyMatrix,
        s_max: Option<Rational>,
    },
    Linear {
        a0: AnyMatrix,
        a1: AnyMatrix,
    },
}

pub fn path_from_json(v: &Value) -> Result<PathSpec> {
    let get = |k: &str| {
        v.get(k)
            .ok_or_else(|| Error::Invalid(format!("path without {k:?}")))
    };
    match v.get("type").and_then(Value::as_str) {
        Some("krein") => Ok(PathSpec::Krein {
            b: matrix_from_json(get("B")?)?,
            s_max: v.get("s_max").map(rational_entry).transpose()?,
        }),
        Some("linear") => Ok(PathSpec::Linear {
            a0: matrix_from_json(get("A0")?)?,
            a1: matrix_from_json(get("A1")?)?,
        }),
        other => Err(Error::Invalid(format!("unknown path type {other:?}"))),
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SettingsFile {
    cc_tol: Option<f64>,
    max_iter: Option<usize>,
    collision_guard: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    masses: Vec<f64>,
    alpha: f64,
    positions: Vec<[f64; 2]>,
    #[serde(default)]
    settings: SettingsFile,
}

pub fn problem_from_json(v: &Value) -> Result<(NBodySystem, CcSettings)> {
    let p: ProblemFile = serde_json::from_value(v.clone())?;
    let d = CcSettings::default();
    let settings = CcSettings {
        cc_tol: p.settings.cc_tol.unwrap_or(d.cc_tol),
        max_iter: p.settings.max_iter.unwrap_or(d.max_iter),
        collision_guard: p.settings.collision_guard.unwrap_or(d.collision_guard),
    };
    let sys = NBodySystem::new(p.masses, p.alpha, &p.positions)?
        .with_collision_guard(settings.collision_guard);
    Ok((sys, settings))
}

/// Exact rational for an `f64` that came from a flag or file, if finite.
pub fn exact_from_f64(x: f64) -> Result<Rational> {
    rational_from_f64(x).ok_or_else(|| Error::Invalid(format!("non-finite value {x}")))
}

/// Pretty JSON with sorted keys and floats printed as `{:.16e}`
/// (17 significant digits); integers print as integers.
pub fn to_canonical_string(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                let _ = write!(out, "{:.16e}", n.as_f64().unwrap_or(f64::NAN));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(a) if a.is_empty() => out.push_str("[]"),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, x, depth + 1);
            }
            out.push(']');
        }
        Value::Array(a) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(o) if o.is_empty() => out.push_str("{}"),
        Value::Object(o) => {
            let mut keys: Vec<&String> = o.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &o[*k], depth + 1);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
    }
}

/// Convenience for building report objects in key order-independent fashion.
pub fn object(pairs: impl IntoIterator<Item = (&'static str, Value)>) -> Value {
    Value::Object(
        pairs
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<Map<_, _>>(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    #[test]
    fn rational_round_trip() {
        let m = Matrix::from_rows(vec![
            vec![rat(1, 2), rat(-3, 1)],
            vec![rat(0, 1), rat(7, 9)],
        ])
        .unwrap();
        let v = rational_matrix_to_json(&m);
        assert_eq!(v["data"][0][0], "1/2");
        assert_eq!(matrix_from_json(&v).unwrap(), AnyMatrix::Rational(m));
    }

    #[test]
    fn float_and_bare_arrays() {
        let v: Value =
            serde_json::from_str(r#"{"field":"float64","data":[[1.5,"1/4"],[0,2]]}"#).unwrap();
        let AnyMatrix::Float(m) = matrix_from_json(&v).unwrap() else {
            panic!()
        };
        assert_eq!(m[(0, 1)], 0.25);
        let bare: Value = serde_json::from_str(r#"[["1/3", 0], [0, "-2"]]"#).unwrap();
        assert_eq!(
            matrix_from_json(&bare).unwrap().field(),
            FieldKind::Rational
        );
        let bad: Value = serde_json::from_str(r#"{"rows":2,"cols":2,"data":[[1,2]]}"#).unwrap();
        assert!(matrix_from_json(&bad).is_err());
    }

    #[test]
    fn canonical_writer_sorts_and_fixes_precision() {
        let v = json!({"b": 0.1, "a": [1, 2], "c": {"z": null, "y": "s"}});
        let s = to_canonical_string(&v);
        assert_eq!(
            s,
            "{\n  \"a\": [1, 2],\n  \"b\": 1.0000000000000001e-1,\n  \"c\": {\n    \"y\": \"s\",\n    \"z\": null\n  }\n}\n"
        );
        assert_eq!(float(f64::NAN), Value::Null);
    }

    #[test]
    fn path_and_problem_files() {
        let v: Value =
            serde_json::from_str(r#"{"type":"krein","B":[[1,0],[0,1]],"s_max":"3"}"#).unwrap();
        assert!(matches!(
            path_from_json(&v).unwrap(),
            PathSpec::Krein { .. }
        ));
        let p: Value = serde_json::from_str(
            r#"{"masses":[1,1],"alpha":1,"positions":[[0,0],[1,0]],"settings":{"cc_tol":1e-9}}"#,
        )
        .unwrap();
        let (sys, s) = problem_from_json(&p).unwrap();
        assert_eq!(sys.n(), 2);
        assert_eq!(s.cc_tol, 1e-9);
    }
}
