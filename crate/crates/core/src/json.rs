//! JSON file formats (all indices 1-based) and a deterministic writer.
//!
//! ```text
//! tensor       {"m":3,"entries":[{"i":1,"j":1,"k":3,"p":1.0}, ...]}   i <= j, omitted entries are 0
//! point        {"x":[0.5,0.5,0.0]}
//! skew matrix  {"m":3,"a":[[0,a12,a13],[-a12,0,a23],[-a13,-a23,0]]}
//! family spec  {"family":1,"alpha":0.3,"beta":0.6,"gamma":0.9}
//! permutation  {"sigma":[2,3,1]}
//! kernel       {"n":3,"q":[{"i":1,"j":2,"k":1,"p":0.5}, ...]}          i <= j, omitted entries are 0
//! ```
//!
//! Output is rendered by [`to_canonical_string`]: object keys sorted, floats
//! printed with 17 significant digits, so equal values give equal bytes.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{QsoError, Result};
use crate::kernel::FiniteKernel;
use crate::orthopreserve::{op_family, OpFamilySpec};
use crate::simplex::SimplexPoint;
use crate::tensor::{QsoTensor, ValidationMode};
use crate::volterra::SkewMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorJson {
    pub m: usize,
    pub entries: Vec<EntryJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointJson {
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkewJson {
    pub m: usize,
    pub a: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelJson {
    pub n: usize,
    pub q: Vec<EntryJson>,
}

fn format_err(e: serde_json::Error) -> QsoError {
    QsoError::Format(e.to_string())
}

/// Expands `i <= j` entries into a dense symmetric array.
fn dense_from_entries(m: usize, entries: &[EntryJson], what: &str) -> Result<Vec<f64>> {
    let mut dense = vec![0.0; m * m * m];
    let mut seen = std::collections::BTreeSet::new();
    for e in entries {
        if e.i == 0 || e.j == 0 || e.k == 0 || e.i > m || e.j > m || e.k > m {
            return Err(QsoError::Format(format!(
                "{what} entry ({},{},{}) out of range 1..={m}",
                e.i, e.j, e.k
            )));
        }
        if e.i > e.j {
            return Err(QsoError::Format(format!(
                "{what} entry ({},{},{}) must have i <= j",
                e.i, e.j, e.k
            )));
        }
        if !seen.insert((e.i, e.j, e.k)) {
            return Err(QsoError::Format(format!(
                "duplicate {what} entry ({},{},{})",
                e.i, e.j, e.k
            )));
        }
        let (i, j, k) = (e.i - 1, e.j - 1, e.k - 1);
        dense[(i * m + j) * m + k] = e.p;
        dense[(j * m + i) * m + k] = e.p;
    }
    Ok(dense)
}

fn entries_from_dense(m: usize, dense: &[f64]) -> Vec<EntryJson> {
    let mut entries = Vec::new();
    for i in 0..m {
        for j in i..m {
            for k in 0..m {
                let p = dense[(i * m + j) * m + k];
                if p != 0.0 {
                    entries.push(EntryJson {
                        i: i + 1,
                        j: j + 1,
                        k: k + 1,
                        p,
                    });
                }
            }
        }
    }
    entries
}

impl TensorJson {
    pub fn from_tensor(v: &QsoTensor) -> Self {
        TensorJson {
            m: v.dim(),
            entries: entries_from_dense(v.dim(), v.as_flat()),
        }
    }

    pub fn to_tensor(&self, mode: ValidationMode) -> Result<QsoTensor> {
        if self.m < 2 {
            return Err(QsoError::InvalidDimension(self.m, "a QSO needs m >= 2"));
        }
        QsoTensor::validate(self.m, dense_from_entries(self.m, &self.entries, "tensor")?, mode)
    }
}

impl KernelJson {
    pub fn from_kernel(k: &FiniteKernel) -> Self {
        KernelJson {
            n: k.atoms(),
            q: entries_from_dense(k.atoms(), k.as_flat()),
        }
    }

    pub fn to_kernel(&self) -> Result<FiniteKernel> {
        if self.n == 0 {
            return Err(QsoError::InvalidDimension(0, "a kernel needs at least one atom"));
        }
        FiniteKernel::new(self.n, dense_from_entries(self.n, &self.q, "kernel")?)
    }
}

impl SkewJson {
    pub fn from_skew(a: &SkewMatrix) -> Self {
        SkewJson {
            m: a.dim(),
            a: a.rows(),
        }
    }

    pub fn to_skew(&self) -> Result<SkewMatrix> {
        if self.a.len() != self.m {
            return Err(QsoError::InvalidSkew(format!(
                "m = {} but {} rows",
                self.m,
                self.a.len()
            )));
        }
        SkewMatrix::from_rows(&self.a)
    }
}

pub fn parse_tensor(text: &str, mode: ValidationMode) -> Result<QsoTensor> {
    serde_json::from_str::<TensorJson>(text)
        .map_err(format_err)?
        .to_tensor(mode)
}

/// Reads an operator given either as a tensor or as a family spec.
pub fn parse_operator(text: &str, mode: ValidationMode) -> Result<QsoTensor> {
    let value: Value = serde_json::from_str(text).map_err(format_err)?;
    if value.get("family").is_some() {
        let spec: OpFamilySpec = serde_json::from_value(value).map_err(format_err)?;
        return op_family(&spec);
    }
    serde_json::from_value::<TensorJson>(value)
        .map_err(format_err)?
        .to_tensor(mode)
}

pub fn parse_point(text: &str) -> Result<SimplexPoint> {
    SimplexPoint::new(serde_json::from_str::<PointJson>(text).map_err(format_err)?.x)
}

pub fn parse_kernel(text: &str) -> Result<FiniteKernel> {
    serde_json::from_str::<KernelJson>(text)
        .map_err(format_err)?
        .to_kernel()
}

pub fn parse_skew(text: &str) -> Result<SkewMatrix> {
    serde_json::from_str::<SkewJson>(text).map_err(format_err)?.to_skew()
}

pub fn tensor_value(v: &QsoTensor) -> Value {
    serde_json::to_value(TensorJson::from_tensor(v)).expect("tensor JSON is serializable")
}

pub fn point_value(x: &SimplexPoint) -> Value {
    serde_json::to_value(PointJson { x: x.coords().to_vec() }).expect("point JSON is serializable")
}

/// Renders a value with sorted keys and 17-significant-digit floats.
pub fn to_canonical_string(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, &mut out);
    out
}

fn write_value(value: &Value, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else {
                out.push_str(&format_float(n.as_f64().expect("finite JSON number")));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (n, item) in items.iter().enumerate() {
                if n > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (n, key) in keys.into_iter().enumerate() {
                if n > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(key.clone()).to_string());
                out.push(':');
                write_value(&map[key], out);
            }
            out.push('}');
        }
    }
}

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros dropped,
/// exponent form outside `1e-5 <= |v| < 1e17`.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{:.16e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let sign = if negative { "-" } else { "" };

    if !(-5..17).contains(&exp) {
        let mut mant = format!("{}.{}", &digits[..1], &digits[1..]);
        trim_fraction(&mut mant);
        return format!("{sign}{mant}e{exp}");
    }
    let mut body = if exp >= 0 {
        let split = exp as usize + 1;
        format!("{}.{}", &digits[..split], &digits[split..])
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    };
    trim_fraction(&mut body);
    format!("{sign}{body}")
}

fn trim_fraction(s: &mut String) {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(-2.25), "-2.25");
        assert_eq!(format_float(0.1), "0.10000000000000001");
        assert_eq!(format_float(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(format_float(1e-7), "9.9999999999999995e-8");
        assert_eq!(format_float(123456.0), "123456");
        assert_eq!(format_float(1e20), "1e20");
        assert_eq!(format_float(0.0001), "0.0001");
        for v in [0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, 6.02e23, -7.5e-6] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn canonical_string_sorts_keys() {
        let v = json!({"zeta": 1, "alpha": [0.5, true, null], "mid": {"b": "x", "a": -3}});
        assert_eq!(
            to_canonical_string(&v),
            r#"{"alpha":[0.5,true,null],"mid":{"a":-3,"b":"x"},"zeta":1}"#
        );
    }

    #[test]
    fn tensor_json_round_trip() {
        let text = r#"{"m":2,"entries":[{"i":1,"j":1,"k":1,"p":1.0},{"i":1,"j":2,"k":1,"p":0.25},{"i":1,"j":2,"k":2,"p":0.75},{"i":2,"j":2,"k":2,"p":1.0}]}"#;
        let v = parse_tensor(text, ValidationMode::Strict).unwrap();
        assert_eq!(v.get(1, 0, 1), 0.75);
        let again: TensorJson = serde_json::from_value(tensor_value(&v)).unwrap();
        assert_eq!(again.to_tensor(ValidationMode::Strict).unwrap(), v);
    }

    #[test]
    fn tensor_json_errors() {
        let lower = r#"{"m":2,"entries":[{"i":2,"j":1,"k":1,"p":1.0}]}"#;
        assert!(matches!(
            parse_tensor(lower, ValidationMode::Strict),
            Err(QsoError::Format(_))
        ));
        let out_of_range = r#"{"m":2,"entries":[{"i":1,"j":3,"k":1,"p":1.0}]}"#;
        assert!(matches!(
            parse_tensor(out_of_range, ValidationMode::Strict),
            Err(QsoError::Format(_))
        ));
        let dup = r#"{"m":2,"entries":[{"i":1,"j":1,"k":1,"p":1.0},{"i":1,"j":1,"k":1,"p":1.0}]}"#;
        assert!(matches!(
            parse_tensor(dup, ValidationMode::Strict),
            Err(QsoError::Format(_))
        ));
        let missing = r#"{"m":2,"entries":[{"i":1,"j":1,"k":1,"p":1.0}]}"#;
        assert!(matches!(
            parse_tensor(missing, ValidationMode::Strict),
            Err(QsoError::NotStochastic { .. })
        ));
        assert!(matches!(
            parse_tensor("not json", ValidationMode::Strict),
            Err(QsoError::Format(_))
        ));
    }

    #[test]
    fn operator_from_family_spec() {
        let v = parse_operator(
            r#"{"family":2,"alpha":0.5,"beta":0.5,"gamma":0.5}"#,
            ValidationMode::Strict,
        )
        .unwrap();
        assert_eq!(v.get(0, 1, 0), 0.5);
        assert!(parse_operator(
            r#"{"family":8,"alpha":0.5,"beta":0.5,"gamma":0.5}"#,
            ValidationMode::Strict
        )
        .is_err());
    }

    #[test]
    fn other_formats() {
        let x = parse_point(r#"{"x":[0.5,0.5,0.0]}"#).unwrap();
        assert_eq!(x.coords(), &[0.5, 0.5, 0.0]);
        let a = parse_skew(r#"{"m":2,"a":[[0,0.5],[-0.5,0]]}"#).unwrap();
        assert_eq!(a.get(0, 1), 0.5);
        assert!(parse_skew(r#"{"m":3,"a":[[0,0.5],[-0.5,0]]}"#).is_err());
        let k = parse_kernel(r#"{"n":2,"q":[{"i":1,"j":1,"k":1,"p":1},{"i":1,"j":2,"k":1,"p":0.5},{"i":1,"j":2,"k":2,"p":0.5},{"i":2,"j":2,"k":2,"p":1}]}"#).unwrap();
        assert_eq!(k.get(1, 0, 0), 0.5);
    }
}
