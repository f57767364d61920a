//! JSON report objects.
//!
//! Key order is insertion order, and numbers use the shortest round-trip
//! representation with integral values printed without a fraction, so
//! reports are byte-stable.

use serde_json::{Map, Number, Value};

use crate::analysis::{SchattenExponent, SobolevFit};
use crate::linalg::C64;
use crate::multiplier::InvarianceReport;
use crate::torus::{CoarseLevel, PartitionContrast};

/// Largest magnitude below which integral floats are printed as integers.
const EXACT_INT_LIMIT: f64 = 9_007_199_254_740_992.0;

/// A JSON number for `x`; `null` when `x` is not finite.
pub fn number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    if x.fract() == 0.0 && x.abs() < EXACT_INT_LIMIT {
        return Value::Number(Number::from(x as i64));
    }
    Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

pub fn complex(z: C64) -> Value {
    let mut m = Map::new();
    m.insert("re".into(), number(z.re));
    m.insert("im".into(), number(z.im));
    Value::Object(m)
}

pub fn invariance(r: &InvarianceReport) -> Value {
    let mut m = Map::new();
    m.insert("verdict".into(), Value::Bool(r.invariant));
    m.insert("leakage".into(), number(r.max_leakage));
    m.insert(
        "worst_pair".into(),
        match r.worst_pair {
            Some((j, l)) => Value::Array(vec![Value::from(j), Value::from(l)]),
            None => Value::Null,
        },
    );
    m.insert("tolerance".into(), number(r.tolerance_used));
    Value::Object(m)
}

/// `{"<r>": value, ...}` in the given order.
pub fn schatten(values: &[(SchattenExponent, f64)]) -> Value {
    let mut m = Map::new();
    for (r, v) in values {
        m.insert(r.to_string(), number(*v));
    }
    Value::Object(m)
}

pub fn sobolev(fit: &SobolevFit) -> Value {
    let mut m = Map::new();
    m.insert("nu".into(), number(fit.nu));
    m.insert("m".into(), number(fit.m));
    m.insert("C".into(), number(fit.c));
    Value::Object(m)
}

pub fn multiplicity_table(levels: &[CoarseLevel]) -> Value {
    Value::Array(
        levels
            .iter()
            .map(|l| {
                let mut m = Map::new();
                m.insert("ell".into(), Value::from(l.ell));
                m.insert("d".into(), Value::from(l.multiplicity));
                m.insert("truncated".into(), Value::Bool(l.truncated));
                Value::Object(m)
            })
            .collect(),
    )
}

pub fn contrast(rows: &[PartitionContrast]) -> Value {
    let mut m = Map::new();
    for row in rows {
        let mut entry = Map::new();
        entry.insert("fine".into(), invariance(&row.fine));
        entry.insert("coarse".into(), invariance(&row.coarse));
        m.insert(row.name.clone(), Value::Object(entry));
    }
    Value::Object(m)
}

/// Flattened `path value` lines, one per leaf, for plain-text output.
pub fn to_text(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let p = if prefix.is_empty() {
                        k.clone()
                    } else {
                        format!("{prefix}.{k}")
                    };
                    walk(&p, x, out);
                }
            }
            Value::Array(items) if items.iter().all(|x| !x.is_object()) => {
                let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
                out.push_str(&format!("{prefix} {}\n", parts.join(",")));
            }
            Value::Array(items) => {
                for (i, x) in items.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), x, out);
                }
            }
            leaf => out.push_str(&format!("{prefix} {leaf}\n")),
        }
    }
    let mut out = String::new();
    walk("", v, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_are_compact() {
        assert_eq!(number(6.0).to_string(), "6");
        assert_eq!(number(-3.0).to_string(), "-3");
        assert_eq!(number(14f64.sqrt()).to_string(), "3.7416573867739413");
        assert_eq!(number(f64::NAN), Value::Null);
        assert_eq!(number(1e300).to_string(), "1e+300");
    }

    #[test]
    fn schatten_keys_keep_order() {
        let v = schatten(&[
            (SchattenExponent::new(1.0).unwrap(), 6.0),
            (SchattenExponent::new(2.0).unwrap(), 14f64.sqrt()),
            (SchattenExponent::INFINITY, 3.0),
        ]);
        assert_eq!(v.to_string(), r#"{"1":6,"2":3.7416573867739413,"inf":3}"#);
    }

    #[test]
    fn text_rendering() {
        let r = InvarianceReport {
            invariant: false,
            max_leakage: 0.5,
            worst_pair: Some((0, 1)),
            tolerance_used: 1e-8,
        };
        let mut top = Map::new();
        top.insert("invariance".into(), invariance(&r));
        let text = to_text(&Value::Object(top));
        assert_eq!(
            text,
            "invariance.verdict false\ninvariance.leakage 0.5\ninvariance.worst_pair 0,1\ninvariance.tolerance 1e-8\n"
        );
    }
}
