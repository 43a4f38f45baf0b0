//! Polynomial JSON: `{"terms":[{"exps":[..],"num":..,"den":..},..]}`.
//!
//! Exact coefficients are written as integers when they fit in `i64` and as
//! decimal strings otherwise; float coefficients use `num` with `den = 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{parse_scalar, Scalar};

fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(i) => json!(i),
        None => json!(n.to_string()),
    }
}

/// A scalar as JSON: an integer, a `"p/q"` string, or a float.
pub fn scalar_value<S: Scalar>(c: &S) -> Value {
    match c.to_rational() {
        Some(q) if q.is_integer() => int_value(q.numer()),
        Some(q) => json!(q.to_string()),
        None => json!(c.to_f64()),
    }
}

pub fn polynomial_to_json<S: Scalar>(p: &Polynomial<S>) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| match c.to_rational() {
            Some(q) => json!({
                "exps": m.exponents(),
                "num": int_value(q.numer()),
                "den": int_value(q.denom()),
            }),
            None => json!({ "exps": m.exponents(), "num": c.to_f64(), "den": 1 }),
        })
        .collect();
    json!({ "terms": terms })
}

fn number<S: Scalar>(v: &Value, what: &str) -> Result<S> {
    let bad = || Error::Input(format!("{what} must be a number or a rational string"));
    match v {
        Value::String(s) => parse_scalar(s).ok_or_else(bad),
        Value::Number(n) if n.is_i64() || n.is_u64() => {
            parse_scalar(&n.to_string()).ok_or_else(bad)
        }
        Value::Number(n) => {
            let x = n.as_f64().ok_or_else(bad)?;
            S::try_from_float(x).ok_or_else(|| {
                Error::Input(format!(
                    "{what} = {x} is not exact; write it as a rational string or use --float"
                ))
            })
        }
        _ => Err(bad()),
    }
}

/// A JSON number or rational string as a scalar.
pub fn scalar_from_json<S: Scalar>(v: &Value, what: &str) -> Result<S> {
    number(v, what)
}

pub fn polynomial_from_json<S: Scalar>(v: &Value, dim: usize) -> Result<Polynomial<S>> {
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Input("polynomial JSON needs a \"terms\" array".into()))?;
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let exps = t
            .get("exps")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Input("term needs an \"exps\" array".into()))?
            .iter()
            .map(|e| {
                e.as_u64()
                    .and_then(|e| u32::try_from(e).ok())
                    .ok_or_else(|| Error::Input("exponents must be non-negative integers".into()))
            })
            .collect::<Result<Vec<u32>>>()?;
        let num: S = number(t.get("num").unwrap_or(&Value::Null), "num")?;
        let den: S = match t.get("den") {
            None => S::one(),
            Some(d) => number(d, "den")?,
        };
        if den.is_zero() {
            return Err(Error::Input("zero denominator".into()));
        }
        out.push((exps, num / den));
    }
    Polynomial::from_terms(dim, out)
}

/// Exact rational helper for callers that already hold a `BigRational`.
pub fn rational_value(q: &BigRational) -> Value {
    if q.is_integer() {
        int_value(q.numer())
    } else {
        json!(q.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parser::parse_polynomial;

    type Q = BigRational;

    #[test]
    fn round_trip() {
        let p: Polynomial<Q> = parse_polynomial("3*x1^2*x2 - 1/2*x3 + 123456789012345678901234567890", 3).unwrap();
        let v = polynomial_to_json(&p);
        assert_eq!(polynomial_from_json::<Q>(&v, 3).unwrap(), p);
        let text = v.to_string();
        assert!(text.contains("\"num\":-1,") || text.contains("\"num\":-1}"), "{text}");
        assert!(text.contains("\"123456789012345678901234567890\""));
    }

    #[test]
    fn float_coefficients() {
        let v = json!({"terms": [{"exps": [1, 0], "num": 0.5, "den": 1}]});
        assert!(polynomial_from_json::<Q>(&v, 2).is_err());
        let p = polynomial_from_json::<f64>(&v, 2).unwrap();
        assert_eq!(p.coeff(&crate::poly::Monomial::new(vec![1, 0])), 0.5);
        let v = json!({"terms": [{"exps": [1, 0], "num": "1/2"}]});
        assert_eq!(polynomial_from_json::<Q>(&v, 2).unwrap().to_string(), "1/2*x1");
    }

    #[test]
    fn wrong_dimension() {
        let v = json!({"terms": [{"exps": [1, 0, 0], "num": 1, "den": 1}]});
        assert!(matches!(
            polynomial_from_json::<Q>(&v, 2),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
