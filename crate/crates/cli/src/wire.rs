//! Exact JSON encodings. Integers are decimal strings, rationals `"p/q"` in
//! lowest terms with `q > 0`, approximate reals dyadic rationals. No floats.

use endodyn::approx::dyadic_nearest;
use endodyn::exactpoly::{IntPoly, RealAlgebraic};
use endodyn::linalg::{IntMatrix, Matrix, RatMatrix};
use endodyn::numfield::{FieldElem, RealField};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

/// Bits kept when an `f64` is written as a dyadic rational.
pub const DYADIC_BITS: u32 = 40;

pub fn int(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn rat(x: &BigRational) -> Value {
    Value::String(format!("{}/{}", x.numer(), x.denom()))
}

pub fn int_vec(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn rat_vec(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(rat).collect())
}

pub fn int_matrix(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| int_vec(m.row(i))).collect())
}

pub fn rat_matrix(m: &RatMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| rat_vec(m.row(i))).collect())
}

/// Coefficients in ascending degree.
pub fn poly(p: &IntPoly) -> Value {
    int_vec(p.coeffs())
}

pub fn algebraic(r: &RealAlgebraic) -> Value {
    json!({ "min_poly": poly(r.min_poly()), "lo": rat(r.lo()), "hi": rat(r.hi()) })
}

pub fn dyadic(x: f64) -> Value {
    match dyadic_nearest(x, DYADIC_BITS) {
        Some(r) => rat(&r),
        None => Value::Null,
    }
}

pub fn field(k: &RealField) -> Value {
    json!({ "modulus": poly(k.modulus()), "root": algebraic(k.root()) })
}

/// Coordinates in the power basis of the generator.
pub fn field_elem(k: &RealField, e: &FieldElem) -> Value {
    let c = e.poly().coeffs();
    Value::Array((0..k.degree()).map(|i| rat(c.get(i).unwrap_or(&BigRational::zero()))).collect())
}

pub fn field_vec(k: &RealField, v: &[FieldElem]) -> Value {
    Value::Array(v.iter().map(|e| field_elem(k, e)).collect())
}

/// Sorted keys, no whitespace.
pub fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values serialize")
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{}field `{field}`: {message}", line.map(|l| format!("line {l}, ")).unwrap_or_default())]
pub struct InputError {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl InputError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        InputError { line: None, field: field.into(), message: message.into() }
    }

    /// Attaches the line of the first occurrence of the top-level key in `text`.
    pub fn locate(mut self, text: &str) -> Self {
        if self.line.is_none() {
            let key = self.field.split(['[', '.']).next().unwrap_or_default();
            let needle = format!("\"{key}\"");
            self.line = text.lines().position(|l| l.contains(&needle)).map(|i| i + 1);
        }
        self
    }
}

pub fn parse_int(v: &Value, field: &str) -> Result<BigInt, InputError> {
    let r = parse_rat(v, field)?;
    if !r.denom().is_one() {
        return Err(InputError::new(field, format!("expected an integer, found {r}")));
    }
    Ok(r.to_integer())
}

pub fn parse_rat(v: &Value, field: &str) -> Result<BigRational, InputError> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(BigRational::from_integer(i.into())),
            None if n.is_f64() => Err(InputError::new(field, "floating-point literals are not accepted")),
            None => Err(InputError::new(field, "integer literal out of range; write it as a string")),
        },
        Value::String(s) => {
            let bad = || InputError::new(field, format!("`{s}` is not an integer or p/q rational"));
            let (p, q) = match s.split_once('/') {
                Some((p, q)) => (p.trim(), q.trim()),
                None => (s.trim(), "1"),
            };
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(InputError::new(field, "zero denominator"));
            }
            Ok(BigRational::new(p, q))
        }
        _ => Err(InputError::new(field, "expected a number or a \"p/q\" string")),
    }
}

fn array<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>, InputError> {
    v.as_array().ok_or_else(|| InputError::new(field, "expected an array"))
}

pub fn parse_rat_vec(v: &Value, field: &str) -> Result<Vec<BigRational>, InputError> {
    array(v, field)?.iter().enumerate().map(|(i, x)| parse_rat(x, &format!("{field}[{i}]"))).collect()
}

pub fn parse_int_vec(v: &Value, field: &str) -> Result<Vec<BigInt>, InputError> {
    array(v, field)?.iter().enumerate().map(|(i, x)| parse_int(x, &format!("{field}[{i}]"))).collect()
}

pub fn parse_rat_rows(v: &Value, field: &str) -> Result<Vec<Vec<BigRational>>, InputError> {
    array(v, field)?.iter().enumerate().map(|(i, r)| parse_rat_vec(r, &format!("{field}[{i}]"))).collect()
}

fn rows_to_matrix<T: Clone>(rows: Vec<Vec<T>>, field: &str) -> Result<Matrix<T>, InputError> {
    Matrix::from_rows(rows).map_err(|e| InputError::new(field, e.to_string()))
}

pub fn parse_int_matrix(v: &Value, field: &str) -> Result<IntMatrix, InputError> {
    let rows = array(v, field)?
        .iter()
        .enumerate()
        .map(|(i, r)| parse_int_vec(r, &format!("{field}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    rows_to_matrix(rows, field)
}

pub fn parse_rat_matrix(v: &Value, field: &str) -> Result<RatMatrix, InputError> {
    rows_to_matrix(parse_rat_rows(v, field)?, field)
}

pub fn get<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value, InputError> {
    obj.get(key).ok_or_else(|| InputError::new(key, "missing"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rat(&json!("6/-4"), "x").unwrap(), BigRational::new((-3).into(), 2.into()));
        assert_eq!(rat(&BigRational::new(6.into(), (-4).into())), json!("-3/2"));
        assert_eq!(parse_rat(&json!(7), "x").unwrap(), BigRational::from_integer(7.into()));
        assert!(parse_rat(&json!(0.5), "x").unwrap_err().message.contains("floating"));
        assert!(parse_rat(&json!("1/0"), "x").is_err());
        assert!(parse_int(&json!("1/2"), "x").is_err());
    }

    #[test]
    fn dyadics_are_exact() {
        assert_eq!(dyadic(0.75), json!("3/4"));
        assert_eq!(dyadic(f64::NAN), Value::Null);
    }

    #[test]
    fn locate_names_the_line() {
        let text = "{\n  \"kind\": \"abelian\",\n  \"matrix\": [[1.5]]\n}";
        let e = InputError::new("matrix[0][0]", "bad").locate(text);
        assert_eq!(e.line, Some(3));
        assert_eq!(e.to_string(), "line 3, field `matrix[0][0]`: bad");
    }
}
