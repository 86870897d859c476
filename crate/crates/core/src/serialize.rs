//! JSON interchange for vectors, observables and free words, plus the versioned CSV
//! emitter used by the scan reports.
//!
//! Coefficients accept either a float or an exact rational string ("2/3"); output
//! always uses rational strings so exact round trips stay exact.

use crate::matrix::IntVec2;
use crate::rat::{parse_rational, rational_from_f64, rational_to_string};
use crate::scalar::{gauss, GaussRat, Scalar};
use crate::word::{FreeLetter, FreeWord};
use crate::weyl::WeylObservable;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};
use std::str::FromStr;

pub const CSV_HEADER: &str = "# nc-torus-lab v1";

fn bigint_to_json(n: &BigInt) -> Value {
    match i64::try_from(n.clone()) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn bigint_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        Value::String(s) => {
            BigInt::from_str(s).map_err(|e| Error::Parse(format!("bad integer {s:?}: {e}")))
        }
        other => Err(Error::Parse(format!("expected integer, got {other}"))),
    }
}

pub fn vector_to_json(v: &IntVec2) -> Value {
    json!([bigint_to_json(&v.m1), bigint_to_json(&v.m2)])
}

pub fn vector_from_json(v: &Value) -> Result<IntVec2> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Parse(format!("expected [m1, m2], got {v}")))?;
    Ok(IntVec2::new(bigint_from_json(&arr[0])?, bigint_from_json(&arr[1])?))
}

/// A numeric leaf: float, integer, or exact string like "-3/7".
pub fn rational_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else {
                let f = n
                    .as_f64()
                    .ok_or_else(|| Error::Parse(format!("bad number {n}")))?;
                rational_from_f64(f)
            }
        }
        other => Err(Error::Parse(format!("expected number, got {other}"))),
    }
}

pub fn rational_to_json(r: &BigRational) -> Value {
    json!(rational_to_string(r))
}

fn coefficient_to_json(target: &mut Map<String, Value>, c: &Scalar) -> Result<()> {
    let g = c
        .try_gauss()
        .ok_or_else(|| Error::Unsupported("coefficient is not a Gaussian rational".into()))?;
    target.insert("re".into(), rational_to_json(&g.re));
    target.insert("im".into(), rational_to_json(&g.im));
    Ok(())
}

fn coefficient_from_json(obj: &Map<String, Value>) -> Result<GaussRat> {
    let re = obj
        .get("re")
        .map(rational_from_json)
        .transpose()?
        .unwrap_or_else(BigRational::zero);
    let im = obj
        .get("im")
        .map(rational_from_json)
        .transpose()?
        .unwrap_or_else(BigRational::zero);
    Ok(gauss(re, im))
}

/// One Weyl term: {"vector": [m1, m2], "re": …, "im": …}.
pub fn term_to_json(vector: &IntVec2, coeff: &Scalar) -> Result<Value> {
    let mut obj = Map::new();
    obj.insert("vector".into(), vector_to_json(vector));
    coefficient_to_json(&mut obj, coeff)?;
    Ok(Value::Object(obj))
}

pub fn observable_to_json(obs: &WeylObservable) -> Result<Value> {
    let terms: Result<Vec<Value>> = obs.terms().map(|(v, c)| term_to_json(v, c)).collect();
    Ok(Value::Array(terms?))
}

pub fn observable_from_json(v: &Value) -> Result<WeylObservable> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected term array, got {v}")))?;
    let mut obs = WeylObservable::zero();
    for term in arr {
        let obj = term
            .as_object()
            .ok_or_else(|| Error::Parse(format!("expected term object, got {term}")))?;
        let vector = vector_from_json(
            obj.get("vector")
                .ok_or_else(|| Error::Parse("term without vector".into()))?,
        )?;
        let coeff = Scalar::from_gauss(coefficient_from_json(obj)?);
        obs = obs.add(&WeylObservable::from_monomial(
            crate::weyl::WeylMonomial::with_coeff(coeff, vector),
        ));
    }
    Ok(obs)
}

/// A free word as an array of letters [{"copy": k, "terms": […]}].
pub fn word_to_json(w: &FreeWord) -> Result<Value> {
    let letters: Result<Vec<Value>> = w
        .letters
        .iter()
        .map(|l| {
            Ok(json!({
                "copy": l.copy,
                "terms": observable_to_json(&l.payload)?,
            }))
        })
        .collect();
    Ok(Value::Array(letters?))
}

pub fn word_from_json(v: &Value) -> Result<FreeWord> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected letter array, got {v}")))?;
    let mut letters = Vec::with_capacity(arr.len());
    for letter in arr {
        let obj = letter
            .as_object()
            .ok_or_else(|| Error::Parse(format!("expected letter object, got {letter}")))?;
        let copy = obj
            .get("copy")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("letter without positive copy index".into()))?
            as usize;
        if copy == 0 {
            return Err(Error::Parse("copy indices start at 1".into()));
        }
        let payload = observable_from_json(
            obj.get("terms")
                .ok_or_else(|| Error::Parse("letter without terms".into()))?,
        )?;
        letters.push(FreeLetter::new(payload, copy));
    }
    Ok(FreeWord::new(letters))
}

/// Versioned CSV: header comment, column line, then rows.
pub fn csv_table(columns: &[&str], rows: &[Vec<String>], sep: char) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    out.push_str(&columns.join(&sep.to_string()));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(&sep.to_string()));
        out.push('\n');
    }
    out
}
