//! Serialization helpers shared by the CLI envelopes and library reports.
//!
//! Exact rationals serialize as `{"num": "...", "den": "..."}` decimal
//! strings so arbitrary precision survives JSON.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::ser::SerializeStruct;
use serde::Serializer;

pub fn serialize_biguint<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn serialize_rational<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Rational", 2)?;
    st.serialize_field("num", &x.numer().to_string())?;
    st.serialize_field("den", &x.denom().to_string())?;
    st.end()
}

/// JSON value for an exact rational, in the `{"num", "den"}` shape.
pub fn rational_json(x: &BigRational) -> serde_json::Value {
    serde_json::json!({
        "num": x.numer().to_string(),
        "den": x.denom().to_string(),
    })
}

/// JSON array of digit strings.
pub fn digits_json(digits: &[BigUint]) -> serde_json::Value {
    serde_json::Value::Array(
        digits
            .iter()
            .map(|d| serde_json::Value::String(d.to_string()))
            .collect(),
    )
}
