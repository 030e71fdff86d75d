//! JSON encoding for arbitrary-precision integers.
//!
//! Values that fit in an `i64` are written as JSON numbers; anything larger is
//! written as a decimal string. Both forms are accepted on input.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::Deserialize;
use serde_json::Value;
use std::fmt;

pub fn to_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn from_value(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Some(BigInt::from(i))
            } else {
                n.as_u64().map(BigInt::from)
            }
        }
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

struct BigIntVisitor;

impl<'de> Visitor<'de> for BigIntVisitor {
    type Value = BigInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
        v.trim()
            .parse()
            .map_err(|_| E::custom(format!("not a decimal integer: {v:?}")))
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    d.deserialize_any(BigIntVisitor)
}

/// `#[serde(with = "bigjson::vec")]` for `Vec<BigInt>`.
pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&to_value(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<Value>::deserialize(d)?;
        raw.iter()
            .map(|v| from_value(v).ok_or_else(|| de::Error::custom(format!("not an integer: {v}"))))
            .collect()
    }
}

/// `#[serde(with = "bigjson::biguint")]` for `BigUint`.
pub mod biguint {
    use super::*;
    use num_bigint::{BigUint, Sign};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        super::serialize(&BigInt::from_biguint(Sign::Plus, x.clone()), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        super::deserialize(d)?
            .to_biguint()
            .ok_or_else(|| de::Error::custom("expected a non-negative integer"))
    }
}

/// `#[serde(with = "bigjson::biguint_vec")]` for `Vec<BigUint>`.
pub mod biguint_vec {
    use super::*;
    use num_bigint::BigUint;

    pub fn serialize<S: Serializer>(xs: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        let ints: Vec<BigInt> = xs.iter().map(|x| BigInt::from(x.clone())).collect();
        super::vec::serialize(&ints, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        super::vec::deserialize(d)?
            .into_iter()
            .map(|x| {
                x.to_biguint()
                    .ok_or_else(|| de::Error::custom("expected a non-negative integer"))
            })
            .collect()
    }
}
