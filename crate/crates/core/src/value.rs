//! Exact item values.
//!
//! Values are non-negative rationals so that envy comparisons never depend on
//! rounding. In files they are written as integers when integral and as
//! `"p/q"` strings otherwise.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};

pub type Value = Ratio<i64>;

/// Arbitrary-precision product used for Nash welfare.
pub type Product = BigRational;

pub fn int(v: i64) -> Value {
    Value::from_integer(v)
}

pub fn sum<'a>(values: impl IntoIterator<Item = &'a Value>) -> Value {
    values.into_iter().fold(Value::zero(), |acc, v| acc + v)
}

pub fn is_binary(v: &Value) -> bool {
    v.is_zero() || v.is_one()
}

pub fn to_big(v: &Value) -> BigRational {
    BigRational::new(BigInt::from(*v.numer()), BigInt::from(*v.denom()))
}

pub fn format_value(v: &Value) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn format_product(p: &Product) -> String {
    if p.is_integer() {
        p.numer().to_string()
    } else {
        format!("{}/{}", p.numer(), p.denom())
    }
}

pub fn parse_value(s: &str) -> Result<Value, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((n, d)) => {
            let n = i64::from_str(n.trim()).map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
            let d = i64::from_str(d.trim()).map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
            if d == 0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            Value::new(n, d)
        }
        None => Value::from_integer(i64::from_str(s).map_err(|e| format!("bad value {s:?}: {e}"))?),
    };
    if v.is_negative() {
        return Err(format!("negative value {s:?}"));
    }
    Ok(v)
}

/// Serde adapter for a single [`Value`].
pub mod serde_value {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Value, s: S) -> Result<S::Ok, S::Error> {
        if v.is_integer() {
            s.serialize_i64(*v.numer())
        } else {
            s.serialize_str(&format_value(v))
        }
    }

    struct ValueVisitor;

    impl<'de> Visitor<'de> for ValueVisitor {
        type Value = Value;

        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a non-negative integer or a \"p/q\" string")
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> Result<Value, E> {
            if v < 0 {
                return Err(E::custom(format!("negative value {v}")));
            }
            Ok(Value::from_integer(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> Result<Value, E> {
            i64::try_from(v)
                .map(Value::from_integer)
                .map_err(|_| E::custom(format!("value {v} out of range")))
        }

        fn visit_str<E: de::Error>(self, v: &str) -> Result<Value, E> {
            parse_value(v).map_err(E::custom)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Value, D::Error> {
        d.deserialize_any(ValueVisitor)
    }
}

/// Serde adapter for `Vec<Value>`.
pub mod serde_values {
    use super::*;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    struct W(#[serde(with = "serde_value")] Value);

    pub fn serialize<S: Serializer>(v: &[Value], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| W(*x)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Value>, D::Error> {
        let v: Vec<W> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|w| w.0).collect())
    }
}

/// Serde adapter for a row-major matrix of values.
pub mod serde_matrix {
    use super::*;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    struct Row(#[serde(with = "serde_values")] Vec<Value>);

    pub fn serialize<S: Serializer>(v: &[Vec<Value>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| Row(r.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Value>>, D::Error> {
        let v: Vec<Row> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|r| r.0).collect())
    }
}

/// Serde adapter for a [`Product`], written as an integer or "p/q" string.
pub mod serde_product {
    use super::*;
    use serde::Deserialize;

    pub fn serialize<S: Serializer>(p: &Product, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_product(p))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Product, D::Error> {
        let text = String::deserialize(d)?;
        Product::from_str(text.trim()).map_err(|e| de::Error::custom(format!("bad product {text:?}: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_value("3").unwrap(), int(3));
        assert_eq!(parse_value("6/4").unwrap(), Value::new(3, 2));
        assert_eq!(format_value(&Value::new(3, 2)), "3/2");
        assert_eq!(format_value(&int(7)), "7");
        assert!(parse_value("-1").is_err());
        assert!(parse_value("1/0").is_err());
    }

    #[test]
    fn binary_detection() {
        assert!(is_binary(&int(0)));
        assert!(is_binary(&int(1)));
        assert!(!is_binary(&Value::new(1, 2)));
    }
}
