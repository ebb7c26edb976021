//! JSON encoding of exact integers and rationals.
//!
//! Integers up to 2^53 in magnitude are plain JSON numbers so that ordinary
//! readers keep them exact; anything larger is a decimal string. Rationals are
//! always strings of the form `p/q` (or `p` when integral).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

const SAFE: i64 = 1 << 53;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactInt(pub i64);

impl Serialize for ExactInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.abs() <= SAFE {
            s.serialize_i64(self.0)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

struct ExactIntVisitor;

impl<'de> Visitor<'de> for ExactIntVisitor {
    type Value = ExactInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExactInt, E> {
        Ok(ExactInt(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExactInt, E> {
        i64::try_from(v).map(ExactInt).map_err(E::custom)
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<ExactInt, E> {
        if v.fract() == 0.0 && v.abs() <= SAFE as f64 {
            Ok(ExactInt(v as i64))
        } else {
            Err(E::custom(format!("{v} is not an exact integer")))
        }
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<ExactInt, E> {
        i64::from_str(v.trim()).map(ExactInt).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for ExactInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(ExactIntVisitor)
    }
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rational_from_str(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).ok()?;
            let q = BigInt::from_str(q.trim()).ok()?;
            if q == BigInt::from(0) {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    }
}

/// Serde adapter for `BigRational` fields as `p/q` strings.
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        rational_from_str(&s).ok_or_else(|| de::Error::custom(format!("bad rational `{s}`")))
    }
}

/// Best-effort f64 view of an exact rational, for reporting only.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ints_are_numbers_large_are_strings() {
        let v = vec![ExactInt(3), ExactInt(-(1 << 60))];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[3,"-1152921504606846976"]"#);
        let back: Vec<ExactInt> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn rational_strings_roundtrip() {
        let q = BigRational::new(BigInt::from(-6), BigInt::from(4));
        assert_eq!(rational_to_string(&q), "-3/2");
        assert_eq!(rational_from_str("-3/2"), Some(q));
        assert_eq!(rational_from_str("7"), Some(BigRational::from_integer(7.into())));
    }
}
