//! JSON-friendly encodings: integers as numbers (strings past 64 bits),
//! rationals as `"p/q"` strings.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An integer as a JSON number when it fits in 64 bits, otherwise as a
/// decimal string.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Wire {
    Small(i64),
    Big(String),
}

impl Wire {
    fn of(x: &BigInt) -> Self {
        match x.to_i64() {
            Some(v) => Wire::Small(v),
            None => Wire::Big(x.to_string()),
        }
    }

    fn value<E: serde::de::Error>(self) -> Result<BigInt, E> {
        match self {
            Wire::Small(v) => Ok(BigInt::from(v)),
            Wire::Big(t) => t
                .parse()
                .map_err(|_| E::custom(format!("bad integer {t:?}"))),
        }
    }
}

pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(Wire::of).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Wire>::deserialize(d)?
            .into_iter()
            .map(Wire::value)
            .collect()
    }
}

pub mod bigint_rows {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|r| r.iter().map(Wire::of).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<Wire>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(Wire::value).collect())
            .collect()
    }
}

pub fn rational_to_string(q: &BigRational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.trim().parse().ok()?)),
    }
}

pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(rational_to_string)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| {
                parse_rational(t).ok_or_else(|| D::Error::custom(format!("bad rational {t:?}")))
            })
            .collect()
    }
}

pub mod rational_rows {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|r| r.iter().map(rational_to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigRational>>, D::Error> {
        Vec::<Vec<String>>::deserialize(d)?
            .iter()
            .map(|r| {
                r.iter()
                    .map(|t| {
                        parse_rational(t)
                            .ok_or_else(|| D::Error::custom(format!("bad rational {t:?}")))
                    })
                    .collect()
            })
            .collect()
    }
}
