//! Serde adapters writing integers as decimal strings.

use num_bigint::BigInt;
use serde::{de, Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(|_| de::Error::custom(format!("not a decimal integer: {s:?}")))
}

pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(|_| de::Error::custom(format!("not a decimal integer: {s:?}"))))
            .transpose()
    }
}

pub mod opt_pair {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<(BigInt, BigInt)>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some((a, b)) => s.collect_seq([a.to_string(), b.to_string()]),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<(BigInt, BigInt)>, D::Error> {
        let parse = |s: String| s.parse::<BigInt>().map_err(|_| de::Error::custom(format!("not a decimal integer: {s:?}")));
        match Option::<(String, String)>::deserialize(d)? {
            Some((a, b)) => Ok(Some((parse(a)?, parse(b)?))),
            None => Ok(None),
        }
    }
}
