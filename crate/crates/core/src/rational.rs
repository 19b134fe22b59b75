use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A rational `epsilon` strictly between 0 and 1, kept in lowest terms.
///
/// Every threshold that depends on epsilon is compared by cross-multiplying;
/// nothing is ever rounded through a float.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 || num >= den {
            return Err(Error::EpsilonOutOfRange(format!("{num}/{den}")));
        }
        let g = num.gcd(&den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn num_big(&self) -> BigInt {
        BigInt::from(self.num)
    }

    pub fn den_big(&self) -> BigInt {
        BigInt::from(self.den)
    }

    /// `1 - epsilon` as `(den - num, den)`.
    pub fn complement(&self) -> (BigInt, BigInt) {
        (BigInt::from(self.den - self.num), BigInt::from(self.den))
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, d) = s
            .trim()
            .split_once('/')
            .ok_or_else(|| Error::BadRational(s.to_string()))?;
        let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| Error::BadRational(s.to_string()));
        Epsilon::new(parse(n)?, parse(d)?)
    }
}

impl Serialize for Epsilon {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Epsilon {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
