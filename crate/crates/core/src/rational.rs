//! Exact rationals: parsing, canonical `num/den` text, and serde adapters.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Parses `a` or `a/b` (optional sign on `a`, `b > 0` after normalisation).
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let t = text.trim();
    let lead = text.len() - text.trim_start().len();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some((d.trim(), lead + n.len() + 2))),
        None => (t, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| ParseError::new(lead + 1, format!("expected an integer, found '{num}'")))?;
    let d: BigInt = match den {
        None => BigInt::one(),
        Some((d, col)) => d
            .parse()
            .map_err(|_| ParseError::new(col, format!("expected an integer, found '{d}'")))?,
    };
    if d.is_zero() {
        return Err(ParseError::new(lead + 1, "zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// Always `num/den`, lowest terms, positive denominator (`3` prints `3/1`).
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn ceil(r: &Rational) -> BigInt {
    r.numer().div_ceil(r.denom())
}

pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// `#[serde(with = "crate::rational::serde_str")]`
pub mod serde_str {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use super::{fmt_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }
}

/// Same as [`serde_str`] for `Vec<Rational>`.
pub mod serde_vec {
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    use super::{fmt_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&fmt_rational(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_rational(t).map_err(D::Error::custom))
            .collect()
    }
}

/// Same as [`serde_str`] for `Option<Rational>`.
pub mod serde_opt {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use super::{fmt_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&fmt_rational(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|t| parse_rational(&t).map_err(D::Error::custom))
            .transpose()
    }
}
