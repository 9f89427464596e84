//! Serde adapters that write big integers as decimal strings.
//!
//! Use with `#[serde(with = "crate::serde_dec")]` on a `BigInt` field, or the
//! [`vec`] and [`option`] submodules for `Vec<BigInt>` and `Option<BigInt>`.

use num_bigint::BigInt;
use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(value: &BigInt, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&value.to_str_radix(10))
}

pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigInt, D::Error> {
    let text = String::deserialize(de)?;
    parse(&text).map_err(D::Error::custom)
}

/// Parses a decimal integer with an optional leading minus sign.
pub fn parse(text: &str) -> Result<BigInt, String> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("not a decimal integer: {text:?}"));
    }
    BigInt::parse_bytes(text.as_bytes(), 10)
        .ok_or_else(|| format!("not a decimal integer: {text:?}"))
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(values: &[BigInt], ser: S) -> Result<S::Ok, S::Error> {
        let mut seq = ser.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&v.to_str_radix(10))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<BigInt>, D::Error> {
        let texts = Vec::<String>::deserialize(de)?;
        texts
            .iter()
            .map(|t| parse(t).map_err(D::Error::custom))
            .collect()
    }
}

/// For `Option<BigInt>`; pair with `#[serde(default)]`.
pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Option<BigInt>, ser: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(x) => super::serialize(x, ser),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<BigInt>, D::Error> {
        Option::<String>::deserialize(de)?
            .map(|t| parse(&t).map_err(D::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_accepts_signed_decimal() {
        assert_eq!(parse("-3").unwrap(), BigInt::from(-3));
        assert_eq!(parse("0").unwrap(), BigInt::from(0));
        assert!(parse("").is_err());
        assert!(parse("+4").is_err());
        assert!(parse("0x10").is_err());
        assert!(parse("-").is_err());
    }
}
