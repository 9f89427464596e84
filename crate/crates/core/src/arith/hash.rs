use std::fmt;

use num_bigint::{BigInt, Sign};
use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

/// A fixed-length bit string, most significant bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = !self.0[i];
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitString {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(format!("invalid bit {other:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        String::deserialize(de)?.parse().map_err(D::Error::custom)
    }
}

/// First `l` bits of the stream `SHA-256(ctr_0 ‖ payload) ‖ SHA-256(ctr_1 ‖
/// payload) ‖ …`, where `ctr_i` is `i` as a 4-byte big-endian integer.
///
/// `l` is expected to be at least one; `l = 0` yields the empty string.
pub fn hash_bits(payload: &[u8], l: usize) -> BitString {
    let mut out = Vec::with_capacity(l);
    let mut counter: u32 = 0;
    while out.len() < l {
        let mut hasher = Sha256::new();
        hasher.update(counter.to_be_bytes());
        hasher.update(payload);
        for byte in hasher.finalize() {
            for shift in (0..8).rev() {
                if out.len() == l {
                    break;
                }
                out.push((byte >> shift) & 1 == 1);
            }
        }
        counter += 1;
    }
    BitString(out)
}

/// Canonical encoding of a non-negative integer: 4-byte big-endian length
/// followed by the minimal big-endian magnitude (zero has length 0).
pub fn encode_unsigned(x: &BigInt) -> Vec<u8> {
    debug_assert!(x.sign() != Sign::Minus);
    let (_, magnitude) = x.to_bytes_be();
    let magnitude: &[u8] = if x.sign() == Sign::NoSign {
        &[]
    } else {
        &magnitude
    };
    let mut out = Vec::with_capacity(4 + magnitude.len());
    out.extend_from_slice(&(magnitude.len() as u32).to_be_bytes());
    out.extend_from_slice(magnitude);
    out
}

/// Signed variant: a sign byte (`0x00` non-negative, `0x01` negative)
/// followed by the unsigned encoding of the magnitude.
pub fn encode_signed(x: &BigInt) -> Vec<u8> {
    let mut out = vec![u8::from(x.sign() == Sign::Minus)];
    out.extend(encode_unsigned(&x.magnitude().clone().into()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;
    use rand::Rng;

    fn hex_bits(hex: &str) -> Vec<bool> {
        (0..hex.len())
            .step_by(2)
            .flat_map(|i| {
                let byte = u8::from_str_radix(&hex[i..i + 2], 16).unwrap();
                (0..8).rev().map(move |s| (byte >> s) & 1 == 1)
            })
            .collect()
    }

    #[test]
    fn empty_payload_single_bit() {
        // SHA-256(00 00 00 00) begins with 0xdf.
        assert_eq!(hash_bits(b"", 1).bits(), &[true]);
        assert_eq!(hash_bits(b"", 8).to_string(), "11011111");
    }

    #[test]
    fn stream_concatenates_counter_blocks() {
        // Independently computed with Python's hashlib.
        let block0 = "0a834ab04b1628b0b4ec20ca71e77f96a80431c1da87ebf07276c438b662206a";
        let mut expected = hex_bits(block0);
        expected.extend(hex_bits("f9"));
        assert_eq!(hash_bits(b"abc", 264).bits(), &expected[..]);
    }

    #[test]
    fn prefix_property() {
        let full = hash_bits(b"prefix", 256);
        for l in [1, 7, 64, 100, 255] {
            assert!(hash_bits(b"prefix", l).is_prefix_of(&full));
        }
        assert_eq!(hash_bits(b"prefix", 256), hash_bits(b"prefix", 256));
    }

    #[test]
    fn single_byte_changes_never_collide_1000_pairs() {
        let mut rng = seeded_rng(21);
        for _ in 0..1000 {
            let len = rng.gen_range(1..64);
            let a: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
            let mut b = a.clone();
            let i = rng.gen_range(0..len);
            b[i] ^= rng.gen_range(1..=255u8);
            assert_ne!(hash_bits(&a, 128), hash_bits(&b, 128));
        }
    }

    #[test]
    fn integer_encodings() {
        assert_eq!(encode_unsigned(&BigInt::from(0)), vec![0, 0, 0, 0]);
        assert_eq!(encode_unsigned(&BigInt::from(258)), vec![0, 0, 0, 2, 1, 2]);
        assert_eq!(encode_signed(&BigInt::from(-3)), vec![1, 0, 0, 0, 1, 3]);
        assert_eq!(encode_signed(&BigInt::from(3)), vec![0, 0, 0, 0, 1, 3]);
    }

    #[test]
    fn bitstring_text_round_trip() {
        let bits: BitString = "0110".parse().unwrap();
        assert_eq!(bits.to_string(), "0110");
        assert!("012".parse::<BitString>().is_err());
        let json = serde_json::to_string(&bits).unwrap();
        assert_eq!(json, "\"0110\"");
        assert_eq!(serde_json::from_str::<BitString>(&json).unwrap(), bits);
    }
}
