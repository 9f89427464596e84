//! Modular arithmetic, primality, parameter generation and hashing.
//!
//! Integers are [`num_bigint::BigInt`]; values living in `Z_m` are kept
//! canonical in `[0, m)`.

mod hash;
mod params;
mod prime;

pub use hash::{encode_signed, encode_unsigned, hash_bits, BitString};
pub use params::{
    gen_rsa_params, gen_schnorr_like_params, RsaParams, SchnorrLikeParams, DEFAULT_SEARCH_BUDGET,
};
pub use prime::{is_probable_prime, MR_ROUNDS};

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("base {base} is not invertible modulo {modulus}")]
    NonInvertibleBase { base: BigInt, modulus: BigInt },
    /// `gcd(value, modulus) != 1`. Over an RSA modulus the gcd is a factor.
    #[error("{value} is not invertible modulo {modulus} (gcd {gcd})")]
    NonInvertible {
        value: BigInt,
        modulus: BigInt,
        gcd: BigInt,
    },
    #[error("modulus must be at least 2, got {0}")]
    BadModulus(BigInt),
    #[error("parameter search exhausted after {0} attempts")]
    SearchExhausted(usize),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
}

/// Reduces `a` into `[0, m)`.
pub fn reduce(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// `base^exponent mod modulus`, with negative exponents taken through the
/// modular inverse of the base.
pub fn mod_exp(base: &BigInt, exponent: &BigInt, modulus: &BigInt) -> Result<BigInt, ArithError> {
    if modulus < &BigInt::from(2) {
        return Err(ArithError::BadModulus(modulus.clone()));
    }
    let base = reduce(base, modulus);
    if exponent.is_negative() {
        let inv = mod_inv(&base, modulus).map_err(|_| ArithError::NonInvertibleBase {
            base: base.clone(),
            modulus: modulus.clone(),
        })?;
        Ok(inv.modpow(&-exponent, modulus))
    } else {
        Ok(base.modpow(exponent, modulus))
    }
}

/// Modular exponentiation for call sites that already guarantee a
/// non-negative exponent and a valid modulus.
pub(crate) fn pow_mod(base: &BigInt, exponent: &BigInt, modulus: &BigInt) -> BigInt {
    debug_assert!(!exponent.is_negative());
    reduce(base, modulus).modpow(exponent, modulus)
}

/// The inverse of `a` modulo `modulus`, in `[1, modulus)`.
pub fn mod_inv(a: &BigInt, modulus: &BigInt) -> Result<BigInt, ArithError> {
    if modulus < &BigInt::from(2) {
        return Err(ArithError::BadModulus(modulus.clone()));
    }
    let a = reduce(a, modulus);
    let ext = a.extended_gcd(modulus);
    if !ext.gcd.is_one() {
        return Err(ArithError::NonInvertible {
            value: a,
            modulus: modulus.clone(),
            gcd: ext.gcd,
        });
    }
    Ok(reduce(&ext.x, modulus))
}

/// Uniform sample from `[low, high)`.
pub fn random_range<R: Rng + ?Sized>(rng: &mut R, low: &BigInt, high: &BigInt) -> BigInt {
    rng.gen_bigint_range(low, high)
}

/// Uniform sample from `[1, m)`.
pub fn random_nonzero_below<R: Rng + ?Sized>(rng: &mut R, m: &BigInt) -> BigInt {
    random_range(rng, &BigInt::one(), m)
}

/// Uniform sample from `[0, m)`.
pub fn random_below<R: Rng + ?Sized>(rng: &mut R, m: &BigInt) -> BigInt {
    random_range(rng, &BigInt::zero(), m)
}
