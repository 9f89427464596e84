use std::sync::OnceLock;

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

/// Miller–Rabin rounds used for every primality decision in the crate.
/// Error probability is at most `4^-64`.
pub const MR_ROUNDS: usize = 64;

const SIEVE_LIMIT: u32 = 4096;

pub(crate) fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut composite = vec![false; SIEVE_LIMIT as usize + 1];
        let mut out = Vec::new();
        for i in 2..=SIEVE_LIMIT as usize {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j <= SIEVE_LIMIT as usize {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

/// Probabilistic primality with trial division by small primes followed by
/// `rounds` Miller–Rabin rounds with bases drawn from `rng`.
///
/// Inputs below `SIEVE_LIMIT²` are decided exactly by trial division.
pub fn is_probable_prime<R: Rng + ?Sized>(n: &BigInt, rounds: usize, rng: &mut R) -> bool {
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    for &p in small_primes() {
        let p = BigInt::from(p);
        if &p * &p > *n {
            return true;
        }
        if (n % &p).is_zero() {
            return n == &p;
        }
    }

    let n_minus_one = n - 1u32;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for _ in 0..rounds {
        let a = rng.gen_bigint_range(&two, &n_minus_one);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Residues of `n` modulo each small prime, for incremental sieving.
pub(crate) fn small_residues(n: &BigInt) -> Vec<u32> {
    small_primes()
        .iter()
        .map(|&p| (n % p).to_u32().expect("residue fits"))
        .collect()
}
