use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::prime::{is_probable_prime, small_primes, small_residues, MR_ROUNDS};
use super::{pow_mod, ArithError};

/// Candidate budget for the prime searches.
pub const DEFAULT_SEARCH_BUDGET: usize = 1_000_000;

/// Soundness parameter carried by generated [`RsaParams`] unless overridden.
pub const DEFAULT_EROOT_SOUNDNESS: u32 = 16;

/// Parameters of the discrete-log scheme.
///
/// `p = 2q + 1` is a safe prime and `h` generates the order-`q` subgroup of
/// `Z_p*`. The order-`p` group that carries commitments is the subgroup of
/// `Z_P*` generated by `g`, where `P ≡ 1 (mod p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchnorrLikeParams {
    #[serde(with = "crate::serde_dec")]
    pub p: BigInt,
    #[serde(with = "crate::serde_dec")]
    pub q: BigInt,
    #[serde(with = "crate::serde_dec")]
    pub h: BigInt,
    #[serde(rename = "P", with = "crate::serde_dec")]
    pub big_p: BigInt,
    #[serde(with = "crate::serde_dec")]
    pub g: BigInt,
}

impl SchnorrLikeParams {
    /// The hand-checkable fixture `p = 23, q = 11, h = 2, P = 47, g = 2`.
    pub fn tiny() -> Self {
        SchnorrLikeParams {
            p: 23.into(),
            q: 11.into(),
            h: 2.into(),
            big_p: 47.into(),
            g: 2.into(),
        }
    }

    /// Checks every structural invariant of the bundle.
    pub fn validate<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(), ArithError> {
        let bad = |what: &str| Err(ArithError::BadParameter(what.to_string()));
        if self.p != &self.q * 2u32 + 1u32 {
            return bad("p != 2q + 1");
        }
        if !is_probable_prime(&self.q, MR_ROUNDS, rng)
            || !is_probable_prime(&self.p, MR_ROUNDS, rng)
        {
            return bad("p or q is not prime");
        }
        if !is_probable_prime(&self.big_p, MR_ROUNDS, rng) {
            return bad("P is not prime");
        }
        if !((&self.big_p - 1u32) % &self.p).is_zero() {
            return bad("P != 1 mod p");
        }
        if !in_unit_range(&self.h, &self.p)
            || self.h.is_one()
            || !pow_mod(&self.h, &self.q, &self.p).is_one()
        {
            return bad("h does not have order q");
        }
        if !in_unit_range(&self.g, &self.big_p)
            || self.g.is_one()
            || !pow_mod(&self.g, &self.p, &self.big_p).is_one()
        {
            return bad("g does not have order p");
        }
        Ok(())
    }

    /// `g^e` in the order-`p` group, exponent reduced mod `p`.
    pub fn g_pow(&self, e: &BigInt) -> BigInt {
        pow_mod(&self.g, &e.mod_floor(&self.p), &self.big_p)
    }

    /// `h^e mod p`, exponent reduced mod `q`.
    pub fn h_pow(&self, e: &BigInt) -> BigInt {
        pow_mod(&self.h, &e.mod_floor(&self.q), &self.p)
    }

    /// Is `x` an element of the order-`p` subgroup of `Z_P*`?
    pub fn in_commitment_group(&self, x: &BigInt) -> bool {
        in_unit_range(x, &self.big_p) && pow_mod(x, &self.p, &self.big_p).is_one()
    }
}

fn in_unit_range(x: &BigInt, m: &BigInt) -> bool {
    x >= &BigInt::one() && x < m
}

/// Searches for a `bits_p`-bit safe prime, then the smallest even `k` with
/// `k·p + 1` prime, then the smallest generators `h` and `g`.
pub fn gen_schnorr_like_params<R: Rng + ?Sized>(
    bits_p: u64,
    rng: &mut R,
) -> Result<SchnorrLikeParams, ArithError> {
    gen_schnorr_like_params_with_budget(bits_p, DEFAULT_SEARCH_BUDGET, rng)
}

pub fn gen_schnorr_like_params_with_budget<R: Rng + ?Sized>(
    bits_p: u64,
    budget: usize,
    rng: &mut R,
) -> Result<SchnorrLikeParams, ArithError> {
    if bits_p < 3 {
        return Err(ArithError::BadParameter(format!(
            "bits_p must be >= 3, got {bits_p}"
        )));
    }
    let (p, q) = find_safe_prime(bits_p, budget, rng)?;

    let mut k = BigInt::from(2);
    let mut tries = 0usize;
    let big_p = loop {
        let cand = &k * &p + 1u32;
        if is_probable_prime(&cand, MR_ROUNDS, rng) {
            break cand;
        }
        k += 2u32;
        tries += 1;
        if tries >= budget {
            return Err(ArithError::SearchExhausted(tries));
        }
    };

    let h = smallest_root_of_unity(&q, &p, budget)?;
    let g = smallest_root_of_unity(&p, &big_p, budget)?;
    Ok(SchnorrLikeParams { p, q, h, big_p, g })
}

/// Smallest `a >= 2` with `a^order ≡ 1 (mod modulus)`; for prime `order`
/// such an `a` has exactly that order.
fn smallest_root_of_unity(
    order: &BigInt,
    modulus: &BigInt,
    budget: usize,
) -> Result<BigInt, ArithError> {
    let mut a = BigInt::from(2);
    for _ in 0..budget {
        if &a >= modulus {
            break;
        }
        if pow_mod(&a, order, modulus).is_one() {
            return Ok(a);
        }
        a += 1u32;
    }
    Err(ArithError::SearchExhausted(budget))
}

fn find_safe_prime<R: Rng + ?Sized>(
    bits_p: u64,
    budget: usize,
    rng: &mut R,
) -> Result<(BigInt, BigInt), ArithError> {
    let q_bits = bits_p - 1;
    let q_low = BigInt::one() << (q_bits - 1);
    let q_high = BigInt::one() << q_bits;
    let primes = small_primes();

    let mut attempts = 0usize;
    while attempts < budget {
        let mut q = rng.gen_bigint_range(&q_low, &q_high);
        if q.is_even() {
            q += 1u32;
        }
        let mut res = small_residues(&q);
        while q < q_high && attempts < budget {
            attempts += 1;
            let q_small = q.to_u64();
            let sieved = primes.iter().zip(&res).all(|(&pr, &r)| {
                let p_res = (2 * r + 1) % pr;
                // A residue of zero only rules the candidate out when the
                // candidate is larger than the small prime itself.
                (r != 0 || q_small == Some(pr as u64))
                    && (p_res != 0 || q_small.map(|v| 2 * v + 1) == Some(pr as u64))
            });
            if sieved {
                let p = &q * 2u32 + 1u32;
                // A single base-2 Fermat test on p discards most survivors cheaply.
                let fermat = BigInt::from(2).modpow(&(&p - 1u32), &p).is_one();
                if fermat
                    && is_probable_prime(&q, MR_ROUNDS, rng)
                    && is_probable_prime(&p, MR_ROUNDS, rng)
                {
                    return Ok((p, q));
                }
            }
            q += 2u32;
            for (r, &pr) in res.iter_mut().zip(primes) {
                *r = (*r + 2) % pr;
            }
        }
    }
    Err(ArithError::SearchExhausted(attempts))
}

/// The expansion parameter `ε` as a ratio of small integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Epsilon {
    pub num: u32,
    pub den: u32,
}

impl Default for Epsilon {
    fn default() -> Self {
        Epsilon { num: 1, den: 1 }
    }
}

/// Parameters of the `e`-th root scheme over an RSA modulus. The factors of
/// `n` are not retained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsaParams {
    #[serde(with = "crate::serde_dec")]
    pub n: BigInt,
    #[serde(with = "crate::serde_dec")]
    pub e: BigInt,
    #[serde(with = "crate::serde_dec")]
    pub g: BigInt,
    /// Challenge length in bits.
    pub l: u32,
    pub epsilon: Epsilon,
}

impl RsaParams {
    /// The hand-checkable fixture `n = 33 = 3·11, e = 3, g = 2`.
    pub fn tiny() -> Self {
        RsaParams {
            n: 33.into(),
            e: 3.into(),
            g: 2.into(),
            l: 4,
            epsilon: Epsilon::default(),
        }
    }

    pub fn with_soundness(mut self, l: u32) -> Self {
        self.l = l;
        self
    }

    /// Default upper bound for the prover's commitment exponent,
    /// `⌈2^l · n^(1+ε)⌉`.
    pub fn default_w_bound(&self) -> BigInt {
        let Epsilon { num, den } = self.epsilon;
        let n_num = num_traits::pow(self.n.clone(), num as usize);
        let mut root = n_num.nth_root(den.max(1));
        if num_traits::pow(root.clone(), den.max(1) as usize) != n_num {
            root += 1u32;
        }
        (BigInt::one() << self.l as usize) * &self.n * root
    }

    pub fn validate(&self) -> Result<(), ArithError> {
        let bad = |what: &str| Err(ArithError::BadParameter(what.to_string()));
        if self.e < BigInt::from(3) || self.e.is_even() {
            return bad("e must be odd and >= 3");
        }
        if self.n < BigInt::from(6) {
            return bad("n too small");
        }
        if !self.g.gcd(&self.n).is_one() || self.g <= BigInt::one() || self.g >= self.n {
            return bad("g must be a unit modulo n other than 1");
        }
        if self.l == 0 {
            return bad("l must be >= 1");
        }
        if self.epsilon.den == 0 {
            return bad("epsilon denominator is zero");
        }
        Ok(())
    }
}

/// Generates an RSA modulus of `bits_n` bits with `gcd(e, φ(n)) = 1` and a
/// base `g` of order greater than two.
///
/// Below 16 bits the modulus is the smallest `bits_n`-bit product of two
/// distinct odd primes meeting the condition (the generator is unused);
/// above, both factors are random primes of half the size.
pub fn gen_rsa_params<R: Rng + ?Sized>(
    bits_n: u64,
    e: &BigInt,
    rng: &mut R,
) -> Result<RsaParams, ArithError> {
    gen_rsa_params_with_budget(bits_n, e, DEFAULT_SEARCH_BUDGET, rng)
}

pub fn gen_rsa_params_with_budget<R: Rng + ?Sized>(
    bits_n: u64,
    e: &BigInt,
    budget: usize,
    rng: &mut R,
) -> Result<RsaParams, ArithError> {
    if e < &BigInt::from(3) || e.is_even() {
        return Err(ArithError::BadParameter("e must be odd and >= 3".into()));
    }
    if bits_n < 4 {
        return Err(ArithError::BadParameter(format!(
            "bits_n must be >= 4, got {bits_n}"
        )));
    }
    let n = if bits_n < 16 {
        tiny_modulus(bits_n, e)?
    } else {
        let half = bits_n / 2;
        let mut attempts = 0usize;
        loop {
            let p1 = random_rsa_prime(half, e, budget, rng)?;
            let p2 = random_rsa_prime(bits_n - half, e, budget, rng)?;
            let n = &p1 * &p2;
            if p1 != p2 && n.bits() == bits_n {
                break n;
            }
            attempts += 1;
            if attempts >= budget {
                return Err(ArithError::SearchExhausted(attempts));
            }
        }
    };
    let mut g = BigInt::from(2);
    while g < n {
        if g.gcd(&n).is_one() && !pow_mod(&g, &BigInt::from(2), &n).is_one() {
            return Ok(RsaParams {
                n,
                e: e.clone(),
                g,
                l: DEFAULT_EROOT_SOUNDNESS,
                epsilon: Epsilon::default(),
            });
        }
        g += 1u32;
    }
    Err(ArithError::SearchExhausted(budget))
}

fn tiny_modulus(bits_n: u64, e: &BigInt) -> Result<BigInt, ArithError> {
    let low = 1u64 << (bits_n - 1);
    let high = 1u64 << bits_n;
    let e = e.to_u64().unwrap_or(u64::MAX);
    for n in low..high {
        let Some(f) = (3..n).step_by(2).find(|d| n % d == 0) else {
            continue;
        };
        let other = n / f;
        let is_prime = |x: u64| {
            x >= 2
                && (2..)
                    .take_while(|d| d * d <= x)
                    .all(|d| !x.is_multiple_of(d))
        };
        if n % 2 == 1 && other != f && is_prime(f) && is_prime(other) {
            let phi = (f - 1) * (other - 1);
            if phi.gcd(&e) == 1 {
                return Ok(BigInt::from(n));
            }
        }
    }
    Err(ArithError::SearchExhausted((high - low) as usize))
}

fn random_rsa_prime<R: Rng + ?Sized>(
    bits: u64,
    e: &BigInt,
    budget: usize,
    rng: &mut R,
) -> Result<BigInt, ArithError> {
    // Top two bits set so that the product has exactly the requested size.
    let top = (BigInt::from(3)) << (bits - 2);
    let high = BigInt::one() << bits;
    for _ in 0..budget {
        let mut c = rng.gen_bigint_range(&top, &high);
        c |= BigInt::one();
        if (&c - 1u32).gcd(e).is_one() && is_probable_prime(&c, MR_ROUNDS, rng) {
            return Ok(c);
        }
    }
    Err(ArithError::SearchExhausted(budget))
}
