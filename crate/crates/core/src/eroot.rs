//! El Gamal over an RSA modulus, with an interactive proof that a
//! ciphertext encrypts an `e`-th root of a public value.
//!
//! The dealer publishes `M = m^e mod n` and encrypts `m` to a participant
//! holding `y = g^z` as `(A, B) = (g^α, m·y^α)`. One proof round:
//!
//! 1. the prover picks `w ∈ [0, w_bound]` and sends `t_g = g^w`,
//!    `t_y = y^{e·w}`;
//! 2. the verifier sends `c ∈ [0, 2^l)`;
//! 3. the prover answers `r = w − c·α` over the integers;
//! 4. the verifier checks `t_g = g^r·A^c` and `t_y = y^{e·r}·(B^e·M⁻¹)^c`.
//!
//! ```
//! use pvss::arith::RsaParams;
//! use pvss::eroot::{run_interactive, ERootInstance};
//! use pvss::{seeded_rng, BigInt};
//!
//! let params = RsaParams::tiny();
//! let inst = ERootInstance::from_parts(&params, 2.into(), 3.into(), 4.into()).unwrap();
//! assert_eq!(inst.statement().big_m, BigInt::from(8));
//! let (ok, transcript) = run_interactive(&inst, 4, 5, &mut seeded_rng(1), &mut seeded_rng(2)).unwrap();
//! assert!(ok);
//! assert_eq!(transcript.rounds.len(), 5);
//! ```

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{
    encode_signed, encode_unsigned, mod_exp, mod_inv, pow_mod, random_nonzero_below, random_range,
    ArithError, RsaParams,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ERootError {
    #[error("{value} shares the factor {gcd} with n")]
    NotCoprime { value: BigInt, gcd: BigInt },
    #[error("challenge length l must be at least 1")]
    ZeroSoundness,
    #[error("at least one round is required")]
    ZeroRounds,
    #[error("challenge {c} outside [0, 2^{l})")]
    ChallengeOutOfRange { c: BigInt, l: u32 },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// What the verifier sees.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ERootStatement {
    #[serde(with = "crate::serde_dec")]
    pub n: BigInt,
    #[serde(with = "crate::serde_dec")]
    pub e: BigInt,
    #[serde(with = "crate::serde_dec")]
    pub g: BigInt,
    #[serde(with = "crate::serde_dec")]
    pub y: BigInt,
    #[serde(rename = "A", with = "crate::serde_dec")]
    pub a: BigInt,
    #[serde(rename = "B", with = "crate::serde_dec")]
    pub b: BigInt,
    #[serde(rename = "M", with = "crate::serde_dec")]
    pub big_m: BigInt,
}

/// A full instance, private values included.
///
/// Invariants for honest instances: `y = g^z`, `A = g^α`, `B = m·y^α`,
/// `M = m^e`, all mod `n`. Fields are public so experiments can break them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ERootInstance {
    pub params: RsaParams,
    pub y: BigInt,
    pub a: BigInt,
    pub b: BigInt,
    pub big_m: BigInt,
    pub m: BigInt,
    pub z: BigInt,
    pub alpha: BigInt,
}

impl ERootInstance {
    pub fn from_parts(
        params: &RsaParams,
        m: BigInt,
        z: BigInt,
        alpha: BigInt,
    ) -> Result<Self, ERootError> {
        let n = &params.n;
        let m = m.mod_floor(n);
        let gcd = m.gcd(n);
        if !gcd.is_one() {
            return Err(ERootError::NotCoprime { value: m, gcd });
        }
        let y = pow_mod(&params.g, &z, n);
        let a = pow_mod(&params.g, &alpha, n);
        let b = &m * pow_mod(&y, &alpha, n) % n;
        let big_m = pow_mod(&m, &params.e, n);
        Ok(ERootInstance {
            params: params.clone(),
            y,
            a,
            b,
            big_m,
            m,
            z,
            alpha,
        })
    }

    /// The dealer's view: the participant's key `y` is known, `z` is not and
    /// is left at zero.
    pub fn for_public_key(
        params: &RsaParams,
        y: &BigInt,
        m: BigInt,
        alpha: BigInt,
    ) -> Result<Self, ERootError> {
        let n = &params.n;
        let m = m.mod_floor(n);
        for v in [&m, y] {
            let gcd = v.gcd(n);
            if !gcd.is_one() {
                return Err(ERootError::NotCoprime {
                    value: v.clone(),
                    gcd,
                });
            }
        }
        let y = y.mod_floor(n);
        Ok(ERootInstance {
            params: params.clone(),
            a: pow_mod(&params.g, &alpha, n),
            b: &m * pow_mod(&y, &alpha, n) % n,
            big_m: pow_mod(&m, &params.e, n),
            y,
            m,
            z: BigInt::zero(),
            alpha,
        })
    }

    pub fn statement(&self) -> ERootStatement {
        ERootStatement {
            n: self.params.n.clone(),
            e: self.params.e.clone(),
            g: self.params.g.clone(),
            y: self.y.clone(),
            a: self.a.clone(),
            b: self.b.clone(),
            big_m: self.big_m.clone(),
        }
    }
}

/// Draws `z, α` uniformly from `[1, n)` and builds the instance for `m`.
pub fn setup_instance<R: Rng + ?Sized>(
    params: &RsaParams,
    m: &BigInt,
    rng: &mut R,
) -> Result<ERootInstance, ERootError> {
    let z = random_nonzero_below(rng, &params.n);
    let alpha = random_nonzero_below(rng, &params.n);
    ERootInstance::from_parts(params, m.clone(), z, alpha)
}

/// `m = A^{−z}·B mod n`.
pub fn retrieve_share(
    a: &BigInt,
    b: &BigInt,
    z: &BigInt,
    n: &BigInt,
) -> Result<BigInt, ERootError> {
    let a_inv = mod_inv(a, n)?;
    Ok(pow_mod(&a_inv, z, n) * b.mod_floor(n) % n)
}

/// The prover's first message together with its private nonce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProverCommitment {
    pub t_g: BigInt,
    pub t_y: BigInt,
    pub w: BigInt,
}

/// `t_g = g^w`, `t_y = y^{e·w}` for a given nonce.
pub fn commit_with_nonce(statement: &ERootStatement, w: &BigInt) -> ProverCommitment {
    let n = &statement.n;
    let y_e = pow_mod(&statement.y, &statement.e, n);
    ProverCommitment {
        t_g: pow_mod(&statement.g, w, n),
        t_y: pow_mod(&y_e, w, n),
        w: w.clone(),
    }
}

/// Draws `w` uniformly from `[0, w_bound]` and commits to it.
pub fn prover_commit<R: Rng + ?Sized>(
    statement: &ERootStatement,
    w_bound: &BigInt,
    rng: &mut R,
) -> ProverCommitment {
    let w = random_range(rng, &BigInt::zero(), &(w_bound + 1u32));
    commit_with_nonce(statement, &w)
}

/// Uniform challenge in `[0, 2^l)`.
pub fn verifier_challenge<R: Rng + ?Sized>(l: u32, rng: &mut R) -> Result<BigInt, ERootError> {
    if l == 0 {
        return Err(ERootError::ZeroSoundness);
    }
    Ok(random_range(
        rng,
        &BigInt::zero(),
        &(BigInt::one() << l as usize),
    ))
}

/// `r = w − c·α` over the integers.
pub fn prover_respond(w: &BigInt, c: &BigInt, alpha: &BigInt) -> BigInt {
    w - c * alpha
}

/// One commit/challenge/response round as the verifier records it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ERootRound {
    #[serde(with = "crate::serde_dec")]
    pub t_g: BigInt,
    #[serde(with = "crate::serde_dec")]
    pub t_y: BigInt,
    #[serde(with = "crate::serde_dec")]
    pub c: BigInt,
    #[serde(with = "crate::serde_dec")]
    pub r: BigInt,
}

/// Checks both congruences of one round; negative exponents go through the
/// modular inverse.
pub fn verify_transcript(
    statement: &ERootStatement,
    l: u32,
    round: &ERootRound,
) -> Result<bool, ERootError> {
    let n = &statement.n;
    if l == 0 {
        return Err(ERootError::ZeroSoundness);
    }
    if round.c < BigInt::zero() || round.c >= BigInt::one() << l as usize {
        return Err(ERootError::ChallengeOutOfRange {
            c: round.c.clone(),
            l,
        });
    }
    for v in [
        &statement.g,
        &statement.y,
        &statement.a,
        &statement.b,
        &statement.big_m,
    ] {
        mod_inv(v, n)?;
    }
    let lhs_g = mod_exp(&statement.g, &round.r, n)? * pow_mod(&statement.a, &round.c, n) % n;
    let y_e = pow_mod(&statement.y, &statement.e, n);
    let ratio = pow_mod(&statement.b, &statement.e, n) * mod_inv(&statement.big_m, n)? % n;
    let lhs_y = mod_exp(&y_e, &round.r, n)? * pow_mod(&ratio, &round.c, n) % n;
    Ok(lhs_g == round.t_g.mod_floor(n) && lhs_y == round.t_y.mod_floor(n))
}

/// The full record of an interactive run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ERootTranscript {
    #[serde(flatten)]
    pub statement: ERootStatement,
    pub l: u32,
    #[serde(with = "crate::serde_dec")]
    pub w_bound: BigInt,
    pub rounds: Vec<ERootRound>,
}

impl ERootTranscript {
    /// Canonical bytes: length-prefixed integers in field order, `r` signed.
    pub fn to_bytes(&self) -> Vec<u8> {
        let s = &self.statement;
        let mut out = Vec::new();
        for v in [&s.n, &s.e, &s.g, &s.y, &s.a, &s.b, &s.big_m] {
            out.extend(encode_unsigned(v));
        }
        out.extend(self.l.to_be_bytes());
        out.extend(encode_unsigned(&self.w_bound));
        out.extend((self.rounds.len() as u32).to_be_bytes());
        for round in &self.rounds {
            out.extend(encode_unsigned(&round.t_g));
            out.extend(encode_unsigned(&round.t_y));
            out.extend(encode_unsigned(&round.c));
            out.extend(encode_signed(&round.r));
        }
        out
    }

    /// Re-verifies every recorded round.
    pub fn verify_all(&self) -> Result<bool, ERootError> {
        if self.rounds.is_empty() {
            return Err(ERootError::ZeroRounds);
        }
        for round in &self.rounds {
            if !verify_transcript(&self.statement, self.l, round)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Runs `rounds` sequential rounds with the default `w_bound` and accepts
/// iff every round verifies. The prover and verifier draw from separate
/// generators.
pub fn run_interactive<P: Rng + ?Sized, V: Rng + ?Sized>(
    instance: &ERootInstance,
    l: u32,
    rounds: usize,
    prover_rng: &mut P,
    verifier_rng: &mut V,
) -> Result<(bool, ERootTranscript), ERootError> {
    let w_bound = instance.params.clone().with_soundness(l).default_w_bound();
    run_interactive_with_bound(instance, l, rounds, &w_bound, prover_rng, verifier_rng)
}

pub fn run_interactive_with_bound<P: Rng + ?Sized, V: Rng + ?Sized>(
    instance: &ERootInstance,
    l: u32,
    rounds: usize,
    w_bound: &BigInt,
    prover_rng: &mut P,
    verifier_rng: &mut V,
) -> Result<(bool, ERootTranscript), ERootError> {
    if rounds == 0 {
        return Err(ERootError::ZeroRounds);
    }
    if l == 0 {
        return Err(ERootError::ZeroSoundness);
    }
    let statement = instance.statement();
    let mut accept = true;
    let mut records = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let commitment = prover_commit(&statement, w_bound, prover_rng);
        let c = verifier_challenge(l, verifier_rng)?;
        let r = prover_respond(&commitment.w, &c, &instance.alpha);
        let round = ERootRound {
            t_g: commitment.t_g,
            t_y: commitment.t_y,
            c,
            r,
        };
        accept &= verify_transcript(&statement, l, &round)?;
        records.push(round);
    }
    let transcript = ERootTranscript {
        statement,
        l,
        w_bound: w_bound.clone(),
        rounds: records,
    };
    Ok((accept, transcript))
}
