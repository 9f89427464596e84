//! Publicly verifiable sharing over a discrete-log group.
//!
//! The dealer shares `s ∈ Z_p` with a Shamir polynomial, commits to the
//! secret and the coefficients in the order-`p` group (`S = g^s`,
//! `F_j = g^{f_j}`), and encrypts each share `s_i` to participant `i` as the
//! El Gamal pair `(A, B) = (h^α, s_i⁻¹·y^α) mod p`, next to `V_i = g^{s_i}`
//! and a [`DoubleDlogProof`] that the pair encrypts `log_g V_i`.
//!
//! Anyone can then check, without any share, that every `V_i` matches the
//! polynomial commitments and that every ciphertext is well formed.

mod proof;

pub use proof::{
    challenge_payload, prove, prove_with_nonces, rebuild_commitments, verify, Commitments,
    DoubleDlogProof, ProofStatement,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{mod_inv, pow_mod, random_nonzero_below, ArithError, SchnorrLikeParams};
use crate::shamir::{self, ShamirError, ShareSet, SharingPolicy};

/// Proof length used by tests and sessions.
pub const DEFAULT_SOUNDNESS: usize = 16;
/// Proof length for demo runs.
pub const DEMO_SOUNDNESS: usize = 100;

const RESAMPLE_LIMIT: usize = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DlogError {
    #[error("a share is zero and cannot be encrypted")]
    NonInvertibleShare,
    #[error("ciphertext component B is not invertible")]
    NonInvertibleB,
    #[error("expected {expected} participant keys, got {got}")]
    KeyCount { expected: usize, got: usize },
    #[error("participant index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("proof length l must be at least 1")]
    ZeroSoundness,
    #[error("malformed proof: {0}")]
    MalformedProof(String),
    #[error(transparent)]
    Shamir(#[from] ShamirError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A participant's El Gamal key over the order-`q` subgroup of `Z_p*`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParticipantKey {
    #[serde(with = "crate::serde_dec")]
    pub z: BigInt,
    #[serde(with = "crate::serde_dec")]
    pub y: BigInt,
}

/// Draws `z` uniformly from `[1, q)` and sets `y = h^z mod p`.
pub fn participant_keygen<R: Rng + ?Sized>(
    params: &SchnorrLikeParams,
    rng: &mut R,
) -> ParticipantKey {
    let z = random_nonzero_below(rng, &params.q);
    ParticipantKey::from_secret(params, z)
}

impl ParticipantKey {
    pub fn from_secret(params: &SchnorrLikeParams, z: BigInt) -> Self {
        let y = params.h_pow(&z);
        ParticipantKey { z, y }
    }
}

/// Everything the dealer publishes for participant `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareEntry {
    #[serde(with = "crate::serde_dec")]
    pub x: BigInt,
    #[serde(flatten)]
    pub statement: ProofStatement,
    pub proof: DoubleDlogProof,
}

/// The dealer's public posting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DlogBoard {
    pub params: SchnorrLikeParams,
    pub k: usize,
    /// `S = g^s`.
    #[serde(rename = "S", with = "crate::serde_dec")]
    pub secret_commitment: BigInt,
    /// `F_j = g^{f_j}` for `j = 1..k-1`.
    #[serde(rename = "F", with = "crate::serde_dec::vec")]
    pub coefficient_commitments: Vec<BigInt>,
    pub entries: Vec<ShareEntry>,
}

/// Public board plus the dealer's private material.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DealOutput {
    pub board: DlogBoard,
    pub shares: ShareSet,
    pub alphas: Vec<BigInt>,
}

/// `(A, B) = (h^α, v⁻¹·y^α) mod p`.
pub fn encrypt_share(
    params: &SchnorrLikeParams,
    share: &BigInt,
    y: &BigInt,
    alpha: &BigInt,
) -> Result<(BigInt, BigInt), DlogError> {
    let v_inv = mod_inv(share, &params.p).map_err(|_| DlogError::NonInvertibleShare)?;
    let a = params.h_pow(alpha);
    let b = v_inv * pow_mod(y, alpha, &params.p) % &params.p;
    Ok((a, b))
}

/// Builds the public entry for one share, proof included.
pub fn share_entry<R: Rng + ?Sized>(
    params: &SchnorrLikeParams,
    x: &BigInt,
    share: &BigInt,
    y: &BigInt,
    alpha: &BigInt,
    l: usize,
    rng: &mut R,
) -> Result<ShareEntry, DlogError> {
    let (a, b) = encrypt_share(params, share, y, alpha)?;
    let statement = ProofStatement {
        v_commit: params.g_pow(share),
        a,
        b,
        y: y.clone(),
    };
    let proof = prove(&statement, alpha, params, l, rng)?;
    Ok(ShareEntry {
        x: x.clone(),
        statement,
        proof,
    })
}

/// Shares `secret` among the holders of `public_keys` and publishes
/// commitments, encrypted shares and proofs.
///
/// Zero shares cannot be encrypted; the polynomial is redrawn until every
/// share is nonzero.
pub fn deal<R: Rng + ?Sized>(
    secret: &BigInt,
    policy: &SharingPolicy,
    public_keys: &[BigInt],
    params: &SchnorrLikeParams,
    l: usize,
    rng: &mut R,
) -> Result<DealOutput, DlogError> {
    if l == 0 {
        return Err(DlogError::ZeroSoundness);
    }
    if public_keys.len() != policy.n {
        return Err(DlogError::KeyCount {
            expected: policy.n,
            got: public_keys.len(),
        });
    }
    let shares = draw_nonzero_shares(secret, policy, rng)?;

    let mut entries = Vec::with_capacity(policy.n);
    let mut alphas = Vec::with_capacity(policy.n);
    for ((x, share), y) in shares.x_coords.iter().zip(&shares.shares).zip(public_keys) {
        let alpha = random_nonzero_below(rng, &params.q);
        entries.push(share_entry(params, x, share, y, &alpha, l, rng)?);
        alphas.push(alpha);
    }
    let board = DlogBoard {
        params: params.clone(),
        k: policy.k,
        secret_commitment: params.g_pow(secret),
        coefficient_commitments: shares
            .coefficients
            .iter()
            .map(|f| params.g_pow(f))
            .collect(),
        entries,
    };
    Ok(DealOutput {
        board,
        shares,
        alphas,
    })
}

fn draw_nonzero_shares<R: Rng + ?Sized>(
    secret: &BigInt,
    policy: &SharingPolicy,
    rng: &mut R,
) -> Result<ShareSet, DlogError> {
    for _ in 0..RESAMPLE_LIMIT {
        let set = shamir::split(secret, policy, rng)?;
        if set.shares.iter().all(|s| !s.is_zero()) {
            return Ok(set);
        }
        if policy.k == 1 {
            break;
        }
    }
    Err(DlogError::NonInvertibleShare)
}

/// Which value `S_i` is compared against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VssMode {
    /// The participant compares against `g^{s_i}` for its own share.
    Participant(BigInt),
    /// Anyone compares against the published `V_i`.
    Public,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VssCheck {
    /// `S · Π_j F_j^{x_i^j}`.
    pub expected: BigInt,
    pub valid: bool,
}

/// Recomputes `S_i = S · Π_{j=1}^{k-1} F_j^{x_i^j}` and compares it.
pub fn vss_check(board: &DlogBoard, i: usize, mode: &VssMode) -> Result<VssCheck, DlogError> {
    let entry = board.entries.get(i).ok_or(DlogError::IndexOutOfRange(i))?;
    let params = &board.params;
    let mut acc = board.secret_commitment.mod_floor(&params.big_p);
    let mut x_pow = BigInt::one();
    for f in &board.coefficient_commitments {
        x_pow = x_pow * &entry.x % &params.p;
        acc = acc * pow_mod(f, &x_pow, &params.big_p) % &params.big_p;
    }
    let target = match mode {
        VssMode::Participant(share) => params.g_pow(share),
        VssMode::Public => entry.statement.v_commit.clone(),
    };
    Ok(VssCheck {
        valid: acc == target,
        expected: acc,
    })
}

/// `m = A^z · B⁻¹ mod p`.
pub fn decrypt_share(
    a: &BigInt,
    b: &BigInt,
    key: &ParticipantKey,
    params: &SchnorrLikeParams,
) -> Result<BigInt, DlogError> {
    let b_inv = mod_inv(b, &params.p).map_err(|_| DlogError::NonInvertibleB)?;
    Ok(pow_mod(a, &key.z, &params.p) * b_inv % &params.p)
}

/// Public verification of one entry: commitment consistency and proof.
pub fn verify_entry(board: &DlogBoard, i: usize) -> Result<(bool, bool), DlogError> {
    let vss = vss_check(board, i, &VssMode::Public)?.valid;
    let entry = &board.entries[i];
    let proof = verify(&entry.statement, &entry.proof, &board.params)?;
    Ok((vss, proof))
}
