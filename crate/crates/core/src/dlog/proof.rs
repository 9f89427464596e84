//! Non-interactive proof that an El Gamal pair `(A, B)` over `Z_p*`
//! encrypts the discrete logarithm of a commitment `V = g^v`.
//!
//! The prover knows `α` with `A = h^α` and `B = v⁻¹·y^α`, hence
//! `v·B = y^α (mod p)`. For each of `l` rounds it commits to
//! `t_h = h^w` and `t_g = g^(y^w)`; the challenge bits are the hash of the
//! statement and all commitments, and the responses are `r = w − c·α mod q`.
//! A verifier rebuilds each commitment as
//!
//! ```text
//! t_h = h^r · A^c              (mod p)
//! t_g = (g^(1−c) · V^(c·B))^(y^r)   in G
//! ```
//!
//! which for `c = 1` unfolds to `g^(v·B·y^(w−α)) = g^(y^w)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::DlogError;
use crate::arith::{
    encode_unsigned, hash_bits, pow_mod, random_below, BitString, SchnorrLikeParams,
};

/// Public statement: `(A, B)` under key `y` encrypts `log_g V`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStatement {
    #[serde(rename = "V", with = "crate::serde_dec")]
    pub v_commit: BigInt,
    #[serde(rename = "A", with = "crate::serde_dec")]
    pub a: BigInt,
    #[serde(rename = "B", with = "crate::serde_dec")]
    pub b: BigInt,
    #[serde(with = "crate::serde_dec")]
    pub y: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleDlogProof {
    pub l: usize,
    pub c: BitString,
    #[serde(with = "crate::serde_dec::vec")]
    pub r: Vec<BigInt>,
}

/// The `(t_h, t_g)` pairs, in round order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Commitments {
    pub t_h: Vec<BigInt>,
    pub t_g: Vec<BigInt>,
}

/// Hash input: `V ‖ A ‖ B ‖ t_h1 ‖ t_g1 ‖ … ‖ t_hl ‖ t_gl`, each in the
/// canonical length-prefixed encoding.
pub fn challenge_payload(statement: &ProofStatement, commitments: &Commitments) -> Vec<u8> {
    let mut out = Vec::new();
    for x in [&statement.v_commit, &statement.a, &statement.b] {
        out.extend(encode_unsigned(x));
    }
    for (th, tg) in commitments.t_h.iter().zip(&commitments.t_g) {
        out.extend(encode_unsigned(th));
        out.extend(encode_unsigned(tg));
    }
    out
}

fn commit_round(params: &SchnorrLikeParams, y: &BigInt, w: &BigInt) -> (BigInt, BigInt) {
    let t_h = params.h_pow(w);
    let y_w = pow_mod(y, w, &params.p);
    (t_h, params.g_pow(&y_w))
}

/// Proves with nonces drawn from `rng`.
pub fn prove<R: Rng + ?Sized>(
    statement: &ProofStatement,
    alpha: &BigInt,
    params: &SchnorrLikeParams,
    l: usize,
    rng: &mut R,
) -> Result<DoubleDlogProof, DlogError> {
    let nonces: Vec<BigInt> = (0..l).map(|_| random_below(rng, &params.q)).collect();
    prove_with_nonces(statement, alpha, params, &nonces).map(|(proof, _)| proof)
}

/// Proves with caller-supplied nonces `w_1 … w_l`, returning the
/// commitments alongside the proof.
pub fn prove_with_nonces(
    statement: &ProofStatement,
    alpha: &BigInt,
    params: &SchnorrLikeParams,
    nonces: &[BigInt],
) -> Result<(DoubleDlogProof, Commitments), DlogError> {
    let l = nonces.len();
    if l == 0 {
        return Err(DlogError::ZeroSoundness);
    }
    let (t_h, t_g): (Vec<_>, Vec<_>) = nonces
        .iter()
        .map(|w| commit_round(params, &statement.y, w))
        .unzip();
    let commitments = Commitments { t_h, t_g };
    let c = hash_bits(&challenge_payload(statement, &commitments), l);
    let r = nonces
        .iter()
        .zip(c.bits())
        .map(|(w, &bit)| {
            let r = if bit { w - alpha } else { w.clone() };
            r.mod_floor(&params.q)
        })
        .collect();
    Ok((DoubleDlogProof { l, c, r }, commitments))
}

/// Rebuilds the commitments a verifier derives from the proof.
pub fn rebuild_commitments(
    statement: &ProofStatement,
    proof: &DoubleDlogProof,
    params: &SchnorrLikeParams,
) -> Result<Commitments, DlogError> {
    check_shape(statement, proof, params)?;
    let b_exp = statement.b.mod_floor(&params.p);
    let v_to_b = pow_mod(&statement.v_commit, &b_exp, &params.big_p);
    let mut t_h = Vec::with_capacity(proof.l);
    let mut t_g = Vec::with_capacity(proof.l);
    for (&bit, r) in proof.c.bits().iter().zip(&proof.r) {
        let h_r = params.h_pow(r);
        let y_r = pow_mod(&statement.y, r, &params.p);
        if bit {
            t_h.push(h_r * &statement.a % &params.p);
            // g^(1-c) = 1 and V^(c·B) = V^B.
            t_g.push(pow_mod(&v_to_b, &y_r, &params.big_p));
        } else {
            t_h.push(h_r);
            t_g.push(params.g_pow(&y_r));
        }
    }
    Ok(Commitments { t_h, t_g })
}

/// Accepts iff the hash of the rebuilt commitments equals the challenge.
pub fn verify(
    statement: &ProofStatement,
    proof: &DoubleDlogProof,
    params: &SchnorrLikeParams,
) -> Result<bool, DlogError> {
    let rebuilt = rebuild_commitments(statement, proof, params)?;
    Ok(hash_bits(&challenge_payload(statement, &rebuilt), proof.l) == proof.c)
}

fn check_shape(
    statement: &ProofStatement,
    proof: &DoubleDlogProof,
    params: &SchnorrLikeParams,
) -> Result<(), DlogError> {
    let malformed = |what: String| Err(DlogError::MalformedProof(what));
    if proof.l == 0 || proof.c.len() != proof.l || proof.r.len() != proof.l {
        return malformed(format!(
            "l = {}, |c| = {}, |r| = {}",
            proof.l,
            proof.c.len(),
            proof.r.len()
        ));
    }
    if proof
        .r
        .iter()
        .any(|r| r < &BigInt::zero() || r >= &params.q)
    {
        return malformed("response outside [0, q)".into());
    }
    let in_zp = |x: &BigInt| x > &BigInt::zero() && x < &params.p;
    if !in_zp(&statement.a) || !in_zp(&statement.b) || !in_zp(&statement.y) {
        return malformed("A, B and y must lie in Z_p*".into());
    }
    if !params.in_commitment_group(&statement.v_commit) {
        return malformed("V is not in the order-p group".into());
    }
    Ok(())
}
