//! Non-abelian PVSS: shares travel through the conjugacy El Gamal of
//! [`crate::kex`], followed by a cut-and-choose proof sketch.
//!
//! Distribution and retrieval are sound: `(A, B) = (b^t, x^{c^t})` and
//! `x = B^{(A^s)⁻¹}`. The proof is implemented exactly as described. The
//! dealer publishes `N = n₀^x`, `t_h = b^w` and `t_g = b^{y^w}`, answers a
//! challenge bit `r` with `w·t` (r = 0) or `w` (r = 1), and the verifier
//! checks `t_h = A^{c}`.
//!
//! That check accepts an honest dealer only when the conjugators line up.
//! For `r = 1`, `A^w = b^{t·w}`, which equals `b^w` iff `t` centralizes `b`.
//! For `r = 0`, `A^{w·t} = b^{t·w·t}`, which equals `b^w` iff `t·w·t·w⁻¹`
//! centralizes `b`. `N` and `t_g` are published but never read.
//!
//! ```
//! use pvss::group::GroupElement;
//! use pvss::kex::KexKeyPair;
//! use pvss::na_pvss::{na_distribute, na_retrieve};
//!
//! let keys = KexKeyPair::from_parts(
//!     GroupElement::cycles(5, &[&[1, 2, 3]]),
//!     GroupElement::cycles(5, &[&[1, 2, 3, 4, 5]]),
//! ).unwrap();
//! let t = GroupElement::cycles(5, &[&[4, 5]]);
//! let x = GroupElement::cycles(5, &[&[1, 4]]);
//! let ct = na_distribute(&x, &keys.public(), &t).unwrap();
//! assert_eq!(na_retrieve(&ct.a, &ct.b, &keys.s).unwrap(), x);
//! ```

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{GroupElement, GroupError};
use crate::kex::{kex_decrypt, kex_encrypt_with, KexCiphertext, KexError, KexPublicKey};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NaPvssError {
    #[error("challenge bit must be 0 or 1, got {0}")]
    BadChallenge(u8),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Kex(#[from] KexError),
}

/// The encrypted share `(A, B) = (b^t, x^{c^t})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaCiphertext {
    #[serde(rename = "A")]
    pub a: GroupElement,
    #[serde(rename = "B")]
    pub b: GroupElement,
}

impl From<KexCiphertext> for NaCiphertext {
    fn from(ct: KexCiphertext) -> Self {
        NaCiphertext {
            a: ct.header,
            b: ct.e,
        }
    }
}

pub fn na_distribute(
    x: &GroupElement,
    key: &KexPublicKey,
    t: &GroupElement,
) -> Result<NaCiphertext, NaPvssError> {
    Ok(kex_encrypt_with(x, key, t)?.into())
}

/// `x = B^{(A^s)⁻¹}`.
pub fn na_retrieve(
    a: &GroupElement,
    b: &GroupElement,
    s: &GroupElement,
) -> Result<GroupElement, NaPvssError> {
    let ct = KexCiphertext {
        header: a.clone(),
        e: b.clone(),
        descriptor: a.descriptor(),
    };
    Ok(kex_decrypt(&ct, s)?)
}

/// The dealer's published proof values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaProofCommit {
    #[serde(rename = "N")]
    pub big_n: GroupElement,
    pub t_h: GroupElement,
    pub t_g: GroupElement,
}

/// Values the dealer keeps for the response.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaProofSecrets {
    pub y: GroupElement,
    pub w: GroupElement,
}

/// `N = n₀^x`, `t_h = b^w`, `t_g = b^{y^w}` for given `y, w`.
pub fn na_prove_commit_with(
    x: &GroupElement,
    n0: &GroupElement,
    b: &GroupElement,
    y: &GroupElement,
    w: &GroupElement,
) -> Result<NaProofCommit, NaPvssError> {
    Ok(NaProofCommit {
        big_n: n0.conjugate_by(x)?,
        t_h: b.conjugate_by(w)?,
        t_g: b.conjugate_by(&y.conjugate_by(w)?)?,
    })
}

/// Draws `y, w` uniformly from the group.
pub fn na_prove_commit<R: Rng + ?Sized>(
    x: &GroupElement,
    n0: &GroupElement,
    b: &GroupElement,
    rng: &mut R,
) -> Result<(NaProofCommit, NaProofSecrets), NaPvssError> {
    let d = x.descriptor();
    let y = d.random_element(rng);
    let w = d.random_element(rng);
    let commit = na_prove_commit_with(x, n0, b, &y, &w)?;
    Ok((commit, NaProofSecrets { y, w }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaPvssChallengeResponse {
    pub r: u8,
    pub c_resp: GroupElement,
}

/// `w·t` for `r = 0`, `w` for `r = 1`.
pub fn na_respond(
    r: u8,
    w: &GroupElement,
    t: &GroupElement,
) -> Result<NaPvssChallengeResponse, NaPvssError> {
    let c_resp = match r {
        0 => w.mul(t)?,
        1 => w.clone(),
        _ => return Err(NaPvssError::BadChallenge(r)),
    };
    Ok(NaPvssChallengeResponse { r, c_resp })
}

/// `t_h == A^{c_resp}`, as described; nothing else is consulted.
pub fn na_verify_literal(
    a: &GroupElement,
    t_h: &GroupElement,
    response: &NaPvssChallengeResponse,
) -> Result<bool, NaPvssError> {
    Ok(&a.conjugate_by(&response.c_resp)? == t_h)
}

/// Everything published for one participant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaPvssEntry {
    pub key: KexPublicKey,
    #[serde(flatten)]
    pub ciphertext: NaCiphertext,
    #[serde(flatten)]
    pub proof: NaProofCommit,
}

impl NaPvssEntry {
    /// Runs [`na_verify_literal`] on this entry's `A` and `t_h`.
    pub fn verify_literal(&self, response: &NaPvssChallengeResponse) -> Result<bool, NaPvssError> {
        na_verify_literal(&self.ciphertext.a, &self.proof.t_h, response)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupDescriptor, DEFAULT_MODULUS};
    use crate::kex::{kex_keygen, CommutingSets, KexKeyPair};
    use crate::seeded_rng;

    fn descriptors() -> [GroupDescriptor; 2] {
        [
            GroupDescriptor::permutation(12).unwrap(),
            GroupDescriptor::unitriangular(DEFAULT_MODULUS).unwrap(),
        ]
    }

    #[test]
    fn identity_share() {
        let mut rng = seeded_rng(1);
        let d = GroupDescriptor::permutation(6).unwrap();
        let sets = CommutingSets::sample(d, &mut rng);
        let keys = kex_keygen(&sets, &mut rng);
        let ct = na_distribute(&d.identity(), &keys.public(), &sets.sample_t(&mut rng)).unwrap();
        assert!(ct.b.is_identity());
        assert!(na_retrieve(&ct.a, &ct.b, &keys.s).unwrap().is_identity());
    }

    #[test]
    fn retrieval_round_trip_200_per_backend() {
        for d in descriptors() {
            let mut rng = seeded_rng(2);
            for _ in 0..200 {
                let sets = CommutingSets::sample(d, &mut rng);
                let keys = kex_keygen(&sets, &mut rng);
                let x = d.random_element(&mut rng);
                let ct = na_distribute(&x, &keys.public(), &sets.sample_t(&mut rng)).unwrap();
                assert_eq!(na_retrieve(&ct.a, &ct.b, &keys.s).unwrap(), x);
            }
        }
    }

    #[test]
    fn wrong_key_misses() {
        let d = GroupDescriptor::permutation(12).unwrap();
        let mut rng = seeded_rng(3);
        let mut hits = 0;
        for _ in 0..100 {
            let sets = CommutingSets::sample(d, &mut rng);
            let keys = kex_keygen(&sets, &mut rng);
            let x = d.random_element(&mut rng);
            let ct = na_distribute(&x, &keys.public(), &sets.sample_t(&mut rng)).unwrap();
            let wrong = d.random_element(&mut rng);
            hits += (na_retrieve(&ct.a, &ct.b, &wrong).unwrap() == x) as u32;
        }
        assert!(hits <= 2, "{hits}");
    }

    #[test]
    fn commit_trivial_cases_and_determinism() {
        let d = GroupDescriptor::permutation(7).unwrap();
        let mut rng = seeded_rng(4);
        let (n0, b, y) = (
            d.random_element(&mut rng),
            d.random_element(&mut rng),
            d.random_element(&mut rng),
        );
        let c = na_prove_commit_with(&d.identity(), &n0, &b, &y, &d.identity()).unwrap();
        assert_eq!(c.big_n, n0);
        assert_eq!(c.t_h, b);
        let x = d.random_element(&mut rng);
        let a = na_prove_commit(&x, &n0, &b, &mut seeded_rng(5)).unwrap();
        assert_eq!(a, na_prove_commit(&x, &n0, &b, &mut seeded_rng(5)).unwrap());
    }

    #[test]
    fn respond_cases() {
        let d = GroupDescriptor::permutation(5).unwrap();
        let w = GroupElement::cycles(5, &[&[1, 2]]);
        let t = GroupElement::cycles(5, &[&[2, 3, 4]]);
        assert_eq!(na_respond(1, &w, &t).unwrap().c_resp, w);
        assert_eq!(na_respond(0, &d.identity(), &t).unwrap().c_resp, t);
        assert_eq!(na_respond(0, &w, &d.identity()).unwrap().c_resp, w);
        assert_eq!(na_respond(0, &w, &t).unwrap().c_resp, w.mul(&t).unwrap());
        assert_eq!(na_respond(2, &w, &t), Err(NaPvssError::BadChallenge(2)));
    }

    #[test]
    fn literal_check_accepts_in_abelian_slice() {
        let q = DEFAULT_MODULUS;
        let mut rng = seeded_rng(6);
        for _ in 0..100 {
            let mut slice = || GroupElement::matrix(q, rng.gen_range(1..q), 0, rng.gen_range(0..q));
            let (s, b, t, w, x) = (slice(), slice(), slice(), slice(), slice());
            let keys = KexKeyPair::from_parts(s, b.clone()).unwrap();
            let ct = na_distribute(&x, &keys.public(), &t).unwrap();
            let commit = na_prove_commit_with(&x, &b, &b, &w, &w).unwrap();
            for r in [0, 1] {
                let resp = na_respond(r, &w, &t).unwrap();
                assert!(na_verify_literal(&ct.a, &commit.t_h, &resp).unwrap());
            }
        }
    }

    #[test]
    fn literal_check_rejects_honest_dealer_degree_five() {
        let keys = KexKeyPair::from_parts(
            GroupElement::cycles(5, &[&[1, 2, 3]]),
            GroupElement::cycles(5, &[&[1, 2, 3, 4, 5]]),
        )
        .unwrap();
        let t = GroupElement::cycles(5, &[&[4, 5]]);
        let w = GroupElement::cycles(5, &[&[2, 4]]);
        let x = GroupElement::cycles(5, &[&[1, 4]]);
        let ct = na_distribute(&x, &keys.public(), &t).unwrap();
        let commit = na_prove_commit_with(&x, &keys.b, &keys.b, &w, &w).unwrap();
        assert!(!t.commutes_with(&keys.b).unwrap() && !t.commutes_with(&w).unwrap());
        let r1 = na_respond(1, &w, &t).unwrap();
        assert!(!na_verify_literal(&ct.a, &commit.t_h, &r1).unwrap());
        assert_eq!(
            ct.a.conjugate_by(&w).unwrap(),
            keys.b.conjugate_by(&t.mul(&w).unwrap()).unwrap()
        );
        let r0 = na_respond(0, &w, &t).unwrap();
        assert!(!na_verify_literal(&ct.a, &commit.t_h, &r0).unwrap());
    }

    /// Accepts iff `t` centralizes `b` (r = 1) or `t·w·t·w⁻¹` does (r = 0).
    #[test]
    fn literal_check_characterization_both_directions() {
        let d = GroupDescriptor::permutation(5).unwrap();
        let mut rng = seeded_rng(7);
        let (mut seen_true, mut seen_false) = (0, 0);
        for _ in 0..2000 {
            let b = d.random_element(&mut rng);
            let s = d.random_element(&mut rng);
            // Small-order t and w make centralizing cases frequent.
            let t = if rng.gen_bool(0.5) {
                b.pow(rng.gen_range(0..5))
            } else {
                d.random_element(&mut rng)
            };
            let w = d.random_element(&mut rng);
            let keys = KexKeyPair::from_parts(s, b.clone()).unwrap();
            let ct = na_distribute(&d.random_element(&mut rng), &keys.public(), &t).unwrap();
            let t_h = b.conjugate_by(&w).unwrap();
            let ok1 = na_verify_literal(&ct.a, &t_h, &na_respond(1, &w, &t).unwrap()).unwrap();
            assert_eq!(ok1, t.commutes_with(&b).unwrap());
            let twtw = t
                .mul(&w)
                .unwrap()
                .mul(&t)
                .unwrap()
                .mul(&w.inverse())
                .unwrap();
            let ok0 = na_verify_literal(&ct.a, &t_h, &na_respond(0, &w, &t).unwrap()).unwrap();
            assert_eq!(ok0, twtw.commutes_with(&b).unwrap());
            if ok1 {
                seen_true += 1;
            } else {
                seen_false += 1;
            }
        }
        assert!(seen_true > 100 && seen_false > 100);
    }

    #[test]
    fn n_and_t_g_are_never_read() {
        let d = GroupDescriptor::permutation(8).unwrap();
        let mut rng = seeded_rng(8);
        for _ in 0..100 {
            let sets = CommutingSets::sample(d, &mut rng);
            let keys = kex_keygen(&sets, &mut rng);
            let t = sets.sample_t(&mut rng);
            let x = d.random_element(&mut rng);
            let n0 = d.random_element(&mut rng);
            let (proof, secrets) = na_prove_commit(&x, &n0, &keys.b, &mut rng).unwrap();
            let entry = NaPvssEntry {
                key: keys.public(),
                ciphertext: na_distribute(&x, &keys.public(), &t).unwrap(),
                proof,
            };
            let mut garbage = entry.clone();
            garbage.proof.big_n = d.random_element(&mut rng);
            garbage.proof.t_g = d.random_element(&mut rng);
            for r in [0, 1] {
                let resp = na_respond(r, &secrets.w, &t).unwrap();
                assert_eq!(
                    entry.verify_literal(&resp).unwrap(),
                    garbage.verify_literal(&resp).unwrap()
                );
            }
        }
    }

    #[test]
    fn entry_json_round_trip() {
        let d = GroupDescriptor::permutation(6).unwrap();
        let mut rng = seeded_rng(9);
        let sets = CommutingSets::sample(d, &mut rng);
        let keys = kex_keygen(&sets, &mut rng);
        let x = d.random_element(&mut rng);
        let (proof, secrets) =
            na_prove_commit(&x, &d.random_element(&mut rng), &keys.b, &mut rng).unwrap();
        let entry = NaPvssEntry {
            key: keys.public(),
            ciphertext: na_distribute(&x, &keys.public(), &sets.sample_t(&mut rng)).unwrap(),
            proof,
        };
        let v = serde_json::to_value(&entry).unwrap();
        for field in ["A", "B", "N", "t_h", "t_g", "key"] {
            assert!(v.get(field).is_some(), "{field}");
        }
        assert_eq!(serde_json::from_value::<NaPvssEntry>(v).unwrap(), entry);
        let resp = serde_json::to_value(na_respond(1, &secrets.w, &secrets.y).unwrap()).unwrap();
        assert_eq!(resp["r"], 1);
    }
}
