//! Conjugacy-based El Gamal key exchange in a non-abelian group.
//!
//! Two subsets `S, T` of the platform group commute elementwise. The
//! receiver publishes `b` and `c = b^s` for a private `s ∈ S`; a sender picks
//! `t ∈ T`, sends the header `b^t` and `E = x^{(c^t)}`. Since `s` and `t`
//! commute, `(b^t)^s = c^t`, so the receiver conjugates `E` back by
//! `(c^t)⁻¹`.
//!
//! `S` and `T` are cyclic subgroups:
//!
//! * permutations: a random full cycle on the first `⌈m/2⌉` points and
//!   another on the remaining points;
//! * matrices: `⟨M(a, 0, 0)⟩` and `⟨M(a′, 0, c′)⟩`, both inside the abelian
//!   slice `b = 0`.
//!
//! ```
//! use pvss::group::{GroupDescriptor, GroupElement};
//! use pvss::kex::{kex_decrypt, kex_encrypt, kex_keygen, CommutingSets};
//! use pvss::seeded_rng;
//!
//! let mut rng = seeded_rng(3);
//! let sets = CommutingSets::sample(GroupDescriptor::permutation(8).unwrap(), &mut rng);
//! let keys = kex_keygen(&sets, &mut rng);
//! let x = GroupElement::cycles(8, &[&[1, 5, 7]]);
//! let ct = kex_encrypt(&x, &keys.public(), &sets, &mut rng).unwrap();
//! assert_eq!(kex_decrypt(&ct, &keys.s).unwrap(), x);
//! ```

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{GroupDescriptor, GroupElement, GroupError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KexError {
    #[error("element is not in the declared set {0}")]
    NotInSet(&'static str),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// The declared sets `S = ⟨s_gen⟩`, `T = ⟨t_gen⟩` with `[S, T] = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SetsWire", into = "SetsWire")]
pub struct CommutingSets {
    s_gen: GroupElement,
    t_gen: GroupElement,
}

#[derive(Serialize, Deserialize)]
struct SetsWire {
    s_gen: GroupElement,
    t_gen: GroupElement,
}

impl TryFrom<SetsWire> for CommutingSets {
    type Error = GroupError;

    fn try_from(w: SetsWire) -> Result<Self, GroupError> {
        CommutingSets::new(w.s_gen, w.t_gen)
    }
}

impl From<CommutingSets> for SetsWire {
    fn from(c: CommutingSets) -> Self {
        SetsWire {
            s_gen: c.s_gen,
            t_gen: c.t_gen,
        }
    }
}

/// Multiplicative order of a non-identity generator.
fn element_order(x: &GroupElement) -> u64 {
    match x {
        GroupElement::Perm(p) => p
            .cycles()
            .iter()
            .fold(1u64, |acc, c| acc.lcm(&(c.len() as u64))),
        GroupElement::Matrix(m) => {
            if m.is_identity() {
                1
            } else {
                m.modulus
            }
        }
    }
}

fn random_cycle_on<R: Rng + ?Sized>(
    degree: usize,
    points: &mut [u32],
    rng: &mut R,
) -> GroupElement {
    points.shuffle(rng);
    GroupElement::Perm(Permutation::from_cycles(degree, &[points]).expect("distinct points"))
}

impl CommutingSets {
    /// Checks that both generators are non-identity elements of one group
    /// and commute.
    pub fn new(s_gen: GroupElement, t_gen: GroupElement) -> Result<Self, GroupError> {
        s_gen.same_group(&t_gen)?;
        if s_gen.is_identity() {
            return Err(GroupError::IdentityMember(0));
        }
        if t_gen.is_identity() {
            return Err(GroupError::IdentityMember(1));
        }
        if !s_gen.commutes_with(&t_gen)? {
            return Err(GroupError::NotCommuting(0, 1));
        }
        if let GroupElement::Matrix(m) = &s_gen {
            let t = match &t_gen {
                GroupElement::Matrix(t) => t,
                _ => unreachable!("same group"),
            };
            if m.b != 0 || m.c != 0 || t.b != 0 {
                return Err(GroupError::InvalidElement(
                    "matrix sets must be <M(a,0,0)> and <M(a',0,c')>".into(),
                ));
            }
        }
        Ok(CommutingSets { s_gen, t_gen })
    }

    pub fn sample<R: Rng + ?Sized>(descriptor: GroupDescriptor, rng: &mut R) -> Self {
        let (s_gen, t_gen) = match descriptor {
            GroupDescriptor::Permutation { degree } => {
                let split = degree.div_ceil(2) as u32;
                let mut left: Vec<u32> = (1..=split).collect();
                let mut right: Vec<u32> = (split + 1..=degree as u32).collect();
                (
                    random_cycle_on(degree, &mut left, rng),
                    random_cycle_on(degree, &mut right, rng),
                )
            }
            GroupDescriptor::Unitriangular { modulus } => (
                GroupElement::matrix(modulus, rng.gen_range(1..modulus), 0, 0),
                GroupElement::matrix(
                    modulus,
                    rng.gen_range(1..modulus),
                    0,
                    rng.gen_range(0..modulus),
                ),
            ),
        };
        CommutingSets::new(s_gen, t_gen).expect("generators commute by construction")
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        self.s_gen.descriptor()
    }

    pub fn s_generator(&self) -> &GroupElement {
        &self.s_gen
    }

    pub fn t_generator(&self) -> &GroupElement {
        &self.t_gen
    }

    /// A uniform non-identity element of `S`.
    pub fn sample_s<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        random_power(&self.s_gen, rng)
    }

    /// A uniform non-identity element of `T`.
    pub fn sample_t<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        random_power(&self.t_gen, rng)
    }

    pub fn contains_s(&self, x: &GroupElement) -> bool {
        in_cyclic(&self.s_gen, x)
    }

    pub fn contains_t(&self, x: &GroupElement) -> bool {
        in_cyclic(&self.t_gen, x)
    }

    /// Every element of `S` and of `T`, for groups small enough to list.
    pub fn enumerate(
        &self,
        budget: u64,
    ) -> Result<(Vec<GroupElement>, Vec<GroupElement>), GroupError> {
        let list = |g: &GroupElement| {
            let ord = element_order(g);
            if ord > budget {
                return Err(GroupError::BudgetExceeded(budget));
            }
            Ok((0..ord as i64).map(|k| g.pow(k)).collect())
        };
        Ok((list(&self.s_gen)?, list(&self.t_gen)?))
    }
}

fn random_power<R: Rng + ?Sized>(g: &GroupElement, rng: &mut R) -> GroupElement {
    let ord = element_order(g);
    match g {
        // Powers of M(a, 0, c) are M(k·a, 0, k·c) on the abelian slice.
        GroupElement::Matrix(m) => {
            let k = rng.gen_range(1..ord);
            let mul = |x: u64| ((x as u128 * k as u128) % m.modulus as u128) as u64;
            GroupElement::matrix(m.modulus, mul(m.a), 0, mul(m.c))
        }
        GroupElement::Perm(_) => g.pow(rng.gen_range(1..ord) as i64),
    }
}

fn in_cyclic(g: &GroupElement, x: &GroupElement) -> bool {
    if g.same_group(x).is_err() {
        return false;
    }
    match (g, x) {
        (GroupElement::Matrix(m), GroupElement::Matrix(y)) => {
            let q = m.modulus as u128;
            y.b == 0 && (y.c as u128 * m.a as u128) % q == (y.a as u128 * m.c as u128) % q
        }
        _ => (0..element_order(g) as i64).any(|k| &g.pow(k) == x),
    }
}

/// Receiver key pair: private `s ∈ S`, public base `b` and `c = b^s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KexKeyPair {
    pub s: GroupElement,
    pub b: GroupElement,
    pub c: GroupElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KexPublicKey {
    pub b: GroupElement,
    pub c: GroupElement,
}

impl KexKeyPair {
    pub fn from_parts(s: GroupElement, b: GroupElement) -> Result<Self, KexError> {
        let c = b.conjugate_by(&s)?;
        Ok(KexKeyPair { s, b, c })
    }

    pub fn public(&self) -> KexPublicKey {
        KexPublicKey {
            b: self.b.clone(),
            c: self.c.clone(),
        }
    }
}

/// Draws `s ∈ S` and a uniform base `b`.
pub fn kex_keygen<R: Rng + ?Sized>(sets: &CommutingSets, rng: &mut R) -> KexKeyPair {
    let s = sets.sample_s(rng);
    let b = sets.descriptor().random_element(rng);
    KexKeyPair::from_parts(s, b).expect("same group")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KexCiphertext {
    /// `b^t`.
    pub header: GroupElement,
    /// `x^{(c^t)}`.
    #[serde(rename = "E")]
    pub e: GroupElement,
    pub descriptor: GroupDescriptor,
}

/// Encrypts with a caller-chosen `t`; membership in `T` is not checked.
pub fn kex_encrypt_with(
    x: &GroupElement,
    pk: &KexPublicKey,
    t: &GroupElement,
) -> Result<KexCiphertext, KexError> {
    x.same_group(&pk.b)?;
    let header = pk.b.conjugate_by(t)?;
    let key = pk.c.conjugate_by(t)?;
    Ok(KexCiphertext {
        header,
        e: x.conjugate_by(&key)?,
        descriptor: x.descriptor(),
    })
}

/// Encrypts with a fresh `t ∈ T`.
pub fn kex_encrypt<R: Rng + ?Sized>(
    x: &GroupElement,
    pk: &KexPublicKey,
    sets: &CommutingSets,
    rng: &mut R,
) -> Result<KexCiphertext, KexError> {
    let t = sets.sample_t(rng);
    kex_encrypt_with(x, pk, &t)
}

/// Recomputes `(b^t)^s` and conjugates `E` by its inverse.
pub fn kex_decrypt(ct: &KexCiphertext, s: &GroupElement) -> Result<GroupElement, KexError> {
    let key = ct.header.conjugate_by(s)?;
    Ok(ct.e.conjugate_by(&key.inverse())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::DEFAULT_MODULUS;
    use crate::seeded_rng;

    fn perm5() -> CommutingSets {
        CommutingSets::new(
            GroupElement::cycles(5, &[&[1, 2, 3]]),
            GroupElement::cycles(5, &[&[4, 5]]),
        )
        .unwrap()
    }

    fn descriptors() -> [GroupDescriptor; 2] {
        [
            GroupDescriptor::permutation(16).unwrap(),
            GroupDescriptor::unitriangular(DEFAULT_MODULUS).unwrap(),
        ]
    }

    #[test]
    fn degree_five_sets_commute() {
        let sets = perm5();
        let (s, t) = sets.enumerate(100).unwrap();
        assert_eq!((s.len(), t.len()), (3, 2));
        for a in &s {
            for b in &t {
                assert!(a.commutes_with(b).unwrap());
            }
        }
        assert!(crate::group::commuting_sets(&s, &t).unwrap());
    }

    #[test]
    fn sampled_permutation_sets_split_points() {
        let sets =
            CommutingSets::sample(GroupDescriptor::permutation(5).unwrap(), &mut seeded_rng(1));
        let GroupElement::Perm(s) = sets.s_generator() else {
            panic!()
        };
        let GroupElement::Perm(t) = sets.t_generator() else {
            panic!()
        };
        assert_eq!(s.cycles().len(), 1);
        assert_eq!(s.cycles()[0].iter().copied().max(), Some(3));
        assert_eq!(t.cycles(), vec![vec![4, 5]]);
    }

    #[test]
    fn keygen_example() {
        let keys = KexKeyPair::from_parts(
            GroupElement::cycles(5, &[&[1, 2, 3]]),
            GroupElement::cycles(5, &[&[1, 2, 3, 4, 5]]),
        )
        .unwrap();
        assert_eq!(keys.c, GroupElement::cycles(5, &[&[3, 1, 2, 4, 5]]));
    }

    #[test]
    fn keygen_is_reproducible_and_s_in_set() {
        for d in descriptors() {
            let sets = CommutingSets::sample(d, &mut seeded_rng(2));
            let a = kex_keygen(&sets, &mut seeded_rng(3));
            assert_eq!(a, kex_keygen(&sets, &mut seeded_rng(3)));
            assert!(sets.contains_s(&a.s));
            assert!(!sets.contains_t(&a.s));
            assert_eq!(a.c, a.b.conjugate_by(&a.s).unwrap());
        }
    }

    #[test]
    fn rejects_non_commuting_generators() {
        let err = CommutingSets::new(
            GroupElement::cycles(5, &[&[1, 2, 3]]),
            GroupElement::cycles(5, &[&[3, 4]]),
        );
        assert_eq!(err.unwrap_err(), GroupError::NotCommuting(0, 1));
    }

    #[test]
    fn trivial_ciphertexts() {
        let sets = perm5();
        let keys = kex_keygen(&sets, &mut seeded_rng(4));
        let id = GroupDescriptor::permutation(5).unwrap().identity();
        let ct = kex_encrypt(&id, &keys.public(), &sets, &mut seeded_rng(5)).unwrap();
        assert!(ct.e.is_identity());
        assert!(kex_decrypt(&ct, &keys.s).unwrap().is_identity());
        let x = GroupElement::cycles(5, &[&[1, 4]]);
        let ct = kex_encrypt_with(&x, &keys.public(), &id).unwrap();
        assert_eq!(ct.header, keys.b);
        assert_eq!(ct.e, x.conjugate_by(&keys.c).unwrap());
    }

    #[test]
    fn round_trip_200_per_backend() {
        for d in descriptors() {
            let mut rng = seeded_rng(6);
            for _ in 0..200 {
                let sets = CommutingSets::sample(d, &mut rng);
                let keys = kex_keygen(&sets, &mut rng);
                let x = d.random_element(&mut rng);
                let ct = kex_encrypt(&x, &keys.public(), &sets, &mut rng).unwrap();
                assert_eq!(kex_decrypt(&ct, &keys.s).unwrap(), x);
            }
        }
    }

    #[test]
    fn core_identity_500_pairs() {
        for d in descriptors() {
            let mut rng = seeded_rng(7);
            let sets = CommutingSets::sample(d, &mut rng);
            for _ in 0..500 {
                let (s, t) = (sets.sample_s(&mut rng), sets.sample_t(&mut rng));
                assert!(sets.contains_s(&s) && sets.contains_t(&t));
                let b = d.random_element(&mut rng);
                let lhs = b.conjugate_by(&t).unwrap().conjugate_by(&s).unwrap();
                let rhs = b.conjugate_by(&s).unwrap().conjugate_by(&t).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn conjugation_by_inverse_undoes() {
        let d = GroupDescriptor::permutation(9).unwrap();
        let mut rng = seeded_rng(8);
        for _ in 0..200 {
            let (x, g) = (d.random_element(&mut rng), d.random_element(&mut rng));
            assert_eq!(
                x.conjugate_by(&g)
                    .unwrap()
                    .conjugate_by(&g.inverse())
                    .unwrap(),
                x
            );
        }
    }

    #[test]
    fn non_commuting_t_breaks_recovery_for_permutations() {
        let d = GroupDescriptor::permutation(16).unwrap();
        let mut rng = seeded_rng(9);
        let (mut trials, mut failures) = (0, 0);
        while trials < 200 {
            let sets = CommutingSets::sample(d, &mut rng);
            let keys = kex_keygen(&sets, &mut rng);
            let t = d.random_element(&mut rng);
            if t.commutes_with(&keys.s).unwrap() {
                continue;
            }
            let x = d.random_element(&mut rng);
            let ct = kex_encrypt_with(&x, &keys.public(), &t).unwrap();
            failures += (kex_decrypt(&ct, &keys.s).unwrap() != x) as u32;
            trials += 1;
        }
        assert!(failures >= 190, "{failures}/200");
    }

    /// In the Heisenberg group every commutator is central, so the two
    /// conjugating keys differ by a central element and recovery survives.
    #[test]
    fn non_commuting_t_is_harmless_for_heisenberg() {
        let d = GroupDescriptor::unitriangular(DEFAULT_MODULUS).unwrap();
        let mut rng = seeded_rng(10);
        for _ in 0..200 {
            let sets = CommutingSets::sample(d, &mut rng);
            let keys = kex_keygen(&sets, &mut rng);
            let t = d.random_element(&mut rng);
            assert!(!t.commutes_with(&keys.s).unwrap());
            let x = d.random_element(&mut rng);
            let ct = kex_encrypt_with(&x, &keys.public(), &t).unwrap();
            assert_eq!(kex_decrypt(&ct, &keys.s).unwrap(), x);
        }
    }

    #[test]
    fn ciphertext_json_shape() {
        let sets = perm5();
        let keys = kex_keygen(&sets, &mut seeded_rng(11));
        let x = GroupElement::cycles(5, &[&[2, 5]]);
        let ct = kex_encrypt(&x, &keys.public(), &sets, &mut seeded_rng(12)).unwrap();
        let v = serde_json::to_value(&ct).unwrap();
        assert!(v.get("header").is_some() && v.get("E").is_some());
        assert_eq!(
            v["descriptor"],
            serde_json::json!({"backend": "permutation", "degree": 5})
        );
        let back: KexCiphertext = serde_json::from_value(v).unwrap();
        assert_eq!(back, ct);
        let sets_json = serde_json::to_string(&sets).unwrap();
        assert_eq!(
            serde_json::from_str::<CommutingSets>(&sets_json).unwrap(),
            sets
        );
    }
}
